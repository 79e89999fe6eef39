#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtsgen/harvester.hpp"

namespace dtsgen
{
namespace
{

namespace fs = std::filesystem;

const fs::path kPackages = fs::path(FIXTURE_DIR) / "packages";

std::string read(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ExtractCodeExamples, GlobToRegexpReadme)
{
  const auto examples = extract_code_examples(read(kPackages / "glob-to-regexp" / "README.md"));
  ASSERT_EQ(examples.size(), 1u);
  EXPECT_EQ(examples[0].index, 0);
  EXPECT_EQ(examples[0].language_tag, "js");
  EXPECT_EQ(examples[0].body.rfind("var globToRegExp = require('glob-to-regexp');\n", 0), 0u);
  EXPECT_NE(examples[0].body.find("re = globToRegExp(\"*/www/{*.js,*.html}\", { extended: true });\n"),
            std::string::npos);
  EXPECT_EQ(examples[0].body.back(), '\n');
}

TEST(ExtractCodeExamples, KeepsOnlyJavaScriptFences)
{
  const auto examples = extract_code_examples(
      "```sh\nnpm i x\n```\n"
      "```JavaScript\na();\n```\n"
      "```ts\nlet x: number;\n```\n"
      "~~~js title=\"demo\"\nb();\n~~~\n"
      "```javascript{1,3}\nc();\n```\n"
      "```\nplain();\n```\n");
  ASSERT_EQ(examples.size(), 3u);
  EXPECT_EQ(examples[0].body, "a();\n");
  EXPECT_EQ(examples[0].language_tag, "JavaScript");
  EXPECT_EQ(examples[1].body, "b();\n");
  EXPECT_EQ(examples[2].body, "c();\n");
  EXPECT_EQ(examples[2].index, 2);
}

TEST(ExtractCodeExamples, FenceRules)
{
  // A shorter or different closing fence does not close the block.
  auto ex = extract_code_examples("````js\na();\n```\n~~~~\nb();\n````\n");
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].body, "a();\n```\n~~~~\nb();\n");

  // Text after the closing fence makes it content.
  ex = extract_code_examples("```js\na();\n``` not a close\n```\n");
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].body, "a();\n``` not a close\n");

  // Four spaces of indentation is an indented code block, not a fence.
  EXPECT_TRUE(extract_code_examples("    ```js\n    a();\n    ```\n").empty());

  // Indented fence strips the same indentation from content lines.
  ex = extract_code_examples("  ```js\n  a();\n    b();\n  ```\n");
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].body, "a();\n  b();\n");

  // Backtick fences cannot carry backticks in the info string.
  EXPECT_TRUE(extract_code_examples("```js `x`\na();\n```\n").empty());
}

TEST(ExtractCodeExamples, UnclosedFenceRunsToEnd)
{
  const auto ex = extract_code_examples("```js\na();\nb();");
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].body, "a();\nb();\n");
}

TEST(ExtractCodeExamples, CrLfAndEmptyBlocks)
{
  const auto ex = extract_code_examples("```js\r\na();\r\n```\r\n```js\n```\n");
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].body, "a();\n");
  EXPECT_EQ(ex[1].body, "");
}

TEST(NormalizeRepositoryUrl, Spellings)
{
  const std::string canonical = "https://github.com/fitzgen/glob-to-regexp";
  for (const char * url : {"git+https://github.com/fitzgen/glob-to-regexp.git",
                           "git://github.com/fitzgen/glob-to-regexp.git",
                           "git@github.com:fitzgen/glob-to-regexp.git",
                           "github:fitzgen/glob-to-regexp",
                           "fitzgen/glob-to-regexp",
                           "https://github.com/fitzgen/glob-to-regexp#readme",
                           "git+ssh://git@github.com/fitzgen/glob-to-regexp.git",
                           "https://GitHub.com/fitzgen/glob-to-regexp/"}) {
    EXPECT_EQ(normalize_repository_url(url), canonical) << url;
  }
  EXPECT_EQ(normalize_repository_url("gitlab:a/b"), "https://gitlab.com/a/b");
}

TEST(ParseGithubUrl, UserAndRepo)
{
  EXPECT_EQ(parse_github_url("git+https://github.com/IonicaBizau/abs.git"), (GithubRepo{"IonicaBizau", "abs"}));
  EXPECT_EQ(parse_github_url("https://github.com/a/b/tree/master"), (GithubRepo{"a", "b"}));
  EXPECT_FALSE(parse_github_url("https://gitlab.com/a/b"));
  EXPECT_FALSE(parse_github_url("https://github.com/a"));
}

TEST(RepositoryFromMetadata, StringOrObject)
{
  EXPECT_EQ(repository_from_metadata(R"({"repository": "a/b"})"), "a/b");
  EXPECT_EQ(repository_from_metadata(R"({"repository": {"type": "git", "url": "git://x/y.git"}})"), "git://x/y.git");
  EXPECT_FALSE(repository_from_metadata(R"({"name": "x"})"));
  EXPECT_FALSE(repository_from_metadata(R"({"repository": {"type": "git"}})"));
  EXPECT_FALSE(repository_from_metadata(R"({"repository": ""})"));
  EXPECT_THROW(repository_from_metadata("{"), FetchError);
  EXPECT_THROW(repository_from_metadata("[]"), FetchError);
}

TEST(ReadmeNames, TriedInOrder)
{
  EXPECT_EQ(readme_names().front(), "README.md");
  EXPECT_NE(std::find(readme_names().begin(), readme_names().end(), "readme.md"), readme_names().end());
}

TEST(FixtureFetcher, ResolvesRepositoryAndReadme)
{
  FixtureFetcher fetcher(kPackages);
  const auto repo = resolve_repository("glob-to-regexp", fetcher);
  ASSERT_TRUE(repo);
  EXPECT_EQ(*repo, "github:fitzgen/glob-to-regexp");
  const auto readme = fetch_readme(*repo, fetcher);
  ASSERT_TRUE(readme);
  EXPECT_NE(readme->find("# Glob To Regular Expression"), std::string::npos);
}

TEST(FixtureFetcher, FallsBackToLowercaseReadme)
{
  FixtureFetcher fetcher(kPackages);
  const auto readme = fetch_readme(*resolve_repository("lower-readme", fetcher), fetcher);
  ASSERT_TRUE(readme);
  EXPECT_EQ(extract_code_examples(*readme).size(), 1u);
}

TEST(FixtureFetcher, MissingPieces)
{
  FixtureFetcher fetcher(kPackages);
  EXPECT_FALSE(resolve_repository("no-repo", fetcher));
  EXPECT_FALSE(fetch_readme(*resolve_repository("no-readme", fetcher), fetcher));
  EXPECT_THROW(resolve_repository("does-not-exist", fetcher), FetchError);
  EXPECT_THROW(resolve_repository("", fetcher), std::invalid_argument);
  EXPECT_THROW(fetcher.fetch_file("https://github.com/nobody/nothing", "README.md"), FetchError);
  EXPECT_THROW(FixtureFetcher(kPackages / "missing-root"), FetchError);
}

TEST(FixtureFetcher, AcceptsLocalDirectoryAsRepository)
{
  FixtureFetcher fetcher(kPackages);
  EXPECT_TRUE(fetcher.fetch_file((kPackages / "abs").string(), "README.md"));
}

}  // namespace
}  // namespace dtsgen
