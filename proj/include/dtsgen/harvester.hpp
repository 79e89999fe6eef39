// harvester.hpp - repository lookup, README retrieval and code-block extraction
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dtsgen
{

/// Transport or lookup failure, as opposed to "the entry does not exist".
class FetchError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct PackageSource
{
  std::string package_name;
  std::optional<std::string> repository_url;
  std::optional<std::string> readme_text;
};

struct CodeExample
{
  int index = 0;
  std::string language_tag;
  std::string body;

  bool operator==(const CodeExample &) const = default;
};

class MetadataFetcher
{
public:
  virtual ~MetadataFetcher() = default;
  /// The package's `repository` entry; nullopt when the metadata has none.
  virtual std::optional<std::string> repository_url(const std::string & package_name) = 0;
};

class FileFetcher
{
public:
  virtual ~FileFetcher() = default;
  /// A file at the repository root; nullopt when it does not exist.
  virtual std::optional<std::string> fetch_file(const std::string & repository, const std::string & file_name) = 0;
};

/// Offline fetcher over `<root>/<package>/meta.json` and `<root>/<package>/README*`.
class FixtureFetcher : public MetadataFetcher, public FileFetcher
{
public:
  explicit FixtureFetcher(std::filesystem::path root);

  std::optional<std::string> repository_url(const std::string & package_name) override;
  std::optional<std::string> fetch_file(const std::string & repository, const std::string & file_name) override;

private:
  std::filesystem::path root_;
  std::map<std::string, std::filesystem::path> repo_dirs_;  // normalized URL -> fixture dir
};

/// HTTPS fetcher: npm registry metadata and raw files from GitHub.
class LiveFetcher : public MetadataFetcher, public FileFetcher
{
public:
  explicit LiveFetcher(std::string registry = "https://registry.npmjs.org",
                       std::string raw_host = "https://raw.githubusercontent.com");

  std::optional<std::string> repository_url(const std::string & package_name) override;
  std::optional<std::string> fetch_file(const std::string & repository, const std::string & file_name) override;

private:
  std::string registry_;
  std::string raw_host_;
};

struct GithubRepo
{
  std::string user;
  std::string repo;

  bool operator==(const GithubRepo &) const = default;
};

/// Canonical `https://host/user/repo` form of the many spellings found in
/// package metadata (`git+https://...git`, `git://`, `git@host:`, `github:u/r`, `u/r`).
std::string normalize_repository_url(std::string_view url);

std::optional<GithubRepo> parse_github_url(std::string_view url);

/// Reads the repository entry of npm metadata JSON (string or `{url}` object).
std::optional<std::string> repository_from_metadata(std::string_view metadata_json);

/// README spellings tried in order.
const std::vector<std::string> & readme_names();

std::optional<std::string> resolve_repository(const std::string & package_name, MetadataFetcher & fetcher);

std::optional<std::string> fetch_readme(const std::string & repository, FileFetcher & fetcher);

/// Fenced blocks whose info string starts with `js` or `javascript`, in document order.
std::vector<CodeExample> extract_code_examples(std::string_view markdown);

}  // namespace dtsgen
