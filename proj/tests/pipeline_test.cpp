#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dtsgen/config.hpp"
#include "dtsgen/pipeline.hpp"

namespace dtsgen
{
namespace
{

namespace fs = std::filesystem;

const fs::path kFixtures(FIXTURE_DIR);

std::string read(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Returns the recorded trace for the module unless the example throws.
class RecordedRunner : public ExampleRunner
{
public:
  std::optional<Trace> run(const CodeExample & example, const std::string & module_name, const fs::path &) override
  {
    ++calls;
    if (example.body.find("throw") != std::string::npos) return std::nullopt;
    const fs::path file = kFixtures / "tracer" / (module_name + ".json");
    if (!fs::exists(file)) return std::nullopt;
    return load_trace(read(file));
  }

  int calls = 0;
};

class TempDir
{
public:
  TempDir() : path_(fs::temp_directory_path() / ("dtsgen-test-" + std::to_string(::getpid()) + "-" + std::to_string(n_++)))
  {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;
  [[nodiscard]] const fs::path & path() const { return path_; }

private:
  static inline int n_ = 0;
  fs::path path_;
};

Stage stage_of(const std::string & package)
{
  FixtureFetcher fetcher(kFixtures / "packages");
  RecordedRunner runner;
  TempDir work;
  try {
    generate_package(GenerateRequest{package, "", 5}, fetcher, fetcher, runner, work.path());
  } catch (const PipelineFailure & f) {
    return f.stage();
  }
  ADD_FAILURE() << package << " did not fail";
  return Stage::InvalidTrace;
}

TEST(Stages, LabelsAndExitCodes)
{
  ASSERT_EQ(all_stages().size(), 8u);
  int code = 10;
  for (Stage s : all_stages()) EXPECT_EQ(stage_exit_code(s), code++) << stage_label(s);
  EXPECT_EQ(stage_label(Stage::NoReadme), "no-readme");
}

TEST(GeneratePackage, Succeeds)
{
  FixtureFetcher fetcher(kFixtures / "packages");
  RecordedRunner runner;
  TempDir work;
  const std::string text = generate_package(GenerateRequest{"abs", "", 5}, fetcher, fetcher, runner, work.path());
  EXPECT_EQ(text, read(kFixtures / "generated" / "abs.d.ts"));
  EXPECT_EQ(runner.calls, 1);
}

TEST(GeneratePackage, FunnelStages)
{
  const std::map<std::string, Stage> expected{
      {"no-repo", Stage::NoRepositoryUrl},      {"no-readme", Stage::NoReadme},
      {"unknown-host", Stage::NoReadme},        {"no-examples", Stage::NoExamples},
      {"broken-examples", Stage::ExamplesFailed}, {"quiet", Stage::NoRuntimeInfo},
      {"lower-readme", Stage::InsufficientTrace}, {"not-a-package", Stage::FetchFailed},
  };
  for (const auto & [package, stage] : expected) EXPECT_EQ(stage_of(package), stage) << package;
}

TEST(GenerateFromTrace, InvalidDepthIsInsufficient)
{
  try {
    generate_from_trace(load_trace(read(kFixtures / "traces" / "abs.json")), GenerateRequest{"abs", "", 0});
    FAIL() << "no error";
  } catch (const PipelineFailure & f) {
    EXPECT_EQ(f.stage(), Stage::InsufficientTrace);
  }
}

TEST(WriteDeclaration, CreatesPackageDirectory)
{
  TempDir out;
  const fs::path file = write_declaration(out.path(), "@scope/pkg", "export {};\n");
  EXPECT_EQ(file, out.path() / "@scope/pkg" / "index.d.ts");
  EXPECT_EQ(read(file), "export {};\n");
}

TEST(TracerProcess, RunsTheTracerWithItsArguments)
{
  ::setenv("FAKE_TRACE_DIR", (kFixtures / "tracer").c_str(), 1);
  TempDir work;
  TracerProcess tracer("/bin/sh", FAKE_TRACER, 10);
  const auto trace = tracer.run(CodeExample{0, "js", "abs('x');\n"}, "abs", work.path());
  ASSERT_TRUE(trace);
  EXPECT_EQ(*trace, load_trace(read(kFixtures / "tracer" / "abs.json")));
  EXPECT_TRUE(fs::exists(work.path() / "example_0.js"));
  EXPECT_TRUE(fs::exists(work.path() / "example_0.log"));
}

TEST(TracerProcess, FailingExamplesAreDiscarded)
{
  ::setenv("FAKE_TRACE_DIR", (kFixtures / "tracer").c_str(), 1);
  TempDir work;
  TracerProcess tracer("/bin/sh", FAKE_TRACER, 10);
  EXPECT_FALSE(tracer.run(CodeExample{1, "js", "throw new Error();\n"}, "abs", work.path()));
  EXPECT_NE(read(work.path() / "example_1.log").find("example failed"), std::string::npos);
  EXPECT_FALSE(tracer.run(CodeExample{2, "js", "x();\n"}, "no-such-module", work.path()));
}

TEST(TracerProcess, InvalidTraceOutputIsDiscarded)
{
  TempDir work;
  const fs::path script = work.path() / "bad.sh";
  std::ofstream(script) << "echo '{\"functions\": [' > \"$3\"\n";
  TracerProcess tracer("/bin/sh", script.string(), 10);
  EXPECT_FALSE(tracer.run(CodeExample{0, "js", "x();\n"}, "m", work.path()));
}

TEST(TracerProcess, TimeoutKillsTheChild)
{
  TempDir work;
  const fs::path script = work.path() / "slow.sh";
  std::ofstream(script) << "sleep 30\n";
  TracerProcess tracer("/bin/sh", script.string(), 1);
  const auto start = std::chrono::steady_clock::now();
  EXPECT_FALSE(tracer.run(CodeExample{0, "js", "x();\n"}, "m", work.path()));
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(TracerProcess, MissingInterpreterThrows)
{
  TempDir work;
  TracerProcess tracer("/nonexistent/node", "tracer.js", 1);
  EXPECT_THROW(tracer.run(CodeExample{0, "js", "x();\n"}, "m", work.path()), std::runtime_error);
}

TEST(Config, FileKeys)
{
  TempDir dir;
  const fs::path file = dir.path() / "dtsgen.ini";
  std::ofstream(file) << "# settings\nregistry = http://localhost:4873\nfixtures = packages\ndepth_limit = 3\n"
                         "; comment\nnode = /usr/local/bin/node\nexample_timeout = 5\n";
  const Config c = read_config_file(file);
  EXPECT_EQ(c.registry, "http://localhost:4873");
  EXPECT_EQ(c.depth_limit, 3);
  EXPECT_EQ(c.node, "/usr/local/bin/node");
  EXPECT_EQ(c.example_timeout, 5);
  ASSERT_TRUE(c.fixtures);
  EXPECT_EQ(*c.fixtures, dir.path() / "packages");
  EXPECT_EQ(c.tracer, "tracer.js");
}

TEST(Config, RejectsUnknownKeysAndBadValues)
{
  TempDir dir;
  const fs::path file = dir.path() / "bad.ini";
  for (const char * text : {"colour = blue\n", "[section]\nnode = x\n", "depth_limit = many\n", "example_timeout = 0\n"}) {
    std::ofstream(file) << text;
    EXPECT_THROW(read_config_file(file), ConfigError) << text;
  }
  EXPECT_THROW(read_config_file(dir.path() / "missing.ini"), ConfigError);
}

TEST(Config, EnvironmentOverrides)
{
  const std::map<std::string, std::string> env{{"DTSGEN_DEPTH", "2"}, {"DTSGEN_TRACER", "/opt/tracer.js"},
                                               {"DTSGEN_FIXTURES", "/srv/fixtures"}};
  const Config c = apply_environment(Config{}, [&](const char * name) -> const char * {
    auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  EXPECT_EQ(c.depth_limit, 2);
  EXPECT_EQ(c.tracer, "/opt/tracer.js");
  EXPECT_EQ(c.fixtures, fs::path("/srv/fixtures"));
  EXPECT_EQ(c.registry, Config{}.registry);
  EXPECT_THROW(apply_environment(Config{}, [](const char * name) -> const char * {
                 return std::string_view(name) == "DTSGEN_TIMEOUT" ? "-1" : nullptr;
               }),
               ConfigError);
}

}  // namespace
}  // namespace dtsgen
