#include "dtsgen/pipeline.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "dtsgen/emitter.hpp"
#include "dtsgen/inference.hpp"

extern char ** environ;

namespace dtsgen
{

namespace fs = std::filesystem;

std::string_view stage_label(Stage stage)
{
  switch (stage) {
    case Stage::NoRepositoryUrl: return "no-repository-url";
    case Stage::NoReadme: return "no-readme";
    case Stage::NoExamples: return "no-examples";
    case Stage::ExamplesFailed: return "examples-failed";
    case Stage::NoRuntimeInfo: return "no-runtime-info";
    case Stage::InsufficientTrace: return "insufficient-trace";
    case Stage::FetchFailed: return "fetch-failed";
    case Stage::InvalidTrace: return "invalid-trace";
  }
  return "unknown";
}

int stage_exit_code(Stage stage) { return 10 + static_cast<int>(stage); }

const std::vector<Stage> & all_stages()
{
  static const std::vector<Stage> stages{Stage::NoRepositoryUrl, Stage::NoReadme,      Stage::NoExamples,
                                         Stage::ExamplesFailed,  Stage::NoRuntimeInfo, Stage::InsufficientTrace,
                                         Stage::FetchFailed,     Stage::InvalidTrace};
  return stages;
}

// ---------------------------------------------------------------------------

TracerProcess::TracerProcess(std::string node, std::string tracer, int timeout_seconds)
    : node_(std::move(node)), tracer_(std::move(tracer)), timeout_(timeout_seconds)
{
}

std::optional<Trace> TracerProcess::run(const CodeExample & example, const std::string & module_name,
                                        const fs::path & workdir)
{
  const std::string stem = "example_" + std::to_string(example.index);
  const fs::path script = workdir / (stem + ".js");
  const fs::path out = workdir / (stem + ".trace.json");
  const fs::path log = workdir / (stem + ".log");
  {
    std::ofstream f(script, std::ios::binary);
    f << example.body;
    if (!f) return std::nullopt;
  }
  fs::remove(out);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);

  std::vector<std::string> args{node_, tracer_, script.string(), module_name, out.string()};
  std::vector<char *> argv;
  for (auto & a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, node_.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw std::runtime_error("cannot start '" + node_ + "': " + std::strerror(rc));

  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_);
  int status = 0;
  for (;;) {
    const pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) return std::nullopt;
    if (std::chrono::steady_clock::now() > deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      return std::nullopt;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  // A failing example's partial trace is discarded.
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return std::nullopt;

  std::ifstream in(out, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return load_trace(text.str());
  } catch (const TraceError &) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

std::string generate_from_trace(const Trace & trace, const GenerateRequest & request)
{
  const std::string module = request.module_name.empty() ? request.package : request.module_name;
  if (trace.empty()) throw PipelineFailure(Stage::NoRuntimeInfo, "no run-time information was recorded");
  try {
    InferenceConfig config;
    config.depth_limit = request.depth_limit;
    return emit(infer_module(trace, module, config));
  } catch (const InferenceError & e) {
    throw PipelineFailure(Stage::InsufficientTrace, e.what());
  } catch (const EmitError & e) {
    throw PipelineFailure(Stage::InsufficientTrace, e.what());
  }
}

std::string generate_package(const GenerateRequest & request, MetadataFetcher & metadata, FileFetcher & files,
                             ExampleRunner & runner, const fs::path & workdir)
{
  std::optional<std::string> repository;
  std::optional<std::string> readme;
  try {
    repository = resolve_repository(request.package, metadata);
    if (!repository) throw PipelineFailure(Stage::NoRepositoryUrl, "package metadata has no repository url");
    readme = fetch_readme(*repository, files);
    if (!readme) throw PipelineFailure(Stage::NoReadme, "no README found in " + *repository);
  } catch (const FetchError & e) {
    throw PipelineFailure(Stage::FetchFailed, e.what());
  }

  const auto examples = extract_code_examples(*readme);
  if (examples.empty()) throw PipelineFailure(Stage::NoExamples, "README contains no JavaScript code blocks");

  const std::string module = request.module_name.empty() ? request.package : request.module_name;
  fs::create_directories(workdir);
  std::optional<Trace> merged;
  for (const auto & example : examples) {
    auto trace = runner.run(example, module, workdir);
    if (!trace) continue;
    merged = merged ? merge_traces(*merged, *trace) : std::move(*trace);
  }
  if (!merged) {
    throw PipelineFailure(Stage::ExamplesFailed,
                          "all " + std::to_string(examples.size()) + " examples failed to run");
  }
  return generate_from_trace(*merged, request);
}

fs::path write_declaration(const fs::path & output, const std::string & package, const std::string & text)
{
  const fs::path dir = output / package;
  fs::create_directories(dir);
  const fs::path file = dir / "index.d.ts";
  std::ofstream out(file, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return file;
}

}  // namespace dtsgen
