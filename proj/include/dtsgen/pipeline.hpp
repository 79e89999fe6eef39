// pipeline.hpp - package -> README examples -> traces -> declaration file
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dtsgen/config.hpp"
#include "dtsgen/harvester.hpp"
#include "dtsgen/trace.hpp"

namespace dtsgen
{

/// Where a package dropped out of the pipeline.
enum class Stage : std::uint8_t {
  NoRepositoryUrl,
  NoReadme,
  NoExamples,
  ExamplesFailed,
  NoRuntimeInfo,
  InsufficientTrace,
  FetchFailed,
  InvalidTrace,
};

std::string_view stage_label(Stage stage);
int stage_exit_code(Stage stage);
const std::vector<Stage> & all_stages();

class PipelineFailure : public std::runtime_error
{
public:
  PipelineFailure(Stage stage, const std::string & message) : std::runtime_error(message), stage_(stage) {}
  [[nodiscard]] Stage stage() const { return stage_; }

private:
  Stage stage_;
};

/// Runs one example and returns its trace, or nullopt when the example failed.
class ExampleRunner
{
public:
  virtual ~ExampleRunner() = default;
  virtual std::optional<Trace> run(const CodeExample & example, const std::string & module_name,
                                   const std::filesystem::path & workdir) = 0;
};

/// `<node> <tracer> <example.js> <module> <out.json>` in a child process.
class TracerProcess : public ExampleRunner
{
public:
  TracerProcess(std::string node, std::string tracer, int timeout_seconds);

  std::optional<Trace> run(const CodeExample & example, const std::string & module_name,
                           const std::filesystem::path & workdir) override;

private:
  std::string node_;
  std::string tracer_;
  int timeout_;
};

struct GenerateRequest
{
  std::string package;
  std::string module_name;  // defaults to the package name
  int depth_limit = 5;
};

/// Inference and emission only. Maps inference failures to stages.
std::string generate_from_trace(const Trace & trace, const GenerateRequest & request);

/// The full funnel. Throws PipelineFailure.
std::string generate_package(const GenerateRequest & request, MetadataFetcher & metadata, FileFetcher & files,
                             ExampleRunner & runner, const std::filesystem::path & workdir);

/// `<output>/<package>/index.d.ts`, creating directories.
std::filesystem::path write_declaration(const std::filesystem::path & output, const std::string & package,
                                        const std::string & text);

}  // namespace dtsgen
