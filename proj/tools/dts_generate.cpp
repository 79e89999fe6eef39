// dts-generate: generate, parse and compare TypeScript declaration files.
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dtsgen/compare.hpp"
#include "dtsgen/config.hpp"
#include "dtsgen/emitter.hpp"
#include "dtsgen/harvester.hpp"
#include "dtsgen/parser.hpp"
#include "dtsgen/pipeline.hpp"
#include "dtsgen/trace.hpp"

namespace fs = std::filesystem;
using namespace dtsgen;

namespace
{

std::optional<std::string> slurp(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GenerateFlags
{
  std::string package;
  std::string batch;
  std::string fixtures;
  std::string trace;
  std::string output = "output";
  std::string module_name;
  std::string config;
  int depth = 0;
  int jobs = 0;
  bool keep_workdir = false;
};

std::mutex g_print;

void report_failure(const std::string & package, const PipelineFailure & f)
{
  std::lock_guard lock(g_print);
  std::cerr << "dts-generate: " << package << ": stopped at stage '" << stage_label(f.stage()) << "': " << f.what()
            << "\n";
}

fs::path make_workdir(const std::string & package)
{
  std::string safe = package;
  std::replace(safe.begin(), safe.end(), '/', '_');
  return fs::temp_directory_path() / ("dtsgen-" + std::to_string(::getpid()) + "-" + safe);
}

/// One package through the funnel. Returns the process exit code.
int generate_one(const std::string & package, const GenerateFlags & flags, const Config & config)
{
  GenerateRequest request{package, flags.module_name, config.depth_limit};
  try {
    std::string text;
    if (!flags.trace.empty()) {
      const auto json = slurp(flags.trace);
      if (!json) throw PipelineFailure(Stage::InvalidTrace, "cannot read " + flags.trace);
      Trace trace;
      try {
        trace = load_trace(*json);
      } catch (const TraceError & e) {
        throw PipelineFailure(Stage::InvalidTrace, e.what());
      }
      text = generate_from_trace(trace, request);
    } else {
      std::unique_ptr<FixtureFetcher> fixtures;
      std::unique_ptr<LiveFetcher> live;
      MetadataFetcher * metadata = nullptr;
      FileFetcher * files = nullptr;
      try {
        if (config.fixtures) {
          fixtures = std::make_unique<FixtureFetcher>(*config.fixtures);
          metadata = fixtures.get();
          files = fixtures.get();
        } else {
          live = std::make_unique<LiveFetcher>(config.registry, config.raw_host);
          metadata = live.get();
          files = live.get();
        }
      } catch (const FetchError & e) {
        throw PipelineFailure(Stage::FetchFailed, e.what());
      }
      TracerProcess runner(config.node, config.tracer, config.example_timeout);
      const fs::path workdir = make_workdir(package);
      try {
        text = generate_package(request, *metadata, *files, runner, workdir);
      } catch (...) {
        if (!flags.keep_workdir) fs::remove_all(workdir);
        throw;
      }
      if (!flags.keep_workdir) fs::remove_all(workdir);
    }
    const auto file = write_declaration(flags.output, package, text);
    std::lock_guard lock(g_print);
    std::cout << file.string() << "\n";
    return 0;
  } catch (const PipelineFailure & f) {
    report_failure(package, f);
    return stage_exit_code(f.stage());
  }
}

int run_batch(const GenerateFlags & flags, const Config & config)
{
  const auto list = slurp(flags.batch);
  if (!list) {
    std::cerr << "dts-generate: cannot read " << flags.batch << "\n";
    return 2;
  }
  std::vector<std::string> packages;
  std::istringstream lines(*list);
  for (std::string line; std::getline(lines, line);) {
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (!line.empty() && line.front() != '#') packages.push_back(line);
  }

  std::vector<int> codes(packages.size(), 0);
  std::atomic<std::size_t> next{0};
  const unsigned workers =
      std::max(1u, std::min<unsigned>(flags.jobs > 0 ? flags.jobs : std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(packages.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < packages.size();) codes[i] = generate_one(packages[i], flags, config);
    });
  }
  for (auto & t : pool) t.join();

  const auto failed = std::count_if(codes.begin(), codes.end(), [](int c) { return c != 0; });
  std::cerr << "dts-generate: " << (packages.size() - failed) << " of " << packages.size() << " packages generated\n";
  for (int c : codes) {
    if (c != 0) return c;
  }
  return 0;
}

int cmd_generate(const GenerateFlags & flags)
{
  Config config;
  try {
    config = load_config(flags.config.empty() ? std::nullopt : std::optional<fs::path>(flags.config));
  } catch (const ConfigError & e) {
    std::cerr << "dts-generate: config: " << e.what() << "\n";
    return 2;
  }
  if (!flags.fixtures.empty()) config.fixtures = flags.fixtures;
  if (flags.depth > 0) config.depth_limit = flags.depth;
  if (config.depth_limit < 1) {
    std::cerr << "dts-generate: depth limit must be at least 1\n";
    return 2;
  }
  if (!flags.batch.empty()) return run_batch(flags, config);
  if (flags.package.empty()) {
    std::cerr << "dts-generate: a package name or --batch is required\n";
    return 2;
  }
  return generate_one(flags.package, flags, config);
}

std::optional<DeclarationModule> parse_file(const std::string & path, const std::string & module_name)
{
  const auto text = slurp(path);
  if (!text) {
    std::cerr << "dts-generate: cannot read " << path << "\n";
    return std::nullopt;
  }
  try {
    return parse(*text, module_name);
  } catch (const ParseError & e) {
    std::cerr << path << ":" << e.what() << "\n";
    return std::nullopt;
  }
}

int cmd_parse(const std::string & path, const std::string & module_name)
{
  const auto module = parse_file(path, module_name);
  if (!module) return 2;
  std::cout << to_json(*module) << "\n";
  return 0;
}

int cmd_compare(const std::string & expected_path, const std::string & actual_path, const std::string & module_name,
                bool no_filter)
{
  const auto expected = parse_file(expected_path, module_name);
  if (!expected) return 2;
  const auto actual = parse_file(actual_path, module_name);
  if (!actual) return 2;
  if (!no_filter) {
    for (const auto * m : {&*expected, &*actual}) {
      if (!filtered_out(*m)) continue;
      std::string names;
      for (auto tag : unimplemented_tags(*m)) names += (names.empty() ? "" : ", ") + std::string(tag_name(tag));
      std::cerr << "dts-generate: " << (m == &*expected ? expected_path : actual_path)
                << ": filtered out (unimplemented features: " << names << ")\n";
      return 2;
    }
  }
  try {
    const auto report = compare(*expected, *actual, module_name);
    std::cout << report_json(report);
    return report.differences.empty() ? 0 : 1;
  } catch (const CompareError & e) {
    std::cerr << "dts-generate: compare: " << e.what() << "\n";
    return 2;
  }
}

int cmd_extract(const std::string & path)
{
  const auto text = slurp(path);
  if (!text) {
    std::cerr << "dts-generate: cannot read " << path << "\n";
    return 2;
  }
  for (const auto & ex : extract_code_examples(*text)) {
    std::cout << "--- example " << ex.index << " (" << ex.language_tag << ") ---\n" << ex.body;
  }
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Generate TypeScript declaration files from run-time traces", "dts-generate"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto * generate = app.add_subcommand("generate", "Generate output/<package>/index.d.ts");
  generate->add_option("package", gen.package, "npm package name");
  generate->add_option("--batch", gen.batch, "File with one package name per line")->check(CLI::ExistingFile);
  generate->add_option("-j,--jobs", gen.jobs, "Parallel workers in batch mode")->check(CLI::PositiveNumber);
  generate->add_option("--fixtures", gen.fixtures, "Offline package directory")->check(CLI::ExistingDirectory);
  generate->add_option("--trace", gen.trace, "Infer from a recorded trace instead of running examples");
  generate->add_option("-o,--output", gen.output, "Output root")->capture_default_str();
  generate->add_option("--depth", gen.depth, "Interface depth limit")->check(CLI::PositiveNumber);
  generate->add_option("--module-name", gen.module_name, "Module name used in the trace");
  generate->add_option("--config", gen.config, "key = value configuration file")->check(CLI::ExistingFile);
  generate->add_flag("--keep-workdir", gen.keep_workdir, "Keep extracted examples and raw traces");

  std::string expected, actual, module_name;
  bool no_filter = false;
  auto * cmp = app.add_subcommand("compare", "Structural comparison of two declaration files");
  cmp->add_option("-e,--expected", expected, "Reference declaration file")->required();
  cmp->add_option("-a,--actual", actual, "Generated declaration file")->required();
  cmp->add_option("--module-name", module_name, "Module name")->required();
  cmp->add_flag("--no-filter", no_filter, "Compare files that use unimplemented features");

  std::string parse_path, parse_module;
  auto * prs = app.add_subcommand("parse", "Print the declaration AST as JSON");
  prs->add_option("file", parse_path, "Declaration file")->required();
  prs->add_option("--module-name", parse_module, "Module name");

  std::string readme;
  auto * ext = app.add_subcommand("extract", "Print the JavaScript code blocks of a README");
  ext->add_option("readme", readme, "Markdown file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(gen);
    if (*cmp) return cmd_compare(expected, actual, module_name, no_filter);
    if (*prs) return cmd_parse(parse_path, parse_module);
    if (*ext) return cmd_extract(readme);
  } catch (const std::exception & e) {
    std::cerr << "dts-generate: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
