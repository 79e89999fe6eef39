// config.hpp - generator settings from an INI-style file and DTSGEN_* environment variables
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace dtsgen
{

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Config
{
  std::string registry = "https://registry.npmjs.org";
  std::string raw_host = "https://raw.githubusercontent.com";
  std::optional<std::filesystem::path> fixtures;  // offline mode when set
  int depth_limit = 5;
  std::string node = "node";
  std::string tracer = "tracer.js";
  int example_timeout = 60;  // seconds per example
};

/// Top-level `key = value` lines; `#` and `;` start comments. Unknown keys are errors.
Config read_config_file(const std::filesystem::path & path, Config base = {});

using EnvLookup = std::function<const char *(const char *)>;

/// DTSGEN_REGISTRY, DTSGEN_RAW_HOST, DTSGEN_FIXTURES, DTSGEN_DEPTH, DTSGEN_NODE,
/// DTSGEN_TRACER and DTSGEN_TIMEOUT override the corresponding keys.
Config apply_environment(Config config, const EnvLookup & lookup);

/// File (if given), then the process environment.
Config load_config(const std::optional<std::filesystem::path> & path);

}  // namespace dtsgen
