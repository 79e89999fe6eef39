#include "dtsgen/config.hpp"

#include <cstdlib>
#include <string_view>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace dtsgen
{

namespace pt = boost::property_tree;

namespace
{

int to_int(const std::string & key, const std::string & value, int min)
{
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(value, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != value.size() || n < min) {
    throw ConfigError("invalid value for " + key + ": '" + value + "'");
  }
  return n;
}

void set(Config & config, const std::string & key, const std::string & value)
{
  if (key == "registry") config.registry = value;
  else if (key == "raw_host") config.raw_host = value;
  else if (key == "fixtures") config.fixtures = value.empty() ? std::nullopt : std::optional<std::filesystem::path>(value);
  else if (key == "depth_limit") config.depth_limit = to_int(key, value, 0);
  else if (key == "node") config.node = value;
  else if (key == "tracer") config.tracer = value;
  else if (key == "example_timeout") config.example_timeout = to_int(key, value, 1);
  else throw ConfigError("unknown configuration key '" + key + "'");
}

}  // namespace

Config read_config_file(const std::filesystem::path & path, Config base)
{
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error & e) {
    throw ConfigError(e.what());
  }
  for (const auto & [key, node] : tree) {
    if (!node.empty()) throw ConfigError("sections are not supported: [" + key + "]");
    set(base, key, node.data());
  }
  // A relative fixtures directory is taken relative to the file.
  if (base.fixtures && base.fixtures->is_relative()) base.fixtures = path.parent_path() / *base.fixtures;
  return base;
}

Config apply_environment(Config config, const EnvLookup & lookup)
{
  static constexpr std::pair<const char *, const char *> kVars[] = {
      {"DTSGEN_REGISTRY", "registry"}, {"DTSGEN_RAW_HOST", "raw_host"}, {"DTSGEN_FIXTURES", "fixtures"},
      {"DTSGEN_DEPTH", "depth_limit"}, {"DTSGEN_NODE", "node"},         {"DTSGEN_TRACER", "tracer"},
      {"DTSGEN_TIMEOUT", "example_timeout"},
  };
  for (const auto & [var, key] : kVars) {
    if (const char * value = lookup(var)) set(config, key, value);
  }
  return config;
}

Config load_config(const std::optional<std::filesystem::path> & path)
{
  Config config = path ? read_config_file(*path) : Config{};
  return apply_environment(std::move(config), [](const char * name) { return std::getenv(name); });
}

}  // namespace dtsgen
