#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "dtsgen/harvester.hpp"

namespace dtsgen
{

namespace
{

std::string encode_package(const std::string & name)
{
  // Scoped packages: `@scope/name` -> `@scope%2Fname`.
  std::string out;
  for (char c : name) out += c == '/' ? std::string("%2F") : std::string(1, c);
  return out;
}

httplib::Result get(const std::string & base, const std::string & path)
{
  httplib::Client client(base);
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  auto res = client.Get(path);
  if (!res) throw FetchError("request to " + base + path + " failed: " + httplib::to_string(res.error()));
  return res;
}

}  // namespace

LiveFetcher::LiveFetcher(std::string registry, std::string raw_host)
    : registry_(std::move(registry)), raw_host_(std::move(raw_host))
{
}

std::optional<std::string> LiveFetcher::repository_url(const std::string & package_name)
{
  auto res = get(registry_, "/" + encode_package(package_name));
  if (res->status == 404) throw FetchError("package '" + package_name + "' not found in the registry");
  if (res->status != 200) throw FetchError("registry returned HTTP " + std::to_string(res->status));
  return repository_from_metadata(res->body);
}

std::optional<std::string> LiveFetcher::fetch_file(const std::string & repository, const std::string & file_name)
{
  const auto repo = parse_github_url(repository);
  if (!repo) throw FetchError("unsupported repository host: " + repository);
  auto res = get(raw_host_, "/" + repo->user + "/" + repo->repo + "/HEAD/" + file_name);
  if (res->status == 404) return std::nullopt;
  if (res->status != 200) throw FetchError("repository host returned HTTP " + std::to_string(res->status));
  return res->body;
}

}  // namespace dtsgen
