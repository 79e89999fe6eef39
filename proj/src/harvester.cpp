#include "dtsgen/harvester.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dtsgen
{

namespace fs = std::filesystem;

namespace
{

std::string lower(std::string_view s)
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::optional<std::string> read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fence
{
  char marker = '`';
  std::size_t length = 0;
  std::size_t indent = 0;
  std::string info;
};

std::size_t leading_spaces(std::string_view line)
{
  std::size_t n = 0;
  while (n < line.size() && line[n] == ' ') ++n;
  return n;
}

std::optional<Fence> opening_fence(std::string_view line)
{
  const std::size_t indent = leading_spaces(line);
  if (indent > 3 || indent >= line.size()) return std::nullopt;
  const char marker = line[indent];
  if (marker != '`' && marker != '~') return std::nullopt;
  std::size_t end = indent;
  while (end < line.size() && line[end] == marker) ++end;
  const std::size_t length = end - indent;
  if (length < 3) return std::nullopt;
  std::string_view info = line.substr(end);
  if (marker == '`' && info.find('`') != std::string_view::npos) return std::nullopt;
  const auto first = info.find_first_not_of(" \t");
  info = first == std::string_view::npos ? std::string_view{} : info.substr(first);
  return Fence{marker, length, indent, std::string(info)};
}

bool closes(const Fence & open, std::string_view line)
{
  const std::size_t indent = leading_spaces(line);
  if (indent > 3) return false;
  std::size_t end = indent;
  while (end < line.size() && line[end] == open.marker) ++end;
  if (end - indent < open.length) return false;
  return line.find_first_not_of(" \t", end) == std::string_view::npos;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string> & readme_names()
{
  static const std::vector<std::string> names{"README.md", "readme.md", "Readme.md",
                                              "README.markdown", "README", "readme"};
  return names;
}

std::string normalize_repository_url(std::string_view url)
{
  std::string u(url);
  while (!u.empty() && std::isspace(static_cast<unsigned char>(u.back()))) u.pop_back();
  while (!u.empty() && std::isspace(static_cast<unsigned char>(u.front()))) u.erase(u.begin());
  if (auto hash = u.find('#'); hash != std::string::npos) u.erase(hash);
  if (u.starts_with("git+")) u.erase(0, 4);

  std::string host = "github.com";
  std::string path;
  if (u.starts_with("github:") || u.starts_with("gitlab:") || u.starts_with("bitbucket:")) {
    const auto colon = u.find(':');
    const std::string scheme = u.substr(0, colon);
    host = scheme == "github" ? "github.com" : scheme == "gitlab" ? "gitlab.com" : "bitbucket.org";
    path = u.substr(colon + 1);
  } else if (u.starts_with("git@")) {
    const auto colon = u.find(':');
    if (colon == std::string::npos) return u;
    host = u.substr(4, colon - 4);
    path = u.substr(colon + 1);
  } else if (auto scheme = u.find("://"); scheme != std::string::npos) {
    std::string rest = u.substr(scheme + 3);
    if (auto at = rest.find('@'); at != std::string::npos && at < rest.find('/')) rest.erase(0, at + 1);
    const auto slash = rest.find('/');
    host = rest.substr(0, slash);
    path = slash == std::string::npos ? std::string{} : rest.substr(slash + 1);
  } else if (std::count(u.begin(), u.end(), '/') == 1 && u.find(':') == std::string::npos) {
    path = u;  // `user/repo` shorthand
  } else {
    return u;
  }
  if (path.ends_with("/")) path.pop_back();
  if (path.ends_with(".git")) path.resize(path.size() - 4);
  return "https://" + lower(host) + "/" + path;
}

std::optional<GithubRepo> parse_github_url(std::string_view url)
{
  const std::string normalized = normalize_repository_url(url);
  const std::string prefix = "https://github.com/";
  if (!normalized.starts_with(prefix)) return std::nullopt;
  const std::string path = normalized.substr(prefix.size());
  const auto slash = path.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 >= path.size()) return std::nullopt;
  std::string repo = path.substr(slash + 1);
  if (auto more = repo.find('/'); more != std::string::npos) repo.erase(more);
  return GithubRepo{path.substr(0, slash), repo};
}

std::optional<std::string> repository_from_metadata(std::string_view metadata_json)
{
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(metadata_json);
  } catch (const nlohmann::json::parse_error & e) {
    throw FetchError(std::string("malformed package metadata: ") + e.what());
  }
  if (!meta.is_object()) throw FetchError("package metadata is not an object");
  auto it = meta.find("repository");
  if (it == meta.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) {
    const auto url = it->get<std::string>();
    return url.empty() ? std::nullopt : std::optional<std::string>(url);
  }
  if (it->is_object()) {
    auto url = it->find("url");
    if (url != it->end() && url->is_string() && !url->get<std::string>().empty()) return url->get<std::string>();
  }
  return std::nullopt;
}

std::optional<std::string> resolve_repository(const std::string & package_name, MetadataFetcher & fetcher)
{
  if (package_name.empty()) throw std::invalid_argument("package name must not be empty");
  return fetcher.repository_url(package_name);
}

std::optional<std::string> fetch_readme(const std::string & repository, FileFetcher & fetcher)
{
  for (const auto & name : readme_names()) {
    if (auto text = fetcher.fetch_file(repository, name)) return text;
  }
  return std::nullopt;
}

std::vector<CodeExample> extract_code_examples(std::string_view markdown)
{
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start <= markdown.size();) {
    auto end = markdown.find('\n', start);
    if (end == std::string_view::npos) end = markdown.size();
    std::string_view line = markdown.substr(start, end - start);
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (end < markdown.size() || !line.empty()) lines.push_back(line);
    start = end + 1;
  }

  std::vector<CodeExample> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fence = opening_fence(lines[i]);
    if (!fence) continue;
    std::string body;
    std::size_t j = i + 1;
    for (; j < lines.size() && !closes(*fence, lines[j]); ++j) {
      std::string_view content = lines[j];
      content.remove_prefix(std::min(fence->indent, leading_spaces(content)));
      body.append(content);
      body += '\n';
    }
    i = j;
    const std::string tag = fence->info.substr(0, fence->info.find_first_of(" \t{"));
    const std::string key = lower(tag);
    if (key == "js" || key == "javascript") {
      out.push_back(CodeExample{static_cast<int>(out.size()), tag, std::move(body)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

FixtureFetcher::FixtureFetcher(fs::path root) : root_(std::move(root))
{
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) throw FetchError("fixture directory not found: " + root_.string());
  for (const auto & entry : fs::directory_iterator(root_, ec)) {
    if (!entry.is_directory()) continue;
    const auto meta = read_file(entry.path() / "meta.json");
    if (!meta) continue;
    try {
      if (auto url = repository_from_metadata(*meta)) repo_dirs_[normalize_repository_url(*url)] = entry.path();
    } catch (const FetchError &) {
      // Reported when the package itself is resolved.
    }
  }
}

std::optional<std::string> FixtureFetcher::repository_url(const std::string & package_name)
{
  const fs::path dir = root_ / package_name;
  const auto meta = read_file(dir / "meta.json");
  if (!meta) throw FetchError("no fixture metadata for package '" + package_name + "'");
  return repository_from_metadata(*meta);
}

std::optional<std::string> FixtureFetcher::fetch_file(const std::string & repository, const std::string & file_name)
{
  fs::path dir;
  std::error_code ec;
  if (fs::is_directory(repository, ec)) {
    dir = repository;
  } else if (auto it = repo_dirs_.find(normalize_repository_url(repository)); it != repo_dirs_.end()) {
    dir = it->second;
  } else {
    throw FetchError("repository not available offline: " + repository);
  }
  // Exact-case match; directory listings keep `readme.md` distinct from `README.md`.
  for (const auto & entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().filename() == file_name && entry.is_regular_file()) return read_file(entry.path());
  }
  return std::nullopt;
}

}  // namespace dtsgen
