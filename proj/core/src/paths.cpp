#include "harpioneer/paths.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "harpioneer/errors.hpp"

#ifndef HARPIONEER_DEFAULT_DATA_DIR
#define HARPIONEER_DEFAULT_DATA_DIR "."
#endif

namespace harpioneer {

namespace fs = std::filesystem;

fs::path data_dir() {
  if (const char* env = std::getenv("HARPIONEER_DATA_DIR"); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  const fs::path build_tree(HARPIONEER_DEFAULT_DATA_DIR);
  if (fs::exists(build_tree / "catalog.json")) return build_tree;
  return fs::path(HARPIONEER_INSTALLED_DATA_DIR);
}

fs::path default_catalog_path() { return data_dir() / "catalog.json"; }
fs::path default_templates_dir() { return data_dir() / "templates"; }
fs::path default_fixtures_dir() { return data_dir() / "fixtures"; }

void write_file_atomic(const fs::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(fmt::format("cannot create {}: {}", path.parent_path().string(), ec.message()));
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write {}", tmp.string()));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(fmt::format("write failed for {}", tmp.string()));
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error(fmt::format("cannot rename {} to {}: {}", tmp.string(), path.string(), ec.message()));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace harpioneer
