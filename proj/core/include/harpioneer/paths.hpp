#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace harpioneer {

/// Directory holding catalog.json, templates/ and fixtures/. Taken from
/// $HARPIONEER_DATA_DIR when set, otherwise the source tree's data/ if it
/// still exists, otherwise the install location.
std::filesystem::path data_dir();

std::filesystem::path default_catalog_path();
std::filesystem::path default_templates_dir();
std::filesystem::path default_fixtures_dir();

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace harpioneer
