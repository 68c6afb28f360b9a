#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace harpioneer::detail {

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

/// True when `needle` occurs in `haystack` with no word character directly
/// before or after the occurrence.
inline bool contains_word(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    const std::size_t end = pos + needle.size();
    const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]) || !is_word_char(needle.front());
    const bool right_ok =
        end == haystack.size() || !is_word_char(haystack[end]) || !is_word_char(needle.back());
    if (left_ok && right_ok) return true;
  }
  return false;
}

struct NameEntry {
  std::string id;
  std::vector<std::string> aliases;  // lowercase
};

/// Index of the unique best entry: exact id, then exact alias, then the longest
/// id or alias contained in the input. Throws UnresolvedNameError /
/// AmbiguousNameError.
std::size_t resolve_name(std::string_view input, const std::vector<NameEntry>& entries);

}  // namespace harpioneer::detail
