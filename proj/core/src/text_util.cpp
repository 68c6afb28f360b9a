#include "text_util.hpp"

#include <algorithm>

#include "harpioneer/errors.hpp"

namespace harpioneer::detail {

namespace {

std::string clean(std::string_view input) {
  std::string out;
  for (char c : trim(input)) {
    if (c == '*' || c == '`' || c == '"') continue;
    out.push_back(c);
  }
  return to_lower(trim(out));
}

[[noreturn]] void ambiguous(std::string_view input, const std::vector<NameEntry>& entries,
                            const std::vector<std::size_t>& hits) {
  std::vector<std::string> names;
  for (std::size_t i : hits) names.push_back(entries[i].id);
  throw AmbiguousNameError(std::string(input), std::move(names));
}

std::size_t unique_or_throw(std::string_view input, const std::vector<NameEntry>& entries,
                            const std::vector<std::size_t>& hits) {
  if (hits.size() > 1) ambiguous(input, entries, hits);
  return hits.front();
}

}  // namespace

std::size_t resolve_name(std::string_view input, const std::vector<NameEntry>& entries) {
  const std::string text = clean(input);
  if (text.empty()) throw UnresolvedNameError(std::string(input));

  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (to_lower(entries[i].id) == text) hits.push_back(i);
  }
  if (!hits.empty()) return unique_or_throw(input, entries, hits);

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& aliases = entries[i].aliases;
    if (std::find(aliases.begin(), aliases.end(), text) != aliases.end()) hits.push_back(i);
  }
  if (!hits.empty()) return unique_or_throw(input, entries, hits);

  std::size_t best = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::size_t longest = 0;
    const std::string id = to_lower(entries[i].id);
    if (contains_word(text, id)) longest = id.size();
    for (const auto& alias : entries[i].aliases) {
      if (alias.size() > longest && contains_word(text, alias)) longest = alias.size();
    }
    if (longest == 0) continue;
    if (longest > best) {
      best = longest;
      hits.clear();
    }
    if (longest == best) hits.push_back(i);
  }
  if (hits.empty()) throw UnresolvedNameError(std::string(input));
  return unique_or_throw(input, entries, hits);
}

}  // namespace harpioneer::detail
