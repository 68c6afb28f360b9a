#include "harpioneer/labels.hpp"

namespace harpioneer {

std::optional<ActivityLabel> parse_label(std::string_view name) noexcept {
  for (ActivityLabel label : kAllLabels) {
    if (label_name(label) == name) return label;
  }
  return std::nullopt;
}

}  // namespace harpioneer
