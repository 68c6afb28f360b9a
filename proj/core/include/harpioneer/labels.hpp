#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <string_view>

namespace harpioneer {

/// The five locomotion classes. Enumerator order is the fixed class order used
/// for confusion matrices and every tie-break.
enum class ActivityLabel : std::uint8_t { Stand = 0, Sit = 1, Walk = 2, Lie = 3, Others = 4 };

inline constexpr std::size_t kNumClasses = 5;

inline constexpr std::array<ActivityLabel, kNumClasses> kAllLabels = {
    ActivityLabel::Stand, ActivityLabel::Sit, ActivityLabel::Walk, ActivityLabel::Lie,
    ActivityLabel::Others};

constexpr std::size_t label_index(ActivityLabel label) noexcept {
  return static_cast<std::size_t>(label);
}

constexpr std::string_view label_name(ActivityLabel label) noexcept {
  switch (label) {
    case ActivityLabel::Stand: return "Stand";
    case ActivityLabel::Sit: return "Sit";
    case ActivityLabel::Walk: return "Walk";
    case ActivityLabel::Lie: return "Lie";
    case ActivityLabel::Others: return "Others";
  }
  return "Others";
}

/// Exact, case-sensitive inverse of label_name.
std::optional<ActivityLabel> parse_label(std::string_view name) noexcept;

}  // namespace harpioneer
