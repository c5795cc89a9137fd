// The three sentiment classes and their canonical order.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "chatmood/errors.hpp"

namespace chatmood {

// Canonical order (positive, neutral, negative) is used for serialization,
// matrix axes, and deterministic tie-breaking.
enum class LabelClass : std::uint8_t { positive = 0, neutral = 1, negative = 2 };

inline constexpr std::array<LabelClass, 3> kAllClasses = {
    LabelClass::positive, LabelClass::neutral, LabelClass::negative};

inline constexpr int class_index(LabelClass c) { return static_cast<int>(c); }

inline constexpr std::string_view to_string(LabelClass c) {
  switch (c) {
    case LabelClass::positive: return "positive";
    case LabelClass::neutral: return "neutral";
    case LabelClass::negative: return "negative";
  }
  return "neutral";
}

inline LabelClass label_class_from_string(std::string_view s) {
  if (s == "positive") return LabelClass::positive;
  if (s == "neutral") return LabelClass::neutral;
  if (s == "negative") return LabelClass::negative;
  throw ValueError("unknown label class \"" + std::string(s) + "\"");
}

}  // namespace chatmood
