#pragma once

#include <charconv>
#include <string>

namespace intruder {

/// Shortest round-trip decimal form; locale independent and deterministic.
[[nodiscard]] inline std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace intruder
