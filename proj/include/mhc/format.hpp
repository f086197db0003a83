#pragma once

#include <string>

namespace mhc {

/// Locale-independent shortest "general" rendering with `significant` digits (default 12).
std::string format_number(double value, int significant = 12);

/// Shortest representation that parses back to exactly `value`.
std::string format_roundtrip(double value);

}  // namespace mhc
