#include "mhc/format.hpp"

#include <array>
#include <charconv>

namespace mhc {

std::string format_number(double value, int significant) {
    std::array<char, 64> buffer{};
    const auto result =
        std::to_chars(buffer.data(), buffer.data() + buffer.size(), value, std::chars_format::general, significant);
    return {buffer.data(), result.ptr};
}

std::string format_roundtrip(double value) {
    std::array<char, 64> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return {buffer.data(), result.ptr};
}

}  // namespace mhc
