#include "spectramix/app/hex.hpp"

#include <charconv>

namespace spectramix::app {

std::optional<Srgb8> parse_hex(std::string_view text) {
    if (!text.empty() && text.front() == '#') text.remove_prefix(1);
    if (text.size() != 6) return std::nullopt;
    std::uint8_t channels[3];
    for (int i = 0; i < 3; ++i) {
        const char* first = text.data() + 2 * i;
        unsigned value = 0;
        const auto [ptr, ec] = std::from_chars(first, first + 2, value, 16);
        if (ec != std::errc() || ptr != first + 2) return std::nullopt;
        channels[i] = static_cast<std::uint8_t>(value);
    }
    return Srgb8{channels[0], channels[1], channels[2]};
}

std::string to_hex(Srgb8 c) {
    static constexpr char digits[] = "0123456789ABCDEF";
    std::string out(6, '0');
    const std::uint8_t channels[] = {c.r, c.g, c.b};
    for (int i = 0; i < 3; ++i) {
        out[2 * i] = digits[channels[i] >> 4];
        out[2 * i + 1] = digits[channels[i] & 0xF];
    }
    return out;
}

}  // namespace spectramix::app
