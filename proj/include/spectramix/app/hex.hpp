#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "spectramix/colorimetry.hpp"

namespace spectramix::app {

/// "RRGGBB" or "#RRGGBB", either case. nullopt for anything else.
std::optional<Srgb8> parse_hex(std::string_view text);

/// Uppercase "RRGGBB" without a leading '#'.
std::string to_hex(Srgb8 c);

}  // namespace spectramix::app
