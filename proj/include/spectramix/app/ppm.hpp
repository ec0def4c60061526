#pragma once

#include <span>
#include <string>

#include "spectramix/colorimetry.hpp"

namespace spectramix::app {

inline constexpr int kSwatchSize = 64;

/// Binary PPM (P6): one 64x64 stripe per swatch, left to right. Header is
/// "P6\n<width> 64\n255\n" followed by raw RGB rows.
std::string render_swatch_strip(std::span<const Srgb8> swatches);

}  // namespace spectramix::app
