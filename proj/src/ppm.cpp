#include "spectramix/app/ppm.hpp"

#include <algorithm>

#include "spectramix/errors.hpp"

namespace spectramix::app {

std::string render_swatch_strip(std::span<const Srgb8> swatches) {
    if (swatches.empty()) throw DomainError("swatch strip needs at least one color");
    const std::size_t width = swatches.size() * kSwatchSize;
    std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(kSwatchSize) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + width * kSwatchSize * 3);

    char* row0 = out.data() + header;
    for (std::size_t x = 0; x < width; ++x) {
        const Srgb8 c = swatches[x / kSwatchSize];
        row0[3 * x] = static_cast<char>(c.r);
        row0[3 * x + 1] = static_cast<char>(c.g);
        row0[3 * x + 2] = static_cast<char>(c.b);
    }
    for (int y = 1; y < kSwatchSize; ++y) std::copy(row0, row0 + 3 * width, row0 + 3 * width * y);
    return out;
}

}  // namespace spectramix::app
