#include "spectramix/mixing.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "spectramix/errors.hpp"

namespace spectramix {

namespace {

void check_deltas(std::span<const double> values, const char* what) {
    if (values.empty()) throw DomainError(std::string(what) + ": need at least one weight");
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) throw DomainError(std::string(what) + ": weights must be finite and >= 0");
    }
}

}  // namespace

MixWeights MixWeights::from_deltas(std::span<const double> deltas) {
    check_deltas(deltas, "mix weights");
    const double total = std::accumulate(deltas.begin(), deltas.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("mix weights: deltas must sum to 1");
    std::vector<double> normalized(deltas.begin(), deltas.end());
    for (double& d : normalized) d /= total;
    return MixWeights(std::move(normalized));
}

MixWeights weights_from_parts(std::span<const double> parts) {
    check_deltas(parts, "parts");
    const double total = std::accumulate(parts.begin(), parts.end(), 0.0);
    if (!(total > 0.0)) throw DomainError("parts: total must be positive");
    std::vector<double> deltas(parts.begin(), parts.end());
    for (double& d : deltas) d /= total;
    return MixWeights(std::move(deltas));
}

Reflectance36 floor_reflectance(const Reflectance36& rho, double floor) {
    return Reflectance36(SpectrumVector(rho.vector().cwiseMax(floor)));
}

Reflectance36 wgm_mix(std::span<const Reflectance36> curves, const MixWeights& weights) {
    if (curves.size() != weights.size()) {
        throw DomainError("wgm_mix: " + std::to_string(curves.size()) + " curves but " +
                          std::to_string(weights.size()) + " weights");
    }
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (int band = 0; band < kBands; ++band) {
            if (!(curves[i][band] > 0.0)) {
                throw DomainError("wgm_mix: curve " + std::to_string(i) + " has nonpositive reflectance at " +
                                  std::to_string(wavelength_nm(band)) + " nm");
            }
        }
    }
    SpectrumVector mix = SpectrumVector::Ones();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const double delta = weights[i];
        if (delta == 0.0) continue;
        if (delta == 1.0) {
            mix = mix.cwiseProduct(curves[i].vector());
        } else {
            mix = mix.cwiseProduct(curves[i].vector().array().pow(delta).matrix());
        }
    }
    return Reflectance36(mix);
}

std::vector<Reflectance36> mixing_path(const Reflectance36& a, const Reflectance36& b, int steps) {
    if (steps < 1) throw DomainError("mixing_path: steps must be >= 1");
    std::vector<Reflectance36> path;
    path.reserve(static_cast<std::size_t>(steps) + 2);
    path.push_back(a);
    const Reflectance36 pair[] = {a, b};
    for (int k = 1; k <= steps; ++k) {
        const double parts[] = {static_cast<double>(steps + 1 - k), static_cast<double>(k)};
        path.push_back(wgm_mix(pair, weights_from_parts(parts)));
    }
    path.push_back(b);
    return path;
}

Srgb8 naive_multiply_rgb(Srgb8 a, Srgb8 b) {
    auto mul = [](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::lround(255.0 * (x / 255.0) * (y / 255.0)));
    };
    return {mul(a.r, b.r), mul(a.g, b.g), mul(a.b, b.b)};
}

Reflectance36 filter_product(const Reflectance36& a, const Reflectance36& b) {
    return Reflectance36(SpectrumVector(a.vector().cwiseProduct(b.vector())));
}

}  // namespace spectramix
