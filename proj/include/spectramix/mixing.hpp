#pragma once

#include <span>
#include <vector>

#include "spectramix/colorimetry.hpp"

namespace spectramix {

/// Smallest reflectance allowed into a mix. Zero would act as a colorant with
/// unbounded shading power.
inline constexpr double kReflectanceFloor = 1e-5;

/// Normalized mixing exponents: each >= 0, at least one > 0, summing to 1.
class MixWeights {
public:
    /// Accepts deltas whose sum is within 1e-12 of 1 and renormalizes them.
    static MixWeights from_deltas(std::span<const double> deltas);

    const std::vector<double>& deltas() const noexcept { return deltas_; }
    std::size_t size() const noexcept { return deltas_.size(); }
    double operator[](std::size_t i) const { return deltas_[i]; }

private:
    explicit MixWeights(std::vector<double> deltas) : deltas_(std::move(deltas)) {}
    friend MixWeights weights_from_parts(std::span<const double> parts);

    std::vector<double> deltas_;
};

/// delta_i = parts_i / sum(parts). Throws DomainError on negative parts or a
/// zero total.
MixWeights weights_from_parts(std::span<const double> parts);

/// Raises nonpositive entries to kReflectanceFloor. Used at ingestion
/// boundaries only; wgm_mix itself never floors.
Reflectance36 floor_reflectance(const Reflectance36& rho, double floor = kReflectanceFloor);

/// Weighted geometric mean, per wavelength: prod_i rho_i^delta_i.
/// Throws DomainError naming the curve and wavelength of any entry <= 0.
Reflectance36 wgm_mix(std::span<const Reflectance36> curves, const MixWeights& weights);

/// [a, mixes at parts (steps:1) ... (1:steps), b]; endpoints are copies of the
/// inputs.
std::vector<Reflectance36> mixing_path(const Reflectance36& a, const Reflectance36& b, int steps);

/// Channel-wise product on the 0..1 scale. Kept as the baseline that fails for
/// pairs like red x yellow.
Srgb8 naive_multiply_rgb(Srgb8 a, Srgb8 b);

/// Stacked-filter transmittance: plain per-wavelength product.
Reflectance36 filter_product(const Reflectance36& a, const Reflectance36& b);

}  // namespace spectramix
