#pragma once

#include <span>
#include <vector>

#include "spectramix/catalog.hpp"
#include "spectramix/colorimetry.hpp"
#include "spectramix/mixing.hpp"
#include "spectramix/recovery.hpp"

// Batch kernels over independent items (pixels, queries, curve pairs).
// `serial` is the reference; `parallel` distributes items with OpenMP and
// must return bitwise-identical results in the same order.

namespace spectramix::serial {

std::vector<RecoveryResult> recover_batch(std::span<const Srgb8> colors, Algorithm algorithm,
                                          const Recoverer& recoverer);

std::vector<ForwardResult> forward_batch(std::span<const Reflectance36> curves, const TMatrix& t);

/// Index into catalog.entries() of the nearest entry for each target.
std::vector<std::size_t> nearest_batch(std::span<const Srgb8> targets, const Catalog& catalog, Metric metric,
                                       const RgbConversionMatrix& m);

/// Mixes a[i] with b[i] under the same two-way weights.
std::vector<Reflectance36> mix_pairs(std::span<const Reflectance36> a, std::span<const Reflectance36> b,
                                     const MixWeights& weights);

}  // namespace spectramix::serial

namespace spectramix::parallel {

/// Worker count OpenMP will use (1 when built without OpenMP).
int max_threads();

std::vector<RecoveryResult> recover_batch(std::span<const Srgb8> colors, Algorithm algorithm,
                                          const Recoverer& recoverer);

std::vector<ForwardResult> forward_batch(std::span<const Reflectance36> curves, const TMatrix& t);

std::vector<std::size_t> nearest_batch(std::span<const Srgb8> targets, const Catalog& catalog, Metric metric,
                                       const RgbConversionMatrix& m);

std::vector<Reflectance36> mix_pairs(std::span<const Reflectance36> a, std::span<const Reflectance36> b,
                                     const MixWeights& weights);

}  // namespace spectramix::parallel
