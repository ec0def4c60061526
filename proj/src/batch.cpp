#include "spectramix/batch.hpp"

#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spectramix/errors.hpp"

namespace spectramix {

namespace {

std::size_t entry_index(const Catalog& catalog, const CatalogEntry& entry) {
    return static_cast<std::size_t>(&entry - catalog.entries().data());
}

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) throw DomainError("mix_pairs: " + std::to_string(a) + " vs " + std::to_string(b) + " curves");
}

// Runs body(i) for i in [0, n) across OpenMP threads. The first exception
// thrown by any item is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    std::exception_ptr error;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(spectramix_batch_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

namespace serial {

std::vector<RecoveryResult> recover_batch(std::span<const Srgb8> colors, Algorithm algorithm,
                                          const Recoverer& recoverer) {
    std::vector<RecoveryResult> out;
    out.reserve(colors.size());
    for (Srgb8 c : colors) out.push_back(recoverer.recover(c, algorithm));
    return out;
}

std::vector<ForwardResult> forward_batch(std::span<const Reflectance36> curves, const TMatrix& t) {
    std::vector<ForwardResult> out;
    out.reserve(curves.size());
    for (const auto& rho : curves) out.push_back(forward_convert(rho, t));
    return out;
}

std::vector<std::size_t> nearest_batch(std::span<const Srgb8> targets, const Catalog& catalog, Metric metric,
                                       const RgbConversionMatrix& m) {
    std::vector<std::size_t> out;
    out.reserve(targets.size());
    for (Srgb8 target : targets) out.push_back(entry_index(catalog, nearest_entry(target, catalog, metric, m)));
    return out;
}

std::vector<Reflectance36> mix_pairs(std::span<const Reflectance36> a, std::span<const Reflectance36> b,
                                     const MixWeights& weights) {
    require_same_length(a.size(), b.size());
    std::vector<Reflectance36> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Reflectance36 pair[] = {a[i], b[i]};
        out.push_back(wgm_mix(pair, weights));
    }
    return out;
}

}  // namespace serial

namespace parallel {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::vector<RecoveryResult> recover_batch(std::span<const Srgb8> colors, Algorithm algorithm,
                                          const Recoverer& recoverer) {
    std::vector<RecoveryResult> out(colors.size());
    parallel_for(colors.size(), [&](std::size_t i) { out[i] = recoverer.recover(colors[i], algorithm); });
    return out;
}

std::vector<ForwardResult> forward_batch(std::span<const Reflectance36> curves, const TMatrix& t) {
    std::vector<ForwardResult> out(curves.size());
    parallel_for(curves.size(), [&](std::size_t i) { out[i] = forward_convert(curves[i], t); });
    return out;
}

std::vector<std::size_t> nearest_batch(std::span<const Srgb8> targets, const Catalog& catalog, Metric metric,
                                       const RgbConversionMatrix& m) {
    if (catalog.empty()) throw DomainError("nearest_batch: catalog is empty");
    std::vector<std::size_t> out(targets.size());
    parallel_for(targets.size(), [&](std::size_t i) {
        out[i] = entry_index(catalog, nearest_entry(targets[i], catalog, metric, m));
    });
    return out;
}

std::vector<Reflectance36> mix_pairs(std::span<const Reflectance36> a, std::span<const Reflectance36> b,
                                     const MixWeights& weights) {
    require_same_length(a.size(), b.size());
    std::vector<Reflectance36> out(a.size());
    parallel_for(a.size(), [&](std::size_t i) {
        const Reflectance36 pair[] = {a[i], b[i]};
        out[i] = wgm_mix(pair, weights);
    });
    return out;
}

}  // namespace parallel

}  // namespace spectramix
