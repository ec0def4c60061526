#include <random>

#include <benchmark/benchmark.h>

#include "spectramix/batch.hpp"
#include "spectramix/tables.hpp"

using namespace spectramix;

namespace {

const Recoverer& recoverer() {
    static const Recoverer r(canonical_t_matrix());
    return r;
}

std::vector<Srgb8> colors(std::size_t n) {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> u(0, 255);
    std::vector<Srgb8> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(Srgb8::from_ints(u(rng), u(rng), u(rng)));
    return out;
}

std::vector<Reflectance36> curves(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    std::vector<Reflectance36> out;
    for (std::size_t i = 0; i < n; ++i) {
        SpectrumVector v;
        for (int b = 0; b < kBands; ++b) v(b) = u(rng);
        out.emplace_back(v);
    }
    return out;
}

const Catalog& catalog() {
    static const Catalog c = [] {
        std::vector<CatalogEntry> entries;
        int n = 0;
        for (const auto& rho : curves(2000, 7)) {
            entries.push_back(make_catalog_entry("e" + std::to_string(n++), rho, canonical_t_matrix(), srgb_d65_matrix()));
        }
        return Catalog(std::move(entries), "bench");
    }();
    return c;
}

template <bool Parallel>
void recover(benchmark::State& state) {
    const auto alg = static_cast<Algorithm>(state.range(0));
    const auto input = colors(256);
    for (auto _ : state) {
        auto out = Parallel ? parallel::recover_batch(input, alg, recoverer()) : serial::recover_batch(input, alg, recoverer());
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(input.size()));
    state.SetLabel(std::string(to_string(alg)));
}

template <bool Parallel>
void nearest(benchmark::State& state) {
    const auto metric = static_cast<Metric>(state.range(0));
    const auto input = colors(1024);
    for (auto _ : state) {
        auto out = Parallel ? parallel::nearest_batch(input, catalog(), metric, srgb_d65_matrix())
                            : serial::nearest_batch(input, catalog(), metric, srgb_d65_matrix());
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(input.size()));
    state.SetLabel(std::string(to_string(metric)));
}

template <bool Parallel>
void mix(benchmark::State& state) {
    const auto a = curves(4096, 1), b = curves(4096, 2);
    const std::vector<double> parts = {3.0, 7.0};
    const MixWeights w = weights_from_parts(parts);
    for (auto _ : state) {
        auto out = Parallel ? parallel::mix_pairs(a, b, w) : serial::mix_pairs(a, b, w);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size()));
}

template <bool Parallel>
void forward(benchmark::State& state) {
    const auto input = curves(4096, 3);
    for (auto _ : state) {
        auto out = Parallel ? parallel::forward_batch(input, canonical_t_matrix())
                            : serial::forward_batch(input, canonical_t_matrix());
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(input.size()));
}

void single_recover(benchmark::State& state) {
    const auto alg = static_cast<Algorithm>(state.range(0));
    const auto input = colors(729);
    std::size_t i = 0;
    for (auto _ : state) {
        auto r = recoverer().recover(input[i++ % input.size()], alg);
        benchmark::DoNotOptimize(r.rho);
    }
    state.SetLabel(std::string(to_string(alg)));
}

constexpr int kAlgorithms[] = {static_cast<int>(Algorithm::ilss), static_cast<int>(Algorithm::llss),
                               static_cast<int>(Algorithm::illss)};

void algorithm_args(benchmark::internal::Benchmark* b) {
    for (int a : kAlgorithms) b->Arg(a);
}

void metric_args(benchmark::internal::Benchmark* b) {
    b->Arg(static_cast<int>(Metric::srgb))->Arg(static_cast<int>(Metric::lab));
}

}  // namespace

BENCHMARK(single_recover)->Apply(algorithm_args);
BENCHMARK(recover<false>)->Name("recover_batch/serial")->Apply(algorithm_args)->Unit(benchmark::kMillisecond);
BENCHMARK(recover<true>)->Name("recover_batch/parallel")->Apply(algorithm_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(nearest<false>)->Name("nearest_batch/serial")->Apply(metric_args)->Unit(benchmark::kMillisecond);
BENCHMARK(nearest<true>)->Name("nearest_batch/parallel")->Apply(metric_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(mix<false>)->Name("mix_pairs/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(mix<true>)->Name("mix_pairs/parallel")->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(forward<false>)->Name("forward_batch/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(forward<true>)->Name("forward_batch/parallel")->Unit(benchmark::kMicrosecond)->UseRealTime();

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    benchmark::AddCustomContext("omp_max_threads", std::to_string(parallel::max_threads()));
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
