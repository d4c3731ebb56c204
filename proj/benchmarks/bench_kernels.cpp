#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cloze/bootstrap.hpp"
#include "cloze/convergence.hpp"
#include "cloze/entropy.hpp"

namespace {

cloze::EncodedResponses synthetic_sentence(std::size_t n, std::size_t num_cats, double decay) {
    std::mt19937_64 rng(12345);
    std::vector<double> weights(num_cats);
    double w = 1.0;
    for (auto& x : weights) {
        x = w;
        w *= decay;
    }
    std::discrete_distribution<std::uint32_t> dist(weights.begin(), weights.end());
    cloze::EncodedResponses enc;
    enc.sentence_id = "bench";
    enc.n = n;
    for (std::size_t i = 0; i < n; ++i) enc.codes.push_back(dist(rng));
    for (std::size_t c = 0; c < num_cats; ++c) enc.vocab.push_back("w" + std::to_string(c));
    return enc;
}

void bench_shannon_entropy(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const std::size_t k = static_cast<std::size_t>(state.range(0));
    std::vector<double> probs(k);
    double sum = 0.0;
    for (auto& p : probs) {
        p = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
        sum += p;
    }
    for (auto& p : probs) p /= sum;
    cloze::ProbabilityVector pv{probs};
    for (auto _ : state) {
        benchmark::DoNotOptimize(cloze::shannon_entropy(pv));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(k));
}
BENCHMARK(bench_shannon_entropy)->Arg(8)->Arg(64)->Arg(512);

void bench_permutation_matrix(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cloze::permutation_matrix(n, 1000, 42));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 1000 *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(bench_permutation_matrix)->Arg(104)->Arg(250);

// the per-sentence hot path of analyze-convergence: 1000 bootstrap rounds of
// cumulative entropy plus convergence detection
void bench_sentence_trajectory(benchmark::State& state) {
    const auto enc = synthetic_sentence(static_cast<std::size_t>(state.range(0)),
                                        static_cast<std::size_t>(state.range(1)), 0.85);
    const cloze::BootstrapConfig config{1000, 42};
    for (auto _ : state) {
        auto mean = cloze::bootstrap_mean_trajectory(enc, config);
        auto result = cloze::find_convergence_lenient(mean, cloze::ConvergenceCriterion{});
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 1000 *
                            state.range(0));
}
BENCHMARK(bench_sentence_trajectory)->Args({104, 40})->Args({158, 60})->Args({250, 120});

void bench_full_matrix(benchmark::State& state) {
    const auto enc = synthetic_sentence(104, 40, 0.85);
    const cloze::BootstrapConfig config{1000, 42};
    for (auto _ : state) {
        benchmark::DoNotOptimize(cloze::cumulative_entropy(enc, config));
    }
}
BENCHMARK(bench_full_matrix);

}  // namespace

BENCHMARK_MAIN();
