#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace cloze::rng {

// Generator identity: std::mt19937_64. Its output stream is fixed by the
// C++ standard, so seeded results are stable across platforms and compilers;
// the concrete stream is additionally pinned by golden-file tests.
using Engine = std::mt19937_64;

// Uniform integer in [0, bound) via Lemire's multiply-shift with rejection.
// Hand-rolled because std::uniform_int_distribution's mapping is
// implementation-defined.
std::uint64_t bounded(Engine& rng, std::uint64_t bound);

// In-place Fisher-Yates shuffle with a pinned sweep order (i = n-1 .. 1).
template <typename T>
void shuffle(Engine& rng, std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

// Sample k distinct indices out of [0, n), in ascending order.
std::vector<std::size_t> sample_without_replacement(Engine& rng, std::size_t n, std::size_t k);

// Stable 64-bit mix of (master_seed, sentence_id): FNV-1a over the id bytes
// folded with the seed, then a splitmix64 finalizer. Makes per-sentence
// streams independent of processing order and thread schedule.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view sentence_id);

}  // namespace cloze::rng
