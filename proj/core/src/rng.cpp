#include "cloze/rng.hpp"

#include <algorithm>

namespace cloze::rng {

std::uint64_t bounded(Engine& rng, std::uint64_t bound) {
    // Lemire 2019, "Fast Random Integer Generation in an Interval"
    std::uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * static_cast<__uint128_t>(bound);
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
        std::uint64_t threshold = -bound % bound;
        while (lo < threshold) {
            x = rng();
            m = static_cast<__uint128_t>(x) * static_cast<__uint128_t>(bound);
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::size_t> sample_without_replacement(Engine& rng, std::size_t n, std::size_t k) {
    // Partial Fisher-Yates over an index vector; keeps the first k slots.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(bounded(rng, n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view sentence_id) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a offset basis
    auto mix = [&h](unsigned char byte) {
        h ^= byte;
        h *= 0x100000001B3ULL;
    };
    for (int shift = 0; shift < 64; shift += 8) {
        mix(static_cast<unsigned char>(master_seed >> shift));
    }
    for (char ch : sentence_id) {
        mix(static_cast<unsigned char>(ch));
    }
    return splitmix64(h);
}

}  // namespace cloze::rng
