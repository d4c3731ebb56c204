#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cloze {

// Empirical category counts for one sentence's responses.
struct CountVector {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    static CountVector from_counts(std::vector<std::uint64_t> counts);
};

// Normalized categorical distribution; sums to 1 within 1e-9.
struct ProbabilityVector {
    std::vector<double> probs;
};

using EntropyBits = double;

// probs[i] = counts[i] / total. Throws ZeroTotalError when total == 0.
ProbabilityVector counts_to_probs(const CountVector& counts);

// H = -sum p log2 p, in bits. Zero-probability terms contribute exactly 0.
EntropyBits shannon_entropy(const ProbabilityVector& dist);
EntropyBits shannon_entropy(std::span<const double> probs);

// Same quantity computed as log2(total) - sum(c log2 c)/total. Exact for
// degenerate (0) and uniform (log2 K) counts, and cheaper to maintain
// incrementally; this is the form the bootstrap kernel uses.
EntropyBits entropy_from_counts(const CountVector& counts);
EntropyBits entropy_from_counts(std::span<const std::uint64_t> counts);

}  // namespace cloze
