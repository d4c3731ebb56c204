#include "cloze/entropy.hpp"

#include <cmath>
#include <numeric>

#include "cloze/errors.hpp"

namespace cloze {

CountVector CountVector::from_counts(std::vector<std::uint64_t> counts) {
    CountVector cv;
    cv.total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    cv.counts = std::move(counts);
    return cv;
}

ProbabilityVector counts_to_probs(const CountVector& counts) {
    if (counts.total == 0) throw ZeroTotalError();
    ProbabilityVector pv;
    pv.probs.reserve(counts.counts.size());
    const double total = static_cast<double>(counts.total);
    for (std::uint64_t c : counts.counts) {
        pv.probs.push_back(static_cast<double>(c) / total);
    }
    return pv;
}

EntropyBits shannon_entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h + 0.0;  // normalize -0.0 to +0.0
}

EntropyBits shannon_entropy(const ProbabilityVector& dist) {
    return shannon_entropy(std::span<const double>(dist.probs));
}

EntropyBits entropy_from_counts(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    double sum_clog2c = 0.0;
    for (std::uint64_t c : counts) {
        total += c;
        if (c > 1) sum_clog2c += static_cast<double>(c) * std::log2(static_cast<double>(c));
    }
    if (total == 0) throw ZeroTotalError();
    double h = std::log2(static_cast<double>(total)) - sum_clog2c / static_cast<double>(total);
    return h < 0.0 ? 0.0 : h;
}

EntropyBits entropy_from_counts(const CountVector& counts) {
    return entropy_from_counts(std::span<const std::uint64_t>(counts.counts));
}

}  // namespace cloze
