#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cloze/bootstrap.hpp"

namespace cloze {

struct ConvergenceCriterion {
    double slope_threshold = 0.005;  // bits per response
    std::size_t window = 5;          // responses
    std::size_t consecutive = 3;     // steps the slope must stay below threshold
};

struct ConvergenceResult {
    std::string sentence_id;
    bool converged = false;
    std::optional<std::size_t> convergence_n;  // response count, present iff converged
    double final_entropy_bits = 0.0;
    std::size_t n_responses = 0;
    std::string reason;  // "converged" | "no_stable_window" | "trajectory_too_short"
};

// (mean_h[t] - mean_h[t - window]) / window, in bits/response; t is a 1-based
// response count. Throws OutOfRangeError unless window < t <= size.
double windowed_slope(const MeanTrajectory& trajectory, std::size_t t, std::size_t window);

// Scans t = window+1 .. n for the first t where |windowed_slope| stays
// strictly below the threshold for `consecutive` consecutive steps (all in
// range); that first step is the convergence point. Throws
// TrajectoryTooShortError when size < window + consecutive.
ConvergenceResult find_convergence(const MeanTrajectory& trajectory,
                                   const ConvergenceCriterion& criterion);

// Same, but a too-short trajectory yields converged=false with
// reason "trajectory_too_short" instead of an error (batch-friendly).
ConvergenceResult find_convergence_lenient(const MeanTrajectory& trajectory,
                                           const ConvergenceCriterion& criterion);

struct EntropyBand {
    std::string label;
    double lo;  // inclusive
    double hi;  // inclusive
};

// Bands from the corpus-level reporting convention: H<1, 1<=H<=2.5, H>2.5.
std::vector<EntropyBand> default_entropy_bands();

struct CorpusConvergenceSummary {
    std::size_t n_total = 0;
    std::size_t n_converged = 0;
    double pct_converged = 0.0;  // percent, 0..100

    struct QuantilePoint {
        double q;            // e.g. 0.9
        std::size_t n;       // smallest N with >= q of converged sentences at <= N
    };
    std::vector<QuantilePoint> quantiles;

    struct BandStat {
        std::string label;
        std::size_t n_sentences = 0;       // converged sentences in band
        double mean_convergence_n = 0.0;   // mean convergence point within band
    };
    std::vector<BandStat> bands;
};

// Quantiles and band means are computed over converged sentences only.
// Throws EmptyInputError for an empty result set.
CorpusConvergenceSummary summarize_corpus(
    const std::vector<ConvergenceResult>& results,
    const std::vector<double>& quantiles = {0.5, 0.8, 0.9, 0.95},
    const std::vector<EntropyBand>& bands = default_entropy_bands());

}  // namespace cloze
