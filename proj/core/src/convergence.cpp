#include "cloze/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cloze/errors.hpp"

namespace cloze {

double windowed_slope(const MeanTrajectory& trajectory, std::size_t t, std::size_t window) {
    if (t <= window || t > trajectory.size())
        throw OutOfRangeError("windowed_slope: t=" + std::to_string(t) + " outside (" +
                              std::to_string(window) + ", " + std::to_string(trajectory.size()) +
                              "]");
    return (trajectory.at_step(t) - trajectory.at_step(t - window)) /
           static_cast<double>(window);
}

ConvergenceResult find_convergence(const MeanTrajectory& trajectory,
                                   const ConvergenceCriterion& criterion) {
    if (criterion.slope_threshold <= 0.0 || criterion.window == 0 || criterion.consecutive == 0)
        throw ConfigError("convergence criterion requires threshold > 0, window >= 1, "
                          "consecutive >= 1");
    const std::size_t n = trajectory.size();
    if (n < criterion.window + criterion.consecutive)
        throw TrajectoryTooShortError(n, criterion.window + criterion.consecutive);

    ConvergenceResult result;
    result.sentence_id = trajectory.sentence_id;
    result.n_responses = n;
    result.final_entropy_bits = trajectory.at_step(n);
    result.reason = "no_stable_window";

    // last t where a run of `consecutive` in-range slope checks still fits
    const std::size_t last_start = n - criterion.consecutive + 1;
    for (std::size_t t = criterion.window + 1; t <= last_start; ++t) {
        bool stable = true;
        for (std::size_t k = 0; k < criterion.consecutive; ++k) {
            if (std::abs(windowed_slope(trajectory, t + k, criterion.window)) >=
                criterion.slope_threshold) {
                stable = false;
                break;
            }
        }
        if (stable) {
            result.converged = true;
            result.convergence_n = t;
            result.reason = "converged";
            break;
        }
    }
    return result;
}

ConvergenceResult find_convergence_lenient(const MeanTrajectory& trajectory,
                                           const ConvergenceCriterion& criterion) {
    const std::size_t n = trajectory.size();
    if (n < criterion.window + criterion.consecutive) {
        ConvergenceResult result;
        result.sentence_id = trajectory.sentence_id;
        result.n_responses = n;
        result.final_entropy_bits = n ? trajectory.at_step(n) : 0.0;
        result.reason = "trajectory_too_short";
        return result;
    }
    return find_convergence(trajectory, criterion);
}

std::vector<EntropyBand> default_entropy_bands() {
    const double inf = std::numeric_limits<double>::infinity();
    return {
        {"H<1", 0.0, std::nextafter(1.0, 0.0)},
        {"1<=H<=2.5", 1.0, 2.5},
        {"H>2.5", std::nextafter(2.5, 3.0), inf},
    };
}

CorpusConvergenceSummary summarize_corpus(const std::vector<ConvergenceResult>& results,
                                          const std::vector<double>& quantiles,
                                          const std::vector<EntropyBand>& bands) {
    if (results.empty()) throw EmptyInputError("summarize_corpus: no results");

    CorpusConvergenceSummary summary;
    summary.n_total = results.size();

    std::vector<std::size_t> points;
    for (const auto& r : results) {
        if (r.converged) {
            points.push_back(*r.convergence_n);
        }
    }
    summary.n_converged = points.size();
    summary.pct_converged =
        100.0 * static_cast<double>(summary.n_converged) / static_cast<double>(summary.n_total);

    std::sort(points.begin(), points.end());
    for (double q : quantiles) {
        if (points.empty()) break;
        // smallest N such that >= q of converged sentences converge at <= N
        auto rank = static_cast<std::size_t>(
            std::ceil(q * static_cast<double>(points.size())));
        rank = std::clamp<std::size_t>(rank, 1, points.size());
        summary.quantiles.push_back({q, points[rank - 1]});
    }

    for (const auto& band : bands) {
        CorpusConvergenceSummary::BandStat stat;
        stat.label = band.label;
        double sum = 0.0;
        for (const auto& r : results) {
            if (!r.converged) continue;
            if (r.final_entropy_bits >= band.lo && r.final_entropy_bits <= band.hi) {
                ++stat.n_sentences;
                sum += static_cast<double>(*r.convergence_n);
            }
        }
        stat.mean_convergence_n =
            stat.n_sentences ? sum / static_cast<double>(stat.n_sentences) : 0.0;
        summary.bands.push_back(std::move(stat));
    }
    return summary;
}

}  // namespace cloze
