#include "cloze/bootstrap.hpp"

#include <cmath>

#include "cloze/errors.hpp"
#include "cloze/rng.hpp"

namespace cloze {

std::uint64_t sentence_seed(const BootstrapConfig& config, const std::string& sentence_id) {
    return rng::derive_seed(config.master_seed, sentence_id);
}

std::vector<std::uint32_t> permutation_matrix(std::size_t n, std::size_t rounds,
                                              std::uint64_t seed) {
    std::vector<std::uint32_t> grid(rounds * n);
    rng::Engine engine(seed);
    std::vector<std::uint32_t> perm(n);
    for (std::size_t r = 0; r < rounds; ++r) {
        for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
        rng::shuffle(engine, std::span<std::uint32_t>(perm));
        std::copy(perm.begin(), perm.end(), grid.begin() + static_cast<long>(r * n));
    }
    return grid;
}

void for_each_trajectory_row(const EncodedResponses& responses, const BootstrapConfig& config,
                             const TrajectoryRowSink& sink) {
    const std::size_t n = responses.n;
    const std::size_t num_cats = responses.num_categories();
    if (n == 0) throw EmptyResponsesError();
    if (config.rounds == 0) throw ConfigError("bootstrap rounds must be >= 1");

    // Shared lookup tables: xlog2x[c] = c*log2(c), plus log2(t) and 1/t per step.
    std::vector<double> xlog2x(n + 1, 0.0);
    std::vector<double> log2_t(n + 1, 0.0);
    std::vector<double> inv_t(n + 1, 0.0);
    for (std::size_t t = 1; t <= n; ++t) {
        const double td = static_cast<double>(t);
        log2_t[t] = std::log2(td);
        inv_t[t] = 1.0 / td;
        xlog2x[t] = td * log2_t[t];
    }

    rng::Engine engine(sentence_seed(config, responses.sentence_id));
    std::vector<std::uint32_t> perm(n);
    std::vector<std::uint32_t> counts(num_cats);
    std::vector<double> row(n);
    const std::uint32_t* codes = responses.codes.data();

    for (std::size_t r = 0; r < config.rounds; ++r) {
        for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
        rng::shuffle(engine, std::span<std::uint32_t>(perm));

        std::fill(counts.begin(), counts.end(), 0u);
        // Incremental H(t) = log2(t) - S/t with S = sum_c count_c*log2(count_c);
        // a count move c-1 -> c adds xlog2x[c] - xlog2x[c-1].
        double weighted_log_sum = 0.0;
        std::size_t active_cats = 0;
        for (std::size_t t = 1; t <= n; ++t) {
            const std::uint32_t code = codes[perm[t - 1]];
            const std::uint32_t c = ++counts[code];
            if (c == 1) {
                ++active_cats;
            } else {
                weighted_log_sum += xlog2x[c] - xlog2x[c - 1];
            }
            if (active_cats == 1) {
                row[t - 1] = 0.0;  // single category seen: exactly predictable
            } else {
                const double h = log2_t[t] - weighted_log_sum * inv_t[t];
                row[t - 1] = h < 0.0 ? 0.0 : h;
            }
        }
        sink(r, std::span<const double>(row));
    }
}

EntropyTrajectoryMatrix cumulative_entropy(const EncodedResponses& responses,
                                           const BootstrapConfig& config) {
    EntropyTrajectoryMatrix matrix;
    matrix.sentence_id = responses.sentence_id;
    matrix.rounds = config.rounds;
    matrix.n = responses.n;
    matrix.values.resize(config.rounds * responses.n);
    for_each_trajectory_row(responses, config,
                            [&](std::size_t r, std::span<const double> row) {
                                std::copy(row.begin(), row.end(),
                                          matrix.values.begin() + static_cast<long>(r * matrix.n));
                            });
    return matrix;
}

MeanTrajectory mean_trajectory(const EntropyTrajectoryMatrix& matrix) {
    MeanTrajectory mean;
    mean.sentence_id = matrix.sentence_id;
    mean.mean_h.assign(matrix.n, 0.0);
    for (std::size_t r = 0; r < matrix.rounds; ++r) {
        auto row = matrix.row(r);
        for (std::size_t i = 0; i < matrix.n; ++i) mean.mean_h[i] += row[i];
    }
    const double inv_rounds = 1.0 / static_cast<double>(matrix.rounds);
    for (double& v : mean.mean_h) v *= inv_rounds;
    return mean;
}

MeanTrajectory bootstrap_mean_trajectory(const EncodedResponses& responses,
                                         const BootstrapConfig& config) {
    MeanTrajectory mean;
    mean.sentence_id = responses.sentence_id;
    mean.mean_h.assign(responses.n, 0.0);
    for_each_trajectory_row(responses, config,
                            [&](std::size_t, std::span<const double> row) {
                                for (std::size_t i = 0; i < row.size(); ++i)
                                    mean.mean_h[i] += row[i];
                            });
    const double inv_rounds = 1.0 / static_cast<double>(config.rounds);
    for (double& v : mean.mean_h) v *= inv_rounds;
    return mean;
}

}  // namespace cloze
