#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cloze/corpus.hpp"

namespace cloze {

struct BootstrapConfig {
    std::size_t rounds = 1000;
    std::uint64_t master_seed = 0;
};

// rounds x n grid of cumulative entropy values in bits, row-major.
// values[r][t-1] is the entropy of the first t responses of permutation r.
struct EntropyTrajectoryMatrix {
    std::string sentence_id;
    std::size_t rounds = 0;
    std::size_t n = 0;
    std::vector<double> values;

    double at(std::size_t round, std::size_t step) const {  // step is 1-based
        return values[round * n + (step - 1)];
    }
    std::span<const double> row(std::size_t round) const {
        return {values.data() + round * n, n};
    }
};

// Column-wise mean of a trajectory matrix; index t-1 = estimate after t responses.
struct MeanTrajectory {
    std::string sentence_id;
    std::vector<double> mean_h;

    std::size_t size() const { return mean_h.size(); }
    double at_step(std::size_t t) const { return mean_h[t - 1]; }  // t in 1..size()
};

// rounds x n grid of permutation indices (row-major); each row is a uniform
// random permutation of 0..n-1. Deterministic for a fixed seed, and exactly
// the sequence the trajectory kernel consumes for the same seed.
std::vector<std::uint32_t> permutation_matrix(std::size_t n, std::size_t rounds,
                                              std::uint64_t seed);

// The seed the engine uses for a given sentence.
std::uint64_t sentence_seed(const BootstrapConfig& config, const std::string& sentence_id);

// Streams trajectory rows without materializing the full matrix: calls
// sink(round, row) for round = 0..rounds-1, where row[t-1] is the cumulative
// entropy after t responses. Row buffer is reused between calls.
using TrajectoryRowSink = std::function<void(std::size_t round, std::span<const double> row)>;
void for_each_trajectory_row(const EncodedResponses& responses, const BootstrapConfig& config,
                             const TrajectoryRowSink& sink);

// Full matrix, for tests and trajectory dumps. Throws EmptyResponsesError.
EntropyTrajectoryMatrix cumulative_entropy(const EncodedResponses& responses,
                                           const BootstrapConfig& config);

MeanTrajectory mean_trajectory(const EntropyTrajectoryMatrix& matrix);

// Mean trajectory with O(n) memory; identical values to
// mean_trajectory(cumulative_entropy(...)) by construction.
MeanTrajectory bootstrap_mean_trajectory(const EncodedResponses& responses,
                                         const BootstrapConfig& config);

}  // namespace cloze
