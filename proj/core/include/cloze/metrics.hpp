#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cloze {

// Human/model entropy pairs keyed by sentence id.
struct PairedEntropies {
    struct Pair {
        std::string sentence_id;
        double h_human;
        double h_model;
    };
    std::vector<Pair> pairs;

    std::size_t n() const { return pairs.size(); }
};

// Joins two (sentence_id, entropy) sets. Ids present on only one side are a
// hard error (UnpairedSentencesError); silent inner joins hide data loss.
// Pair order follows the human-side order.
PairedEntropies pair_by_id(const std::vector<std::pair<std::string, double>>& human,
                           const std::vector<std::pair<std::string, double>>& model);

// Mean signed difference, model - human, in bits.
double bias(const PairedEntropies& paired);

// Mean absolute difference in bits.
double mae(const PairedEntropies& paired);

// Lin's concordance correlation coefficient with population (divide-by-n)
// variances: 2*cov / (var_h + var_m + (mean_h - mean_m)^2). Exactly 1.0 on
// the identity line. Throws EmptyInputError for n < 2 and
// DegenerateVarianceError when both vectors are constant.
double ccc(const PairedEntropies& paired);

struct AlignmentReport {
    double bias = 0.0;
    double mae = 0.0;
    double ccc = 0.0;
    std::size_t n = 0;
};

AlignmentReport alignment_report(const PairedEntropies& paired);

// Uniform subsample without replacement, deterministic per seed; the
// surviving pairs keep their original relative order. Throws
// TargetTooLargeError when target_n exceeds the input size.
PairedEntropies subsample_matched(const PairedEntropies& larger, std::size_t target_n,
                                  std::uint64_t seed);

}  // namespace cloze
