#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cloze/bootstrap.hpp"
#include "cloze/corpus.hpp"
#include "cloze/rng.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("cloze_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

// ---- independent oracles -----------------------------------------------------

// Straightforward -sum(p*log2(p)) loop, independent of the library path.
inline double entropy_oracle(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h < 0.0 ? 0.0 : h;
}

inline double entropy_oracle_counts(const std::vector<std::uint64_t>& counts) {
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    std::vector<double> probs;
    for (auto c : counts) probs.push_back(static_cast<double>(c) / total);
    return entropy_oracle(probs);
}

// Naive trajectory: re-count and re-evaluate entropy for every prefix of
// every permutation row.
inline std::vector<double> trajectory_oracle(const std::vector<std::uint32_t>& codes,
                                             std::size_t num_cats,
                                             const std::uint32_t* perm_row) {
    const std::size_t n = codes.size();
    std::vector<double> traj(n);
    for (std::size_t t = 1; t <= n; ++t) {
        std::vector<std::uint64_t> counts(num_cats, 0);
        for (std::size_t i = 0; i < t; ++i) counts[codes[perm_row[i]]]++;
        traj[t - 1] = entropy_oracle_counts(counts);
    }
    return traj;
}

// ---- random inputs -------------------------------------------------------------

inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t k) {
    std::uniform_real_distribution<double> unit(1e-6, 1.0);
    std::vector<double> probs(k);
    double sum = 0.0;
    for (auto& p : probs) {
        p = unit(rng);
        sum += p;
    }
    for (auto& p : probs) p /= sum;
    return probs;
}

// Random synthetic sentence with codes drawn from a geometric-ish category
// distribution over num_cats categories.
inline cloze::EncodedResponses random_sentence(std::mt19937_64& rng, const std::string& id,
                                               std::size_t n, std::size_t num_cats,
                                               double decay = 0.7) {
    std::vector<double> weights(num_cats);
    double w = 1.0;
    for (auto& x : weights) {
        x = w;
        w *= decay;
    }
    std::discrete_distribution<std::uint32_t> dist(weights.begin(), weights.end());
    cloze::EncodedResponses enc;
    enc.sentence_id = id;
    enc.n = n;
    std::uint32_t max_code = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t code = dist(rng);
        max_code = std::max(max_code, code);
        enc.codes.push_back(code);
    }
    // compact unused trailing categories so every code < vocab size
    for (std::uint32_t c = 0; c <= max_code; ++c) enc.vocab.push_back("w" + std::to_string(c));
    return enc;
}

// ---- rank statistics (for the ordering criterion) --------------------------------

inline std::vector<double> ranks_with_ties(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(ranks_with_ties(x), ranks_with_ties(y));
}

// One-sided permutation p-value for positive Spearman correlation.
inline double spearman_pvalue_positive(const std::vector<double>& x, const std::vector<double>& y,
                                       std::size_t n_perm = 10000, std::uint64_t seed = 7) {
    const double observed = spearman(x, y);
    std::mt19937_64 rng(seed);
    std::vector<double> shuffled = y;
    std::size_t at_least = 0;
    for (std::size_t p = 0; p < n_perm; ++p) {
        cloze::rng::Engine engine(rng());
        cloze::rng::shuffle(engine, std::span<double>(shuffled));
        if (spearman(x, shuffled) >= observed) ++at_least;
    }
    return static_cast<double>(at_least + 1) / static_cast<double>(n_perm + 1);
}

}  // namespace testutil
