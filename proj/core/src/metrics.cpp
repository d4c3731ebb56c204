#include "cloze/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cloze/errors.hpp"
#include "cloze/rng.hpp"

namespace cloze {

PairedEntropies pair_by_id(const std::vector<std::pair<std::string, double>>& human,
                           const std::vector<std::pair<std::string, double>>& model) {
    std::unordered_map<std::string, double> model_by_id;
    model_by_id.reserve(model.size());
    for (const auto& [id, h] : model) model_by_id.emplace(id, h);

    PairedEntropies paired;
    std::vector<std::string> unpaired;
    std::unordered_map<std::string, bool> seen_model;
    for (const auto& [id, h] : human) {
        auto it = model_by_id.find(id);
        if (it == model_by_id.end()) {
            unpaired.push_back(id);
            continue;
        }
        seen_model[id] = true;
        paired.pairs.push_back({id, h, it->second});
    }
    for (const auto& [id, h] : model) {
        if (!seen_model.count(id)) unpaired.push_back(id);
    }
    if (!unpaired.empty()) throw UnpairedSentencesError(std::move(unpaired));
    return paired;
}

double bias(const PairedEntropies& paired) {
    if (paired.pairs.empty()) throw EmptyInputError("bias: no pairs");
    double sum = 0.0;
    for (const auto& p : paired.pairs) sum += p.h_model - p.h_human;
    return sum / static_cast<double>(paired.n());
}

double mae(const PairedEntropies& paired) {
    if (paired.pairs.empty()) throw EmptyInputError("mae: no pairs");
    double sum = 0.0;
    for (const auto& p : paired.pairs) sum += std::abs(p.h_model - p.h_human);
    return sum / static_cast<double>(paired.n());
}

double ccc(const PairedEntropies& paired) {
    const std::size_t n = paired.n();
    if (n < 2) throw EmptyInputError("ccc: needs at least 2 pairs");

    const double dn = static_cast<double>(n);
    double mean_h = 0.0, mean_m = 0.0;
    for (const auto& p : paired.pairs) {
        mean_h += p.h_human;
        mean_m += p.h_model;
    }
    mean_h /= dn;
    mean_m /= dn;

    // Centered sums; dividing numerator and denominator by n cancels, which
    // keeps small-integer inputs exact.
    double s_hm = 0.0, s_hh = 0.0, s_mm = 0.0;
    for (const auto& p : paired.pairs) {
        const double dh = p.h_human - mean_h;
        const double dm = p.h_model - mean_m;
        s_hm += dh * dm;
        s_hh += dh * dh;
        s_mm += dm * dm;
    }
    if (s_hh == 0.0 && s_mm == 0.0) throw DegenerateVarianceError();
    const double mean_gap = mean_h - mean_m;
    const double denom = s_hh + s_mm + dn * mean_gap * mean_gap;
    return 2.0 * s_hm / denom;
}

AlignmentReport alignment_report(const PairedEntropies& paired) {
    AlignmentReport report;
    report.bias = bias(paired);
    report.mae = mae(paired);
    report.ccc = ccc(paired);
    report.n = paired.n();
    return report;
}

PairedEntropies subsample_matched(const PairedEntropies& larger, std::size_t target_n,
                                  std::uint64_t seed) {
    if (target_n > larger.n()) throw TargetTooLargeError(target_n, larger.n());
    rng::Engine engine(seed);
    auto indices = rng::sample_without_replacement(engine, larger.n(), target_n);
    PairedEntropies out;
    out.pairs.reserve(target_n);
    for (std::size_t idx : indices) out.pairs.push_back(larger.pairs[idx]);
    return out;
}

}  // namespace cloze
