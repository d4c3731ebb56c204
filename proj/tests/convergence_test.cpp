#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cloze/convergence.hpp"
#include "cloze/errors.hpp"

using namespace cloze;

namespace {

MeanTrajectory make_traj(std::vector<double> values, const std::string& id = "t") {
    MeanTrajectory traj;
    traj.sentence_id = id;
    traj.mean_h = std::move(values);
    return traj;
}

MeanTrajectory linear_traj(std::size_t n, double slope, double start = 0.0) {
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = start + slope * static_cast<double>(i);
    return make_traj(values);
}

ConvergenceResult converge(const MeanTrajectory& traj, double threshold = 0.005,
                           std::size_t window = 5, std::size_t consecutive = 3) {
    return find_convergence(traj, ConvergenceCriterion{threshold, window, consecutive});
}

}  // namespace

TEST_CASE("windowed_slope is the endpoints difference over the window") {
    auto traj = make_traj({0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
    CHECK(windowed_slope(traj, 6, 5) == doctest::Approx(0.1).epsilon(1e-12));

    auto flat = make_traj(std::vector<double>(10, 1.25));
    for (std::size_t t = 6; t <= 10; ++t) CHECK(windowed_slope(flat, t, 5) == 0.0);

    for (double s : {0.01, -0.02, 0.3}) {
        auto lin = linear_traj(12, s);
        for (std::size_t t = 6; t <= 12; ++t)
            CHECK(windowed_slope(lin, t, 5) == doctest::Approx(s).epsilon(1e-9));
    }
}

TEST_CASE("windowed_slope range checking") {
    auto traj = make_traj({0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(windowed_slope(traj, 5, 5), OutOfRangeError);
    CHECK_THROWS_AS(windowed_slope(traj, 8, 5), OutOfRangeError);
    CHECK_NOTHROW(windowed_slope(traj, 6, 5));
}

TEST_CASE("zero-entropy trajectory converges at window+1") {
    auto traj = make_traj(std::vector<double>(20, 0.0));
    auto result = converge(traj);
    CHECK(result.converged);
    CHECK(result.convergence_n == 6);
    CHECK(result.reason == "converged");
    CHECK(result.final_entropy_bits == 0.0);
}

TEST_CASE("steadily rising trajectory never converges") {
    auto result = converge(linear_traj(100, 0.01));
    CHECK(!result.converged);
    CHECK(!result.convergence_n.has_value());
    CHECK(result.reason == "no_stable_window");
}

TEST_CASE("slope exactly at threshold does not converge (strictly below)") {
    // power-of-two values keep every computed slope exactly at the threshold
    const double threshold = 0.00390625;  // 2^-8
    std::vector<double> values;
    for (int i = 0; i < 60; ++i) values.push_back(i * threshold);
    auto at_threshold = converge(make_traj(values), threshold);
    CHECK(!at_threshold.converged);

    auto under = converge(linear_traj(60, 0.00499));
    CHECK(under.converged);
    CHECK(under.convergence_n == 6);

    // nudged above the default threshold: never converges regardless of rounding
    std::vector<double> ramp;
    double level = 0.0;
    for (int i = 0; i < 60; ++i) {
        ramp.push_back(level);
        level += 0.005 * (1.0 + 1e-9);
    }
    CHECK(!converge(make_traj(ramp)).converged);
}

TEST_CASE("convergence point is the first step of the consecutive run") {
    // steep rise for 10 steps, flat afterwards
    std::vector<double> values;
    for (int i = 0; i < 10; ++i) values.push_back(0.2 * i);
    for (int i = 0; i < 20; ++i) values.push_back(1.8);
    auto result = converge(make_traj(values));
    REQUIRE(result.converged);
    // slope at t uses t-5; first t with all of t,t+1,t+2 below threshold
    std::size_t t = *result.convergence_n;
    auto traj = make_traj(values);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(std::abs(windowed_slope(traj, t + k, 5)) < 0.005);
    CHECK(std::abs(windowed_slope(traj, t - 1, 5)) >= 0.005);
}

TEST_CASE("a too-short trajectory throws, or is flagged by the lenient variant") {
    auto short_traj = make_traj(std::vector<double>(7, 0.0));  // needs 8 = 5+3
    CHECK_THROWS_AS(converge(short_traj), TrajectoryTooShortError);
    auto lenient = find_convergence_lenient(short_traj, ConvergenceCriterion{});
    CHECK(!lenient.converged);
    CHECK(lenient.reason == "trajectory_too_short");

    auto exactly = make_traj(std::vector<double>(8, 0.0));
    CHECK(converge(exactly).converged);
}

TEST_CASE("stable window too close to the end does not count") {
    // rising through index 24, then a small jump and a 7-step plateau: the
    // windowed slope drops below threshold only at t=31 and t=32, which
    // leaves no room for 3 consecutive checks (n=32)
    std::vector<double> values;
    for (int i = 0; i <= 24; ++i) values.push_back(0.05 * i);
    for (int i = 25; i <= 31; ++i) values.push_back(1.26);
    auto traj = make_traj(values);
    CHECK(std::abs(windowed_slope(traj, 31, 5)) < 0.005);
    CHECK(std::abs(windowed_slope(traj, 32, 5)) < 0.005);
    CHECK(std::abs(windowed_slope(traj, 30, 5)) >= 0.005);
    auto result = converge(traj, 0.005, 5, 3);
    CHECK(!result.converged);
}

TEST_CASE("monotonicity in threshold and consecutive over random trajectories") {
    std::mt19937_64 rng(4711);
    std::uniform_real_distribution<double> noise(0.0, 0.02);
    for (int trial = 0; trial < 500; ++trial) {
        // noisy saturating curve
        std::vector<double> values;
        double level = 0.0;
        std::size_t n = 20 + static_cast<std::size_t>(rng() % 60);
        for (std::size_t i = 0; i < n; ++i) {
            level += noise(rng) / (1.0 + 0.3 * static_cast<double>(i));
            values.push_back(level);
        }
        auto traj = make_traj(values);

        auto loose = converge(traj, 0.01, 5, 3);
        auto tight = converge(traj, 0.002, 5, 3);
        if (tight.converged) {
            CHECK(loose.converged);
            CHECK(*loose.convergence_n <= *tight.convergence_n);
        }

        auto short_run = converge(traj, 0.005, 5, 2);
        auto long_run = converge(traj, 0.005, 5, 4);
        if (long_run.converged) {
            CHECK(short_run.converged);
            CHECK(*short_run.convergence_n <= *long_run.convergence_n);
        }
    }
}

TEST_CASE("summarize_corpus on a uniform batch") {
    std::vector<ConvergenceResult> results;
    for (int i = 0; i < 10; ++i) {
        ConvergenceResult r;
        r.sentence_id = "s" + std::to_string(i);
        r.converged = true;
        r.convergence_n = 20;
        r.final_entropy_bits = 0.5;
        r.n_responses = 100;
        r.reason = "converged";
        results.push_back(r);
    }
    auto summary = summarize_corpus(results);
    CHECK(summary.pct_converged == 100.0);
    for (const auto& qp : summary.quantiles) CHECK(qp.n == 20);
    REQUIRE(summary.bands.size() == 3);
    CHECK(summary.bands[0].label == "H<1");
    CHECK(summary.bands[0].n_sentences == 10);
    CHECK(summary.bands[0].mean_convergence_n == 20.0);
    CHECK(summary.bands[1].n_sentences == 0);
}

TEST_CASE("summarize_corpus quantiles are monotone and converged-only") {
    std::vector<ConvergenceResult> results;
    for (std::size_t i = 1; i <= 100; ++i) {
        ConvergenceResult r;
        r.sentence_id = "s" + std::to_string(i);
        r.converged = i % 10 != 0;  // 90 converge
        if (r.converged) r.convergence_n = i;
        r.final_entropy_bits = static_cast<double>(i) / 30.0;
        r.n_responses = 150;
        results.push_back(r);
    }
    auto summary = summarize_corpus(results, {0.5, 0.8, 0.9});
    CHECK(summary.pct_converged == doctest::Approx(90.0));
    REQUIRE(summary.quantiles.size() == 3);
    CHECK(summary.quantiles[0].n <= summary.quantiles[1].n);
    CHECK(summary.quantiles[1].n <= summary.quantiles[2].n);

    // n_for_quantile(q) is the smallest N with >= q of the 90 at <= N
    std::vector<std::size_t> points;
    for (const auto& r : results)
        if (r.converged) points.push_back(*r.convergence_n);
    std::sort(points.begin(), points.end());
    for (const auto& qp : summary.quantiles) {
        std::size_t at_or_below = 0;
        for (auto p : points)
            if (p <= qp.n) ++at_or_below;
        CHECK(static_cast<double>(at_or_below) >=
              qp.q * static_cast<double>(points.size()) - 1e-9);
        // one less would not reach the quantile
        std::size_t below_prev = 0;
        for (auto p : points)
            if (p <= qp.n - 1) ++below_prev;
        CHECK(static_cast<double>(below_prev) < qp.q * static_cast<double>(points.size()));
    }
}

TEST_CASE("summarize_corpus rejects empty input") {
    CHECK_THROWS_AS(summarize_corpus({}), EmptyInputError);
}
