#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cloze/errors.hpp"
#include "cloze/llm.hpp"
#include "cloze/text.hpp"
#include "test_util.hpp"

using namespace cloze;

TEST_CASE("built-in prompts carry the placeholder and render it once") {
    for (auto prompt : {PromptTemplate::prompt1(), PromptTemplate::prompt2()}) {
        CHECK_NOTHROW(prompt.validate());
        CHECK(prompt.system_message.find("100 people") != std::string::npos);
        auto rendered = prompt.render("The cat sat on the ...");
        CHECK(rendered.find("The cat sat on the ...") != std::string::npos);
        CHECK(rendered.find("{sentence}") == std::string::npos);
    }
    CHECK(PromptTemplate::prompt1().id == PromptId::kPrompt1);
    CHECK(to_string(PromptTemplate::prompt2().id) == "prompt2");

    PromptTemplate bad;
    bad.user_template = "no placeholder";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    PromptTemplate twice;
    twice.user_template = "{sentence} and {sentence}";
    CHECK_THROWS_AS(twice.validate(), ConfigError);
}

TEST_CASE("aggregate_tokens merges tokenization variants and renormalizes") {
    std::vector<TokenPrediction> preds = {
        {" cat", std::log(0.5)},
        {"Cat", std::log(0.3)},
        {"dog", std::log(0.2)},
    };
    auto dist = aggregate_tokens(preds);
    REQUIRE(dist.entries.size() == 2);
    CHECK(dist.entries.at("cat") == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(dist.entries.at("dog") == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(std::abs(dist.dropped_mass) <= 1e-9);
    CHECK(distribution_entropy(dist) == doctest::Approx(0.7219).epsilon(1e-3));
}

TEST_CASE("aggregate_tokens: singleton renormalizes to certainty") {
    std::vector<TokenPrediction> preds = {{"yes", std::log(0.4)}};
    auto dist = aggregate_tokens(preds);
    CHECK(dist.entries.at("yes") == 1.0);
    CHECK(distribution_entropy(dist) == 0.0);
    CHECK(dist.dropped_mass == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("aggregate_tokens: all filtered raises the designated error") {
    std::vector<TokenPrediction> preds = {{"!!", 0.0}};
    CHECK_THROWS_AS(aggregate_tokens(preds), AllTokensFilteredError);
    std::vector<TokenPrediction> mixed = {{"42!", std::log(0.5)}, {"--", std::log(0.5)}};
    CHECK_THROWS_AS(aggregate_tokens(mixed), AllTokensFilteredError);
}

TEST_CASE("aggregate_tokens accounting: dropped mass and dropped count") {
    std::vector<TokenPrediction> preds = {
        {"word", std::log(0.5)},
        {"99", std::log(0.25)},
        {"...", std::log(0.05)},
    };
    auto dist = aggregate_tokens(preds);
    CHECK(dist.dropped_count == 2);
    // 1 - surviving mass: only 0.5 survives out of reported 0.8
    CHECK(dist.dropped_mass == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(dist.entries.at("word") == 1.0);
}

TEST_CASE("renormalization invariant on random token sets") {
    std::mt19937_64 rng(8080);
    std::uniform_real_distribution<double> logp(-8.0, -0.5);
    const std::vector<std::string> pool = {"alpha", "Beta",  "beta!", " gamma", "42",
                                           "delta", "EPS.",  "zeta",  "!!",     "eta"};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<TokenPrediction> preds;
        const std::size_t count = 2 + rng() % 8;
        for (std::size_t i = 0; i < count; ++i) {
            preds.push_back({pool[rng() % pool.size()], logp(rng)});
        }
        WordDistribution dist;
        try {
            dist = aggregate_tokens(preds);
        } catch (const AllTokensFilteredError&) {
            continue;
        }
        double sum = 0.0, surviving = 0.0;
        for (const auto& [w, p] : dist.entries) sum += p;
        CHECK(std::abs(sum - 1.0) <= 1e-9);
        for (const auto& pred : preds) {
            if (cloze::text::normalize_word(pred.token)) surviving += std::exp(pred.logprob);
        }
        CHECK(std::abs(dist.dropped_mass - (1.0 - surviving)) <= 1e-9);
    }
}

TEST_CASE("aggregation never raises entropy over the raw token distribution") {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> logp(-6.0, -0.2);
    const std::vector<std::string> pool = {"cat", " cat", "Cat", "dog", "Dog", "bird",
                                           "Tree", "tree", "sun", "Sun"};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<TokenPrediction> preds;
        const std::size_t count = 3 + rng() % 7;
        for (std::size_t i = 0; i < count; ++i)
            preds.push_back({pool[rng() % pool.size()], logp(rng)});
        auto dist = aggregate_tokens(preds);

        // raw per-token distribution over the same surviving mass
        std::vector<double> raw;
        double mass = 0.0;
        for (const auto& p : preds) mass += std::exp(p.logprob);
        for (const auto& p : preds) raw.push_back(std::exp(p.logprob) / mass);
        CHECK(distribution_entropy(dist) <= testutil::entropy_oracle(raw) + 1e-12);
    }
}

TEST_CASE("aggregate_samples: counts, drops and multi-word flags") {
    std::vector<std::string> samples(100, "sin");
    auto all_same = aggregate_samples(samples);
    CHECK(all_same.entropy == 0.0);
    CHECK(all_same.dist.entries.at("sin") == 1.0);
    CHECK(all_same.dropped_count == 0);

    // 96x exclusive + 4 distinct singletons, the high-certainty fixture
    std::vector<std::string> club(96, "exclusive");
    for (const char* w : {"expensive", "grand", "posh", "elegant"}) club.push_back(w);
    auto agg = aggregate_samples(club);
    const double expected =
        testutil::entropy_oracle({0.96, 0.01, 0.01, 0.01, 0.01});
    CHECK(agg.entropy == doctest::Approx(expected).epsilon(1e-12));
    CHECK(agg.entropy == doctest::Approx(0.3223).epsilon(1e-3));

    std::vector<std::string> unique_words;
    for (int i = 0; i < 100; ++i) {
        unique_words.push_back({char('a' + i % 26), char('a' + i / 26)});
    }
    auto max_spread = aggregate_samples(unique_words);
    CHECK(max_spread.entropy == std::log2(100.0));

    std::vector<std::string> with_junk = {"cat", "cat", "42!", "ice cream", "dog"};
    auto mixed = aggregate_samples(with_junk);
    CHECK(mixed.dropped_count == 1);
    CHECK(mixed.multiword_count == 1);
    CHECK(mixed.dist.entries.count("icecream") == 1);
    CHECK(mixed.dist.dropped_mass == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("aggregate_samples rejects mostly-empty batches") {
    std::vector<std::string> samples = {"ok", "!!", "??", "--"};
    CHECK_THROWS_AS(aggregate_samples(samples), TooFewValidSamplesError);
    std::vector<std::string> none = {"!!", "??"};
    CHECK_THROWS_AS(aggregate_samples(none), AllTokensFilteredError);
}

TEST_CASE("sampling entropy is bounded by log2(n_samples)") {
    std::mt19937_64 rng(3333);
    const std::vector<std::string> pool = {"a", "b", "c", "dd", "ee", "ff", "g!", "h"};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::string> samples;
        const std::size_t n = 10 + rng() % 90;
        for (std::size_t i = 0; i < n; ++i) samples.push_back(pool[rng() % pool.size()]);
        auto agg = aggregate_samples(samples);
        CHECK(agg.entropy <= std::log2(static_cast<double>(n)) + 1e-12);
    }
}

TEST_CASE("topk dump parsing and entropy") {
    std::ostringstream dump;
    dump << R"({"sentence_id":"s1","predictions":[)";
    for (int i = 0; i < 70; ++i) {
        if (i) dump << ",";
        dump << R"({"token":")" << char('a' + i % 26) << char('a' + i / 26)
             << R"(","logprob":)" << std::log(1.0 / 70.0) << "}";
    }
    dump << "]}\n";
    dump << R"({"sentence_id":"s2","predictions":[{"token":" cat","logprob":)" << std::log(0.5)
         << R"(},{"token":"Cat","logprob":)" << std::log(0.3)
         << R"(},{"token":"dog","logprob":)" << std::log(0.2) << "}]}\n";

    std::istringstream in(dump.str());
    auto records = read_topk_dump(in);
    REQUIRE(records.size() == 2);

    auto uniform = topk_dump_entropy(records[0]);
    CHECK(uniform.entropy == doctest::Approx(std::log2(70.0)).epsilon(1e-9));
    CHECK(uniform.entropy == doctest::Approx(6.129).epsilon(1e-3));

    auto catdog = topk_dump_entropy(records[1]);
    CHECK(catdog.entropy == doctest::Approx(0.7219).epsilon(1e-3));
}

TEST_CASE("dump and logit pipelines agree bit-for-bit on shared inputs") {
    std::vector<TokenPrediction> preds = {
        {" cat", std::log(0.5)}, {"Cat", std::log(0.3)}, {"dog", std::log(0.2)}};
    DumpRecord record{"x", preds};
    auto via_dump = topk_dump_entropy(record);
    auto via_logit = aggregate_tokens(preds, DistributionSource::kLogit);
    CHECK(via_dump.entropy == distribution_entropy(via_logit));
    REQUIRE(via_dump.dist.entries.size() == via_logit.entries.size());
    for (const auto& [word, p] : via_logit.entries) {
        CHECK(via_dump.dist.entries.at(word) == p);
    }
}

TEST_CASE("malformed dump lines carry their line number") {
    std::istringstream bad("{\"sentence_id\":\"s1\",\"predictions\":[{\"token\":\"a\",\"logprob\":-1}]}\n{truncated\n");
    try {
        read_topk_dump(bad);
        FAIL("expected MalformedDumpError");
    } catch (const MalformedDumpError& e) {
        CHECK(e.line_no() == 2);
    }

    std::istringstream missing("{\"predictions\":[]}\n");
    CHECK_THROWS_AS(read_topk_dump(missing), MalformedDumpError);

    std::istringstream empty_preds("{\"sentence_id\":\"s\",\"predictions\":[]}\n");
    CHECK_THROWS_AS(read_topk_dump(empty_preds), MalformedDumpError);
}
