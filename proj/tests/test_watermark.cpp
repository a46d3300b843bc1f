// Copyright 2026 The Stone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "stone/demo.hpp"
#include "stone/sampling.hpp"
#include "stone/watermark.hpp"

using namespace stone;

namespace {

// Two-token worlds keep the boosted softmax checkable by hand.
VocabularyProfile two_token_profile() {
    return VocabularyProfile(LanguageProfile::builtin("python"), {"aa", "bb"});
}

WatermarkParams base_params(std::size_t vocab_size) {
    WatermarkParams params;
    params.gamma = 0.5;
    params.delta = 1.0;
    params.key = SeedKey{0xFEED};
    params.gate = Gate::NonSyntax;
    params.top_k = vocab_size;
    params.max_tokens = 16;
    return params;
}

// A provider that fails after a fixed number of calls.
class FlakyProvider : public LogitProvider {
  public:
    FlakyProvider(std::size_t vocab, std::size_t good_calls)
        : vocab_(vocab), remaining_(good_calls) {}
    std::size_t vocab_size() const override { return vocab_; }

  protected:
    LogitVector compute_logits(const TokenSequence&) override {
        if (remaining_ == 0) throw std::runtime_error("provider fell over");
        --remaining_;
        return LogitVector(vocab_, 0.0);
    }

  private:
    std::size_t vocab_;
    std::size_t remaining_;
};

}  // namespace

TEST_CASE("params validation catches bad knobs") {
    WatermarkParams params = base_params(4);
    params.gamma = 1.0;
    CHECK_THROWS_AS(params.validate(4), std::invalid_argument);
    params = base_params(4);
    params.top_k = 5;
    CHECK_THROWS_AS(params.validate(4), std::invalid_argument);
    params = base_params(4);
    params.temperature = 0.0;
    CHECK_THROWS_AS(params.validate(4), std::invalid_argument);
    params = base_params(4);
    params.delta = -1.0;
    CHECK_THROWS_AS(params.validate(4), std::invalid_argument);
}

TEST_CASE("a syntax candidate under the non-syntax gate keeps the base distribution") {
    // Vocabulary where token 0 is syntax and dominates every row, so the
    // candidate lands in S almost always.
    const VocabularyProfile profile(LanguageProfile::builtin("python"), {"+", "aa", "bb", "cc"});
    std::vector<LogitVector> rows(5, LogitVector{6.0, 0.0, 0.0, 0.0});
    ToyModel model(ToyModelSpec::tabular(rows));
    WatermarkParams params = base_params(4);
    params.record_distributions = true;
    params.delta = 3.0;

    SplitMix64 rng(42);
    TokenSequence ctx({1});
    std::size_t syntax_candidates = 0;
    for (int i = 0; i < 200; ++i) {
        const StepLog log = step(model, ctx, params, profile, rng);
        if (profile.in_syntax(log.candidate)) {
            ++syntax_candidates;
            CHECK(!log.gated);
            CHECK(!log.partition_seed.has_value());
            // bit-identical, not merely close
            CHECK(*log.base_dist == *log.final_dist);
            CHECK(log.base_prob == log.final_prob);
        } else {
            CHECK(log.gated);
            CHECK(log.partition_seed.has_value());
        }
    }
    CHECK(syntax_candidates > 150);
}

TEST_CASE("delta zero leaves the distribution untouched even when gated") {
    const VocabularyProfile profile = two_token_profile();
    ToyModel model(ToyModelSpec::flat(2));
    WatermarkParams params = base_params(2);
    params.delta = 0.0;
    params.record_distributions = true;
    SplitMix64 rng(7);
    TokenSequence ctx({0});
    const StepLog log = step(model, ctx, params, profile, rng);
    CHECK(log.gated);  // both tokens are Etc, so the gate fired
    CHECK(*log.base_dist == *log.final_dist);
}

TEST_CASE("boosted two-token distribution matches the hand softmax") {
    // base (0.5, 0.5); green token boosted by ln 3 => (0.75, 0.25).
    const VocabularyProfile profile = two_token_profile();
    ToyModel model(ToyModelSpec::flat(2));
    WatermarkParams params = base_params(2);
    params.delta = std::log(3.0);
    params.record_distributions = true;

    // Find a seeding token whose partition puts token 0 on the green list.
    TokenId prev = 0;
    for (TokenId t = 0; t < 2; ++t) {
        if (split(2, params.gamma, seed_from_token(t, params.key)).is_green(0)) prev = t;
    }
    const bool zero_is_green =
        split(2, params.gamma, seed_from_token(prev, params.key)).is_green(0);

    SplitMix64 rng(3);
    TokenSequence ctx({prev});
    const StepLog log = step(model, ctx, params, profile, rng);
    REQUIRE(log.gated);
    const double expect0 = zero_is_green ? 0.75 : 0.25;
    CHECK((*log.final_dist)[0] == doctest::Approx(expect0).epsilon(1e-12));
    CHECK((*log.final_dist)[1] == doctest::Approx(1.0 - expect0).epsilon(1e-12));
}

TEST_CASE("step rejects an empty context") {
    const VocabularyProfile profile = two_token_profile();
    ToyModel model(ToyModelSpec::flat(2));
    SplitMix64 rng(1);
    CHECK_THROWS_AS(step(model, TokenSequence{}, base_params(2), profile, rng),
                    std::invalid_argument);
}

TEST_CASE("monotone boost: green up, red down") {
    SplitMix64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        LogitVector logits(32);
        for (double& v : logits) v = 4.0 * rng.next_double();
        const ProbVector base = softmax(logits);
        const VocabPartition partition = split(32, 0.4, rng.next());
        const double delta = 0.1 + 3.0 * rng.next_double();

        // Reconstruct the boosted vector through the public diagnostic.
        const auto [before, after] = green_mass_shift(base, partition, delta);
        CHECK(after >= before - 1e-12);
    }
}

TEST_CASE("green_mass_shift frozen cases") {
    {
        // all-green partition: mass stays 1
        const VocabPartition p(std::vector<std::uint8_t>{1, 1, 1});
        const auto [before, after] = green_mass_shift({0.2, 0.3, 0.5}, p, 2.0);
        CHECK(before == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(after == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        // uniform base, gamma = 0.5, delta = 0
        const VocabPartition p(std::vector<std::uint8_t>{1, 0, 1, 0});
        const auto [before, after] = green_mass_shift({0.25, 0.25, 0.25, 0.25}, p, 0.0);
        CHECK(before == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(after == doctest::Approx(0.5).epsilon(1e-12));
    }
    {
        // uniform base over 4 tokens, 2 green, delta = ln 3 => 0.75
        const VocabPartition p(std::vector<std::uint8_t>{1, 1, 0, 0});
        const auto [before, after] = green_mass_shift({0.25, 0.25, 0.25, 0.25}, p, std::log(3.0));
        CHECK(before == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(after == doctest::Approx(0.75).epsilon(1e-12));
    }
}

TEST_CASE("generate honors max_tokens and determinism") {
    const VocabularyProfile profile = demo_vocabulary();
    auto model = demo_model(profile, 9);
    WatermarkParams params = base_params(profile.vocab_size());
    params.top_k = 50;
    params.max_tokens = 0;

    SplitMix64 rng(5);
    TokenSequence prompt({1, 2, 3});
    CHECK(generate(*model, prompt, params, profile, rng).output.empty());

    params.max_tokens = 40;
    SplitMix64 rng_a(5), rng_b(5);
    const GenerationRecord a = generate(*model, prompt, params, profile, rng_a);
    const GenerationRecord b = generate(*model, prompt, params, profile, rng_b);
    REQUIRE(a.output.tokens == b.output.tokens);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].candidate == b.steps[i].candidate);
        CHECK(a.steps[i].gated == b.steps[i].gated);
        CHECK(a.steps[i].partition_seed == b.steps[i].partition_seed);
        CHECK(a.steps[i].token == b.steps[i].token);
    }
    CHECK(a.output.size() == 40);
    CHECK(a.steps.size() == a.output.size());
    CHECK(a.complete);
    // one provider call per generation step, across both runs
    CHECK(model->call_count() == 80);
}

TEST_CASE("generate rejects an empty prompt and stops on stop tokens") {
    const VocabularyProfile profile = two_token_profile();
    ToyModel model(ToyModelSpec::flat(2));
    WatermarkParams params = base_params(2);
    SplitMix64 rng(8);
    CHECK_THROWS_AS(generate(model, TokenSequence{}, params, profile, rng),
                    std::invalid_argument);

    params.stop_tokens = {1};
    params.max_tokens = 1000;
    TokenSequence prompt({0});
    const GenerationRecord record = generate(model, prompt, params, profile, rng);
    CHECK(record.output.size() < 1000);
    CHECK(record.output.tokens.back() == 1);
}

TEST_CASE("a provider failure yields a partial record flagged incomplete") {
    const VocabularyProfile profile = two_token_profile();
    FlakyProvider flaky(2, 5);
    WatermarkParams params = base_params(2);
    params.max_tokens = 50;
    SplitMix64 rng(4);
    TokenSequence prompt({0});
    const GenerationRecord record = generate(flaky, prompt, params, profile, rng);
    CHECK(!record.complete);
    CHECK(record.output.size() == 5);
    CHECK(record.steps.size() == 5);
    CHECK(!record.error.empty());
}

TEST_CASE("gate=always matches the gated branch on every step") {
    const VocabularyProfile profile = demo_vocabulary();
    auto model = demo_model(profile, 21);
    WatermarkParams params = base_params(profile.vocab_size());
    params.gate = Gate::Always;
    params.top_k = 50;
    params.max_tokens = 120;
    SplitMix64 rng(6);
    TokenSequence prompt({10, 11});
    const GenerationRecord record = generate(*model, prompt, params, profile, rng);
    for (const StepLog& log : record.steps) {
        CHECK(log.gated);
        CHECK(log.partition_seed.has_value());
    }
}

TEST_CASE("entropy-threshold gate fires exactly above the threshold") {
    const VocabularyProfile profile = demo_vocabulary();
    auto model = demo_model(profile, 33, /*syntax_burst=*/0.5);
    WatermarkParams params = base_params(profile.vocab_size());
    params.gate = Gate::EntropyThreshold;
    params.entropy_threshold = 2.0;
    params.top_k = 50;
    params.max_tokens = 200;
    params.record_distributions = true;
    SplitMix64 rng(14);
    TokenSequence prompt({40});
    const GenerationRecord record = generate(*model, prompt, params, profile, rng);
    std::size_t fired = 0;
    for (const StepLog& log : record.steps) {
        const double h = testing::oracle_entropy(*log.base_dist);
        CHECK(log.gated == (h > params.entropy_threshold));
        fired += log.gated ? 1 : 0;
    }
    // The bursty toy model must exercise both branches.
    CHECK(fired > 0);
    CHECK(fired < record.steps.size());
}

TEST_CASE("saturating delta pushes nearly all mass onto the green list") {
    // All-Etc vocabulary: the non-syntax gate fires on every step.
    std::vector<std::string> table;
    for (int i = 0; i < 64; ++i) table.push_back("t" + std::to_string(i));
    const VocabularyProfile profile(LanguageProfile::builtin("python"), table);
    REQUIRE(profile.syntax_set().empty());

    ToyModel model(ToyModelSpec::seeded(64, 3, 1.0, 0.0, {}));
    WatermarkParams params = base_params(64);
    params.delta = 10.0;
    params.max_tokens = 500;
    SplitMix64 rng(17);
    TokenSequence prompt({0});
    const GenerationRecord record = generate(model, prompt, params, profile, rng);
    REQUIRE(record.output.size() == 500);

    std::size_t green = 0;
    for (const StepLog& log : record.steps) {
        REQUIRE(log.gated);
        const VocabPartition p = split(64, params.gamma, *log.partition_seed);
        green += p.is_green(log.token) ? 1 : 0;
    }
    const double fraction = static_cast<double>(green) / 500.0;
    CHECK(fraction >= 0.95);
}

TEST_CASE("dilution stats count boosted draws that landed on syntax") {
    const VocabularyProfile profile = demo_vocabulary();
    auto model = demo_model(profile, 61);
    WatermarkParams params = base_params(profile.vocab_size());
    params.top_k = 50;
    params.max_tokens = 300;
    SplitMix64 rng(19);
    TokenSequence prompt({30});
    const GenerationRecord record = generate(*model, prompt, params, profile, rng);
    const DilutionStats stats = dilution_stats(record, profile);
    CHECK(stats.steps == record.output.size());
    CHECK(stats.gated <= stats.steps);
    CHECK(stats.gated_syntax_final <= stats.gated);

    std::size_t recount = 0;
    for (const StepLog& log : record.steps) {
        if (log.gated && profile.in_syntax(log.token)) ++recount;
    }
    CHECK(stats.gated_syntax_final == recount);
    CHECK(stats.dilution_fraction() <= 1.0);
}

TEST_CASE("realized green fraction under delta=0 stays at gamma") {
    const VocabularyProfile profile = demo_vocabulary();
    auto model = demo_model(profile, 51);
    WatermarkParams params = base_params(profile.vocab_size());
    params.delta = 0.0;
    params.top_k = 50;
    params.max_tokens = 300;

    std::size_t gated = 0, green = 0;
    for (int run = 0; run < 40; ++run) {
        SplitMix64 rng(mix64(1000 + run));
        TokenSequence prompt({5});
        const GenerationRecord record = generate(*model, prompt, params, profile, rng);
        for (const StepLog& log : record.steps) {
            if (!log.gated) continue;
            ++gated;
            const VocabPartition p =
                split(profile.vocab_size(), params.gamma, *log.partition_seed);
            green += p.is_green(log.token) ? 1 : 0;
        }
    }
    const double freq = static_cast<double>(green) / static_cast<double>(gated);
    const double sigma = std::sqrt(0.25 / static_cast<double>(gated));
    CHECK(std::abs(freq - params.gamma) <= 4.0 * sigma);
}
