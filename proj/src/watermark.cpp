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

#include "stone/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stone/metrics.hpp"
#include "stone/sampling.hpp"

namespace stone {

std::string_view gate_name(Gate gate) {
    switch (gate) {
        case Gate::Always: return "always";
        case Gate::NonSyntax: return "non-syntax";
        case Gate::EntropyThreshold: return "entropy-threshold";
    }
    throw std::logic_error("unknown gate");
}

Gate gate_from_name(std::string_view name) {
    if (name == "always") return Gate::Always;
    if (name == "non-syntax") return Gate::NonSyntax;
    if (name == "entropy-threshold") return Gate::EntropyThreshold;
    throw std::invalid_argument("unknown gate name: " + std::string(name));
}

void WatermarkParams::validate(std::size_t vocab_size) const {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in (0, 1)");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("delta must be finite and >= 0");
    }
    if (top_k == 0 || top_k > vocab_size) {
        throw std::invalid_argument("top_k must lie in [1, |V|]");
    }
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("temperature must be positive");
    }
    for (TokenId id : stop_tokens) {
        if (id >= vocab_size) {
            throw std::invalid_argument("stop token id out of range");
        }
    }
}

namespace {

// p'_i over the base support: log p_i + delta for green tokens, then a
// stable softmax. Tokens cut by top-k stay at zero.
ProbVector boost_green(const ProbVector& base, const VocabPartition& partition, double delta) {
    std::vector<double> log_scores(base.size(), -std::numeric_limits<double>::infinity());
    double max_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i] <= 0.0) continue;
        double s = std::log(base[i]);
        if (partition.is_green(static_cast<TokenId>(i))) s += delta;
        log_scores[i] = s;
        max_score = std::max(max_score, s);
    }
    ProbVector out(base.size(), 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i] <= 0.0) continue;
        out[i] = std::exp(log_scores[i] - max_score);
        sum += out[i];
    }
    for (double& p : out) p /= sum;
    return out;
}

}  // namespace

StepLog step(LogitProvider& provider, const TokenSequence& context, const WatermarkParams& params,
             const VocabularyProfile& profile, SplitMix64& rng) {
    if (context.empty()) {
        throw std::invalid_argument(
            "generation context is empty; a non-empty prompt is required to seed partitions");
    }
    if (provider.vocab_size() != profile.vocab_size()) {
        throw std::invalid_argument("provider and profile disagree on vocabulary size");
    }
    params.validate(profile.vocab_size());

    const LogitVector logits = provider.logits(context);
    if (logits.size() != profile.vocab_size()) {
        throw std::runtime_error("provider returned a logit vector of the wrong length");
    }
    const ProbVector base = top_k_restrict(softmax(apply_temperature(logits, params.temperature)),
                                           params.top_k);

    StepLog log;
    log.candidate = sample(base, rng);

    bool fire = false;
    switch (params.gate) {
        case Gate::Always:
            fire = true;
            break;
        case Gate::NonSyntax:
            fire = !profile.in_syntax(log.candidate);
            break;
        case Gate::EntropyThreshold:
            fire = entropy(base) > params.entropy_threshold;
            break;
    }

    ProbVector adjusted;
    if (fire) {
        log.gated = true;
        const std::uint64_t seed = seed_from_token(context.back(), params.key);
        log.partition_seed = seed;
        if (params.delta == 0.0) {
            adjusted = base;  // e^0 boost is exact identity; keep the bits too
        } else {
            const VocabPartition partition = split(profile.vocab_size(), params.gamma, seed);
            adjusted = boost_green(base, partition, params.delta);
        }
    } else {
        adjusted = base;
    }

    log.token = sample(adjusted, rng);
    log.base_prob = base[log.token];
    log.final_prob = adjusted[log.token];
    if (params.record_distributions) {
        log.base_dist = base;
        log.final_dist = adjusted;
    }
    return log;
}

GenerationRecord generate(LogitProvider& provider, const TokenSequence& prompt,
                          const WatermarkParams& params, const VocabularyProfile& profile,
                          SplitMix64& rng) {
    if (prompt.empty()) {
        throw std::invalid_argument("prompt must be non-empty");
    }
    validate_sequence(prompt, profile.vocab_size());
    if (provider.vocab_size() != profile.vocab_size()) {
        throw std::invalid_argument("provider and profile disagree on vocabulary size");
    }
    // Bad configuration propagates; only mid-run provider failures are
    // folded into a partial record below.
    params.validate(profile.vocab_size());

    GenerationRecord record;
    TokenSequence context = prompt;
    for (std::size_t t = 0; t < params.max_tokens; ++t) {
        StepLog entry;
        try {
            entry = step(provider, context, params, profile, rng);
        } catch (const std::exception& e) {
            record.complete = false;
            record.error = e.what();
            return record;
        }
        record.output.push_back(entry.token);
        context.push_back(entry.token);
        record.steps.push_back(std::move(entry));
        if (std::find(params.stop_tokens.begin(), params.stop_tokens.end(),
                      record.output.tokens.back()) != params.stop_tokens.end()) {
            break;
        }
    }
    return record;
}

double DilutionStats::gated_fraction() const {
    return steps == 0 ? 0.0 : static_cast<double>(gated) / static_cast<double>(steps);
}

double DilutionStats::dilution_fraction() const {
    return gated == 0 ? 0.0
                      : static_cast<double>(gated_syntax_final) / static_cast<double>(gated);
}

DilutionStats dilution_stats(const GenerationRecord& record, const VocabularyProfile& profile) {
    DilutionStats stats;
    stats.steps = record.steps.size();
    for (const StepLog& log : record.steps) {
        if (!log.gated) continue;
        ++stats.gated;
        if (profile.in_syntax(log.token)) ++stats.gated_syntax_final;
    }
    return stats;
}

std::pair<double, double> green_mass_shift(const ProbVector& base, const VocabPartition& partition,
                                           double delta) {
    if (base.size() != partition.vocab_size()) {
        throw std::invalid_argument("distribution and partition sizes differ");
    }
    double before = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (partition.is_green(static_cast<TokenId>(i))) before += base[i];
    }
    const ProbVector boosted = boost_green(base, partition, delta);
    double after = 0.0;
    for (std::size_t i = 0; i < boosted.size(); ++i) {
        if (partition.is_green(static_cast<TokenId>(i))) after += boosted[i];
    }
    return {before, after};
}

}  // namespace stone
