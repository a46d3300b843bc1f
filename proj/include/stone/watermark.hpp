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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stone/partition.hpp"
#include "stone/provider.hpp"
#include "stone/rng.hpp"
#include "stone/syntax_profile.hpp"
#include "stone/types.hpp"

namespace stone {

/// When a generation step gets the green boost:
///   Always           — every step (plain green/red watermarking),
///   NonSyntax        — only when the candidate token is outside S,
///   EntropyThreshold — only when step entropy exceeds the threshold.
enum class Gate {
    Always,
    NonSyntax,
    EntropyThreshold,
};

std::string_view gate_name(Gate gate);
Gate gate_from_name(std::string_view name);

struct WatermarkParams {
    double gamma = 0.5;            // green-list fraction of the vocabulary
    double delta = 1.0;            // additive logit boost for green tokens
    SeedKey key;                   // shared inserter/detector secret
    Gate gate = Gate::NonSyntax;
    double entropy_threshold = 0.9;  // nats; EntropyThreshold gate only
    std::size_t top_k = 50;
    double temperature = 1.0;
    std::size_t max_tokens = 256;
    std::vector<TokenId> stop_tokens;  // generation stops after emitting one

    /// Keep full step distributions in the log (tests and diagnostics).
    bool record_distributions = false;

    void validate(std::size_t vocab_size) const;
};

struct StepLog {
    TokenId candidate = 0;    // first draw, taken from the base distribution
    bool gated = false;       // did this step receive the green boost
    std::optional<std::uint64_t> partition_seed;  // present iff gated
    TokenId token = 0;        // final draw
    double base_prob = 0.0;   // base probability of the final token
    double final_prob = 0.0;  // post-boost probability of the final token
    std::optional<ProbVector> base_dist;   // only when record_distributions
    std::optional<ProbVector> final_dist;  // only when record_distributions
};

struct GenerationRecord {
    TokenSequence output;       // generated tokens (prompt excluded)
    std::vector<StepLog> steps;
    bool complete = true;       // false when the provider failed mid-run
    std::string error;
};

/// One generation step: temperature, top-k and softmax give the base
/// distribution; a candidate is drawn; if the gate fires, the vocabulary is
/// split from a hash of the last context token and green logits get +delta
/// before the final draw. Ungated steps keep the base distribution as-is.
/// The context must be non-empty (the partition seed needs a predecessor).
StepLog step(LogitProvider& provider, const TokenSequence& context, const WatermarkParams& params,
             const VocabularyProfile& profile, SplitMix64& rng);

/// Runs `step` until max_tokens or a stop token. Replayable from
/// (rng seed, params, prompt) with a deterministic provider. A provider
/// failure ends the run early with complete=false on the partial record.
GenerationRecord generate(LogitProvider& provider, const TokenSequence& prompt,
                          const WatermarkParams& params, const VocabularyProfile& profile,
                          SplitMix64& rng);

/// Diagnostic: total green probability mass before and after applying the
/// boost to `base`. after >= before whenever delta > 0.
std::pair<double, double> green_mass_shift(const ProbVector& base,
                                           const VocabPartition& partition, double delta);

/// Dilution diagnostic: gating is decided on the candidate, so a boosted
/// draw can still land on a syntax token the detector will skip. Counts
/// such steps per record.
struct DilutionStats {
    std::size_t steps = 0;
    std::size_t gated = 0;
    std::size_t gated_syntax_final = 0;  // boosted step, final token in S

    double gated_fraction() const;
    double dilution_fraction() const;  // among gated steps
};

DilutionStats dilution_stats(const GenerationRecord& record, const VocabularyProfile& profile);

}  // namespace stone
