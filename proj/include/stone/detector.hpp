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
#include "stone/syntax_profile.hpp"
#include "stone/tokenizer.hpp"
#include "stone/types.hpp"

namespace stone {

inline constexpr double kDefaultZThreshold = 4.0;

struct TokenTrace {
    TokenId token;
    bool counted;
    bool green;
};

struct DetectionReport {
    std::size_t counted = 0;  // N^E: tokens the statistic runs over
    std::size_t green = 0;    // N^E_G: green tokens among them
    std::optional<double> z;  // absent when counted == 0
    bool watermarked = false;
    bool undetectable = false;  // counted == 0: no verdict possible
    double gamma = 0.0;
    double z_threshold = 0.0;
    /// Position 0 is never counted: its partition was seeded by the prompt's
    /// last token, which the detector does not have.
    bool first_token_skipped = true;
    std::string input_kind;  // "tokens" or "text"
    std::vector<TokenTrace> trace;
};

/// Serializes a report for the CLI / report files.
std::string report_to_json(const DetectionReport& report, bool include_trace);

/// Model-free detection: walks the sequence, counts tokens outside S,
/// recomputes each green list from a hash of the preceding token, and forms
/// z = (N^E_G - gamma N^E) / sqrt(gamma (1-gamma) N^E). Never calls a
/// provider. counted == 0 yields an "undetectable" report, not z = 0.
DetectionReport detect_stone(const TokenSequence& seq, const VocabularyProfile& profile,
                             double gamma, SeedKey key,
                             double z_threshold = kDefaultZThreshold);

/// Baseline variant with the syntax filter removed: every position after the
/// first is counted.
DetectionReport detect_full(const TokenSequence& seq, std::size_t vocab_size, double gamma,
                            SeedKey key, double z_threshold = kDefaultZThreshold);

/// Tokenizes raw code and delegates to detect_stone. The tokenizer must
/// share the generation-side vocabulary; a size mismatch is an error.
DetectionReport detect_from_text(const std::string& code, const Tokenizer& tokenizer,
                                 const VocabularyProfile& profile, double gamma, SeedKey key,
                                 double z_threshold = kDefaultZThreshold);

}  // namespace stone
