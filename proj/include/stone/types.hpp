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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stone {

/// Index into a vocabulary of size |V|. Valid ids are < |V| of the owning
/// vocabulary; every API taking a TokenId documents which vocabulary it
/// belongs to.
using TokenId = std::uint32_t;

/// Raw model scores, dense over the vocabulary: values[id] scores token id.
using LogitVector = std::vector<double>;

/// Post-softmax probabilities, dense over the vocabulary. A valid ProbVector
/// has entries in [0,1] summing to 1 within kProbTolerance.
using ProbVector = std::vector<double>;

inline constexpr double kProbTolerance = 1e-9;

/// An ordered run of token ids, optionally paired with the text it decodes
/// to. Immutable value type in spirit; treat as read-only once built.
struct TokenSequence {
    std::vector<TokenId> tokens;
    std::optional<std::string> source_text;

    TokenSequence() = default;
    explicit TokenSequence(std::vector<TokenId> ids) : tokens(std::move(ids)) {}

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    TokenId back() const { return tokens.back(); }
    void push_back(TokenId id) { tokens.push_back(id); }
};

/// Throws std::invalid_argument if any entry is NaN or infinite.
void validate_logits(const LogitVector& logits);

/// Throws std::invalid_argument unless entries lie in [0,1] and sum to 1
/// within kProbTolerance.
void validate_probs(const ProbVector& probs);

/// Throws std::invalid_argument if any id is >= vocab_size.
void validate_sequence(const TokenSequence& seq, std::size_t vocab_size);

}  // namespace stone
