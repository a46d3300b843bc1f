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

#include "stone/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stone {

void validate_logits(const LogitVector& logits) {
    for (double v : logits) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("logit vector contains a non-finite entry");
        }
    }
}

void validate_probs(const ProbVector& probs) {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("probability entry outside [0, 1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTolerance) {
        throw std::invalid_argument("probability vector does not sum to 1");
    }
}

void validate_sequence(const TokenSequence& seq, std::size_t vocab_size) {
    for (TokenId id : seq.tokens) {
        if (id >= vocab_size) {
            throw std::invalid_argument("token id " + std::to_string(id) +
                                        " out of range for vocabulary of size " +
                                        std::to_string(vocab_size));
        }
    }
}

ProbVector softmax(const LogitVector& logits) {
    if (logits.empty()) {
        throw std::invalid_argument("softmax of an empty logit vector");
    }
    validate_logits(logits);
    const double m = *std::max_element(logits.begin(), logits.end());
    ProbVector probs(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - m);
        sum += probs[i];
    }
    for (double& p : probs) {
        p /= sum;
    }
    return probs;
}

LogitVector apply_temperature(const LogitVector& logits, double temperature) {
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("temperature must be positive");
    }
    LogitVector scaled(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        scaled[i] = logits[i] / temperature;
    }
    return scaled;
}

ProbVector top_k_restrict(const ProbVector& probs, std::size_t k) {
    if (k == 0 || k > probs.size()) {
        throw std::invalid_argument("top-k requires 1 <= k <= |V|");
    }
    if (k == probs.size()) {
        return probs;
    }
    std::vector<TokenId> order(probs.size());
    std::iota(order.begin(), order.end(), TokenId{0});
    // Rank by probability, lower id first among equals.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                      order.end(), [&probs](TokenId a, TokenId b) {
                          if (probs[a] != probs[b]) return probs[a] > probs[b];
                          return a < b;
                      });
    ProbVector out(probs.size(), 0.0);
    double kept = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        kept += probs[order[r]];
    }
    if (kept <= 0.0) {
        throw std::invalid_argument("top-k support carries zero mass");
    }
    for (std::size_t r = 0; r < k; ++r) {
        out[order[r]] = probs[order[r]] / kept;
    }
    return out;
}

TokenId sample(const ProbVector& probs, SplitMix64& rng) {
    if (probs.empty()) {
        throw std::invalid_argument("sampling from an empty vector");
    }
    double total = 0.0;
    for (double p : probs) total += p;
    if (total <= 0.0) {
        throw std::invalid_argument("sampling from an all-zero vector");
    }
    const double target = rng.next_double() * total;
    double acc = 0.0;
    TokenId last_nonzero = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_nonzero = static_cast<TokenId>(i);
        if (target < acc) {
            return last_nonzero;
        }
    }
    // Rounding pushed the target past the final partial sum.
    return last_nonzero;
}

}  // namespace stone
