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

#include "stone/rng.hpp"
#include "stone/types.hpp"

namespace stone {

/// Numerically stable softmax (max-subtracted). Rejects non-finite input.
ProbVector softmax(const LogitVector& logits);

/// Divides every logit by `temperature` (> 0). Applied before top-k.
LogitVector apply_temperature(const LogitVector& logits, double temperature);

/// Zeroes all mass outside the k highest-probability entries and
/// renormalizes the survivors. Ties at the k-th rank break toward the lower
/// TokenId, so the result is deterministic across implementations.
/// Rejects k == 0 and k > |V|.
ProbVector top_k_restrict(const ProbVector& probs, std::size_t k);

/// Inverse-CDF draw from `probs` using the shared splitmix64 stream. The
/// returned id always has nonzero probability. Rejects all-zero vectors.
TokenId sample(const ProbVector& probs, SplitMix64& rng);

}  // namespace stone
