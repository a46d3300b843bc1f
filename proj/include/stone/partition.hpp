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

#include <cstdint>
#include <vector>

#include "stone/types.hpp"

namespace stone {

/// Shared secret between inserter and detector. Fixed for a watermarking
/// run; supplied via config, never derived from the clock.
struct SeedKey {
    std::uint64_t value = 0;
};

/// Partition seed for the step following `prev`: mix64(prev ^ key). The
/// finalizer is pinned in rng.hpp so both sides reproduce bit-exact seeds.
std::uint64_t seed_from_token(TokenId prev, SeedKey key);

/// A green/red split of the full vocabulary. Green and red are disjoint,
/// their union is [0, |V|), and |green| = round(gamma * |V|).
class VocabPartition {
  public:
    explicit VocabPartition(std::vector<std::uint8_t> green_mask);

    std::size_t vocab_size() const { return green_mask_.size(); }
    std::size_t green_size() const { return green_count_; }
    std::size_t red_size() const { return green_mask_.size() - green_count_; }
    bool is_green(TokenId id) const;
    const std::vector<std::uint8_t>& green_mask() const { return green_mask_; }
    std::vector<TokenId> green_ids() const;

  private:
    std::vector<std::uint8_t> green_mask_;
    std::size_t green_count_ = 0;
};

/// Seed-keyed pseudorandom split: green is the first round(gamma * |V|)
/// elements of a Fisher-Yates shuffle of [0, |V|) driven by the shared
/// splitmix64 stream. Same seed, same partition. gamma must lie in (0, 1);
/// round is half-up.
VocabPartition split(std::size_t vocab_size, double gamma, std::uint64_t seed);

/// True iff `token` landed on the green list.
bool is_green(const VocabPartition& partition, TokenId token);

}  // namespace stone
