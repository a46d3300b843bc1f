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

#include "stone/partition.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "stone/rng.hpp"

namespace stone {

std::uint64_t seed_from_token(TokenId prev, SeedKey key) {
    return mix64(static_cast<std::uint64_t>(prev) ^ key.value);
}

VocabPartition::VocabPartition(std::vector<std::uint8_t> green_mask)
    : green_mask_(std::move(green_mask)) {
    for (std::uint8_t g : green_mask_) {
        if (g) ++green_count_;
    }
}

bool VocabPartition::is_green(TokenId id) const {
    if (id >= green_mask_.size()) {
        throw std::invalid_argument("token id out of range for partition: " + std::to_string(id));
    }
    return green_mask_[id] != 0;
}

std::vector<TokenId> VocabPartition::green_ids() const {
    std::vector<TokenId> ids;
    ids.reserve(green_count_);
    for (std::size_t i = 0; i < green_mask_.size(); ++i) {
        if (green_mask_[i]) ids.push_back(static_cast<TokenId>(i));
    }
    return ids;
}

VocabPartition split(std::size_t vocab_size, double gamma, std::uint64_t seed) {
    if (vocab_size < 2) {
        throw std::invalid_argument("cannot split a vocabulary of size < 2");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in (0, 1)");
    }
    const auto green_count =
        static_cast<std::size_t>(std::floor(gamma * static_cast<double>(vocab_size) + 0.5));

    std::vector<TokenId> order(vocab_size);
    std::iota(order.begin(), order.end(), TokenId{0});
    SplitMix64 rng(seed);
    for (std::size_t i = vocab_size - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.next_below(i + 1));
        std::swap(order[i], order[j]);
    }

    std::vector<std::uint8_t> mask(vocab_size, 0);
    for (std::size_t r = 0; r < green_count; ++r) {
        mask[order[r]] = 1;
    }
    return VocabPartition(std::move(mask));
}

bool is_green(const VocabPartition& partition, TokenId token) {
    return partition.is_green(token);
}

}  // namespace stone
