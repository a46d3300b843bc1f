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

#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stone/types.hpp"

namespace stone {

class TokenizeError : public std::runtime_error {
  public:
    TokenizeError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

/// Greedy longest-match tokenizer over a decode table. Encoding picks the
/// longest vocabulary string matching at each position (lowest id among
/// duplicates), so encode∘decode is the identity on any encodable text.
class Tokenizer {
  public:
    explicit Tokenizer(std::vector<std::string> decode_table);

    std::size_t vocab_size() const { return decode_.size(); }

    /// Throws TokenizeError (with the byte offset) if no vocabulary string
    /// matches at some position.
    TokenSequence encode(std::string_view text) const;

    std::string decode(const TokenSequence& seq) const;

  private:
    std::vector<std::string> decode_;
    std::unordered_map<std::string, TokenId> ids_;
    std::size_t max_len_ = 0;
};

}  // namespace stone
