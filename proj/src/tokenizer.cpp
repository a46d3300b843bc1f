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

#include "stone/tokenizer.hpp"

namespace stone {

Tokenizer::Tokenizer(std::vector<std::string> decode_table) : decode_(std::move(decode_table)) {
    if (decode_.empty()) {
        throw std::invalid_argument("tokenizer decode table is empty");
    }
    for (std::size_t id = 0; id < decode_.size(); ++id) {
        const std::string& s = decode_[id];
        if (s.empty()) continue;  // special tokens never match text
        ids_.emplace(s, static_cast<TokenId>(id));  // first id wins on duplicates
        max_len_ = std::max(max_len_, s.size());
    }
    if (ids_.empty()) {
        throw std::invalid_argument("tokenizer has no non-empty vocabulary strings");
    }
}

TokenSequence Tokenizer::encode(std::string_view text) const {
    TokenSequence seq;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t limit = std::min(max_len_, text.size() - pos);
        bool matched = false;
        for (std::size_t len = limit; len >= 1; --len) {
            auto it = ids_.find(std::string(text.substr(pos, len)));
            if (it != ids_.end()) {
                seq.push_back(it->second);
                pos += len;
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw TokenizeError("no vocabulary token matches text at byte offset " +
                                    std::to_string(pos),
                                pos);
        }
    }
    seq.source_text = std::string(text);
    return seq;
}

std::string Tokenizer::decode(const TokenSequence& seq) const {
    std::string out;
    for (TokenId id : seq.tokens) {
        if (id >= decode_.size()) {
            throw std::invalid_argument("token id out of range in decode: " + std::to_string(id));
        }
        out += decode_[id];
    }
    return out;
}

}  // namespace stone
