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

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "stone/types.hpp"

namespace stone {

/// The six token categories. The first five are the syntax element set S;
/// Etc is everything else and is the only place watermark signal lives.
enum class TokenCategory : std::uint8_t {
    Keyword = 0,
    Whitespace = 1,
    Type = 2,
    Delimiter = 3,
    Operator = 4,
    Etc = 5,
};

inline constexpr std::size_t kNumCategories = 6;

std::string_view category_name(TokenCategory cat);
TokenCategory category_from_name(std::string_view name);

/// Per-language lexeme tables: keywords, whitespace, types, delimiters and
/// operators. Immutable once constructed; classification indices are built
/// eagerly. Lists must be non-empty and mutually disjoint.
class LanguageProfile {
  public:
    struct Lists {
        std::string language;
        std::vector<std::string> keywords;
        std::vector<std::string> whitespace;
        std::vector<std::string> types;
        std::vector<std::string> delimiters;
        std::vector<std::string> operators;
    };

    explicit LanguageProfile(Lists lists);

    /// The shipped profiles: "python", "cpp", "java".
    static const LanguageProfile& builtin(std::string_view language);
    static std::vector<std::string> builtin_languages();

    /// Loads a profile from a JSON file shaped like the shipped
    /// data/profiles/*.json, so new languages work without a rebuild.
    static LanguageProfile from_json_file(const std::filesystem::path& path);

    const std::string& language() const { return lists_.language; }
    const Lists& lists() const { return lists_; }

    /// Classifies one decoded lexeme. Total on non-empty strings; empty
    /// strings are rejected.
    TokenCategory classify(std::string_view text) const;

  private:
    Lists lists_;
    std::unordered_set<std::string> keyword_set_;
    std::unordered_set<std::string> type_set_;
    std::unordered_set<char> whitespace_chars_;
    std::unordered_set<std::string> delimiter_set_;
    std::unordered_set<std::string> operator_set_;
    std::size_t max_delimiter_len_ = 0;
    std::size_t max_operator_len_ = 0;

    bool composed_of(std::string_view text, const std::unordered_set<std::string>& parts,
                     std::size_t max_len) const;
};

/// Free-function form of the per-lexeme classification rule.
TokenCategory classify_lexeme(const LanguageProfile& profile, std::string_view text);

/// A tokenizer vocabulary joined with its syntax classification: the decode
/// table, one category per id, and the syntax set S (ids with category
/// != Etc).
class VocabularyProfile {
  public:
    VocabularyProfile(const LanguageProfile& profile, std::vector<std::string> decode_table);

    std::size_t vocab_size() const { return decode_.size(); }
    const std::string& language() const { return language_; }
    const std::string& decode(TokenId id) const;
    TokenCategory category(TokenId id) const;
    bool in_syntax(TokenId id) const { return category(id) != TokenCategory::Etc; }
    /// S, ascending by id.
    const std::vector<TokenId>& syntax_set() const { return syntax_set_; }
    const std::vector<std::string>& decode_table() const { return decode_; }

  private:
    std::string language_;
    std::vector<std::string> decode_;
    std::vector<TokenCategory> categories_;
    std::vector<TokenId> syntax_set_;
};

struct CategoryCounts {
    std::array<std::size_t, kNumCategories> counts{};

    std::size_t& operator[](TokenCategory cat) { return counts[static_cast<std::size_t>(cat)]; }
    std::size_t operator[](TokenCategory cat) const {
        return counts[static_cast<std::size_t>(cat)];
    }
    std::size_t total() const;
};

/// Counts the category of every token in `seq`. Counts sum to seq.size().
CategoryCounts category_histogram(const VocabularyProfile& profile, const TokenSequence& seq);

}  // namespace stone
