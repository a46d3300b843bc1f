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

#include "stone/syntax_profile.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace stone {

namespace {

using Lists = LanguageProfile::Lists;

Lists python_lists() {
    return Lists{
        "python",
        // keywords
        {"True", "False", "None", "and", "as", "assert", "async", "await", "break",
         "class", "continue", "def", "del", "elif", "else", "except", "finally",
         "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
         "not", "or", "pass", "raise", "return", "try", "while", "with", "yield"},
        // whitespace
        {" ", "\n", "\t"},
        // types
        {"int", "float", "complex", "str", "bytes", "bool", "list", "tuple", "set",
         "dict", "NoneType"},
        // delimiters
        {"(", ")", "[", "]", "{", "}", ",", ":", ".", ";", "@", "->", "..."},
        // operators
        {"+", "-", "*", "/", "%", "**", "//", "=", "==", "!=", ">", "<", ">=", "<=",
         "+=", "-=", "*=", "/=", "%=", "//=", "**=", "&", "|", "<<", ">>", "^", "~"},
    };
}

Lists cpp_lists() {
    return Lists{
        "cpp",
        {"alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor",
         "break", "case", "catch", "class", "compl", "concept", "const", "consteval",
         "constexpr", "constinit", "const_cast", "continue", "co_await", "co_return",
         "co_yield", "decltype", "default", "delete", "do", "dynamic_cast", "else",
         "enum", "explicit", "export", "extern", "false", "for", "friend", "goto",
         "if", "inline", "mutable", "namespace", "new", "noexcept", "not", "not_eq",
         "nullptr", "operator", "or", "or_eq", "private", "protected", "public",
         "register", "reinterpret_cast", "requires", "return", "sizeof", "static",
         "static_assert", "static_cast", "struct", "switch", "template", "this",
         "thread_local", "throw", "true", "try", "typedef", "typeid", "typename",
         "union", "using", "virtual", "volatile", "while", "xor", "xor_eq",
         "override"},
        {" ", "\n", "\t"},
        {"int", "float", "double", "bool", "char", "short", "long", "void",
         "unsigned", "signed", "size_t", "ptrdiff_t", "wchar_t", "char8_t",
         "char16_t", "char32_t"},
        {"(", ")", "[", "]", "{", "}", ",", ":", ".", ";", "->", "::", "..."},
        {"+", "-", "*", "/", "%", "++", "--", "=", "==", "!=", ">", "<", ">=", "<=",
         "&&", "||", "!", "&", "|", "^", "~", "<<", ">>", "+=", "-=", "*=", "/=",
         "%=", "&=", "|=", "^=", "<<=", ">>=", ".*", "->*"},
    };
}

Lists java_lists() {
    return Lists{
        "java",
        {"abstract", "assert", "break", "case", "catch", "class", "const",
         "continue", "default", "do", "else", "enum", "extends", "final", "finally",
         "for", "goto", "if", "implements", "import", "instanceof", "interface",
         "native", "new", "null", "package", "private", "protected", "public",
         "return", "static", "strictfp", "super", "switch", "synchronized", "this",
         "throw", "throws", "transient", "try", "void", "volatile", "while", "true",
         "false"},
        {" ", "\n", "\t"},
        {"byte", "short", "int", "long", "float", "double", "boolean", "char",
         "String", "Object"},
        {"(", ")", "[", "]", "{", "}", ",", ":", ".", ";", "@", "->", "::", "..."},
        {"+", "-", "*", "/", "%", "++", "--", "=", "==", "!=", ">", "<", ">=", "<=",
         "&&", "||", "!", "&", "|", "^", "~", "<<", ">>", ">>>", "+=", "-=", "*=",
         "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="},
    };
}

void check_list(const std::vector<std::string>& list, const char* name) {
    if (list.empty()) {
        throw std::invalid_argument(std::string("profile list '") + name + "' is empty");
    }
    std::unordered_set<std::string> seen;
    for (const auto& s : list) {
        if (s.empty()) {
            throw std::invalid_argument(std::string("profile list '") + name +
                                        "' contains an empty lexeme");
        }
        if (!seen.insert(s).second) {
            throw std::invalid_argument(std::string("duplicate lexeme '") + s + "' in list '" +
                                        name + "'");
        }
    }
}

// Strips at most one leading space marker: a literal space, the byte-level
// BPE marker U+0120, or the sentencepiece marker U+2581.
std::string_view strip_space_marker(std::string_view text) {
    if (!text.empty() && text.front() == ' ') return text.substr(1);
    if (text.size() >= 2 && static_cast<unsigned char>(text[0]) == 0xC4 &&
        static_cast<unsigned char>(text[1]) == 0xA0) {
        return text.substr(2);
    }
    if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xE2 &&
        static_cast<unsigned char>(text[1]) == 0x96 &&
        static_cast<unsigned char>(text[2]) == 0x81) {
        return text.substr(3);
    }
    return text;
}

}  // namespace

std::string_view category_name(TokenCategory cat) {
    switch (cat) {
        case TokenCategory::Keyword: return "keyword";
        case TokenCategory::Whitespace: return "whitespace";
        case TokenCategory::Type: return "type";
        case TokenCategory::Delimiter: return "delimiter";
        case TokenCategory::Operator: return "operator";
        case TokenCategory::Etc: return "etc";
    }
    throw std::logic_error("unknown category");
}

TokenCategory category_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kNumCategories; ++i) {
        const auto cat = static_cast<TokenCategory>(i);
        if (category_name(cat) == name) return cat;
    }
    throw std::invalid_argument("unknown category name: " + std::string(name));
}

LanguageProfile::LanguageProfile(Lists lists) : lists_(std::move(lists)) {
    if (lists_.language.empty()) {
        throw std::invalid_argument("profile language identifier is empty");
    }
    check_list(lists_.keywords, "keywords");
    check_list(lists_.whitespace, "whitespace");
    check_list(lists_.types, "types");
    check_list(lists_.delimiters, "delimiters");
    check_list(lists_.operators, "operators");

    keyword_set_ = {lists_.keywords.begin(), lists_.keywords.end()};
    type_set_ = {lists_.types.begin(), lists_.types.end()};
    delimiter_set_ = {lists_.delimiters.begin(), lists_.delimiters.end()};
    operator_set_ = {lists_.operators.begin(), lists_.operators.end()};
    for (const auto& w : lists_.whitespace) {
        for (char c : w) whitespace_chars_.insert(c);
    }
    for (const auto& d : lists_.delimiters) max_delimiter_len_ = std::max(max_delimiter_len_, d.size());
    for (const auto& o : lists_.operators) max_operator_len_ = std::max(max_operator_len_, o.size());

    // The five lists partition the lexeme space; overlaps would make the
    // category assignment ambiguous.
    std::unordered_set<std::string> all;
    auto check_disjoint = [&all](const std::vector<std::string>& list, const char* name) {
        for (const auto& s : list) {
            if (!all.insert(s).second) {
                throw std::invalid_argument(std::string("lexeme '") + s +
                                            "' appears in more than one list (" + name + ")");
            }
        }
    };
    check_disjoint(lists_.keywords, "keywords");
    check_disjoint(lists_.whitespace, "whitespace");
    check_disjoint(lists_.types, "types");
    check_disjoint(lists_.delimiters, "delimiters");
    check_disjoint(lists_.operators, "operators");
}

const LanguageProfile& LanguageProfile::builtin(std::string_view language) {
    static const std::map<std::string, LanguageProfile, std::less<>> profiles = [] {
        std::map<std::string, LanguageProfile, std::less<>> m;
        m.emplace("python", LanguageProfile(python_lists()));
        m.emplace("cpp", LanguageProfile(cpp_lists()));
        m.emplace("java", LanguageProfile(java_lists()));
        return m;
    }();
    auto it = profiles.find(language);
    if (it == profiles.end()) {
        throw std::invalid_argument("no builtin profile for language: " + std::string(language));
    }
    return it->second;
}

std::vector<std::string> LanguageProfile::builtin_languages() {
    return {"python", "cpp", "java"};
}

LanguageProfile LanguageProfile::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open profile file: " + path.string());
    }
    nlohmann::json j;
    in >> j;
    Lists lists;
    try {
        lists.language = j.at("language").get<std::string>();
        lists.keywords = j.at("keywords").get<std::vector<std::string>>();
        lists.whitespace = j.at("whitespace").get<std::vector<std::string>>();
        lists.types = j.at("types").get<std::vector<std::string>>();
        lists.delimiters = j.at("delimiters").get<std::vector<std::string>>();
        lists.operators = j.at("operators").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed profile file " + path.string() + ": " + e.what());
    }
    return LanguageProfile(std::move(lists));
}

bool LanguageProfile::composed_of(std::string_view text,
                                  const std::unordered_set<std::string>& parts,
                                  std::size_t max_len) const {
    // reachable[i]: text[0..i) segments into listed lexemes.
    std::vector<char> reachable(text.size() + 1, 0);
    reachable[0] = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!reachable[i]) continue;
        const std::size_t limit = std::min(max_len, text.size() - i);
        for (std::size_t len = 1; len <= limit; ++len) {
            if (reachable[i + len]) continue;
            if (parts.count(std::string(text.substr(i, len))) != 0) {
                reachable[i + len] = 1;
            }
        }
    }
    return reachable[text.size()] != 0;
}

TokenCategory LanguageProfile::classify(std::string_view text) const {
    if (text.empty()) {
        throw std::invalid_argument("cannot classify an empty lexeme");
    }
    bool all_whitespace = true;
    for (char c : text) {
        if (whitespace_chars_.count(c) == 0) {
            all_whitespace = false;
            break;
        }
    }
    if (all_whitespace) return TokenCategory::Whitespace;

    const std::string_view stripped = strip_space_marker(text);
    if (stripped.empty()) return TokenCategory::Etc;

    const std::string key(stripped);
    if (keyword_set_.count(key) != 0) return TokenCategory::Keyword;
    if (type_set_.count(key) != 0) return TokenCategory::Type;
    if (composed_of(stripped, delimiter_set_, max_delimiter_len_)) return TokenCategory::Delimiter;
    if (composed_of(stripped, operator_set_, max_operator_len_)) return TokenCategory::Operator;
    return TokenCategory::Etc;
}

TokenCategory classify_lexeme(const LanguageProfile& profile, std::string_view text) {
    return profile.classify(text);
}

VocabularyProfile::VocabularyProfile(const LanguageProfile& profile,
                                     std::vector<std::string> decode_table)
    : language_(profile.language()), decode_(std::move(decode_table)) {
    if (decode_.empty()) {
        throw std::invalid_argument("vocabulary decode table is empty");
    }
    categories_.reserve(decode_.size());
    for (std::size_t id = 0; id < decode_.size(); ++id) {
        // Special tokens may decode to nothing; they carry no syntax.
        const TokenCategory cat =
            decode_[id].empty() ? TokenCategory::Etc : profile.classify(decode_[id]);
        categories_.push_back(cat);
        if (cat != TokenCategory::Etc) {
            syntax_set_.push_back(static_cast<TokenId>(id));
        }
    }
}

const std::string& VocabularyProfile::decode(TokenId id) const {
    if (id >= decode_.size()) {
        throw std::invalid_argument("token id out of range: " + std::to_string(id));
    }
    return decode_[id];
}

TokenCategory VocabularyProfile::category(TokenId id) const {
    if (id >= categories_.size()) {
        throw std::invalid_argument("token id out of range: " + std::to_string(id));
    }
    return categories_[id];
}

std::size_t CategoryCounts::total() const {
    std::size_t sum = 0;
    for (std::size_t c : counts) sum += c;
    return sum;
}

CategoryCounts category_histogram(const VocabularyProfile& profile, const TokenSequence& seq) {
    CategoryCounts counts;
    for (TokenId id : seq.tokens) {
        ++counts[profile.category(id)];
    }
    return counts;
}

}  // namespace stone
