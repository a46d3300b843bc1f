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

#include "stone/demo.hpp"

namespace stone {

std::vector<std::string> demo_decode_table(const std::string& language) {
    std::vector<std::string> table;
    table.reserve(256);
    // Every printable ASCII character, so any plain-text prompt encodes.
    for (char c = 0x20; c <= 0x7E; ++c) {
        table.emplace_back(1, c);
    }
    table.emplace_back("\n");
    table.emplace_back("\t");

    std::vector<std::string> lexemes;
    if (language == "python") {
        lexemes = {
            // keywords / types with the usual leading space
            " def", " return", " if", " else", " for", " in", " not", " and", " or",
            " True", " False", " None", " while", " import", " class", " pass",
            " int", " str", " bool", " float", " list", " dict",
            // operators and delimiter runs
            " =", " ==", " +", " -", " *", " /", " +=", " <", " >", "**", "//",
            "):", " (", "()", "->", "...",
            // whitespace runs
            "\n\n", "\n    ", "    ", "  ", "\n\t",
        };
    } else if (language == "cpp") {
        lexemes = {
            " return", " if", " else", " for", " while", " const", " auto", " new",
            " struct", " class", " template", " namespace", " public", " true", " false",
            " int", " double", " bool", " char", " void", " long", " unsigned",
            " =", " ==", " +", " -", " *", " /", " +=", " <", " >", "&&", "||", "++", "--",
            "::", "->", "();", " {", "},", ");",
            "\n\n", "\n    ", "    ", "  ", "\n\t",
        };
    } else if (language == "java") {
        lexemes = {
            " return", " if", " else", " for", " while", " public", " static", " final",
            " new", " class", " void", " this", " null", " true", " false",
            " int", " long", " double", " boolean", " char", " String", " Object",
            " =", " ==", " +", " -", " *", " /", " +=", " <", " >", "&&", "||", "++", "--",
            "->", "();", " {", "},", ");", " @",
            "\n\n", "\n    ", "    ", "  ", "\n\t",
        };
    } else {
        throw std::invalid_argument("no demo vocabulary for language: " + language);
    }
    for (auto& s : lexemes) table.push_back(std::move(s));

    // Identifier fragments: the usual subword texture.
    for (const char* frag :
         {" x", " y", " i", " n", " a", " b", " result", " value", " data", " count",
          " num", " item", " total", " out", " res", " tmp", " val", " arr", " s", " t",
          " foo", " bar", "_list", "_sum", "_map", "ab", "cd", "xy", "foo", "bar", "baz",
          "qux", "00", "10", "123"}) {
        table.emplace_back(frag);
    }

    // Pad with two-byte UTF-8 fillers (plain Etc tokens a text prompt never
    // hits) until the size is even: with gamma = 0.5 an even vocabulary makes
    // round(gamma |V|) exact, so the null z-score is centered.
    unsigned cp = 0xA1;
    while (table.size() < 256 || table.size() % 2 != 0) {
        std::string pad;
        pad.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        pad.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        table.push_back(std::move(pad));
        ++cp;
    }
    return table;
}

VocabularyProfile demo_vocabulary(const std::string& language) {
    return VocabularyProfile(LanguageProfile::builtin(language), demo_decode_table(language));
}

Tokenizer demo_tokenizer(const std::string& language) {
    return Tokenizer(demo_decode_table(language));
}

std::unique_ptr<ToyModel> demo_model(const VocabularyProfile& profile, std::uint64_t seed,
                                     double syntax_burst) {
    ToyModelSpec spec = ToyModelSpec::seeded(profile.vocab_size(), seed, /*logit_spread=*/1.5,
                                             syntax_burst, profile.syntax_set());
    return std::make_unique<ToyModel>(std::move(spec));
}

}  // namespace stone
