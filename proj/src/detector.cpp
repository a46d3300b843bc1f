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

#include "stone/detector.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace stone {

namespace {

DetectionReport detect_impl(const TokenSequence& seq, std::size_t vocab_size, double gamma,
                            SeedKey key, double z_threshold,
                            const std::function<bool(TokenId)>& countable) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in (0, 1)");
    }
    validate_sequence(seq, vocab_size);

    DetectionReport report;
    report.gamma = gamma;
    report.z_threshold = z_threshold;
    report.input_kind = "tokens";
    report.trace.reserve(seq.size());

    for (std::size_t t = 0; t < seq.size(); ++t) {
        const TokenId token = seq.tokens[t];
        // t == 0 has no in-sequence predecessor to seed from.
        const bool counted = t > 0 && countable(token);
        bool green = false;
        if (counted) {
            ++report.counted;
            const std::uint64_t seed = seed_from_token(seq.tokens[t - 1], key);
            const VocabPartition partition = split(vocab_size, gamma, seed);
            green = partition.is_green(token);
            if (green) ++report.green;
        }
        report.trace.push_back({token, counted, green});
    }

    if (report.counted == 0) {
        report.undetectable = true;
        return report;
    }
    const auto n = static_cast<double>(report.counted);
    const auto g = static_cast<double>(report.green);
    report.z = (g - gamma * n) / std::sqrt(gamma * (1.0 - gamma) * n);
    report.watermarked = *report.z > z_threshold;
    return report;
}

}  // namespace

DetectionReport detect_stone(const TokenSequence& seq, const VocabularyProfile& profile,
                             double gamma, SeedKey key, double z_threshold) {
    return detect_impl(seq, profile.vocab_size(), gamma, key, z_threshold,
                       [&profile](TokenId id) { return !profile.in_syntax(id); });
}

DetectionReport detect_full(const TokenSequence& seq, std::size_t vocab_size, double gamma,
                            SeedKey key, double z_threshold) {
    return detect_impl(seq, vocab_size, gamma, key, z_threshold,
                       [](TokenId) { return true; });
}

DetectionReport detect_from_text(const std::string& code, const Tokenizer& tokenizer,
                                 const VocabularyProfile& profile, double gamma, SeedKey key,
                                 double z_threshold) {
    if (tokenizer.vocab_size() != profile.vocab_size()) {
        throw std::invalid_argument(
            "tokenizer vocabulary (" + std::to_string(tokenizer.vocab_size()) +
            ") does not match the profile vocabulary (" + std::to_string(profile.vocab_size()) +
            ")");
    }
    const TokenSequence seq = tokenizer.encode(code);
    DetectionReport report = detect_stone(seq, profile, gamma, key, z_threshold);
    report.input_kind = "text";
    return report;
}

std::string report_to_json(const DetectionReport& report, bool include_trace) {
    nlohmann::json j{
        {"input", report.input_kind},
        {"counted", report.counted},
        {"green", report.green},
        {"z", report.z ? nlohmann::json(*report.z) : nlohmann::json(nullptr)},
        {"watermarked", report.watermarked},
        {"undetectable", report.undetectable},
        {"gamma", report.gamma},
        {"z_threshold", report.z_threshold},
        {"first_token_skipped", report.first_token_skipped},
    };
    if (include_trace) {
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& t : report.trace) {
            trace.push_back({{"token", t.token}, {"counted", t.counted}, {"green", t.green}});
        }
        j["trace"] = std::move(trace);
    }
    return j.dump();
}

}  // namespace stone
