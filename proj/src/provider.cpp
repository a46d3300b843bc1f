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

#include "stone/provider.hpp"

#include <cmath>
#include <limits>

#include <httplib.h>
#include <json.hpp>

#include "stone/rng.hpp"

namespace stone {

namespace {

// Procedural row for `prev` (prev == vocab_size means the start row).
LogitVector procedural_row(const ToyModelSpec& spec, std::size_t prev) {
    SplitMix64 rng(mix64(spec.seed ^ (0x9E3779B97F4A7C15ULL * (prev + 1))));
    LogitVector row(spec.vocab_size);
    for (double& v : row) {
        v = spec.logit_spread * rng.next_double();
    }
    if (spec.syntax_burst > 0.0 && !spec.syntax_tokens.empty()) {
        SplitMix64 burst(mix64(spec.seed ^ mix64(0xB0B5 + prev)));
        if (burst.next_double() < spec.syntax_burst) {
            const TokenId target =
                spec.syntax_tokens[burst.next_below(spec.syntax_tokens.size())];
            row[target] += 6.0;  // one syntax token dominates this context
        }
    }
    return row;
}

}  // namespace

ToyModelSpec ToyModelSpec::flat(std::size_t vocab_size) {
    ToyModelSpec spec;
    spec.vocab_size = vocab_size;
    spec.logit_spread = 0.0;
    spec.validate();
    return spec;
}

ToyModelSpec ToyModelSpec::tabular(std::vector<LogitVector> rows_with_start) {
    ToyModelSpec spec;
    if (rows_with_start.empty()) {
        throw std::invalid_argument("toy model table is empty");
    }
    spec.vocab_size = rows_with_start.front().size();
    spec.rows = std::move(rows_with_start);
    spec.validate();
    return spec;
}

ToyModelSpec ToyModelSpec::seeded(std::size_t vocab_size, std::uint64_t seed, double logit_spread,
                                  double syntax_burst, std::vector<TokenId> syntax_tokens) {
    ToyModelSpec spec;
    spec.vocab_size = vocab_size;
    spec.seed = seed;
    spec.logit_spread = logit_spread;
    spec.syntax_burst = syntax_burst;
    spec.syntax_tokens = std::move(syntax_tokens);
    spec.validate();
    return spec;
}

void ToyModelSpec::validate() const {
    if (vocab_size == 0) {
        throw std::invalid_argument("toy model vocabulary is empty");
    }
    if (!rows.empty()) {
        if (rows.size() != vocab_size + 1) {
            throw std::invalid_argument(
                "toy model table needs one row per token plus a start row");
        }
        for (const auto& row : rows) {
            if (row.size() != vocab_size) {
                throw std::invalid_argument("toy model row length != vocab size");
            }
            validate_logits(row);
        }
    }
    if (!(std::isfinite(logit_spread)) || logit_spread < 0.0) {
        throw std::invalid_argument("logit_spread must be finite and >= 0");
    }
    if (syntax_burst < 0.0 || syntax_burst > 1.0) {
        throw std::invalid_argument("syntax_burst must lie in [0, 1]");
    }
    for (TokenId id : syntax_tokens) {
        if (id >= vocab_size) {
            throw std::invalid_argument("syntax token id out of range in toy spec");
        }
    }
}

LogitVector toy_logits(const ToyModelSpec& spec, const TokenSequence& context) {
    validate_sequence(context, spec.vocab_size);
    const std::size_t prev =
        context.empty() ? spec.vocab_size : static_cast<std::size_t>(context.back());
    if (!spec.rows.empty()) {
        return spec.rows[prev];
    }
    return procedural_row(spec, prev);
}

ToyModel::ToyModel(ToyModelSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
}

LogitVector ToyModel::compute_logits(const TokenSequence& context) {
    return toy_logits(spec_, context);
}

RemoteProvider::RemoteProvider(RemoteConfig config) : config_(std::move(config)) {
    const std::string body = fetch("/v1/meta", "", "meta");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
        vocab_size_ = j.at("vocab_size").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw BadValueError(std::string("malformed /v1/meta response: ") + e.what(), "meta");
    }
    if (vocab_size_ == 0) {
        throw BadValueError("server reported an empty vocabulary", "meta");
    }
}

std::string RemoteProvider::fetch(const std::string& path, const std::string& body,
                                  const std::string& request_id) {
    for (int attempt = 1;; ++attempt) {
        httplib::Client client(config_.url);
        client.set_connection_timeout(0, config_.timeout_ms * 1000);
        client.set_read_timeout(0, config_.timeout_ms * 1000);
        httplib::Result res = body.empty() ? client.Get(path)
                                           : client.Post(path, body, "application/json");
        if (res && res->status == 200) {
            return res->body;
        }
        if (attempt >= config_.max_attempts) {
            const std::string detail =
                res ? "HTTP status " + std::to_string(res->status)
                    : "transport failure: " + httplib::to_string(res.error());
            throw TransportError("request to " + config_.url + path + " failed after " +
                                     std::to_string(attempt) + " attempt(s): " + detail,
                                 request_id);
        }
    }
}

LogitVector RemoteProvider::compute_logits(const TokenSequence& context) {
    const std::string request_id = "req-" + std::to_string(next_request_.fetch_add(1));
    nlohmann::json req{{"request_id", request_id}, {"context", context.tokens}};
    const std::string body = fetch("/v1/logits", req.dump(), request_id);

    nlohmann::json j;
    std::vector<double> logits;
    std::size_t reported = 0;
    try {
        j = nlohmann::json::parse(body);
        reported = j.at("vocab_size").get<std::size_t>();
        const auto& arr = j.at("logits");
        logits.reserve(arr.size());
        for (const auto& v : arr) {
            // NaN arrives as JSON null; treat any non-number as non-finite.
            logits.push_back(v.is_number() ? v.get<double>()
                                           : std::numeric_limits<double>::quiet_NaN());
        }
    } catch (const nlohmann::json::exception& e) {
        throw BadValueError(std::string("malformed /v1/logits response: ") + e.what(),
                            request_id);
    }
    if (reported != vocab_size_ || logits.size() != vocab_size_) {
        throw LengthMismatchError("server returned " + std::to_string(logits.size()) +
                                      " logits (vocab_size field " + std::to_string(reported) +
                                      "), expected " + std::to_string(vocab_size_),
                                  request_id);
    }
    for (double v : logits) {
        if (!std::isfinite(v)) {
            throw BadValueError("server returned a non-finite logit", request_id);
        }
    }
    return logits;
}

}  // namespace stone
