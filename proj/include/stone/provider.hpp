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

#include <atomic>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "stone/types.hpp"

namespace stone {

/// The logit-provider contract. Implementations return a LogitVector of
/// exactly vocab_size() entries for any context, and keep an atomic count of
/// logit requests so callers can prove a code path never touched the model.
class LogitProvider {
  public:
    virtual ~LogitProvider() = default;

    LogitVector logits(const TokenSequence& context) {
        ++calls_;
        return compute_logits(context);
    }

    virtual std::size_t vocab_size() const = 0;

    /// Number of logit requests since construction.
    std::uint64_t call_count() const { return calls_.load(); }

  protected:
    virtual LogitVector compute_logits(const TokenSequence& context) = 0;

  private:
    std::atomic<std::uint64_t> calls_{0};
};

/// Desk-scale stand-in for a code LLM. First-order: the logit row depends
/// only on the last context token (a designated start row serves the empty
/// context). Rows come either from an explicit table or are derived
/// procedurally from a seed, with `syntax_burst` controlling the fraction of
/// contexts where one syntax token dominates (a low-entropy step).
struct ToyModelSpec {
    std::size_t vocab_size = 0;

    /// Optional explicit table: rows[prev] for prev in [0, |V|), then
    /// rows[|V|] as the start row. Empty means procedural rows.
    std::vector<LogitVector> rows;

    // Procedural-row knobs.
    std::uint64_t seed = 1;
    double logit_spread = 1.0;
    double syntax_burst = 0.0;
    std::vector<TokenId> syntax_tokens;

    static ToyModelSpec flat(std::size_t vocab_size);
    static ToyModelSpec tabular(std::vector<LogitVector> rows_with_start);
    static ToyModelSpec seeded(std::size_t vocab_size, std::uint64_t seed, double logit_spread,
                               double syntax_burst, std::vector<TokenId> syntax_tokens);

    void validate() const;
};

/// Logit row for `context` under `spec`; depends only on the last token.
LogitVector toy_logits(const ToyModelSpec& spec, const TokenSequence& context);

class ToyModel : public LogitProvider {
  public:
    explicit ToyModel(ToyModelSpec spec);

    std::size_t vocab_size() const override { return spec_.vocab_size; }
    const ToyModelSpec& spec() const { return spec_; }

  protected:
    LogitVector compute_logits(const TokenSequence& context) override;

  private:
    ToyModelSpec spec_;
};

/// Remote-provider failures, each carrying the request id it belongs to.
class RemoteError : public std::runtime_error {
  public:
    RemoteError(const std::string& what, std::string request_id)
        : std::runtime_error(what + " (request " + request_id + ")"),
          request_id_(std::move(request_id)) {}
    const std::string& request_id() const { return request_id_; }

  private:
    std::string request_id_;
};

class TransportError : public RemoteError {
    using RemoteError::RemoteError;
};
class LengthMismatchError : public RemoteError {
    using RemoteError::RemoteError;
};
class BadValueError : public RemoteError {
    using RemoteError::RemoteError;
};

struct RemoteConfig {
    std::string url;          // e.g. "http://127.0.0.1:8080"
    int timeout_ms = 5000;
    int max_attempts = 3;     // transport retries; schema errors never retry
};

/// HTTP/JSON client for an inference server implementing the wire contract
/// documented in the README: GET /v1/meta for the vocabulary size, POST
/// /v1/logits with {"request_id", "context"} returning {"request_id",
/// "vocab_size", "logits"}.
class RemoteProvider : public LogitProvider {
  public:
    explicit RemoteProvider(RemoteConfig config);

    std::size_t vocab_size() const override { return vocab_size_; }

  protected:
    LogitVector compute_logits(const TokenSequence& context) override;

  private:
    RemoteConfig config_;
    std::size_t vocab_size_ = 0;
    std::atomic<std::uint64_t> next_request_{0};

    std::string fetch(const std::string& path, const std::string& body,
                      const std::string& request_id);
};

}  // namespace stone
