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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stone/dataset.hpp"
#include "stone/detector.hpp"
#include "stone/metrics.hpp"
#include "stone/provider.hpp"
#include "stone/runner.hpp"
#include "stone/watermark.hpp"

namespace stone {

struct PipelineOptions {
    WatermarkParams params;
    double z_threshold = kDefaultZThreshold;
    std::size_t samples_per_task = 5;
    std::vector<std::size_t> k_values = {1, 5};
    std::size_t stem_k = 1;  // which pass@k feeds the composite
    std::vector<StemWeights> weight_settings = {StemWeights::equal()};
    bool include_weight_grid = false;
    std::size_t workers = 1;
    std::uint64_t master_seed = 1;
    double test_timeout_seconds = 10.0;
    bool run_executions = true;  // skip subprocesses when only scoring

    void validate() const;
};

struct SampleOutcome {
    Outcome outcome = Outcome::Error;
    DetectionReport detection;
    std::string text;
    std::size_t token_count = 0;
    bool generation_complete = false;
    double execution_seconds = 0.0;
    DilutionStats dilution;
};

struct RunResult {
    std::string task_id;
    std::vector<SampleOutcome> samples;         // watermarked lane
    std::vector<TokenSequence> wm_tokens;       // scoring corpora
    std::vector<TokenSequence> baseline_tokens; // unwatermarked lane (delta = 0)
    std::vector<std::string> baseline_texts;
    std::optional<double> human_z;              // reference solution under the detector
    bool human_undetectable = false;
    double insertion_seconds = 0.0;
    double detection_seconds = 0.0;
    std::string failure;  // non-empty when this task was skipped by an error
};

struct PipelineReport {
    std::vector<RunResult> tasks;
    std::size_t failed_tasks = 0;

    /// Echo of the knobs that produced this report, so pools and scores
    /// stay interpretable on disk.
    WatermarkParams params;
    std::size_t samples_per_task = 0;
    std::uint64_t master_seed = 0;
    double z_threshold = 0.0;

    std::map<std::size_t, double> pass_at_k_values;  // k -> mean over tasks
    ScorePools pools;                                // undetectable excluded
    std::size_t wm_undetectable = 0;
    std::size_t human_undetectable = 0;
    std::optional<double> detectability;  // AUROC; absent when a pool is empty

    double ppl_wm = 0.0;
    double ppl_baseline = 0.0;
    double imperceptibility_value = 0.0;

    double correctness_value = 0.0;  // pass@stem_k
    std::vector<std::pair<StemWeights, StemScore>> stem_scores;
    std::vector<std::pair<StemWeights, StemScore>> grid_scores;

    std::uint64_t detection_provider_calls = 0;  // call delta in the detect phase
    double total_insertion_seconds = 0.0;
    double total_detection_seconds = 0.0;
};

/// Generate -> execute -> detect -> score, in separate phases so the timers
/// never overlap and the detection phase's provider-call delta is
/// attributable. Tasks spread over a bounded worker pool; per-sample rng
/// streams derive from (master_seed, task index, sample index, lane), so
/// results do not depend on scheduling. A failing task is recorded and
/// skipped, never fatal.
PipelineReport run_pipeline(const std::vector<TaskRecord>& dataset, LogitProvider& provider,
                            const VocabularyProfile& profile, const Tokenizer& tokenizer,
                            const PipelineOptions& options,
                            const std::filesystem::path& work_dir);

/// Writes report.jsonl / summary.csv / weights.csv (deterministic bytes for
/// a deterministic provider) plus timings.json (wall-clock, varies run to
/// run) under `out_dir`. Never overwrites: each call creates a fresh
/// run-NNN directory and returns it.
std::filesystem::path write_pipeline_report(const PipelineReport& report,
                                            const std::filesystem::path& out_dir);

struct SweepSpec {
    std::vector<double> gammas;
    std::vector<double> deltas;

    void validate() const;
};

struct SweepRow {
    double gamma = 0.0;
    double delta = 0.0;
    double pass1 = 0.0;
    std::optional<double> detectability;
    double imperceptibility_value = 0.0;
    std::vector<std::pair<StemWeights, StemScore>> stem_scores;
    std::vector<std::pair<StemWeights, StemScore>> grid_scores;
};

/// One pipeline run per (gamma, delta), identical seeds across cells.
std::vector<SweepRow> sweep(const std::vector<TaskRecord>& dataset, LogitProvider& provider,
                            const VocabularyProfile& profile, const Tokenizer& tokenizer,
                            PipelineOptions options, const SweepSpec& spec,
                            const std::filesystem::path& work_dir);

/// Plot-ready CSV (one row per cell; composites flattened into columns).
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// Long-format CSV of every (cell, weight) composite, grid included:
/// gamma,delta,alpha,beta,zeta,composite.
std::string sweep_weights_to_csv(const std::vector<SweepRow>& rows);

}  // namespace stone
