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

#include "stone/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "stone/rng.hpp"

namespace stone {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Scheduling-independent stream seeds: one lane per purpose.
enum class Lane : std::uint64_t { Watermarked = 0, Baseline = 1 };

SplitMix64 stream_rng(std::uint64_t master_seed, std::size_t task, std::size_t sample,
                      Lane lane) {
    const std::uint64_t id = (static_cast<std::uint64_t>(task) << 24) |
                             (static_cast<std::uint64_t>(sample) << 4) |
                             static_cast<std::uint64_t>(lane);
    return SplitMix64(mix64(master_seed ^ mix64(id)));
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. Exceptions
// propagate after all workers join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count == 0 ? 1 : count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string weights_tag(const StemWeights& w) {
    return format_double(w.alpha) + "/" + format_double(w.beta) + "/" + format_double(w.zeta);
}

}  // namespace

void PipelineOptions::validate() const {
    if (samples_per_task == 0) {
        throw std::invalid_argument("samples_per_task must be >= 1");
    }
    if (k_values.empty()) {
        throw std::invalid_argument("at least one k value is required");
    }
    for (std::size_t k : k_values) {
        if (k == 0 || k > samples_per_task) {
            throw std::invalid_argument("every k must satisfy 1 <= k <= samples_per_task");
        }
    }
    if (std::find(k_values.begin(), k_values.end(), stem_k) == k_values.end()) {
        throw std::invalid_argument("stem_k must be one of the requested k values");
    }
    for (const auto& w : weight_settings) w.validate();
    if (weight_settings.empty()) {
        throw std::invalid_argument("at least one weight setting is required");
    }
}

void SweepSpec::validate() const {
    if (gammas.empty() || deltas.empty()) {
        throw std::invalid_argument("sweep needs non-empty gamma and delta lists");
    }
}

PipelineReport run_pipeline(const std::vector<TaskRecord>& dataset, LogitProvider& provider,
                            const VocabularyProfile& profile, const Tokenizer& tokenizer,
                            const PipelineOptions& options,
                            const std::filesystem::path& work_dir) {
    options.validate();
    options.params.validate(profile.vocab_size());
    if (dataset.empty()) {
        throw std::invalid_argument("dataset is empty");
    }

    PipelineReport report;
    report.tasks.resize(dataset.size());
    report.params = options.params;
    report.samples_per_task = options.samples_per_task;
    report.master_seed = options.master_seed;
    report.z_threshold = options.z_threshold;
    const std::size_t n = options.samples_per_task;

    // Phase 1: generation (watermarked lane + delta=0 baseline lane).
    WatermarkParams baseline_params = options.params;
    baseline_params.delta = 0.0;
    parallel_for(dataset.size(), options.workers, [&](std::size_t ti) {
        RunResult& run = report.tasks[ti];
        run.task_id = dataset[ti].task_id;
        try {
            const TokenSequence prompt = tokenizer.encode(dataset[ti].prompt);
            if (prompt.empty()) {
                throw std::runtime_error("prompt encodes to zero tokens");
            }
            const auto start = Clock::now();
            for (std::size_t s = 0; s < n; ++s) {
                SplitMix64 rng =
                    stream_rng(options.master_seed, ti, s, Lane::Watermarked);
                GenerationRecord record =
                    generate(provider, prompt, options.params, profile, rng);
                SampleOutcome sample;
                sample.generation_complete = record.complete;
                sample.token_count = record.output.size();
                sample.text = tokenizer.decode(record.output);
                sample.dilution = dilution_stats(record, profile);
                run.wm_tokens.push_back(record.output);
                run.samples.push_back(std::move(sample));
            }
            for (std::size_t s = 0; s < n; ++s) {
                SplitMix64 rng = stream_rng(options.master_seed, ti, s, Lane::Baseline);
                GenerationRecord record =
                    generate(provider, prompt, baseline_params, profile, rng);
                run.baseline_tokens.push_back(record.output);
                run.baseline_texts.push_back(tokenizer.decode(record.output));
            }
            run.insertion_seconds = seconds_since(start);
        } catch (const std::exception& e) {
            run.failure = e.what();
        }
    });

    // Phase 2: test execution.
    if (options.run_executions) {
        parallel_for(dataset.size(), options.workers, [&](std::size_t ti) {
            RunResult& run = report.tasks[ti];
            if (!run.failure.empty()) return;
            try {
                for (auto& sample : run.samples) {
                    const ExecutionResult exec = run_tests(
                        sample.text, dataset[ti], options.test_timeout_seconds, work_dir);
                    sample.outcome = exec.outcome;
                    sample.execution_seconds = exec.seconds;
                }
            } catch (const std::exception& e) {
                run.failure = e.what();
            }
        });
    }

    // Phase 3: detection (model-free; the call-count delta proves it).
    const std::uint64_t calls_before_detection = provider.call_count();
    parallel_for(dataset.size(), options.workers, [&](std::size_t ti) {
        RunResult& run = report.tasks[ti];
        if (!run.failure.empty()) return;
        try {
            // The always gate is the full-vocabulary baseline, so its
            // detector counts every position; the syntax-aware gates use
            // the syntax-filtered statistic.
            const auto detect = [&](const TokenSequence& seq) {
                if (options.params.gate == Gate::Always) {
                    return detect_full(seq, profile.vocab_size(), options.params.gamma,
                                       options.params.key, options.z_threshold);
                }
                return detect_stone(seq, profile, options.params.gamma, options.params.key,
                                    options.z_threshold);
            };
            const auto start = Clock::now();
            for (std::size_t s = 0; s < run.samples.size(); ++s) {
                run.samples[s].detection = detect(run.wm_tokens[s]);
            }
            const TokenSequence reference = tokenizer.encode(dataset[ti].reference_solution);
            const DetectionReport human = detect(reference);
            if (human.undetectable) {
                run.human_undetectable = true;
            } else {
                run.human_z = human.z;
            }
            run.detection_seconds = seconds_since(start);
        } catch (const std::exception& e) {
            run.failure = e.what();
        }
    });
    report.detection_provider_calls = provider.call_count() - calls_before_detection;

    // Phase 4: perplexity over both lanes.
    std::vector<TokenSequence> wm_corpus;
    std::vector<TokenSequence> baseline_corpus;
    for (const RunResult& run : report.tasks) {
        if (!run.failure.empty()) continue;
        for (const auto& seq : run.wm_tokens) {
            if (!seq.empty()) wm_corpus.push_back(seq);
        }
        for (const auto& seq : run.baseline_tokens) {
            if (!seq.empty()) baseline_corpus.push_back(seq);
        }
    }
    if (!wm_corpus.empty() && !baseline_corpus.empty()) {
        report.ppl_wm = corpus_perplexity(provider, wm_corpus).mean_ppl;
        report.ppl_baseline = corpus_perplexity(provider, baseline_corpus).mean_ppl;
        report.imperceptibility_value = imperceptibility(report.ppl_wm, report.ppl_baseline);
    }

    // Phase 5: aggregation.
    std::size_t usable_tasks = 0;
    std::map<std::size_t, double> pass_sums;
    for (RunResult& run : report.tasks) {
        if (!run.failure.empty()) {
            ++report.failed_tasks;
            continue;
        }
        ++usable_tasks;
        std::size_t correct = 0;
        for (const auto& sample : run.samples) {
            if (sample.outcome == Outcome::Pass) ++correct;
        }
        for (std::size_t k : options.k_values) {
            pass_sums[k] += pass_at_k(run.samples.size(), correct, k);
        }
        for (const auto& sample : run.samples) {
            if (sample.detection.undetectable) {
                ++report.wm_undetectable;
            } else {
                report.pools.wm.push_back(*sample.detection.z);
            }
        }
        if (run.human_undetectable) {
            ++report.human_undetectable;
        } else if (run.human_z) {
            report.pools.human.push_back(*run.human_z);
        }
        report.total_insertion_seconds += run.insertion_seconds;
        report.total_detection_seconds += run.detection_seconds;
    }
    if (usable_tasks > 0) {
        for (auto& [k, sum] : pass_sums) {
            report.pass_at_k_values[k] = sum / static_cast<double>(usable_tasks);
        }
    }
    report.correctness_value = report.pass_at_k_values.count(options.stem_k)
                                   ? report.pass_at_k_values[options.stem_k]
                                   : 0.0;
    if (!report.pools.wm.empty() && !report.pools.human.empty()) {
        report.detectability = auroc(report.pools);
    }

    const double det = report.detectability.value_or(0.0);
    for (const StemWeights& w : options.weight_settings) {
        report.stem_scores.emplace_back(
            w, stem(report.correctness_value, det, report.imperceptibility_value, w));
    }
    if (options.include_weight_grid) {
        for (const StemWeights& w : weight_grid()) {
            report.grid_scores.emplace_back(
                w, stem(report.correctness_value, det, report.imperceptibility_value, w));
        }
    }
    return report;
}

namespace {

nlohmann::json sample_line(const std::string& task_id, std::size_t index,
                           const SampleOutcome& sample) {
    const DetectionReport& d = sample.detection;
    return nlohmann::json{
        {"task_id", task_id},
        {"kind", "wm"},
        {"sample", index},
        {"outcome", std::string(outcome_name(sample.outcome))},
        {"tokens", sample.token_count},
        {"complete", sample.generation_complete},
        {"counted", d.counted},
        {"green", d.green},
        {"z", d.z ? nlohmann::json(*d.z) : nlohmann::json(nullptr)},
        {"watermarked", d.watermarked},
        {"undetectable", d.undetectable},
        {"gated_steps", sample.dilution.gated},
        {"gated_syntax_final", sample.dilution.gated_syntax_final},
        {"text", sample.text},
    };
}

}  // namespace

std::filesystem::path write_pipeline_report(const PipelineReport& report,
                                            const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    // Fresh run directory; prior artifacts are never touched.
    std::filesystem::path run_dir;
    for (unsigned i = 1;; ++i) {
        char name[16];
        std::snprintf(name, sizeof name, "run-%03u", i);
        run_dir = out_dir / name;
        std::error_code ec;
        if (std::filesystem::create_directory(run_dir, ec)) break;
        if (ec && ec != std::errc::file_exists) {
            throw std::runtime_error("cannot create run directory under " + out_dir.string());
        }
    }

    {
        std::ofstream jsonl(run_dir / "report.jsonl", std::ios::binary);
        for (const RunResult& run : report.tasks) {
            if (!run.failure.empty()) {
                jsonl << nlohmann::json{{"task_id", run.task_id}, {"kind", "failure"},
                                        {"error", run.failure}}
                             .dump()
                      << "\n";
                continue;
            }
            for (std::size_t s = 0; s < run.samples.size(); ++s) {
                jsonl << sample_line(run.task_id, s, run.samples[s]).dump() << "\n";
            }
            for (std::size_t s = 0; s < run.baseline_texts.size(); ++s) {
                jsonl << nlohmann::json{{"task_id", run.task_id},
                                        {"kind", "baseline"},
                                        {"sample", s},
                                        {"tokens", run.baseline_tokens[s].size()},
                                        {"text", run.baseline_texts[s]}}
                             .dump()
                      << "\n";
            }
            nlohmann::json human{{"task_id", run.task_id}, {"kind", "human"}};
            human["z"] = run.human_z ? nlohmann::json(*run.human_z) : nlohmann::json(nullptr);
            human["undetectable"] = run.human_undetectable;
            jsonl << human.dump() << "\n";
        }
    }

    {
        std::ofstream csv(run_dir / "summary.csv", std::ios::binary);
        csv << "metric,value\n";
        csv << "gamma," << format_double(report.params.gamma) << "\n";
        csv << "delta," << format_double(report.params.delta) << "\n";
        csv << "gate," << gate_name(report.params.gate) << "\n";
        csv << "top_k," << report.params.top_k << "\n";
        csv << "temperature," << format_double(report.params.temperature) << "\n";
        csv << "seed_key," << report.params.key.value << "\n";
        csv << "master_seed," << report.master_seed << "\n";
        csv << "samples_per_task," << report.samples_per_task << "\n";
        csv << "z_threshold," << format_double(report.z_threshold) << "\n";
        csv << "tasks," << report.tasks.size() << "\n";
        csv << "failed_tasks," << report.failed_tasks << "\n";
        for (const auto& [k, v] : report.pass_at_k_values) {
            csv << "pass@" << k << "," << format_double(v) << "\n";
        }
        csv << "detectability,"
            << (report.detectability ? format_double(*report.detectability) : "undefined")
            << "\n";
        csv << "wm_pool," << report.pools.wm.size() << "\n";
        csv << "human_pool," << report.pools.human.size() << "\n";
        csv << "wm_undetectable," << report.wm_undetectable << "\n";
        csv << "human_undetectable," << report.human_undetectable << "\n";
        csv << "ppl_wm," << format_double(report.ppl_wm) << "\n";
        csv << "ppl_baseline," << format_double(report.ppl_baseline) << "\n";
        csv << "imperceptibility," << format_double(report.imperceptibility_value) << "\n";
        csv << "correctness," << format_double(report.correctness_value) << "\n";
        csv << "detection_provider_calls," << report.detection_provider_calls << "\n";
    }

    {
        std::ofstream csv(run_dir / "weights.csv", std::ios::binary);
        csv << "alpha,beta,zeta,composite\n";
        for (const auto& [w, score] : report.stem_scores) {
            csv << format_double(w.alpha) << "," << format_double(w.beta) << ","
                << format_double(w.zeta) << "," << format_double(score.composite) << "\n";
        }
        for (const auto& [w, score] : report.grid_scores) {
            csv << format_double(w.alpha) << "," << format_double(w.beta) << ","
                << format_double(w.zeta) << "," << format_double(score.composite) << "\n";
        }
    }

    {
        // Wall-clock data lives apart from the deterministic artifacts.
        nlohmann::json timings{{"total_insertion_seconds", report.total_insertion_seconds},
                               {"total_detection_seconds", report.total_detection_seconds}};
        nlohmann::json per_task = nlohmann::json::array();
        for (const RunResult& run : report.tasks) {
            per_task.push_back({{"task_id", run.task_id},
                                {"insertion_seconds", run.insertion_seconds},
                                {"detection_seconds", run.detection_seconds}});
        }
        timings["tasks"] = std::move(per_task);
        std::ofstream out(run_dir / "timings.json", std::ios::binary);
        out << timings.dump(2) << "\n";
    }
    return run_dir;
}

std::vector<SweepRow> sweep(const std::vector<TaskRecord>& dataset, LogitProvider& provider,
                            const VocabularyProfile& profile, const Tokenizer& tokenizer,
                            PipelineOptions options, const SweepSpec& spec,
                            const std::filesystem::path& work_dir) {
    spec.validate();
    std::vector<SweepRow> rows;
    for (double gamma : spec.gammas) {
        for (double delta : spec.deltas) {
            options.params.gamma = gamma;
            options.params.delta = delta;
            const PipelineReport report =
                run_pipeline(dataset, provider, profile, tokenizer, options, work_dir);
            SweepRow row;
            row.gamma = gamma;
            row.delta = delta;
            row.pass1 = report.pass_at_k_values.count(1) ? report.pass_at_k_values.at(1) : 0.0;
            row.detectability = report.detectability;
            row.imperceptibility_value = report.imperceptibility_value;
            row.stem_scores = report.stem_scores;
            row.grid_scores = report.grid_scores;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string sweep_weights_to_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "gamma,delta,alpha,beta,zeta,composite\n";
    for (const SweepRow& row : rows) {
        auto emit = [&](const std::pair<StemWeights, StemScore>& entry) {
            csv += format_double(row.gamma) + "," + format_double(row.delta) + "," +
                   format_double(entry.first.alpha) + "," + format_double(entry.first.beta) +
                   "," + format_double(entry.first.zeta) + "," +
                   format_double(entry.second.composite) + "\n";
        };
        for (const auto& entry : row.stem_scores) emit(entry);
        for (const auto& entry : row.grid_scores) emit(entry);
    }
    return csv;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "gamma,delta,pass@1,detectability,imperceptibility";
    if (!rows.empty()) {
        for (const auto& [w, score] : rows.front().stem_scores) {
            csv += ",stem(" + weights_tag(w) + ")";
        }
    }
    csv += "\n";
    for (const SweepRow& row : rows) {
        csv += format_double(row.gamma) + "," + format_double(row.delta) + "," +
               format_double(row.pass1) + ",";
        csv += row.detectability ? format_double(*row.detectability) : std::string("undefined");
        csv += "," + format_double(row.imperceptibility_value);
        for (const auto& [w, score] : row.stem_scores) {
            csv += "," + format_double(score.composite);
        }
        csv += "\n";
    }
    return csv;
}

}  // namespace stone
