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

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "stone/demo.hpp"
#include "stone/detector.hpp"
#include "stone/pipeline.hpp"

namespace {

using namespace stone;

struct Options {
    // global
    std::string dataset_path;
    std::string provider_spec = "toy";
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::string out_dir = "out";
    std::string language = "python";
    std::string profile_file;  // optional override of the builtin profile
    std::string vocab_file;    // decode table for remote providers

    // watermark params
    double gamma = 0.5;
    double delta = 1.0;
    std::string gate = "non-syntax";
    double entropy_threshold = 0.9;
    std::size_t top_k = 50;
    double temperature = 1.0;
    std::uint64_t seed_key = 0;
    std::size_t max_tokens = 256;
    double z_threshold = kDefaultZThreshold;

    // evaluate / sweep
    std::size_t samples = 5;
    std::vector<std::size_t> k_values = {1, 5};
    std::vector<std::string> weight_specs;
    bool weight_grid_flag = false;
    double test_timeout = 10.0;
    bool no_exec = false;
    std::vector<double> gammas;
    std::vector<double> deltas;

    double syntax_burst = 0.15;
    int remote_timeout_ms = 5000;
    int remote_attempts = 3;
};

LanguageProfile load_language_profile(const Options& opt) {
    if (!opt.profile_file.empty()) {
        return LanguageProfile::from_json_file(opt.profile_file);
    }
    return LanguageProfile::builtin(opt.language);
}

std::vector<std::string> load_decode_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
    nlohmann::json j;
    in >> j;
    return j.get<std::vector<std::string>>();
}

struct World {
    VocabularyProfile profile;
    Tokenizer tokenizer;
    std::unique_ptr<LogitProvider> provider;
};

World make_world(const Options& opt, bool need_provider) {
    const LanguageProfile lang = load_language_profile(opt);
    std::vector<std::string> table =
        opt.vocab_file.empty() ? demo_decode_table(opt.language) : load_decode_table(opt.vocab_file);
    World world{VocabularyProfile(lang, table), Tokenizer(table), nullptr};
    if (!need_provider) return world;
    if (opt.provider_spec == "toy") {
        world.provider = demo_model(world.profile, opt.seed, opt.syntax_burst);
    } else if (opt.provider_spec.rfind("remote:", 0) == 0) {
        RemoteConfig config;
        config.url = opt.provider_spec.substr(7);
        config.timeout_ms = opt.remote_timeout_ms;
        config.max_attempts = opt.remote_attempts;
        world.provider = std::make_unique<RemoteProvider>(config);
        if (world.provider->vocab_size() != world.profile.vocab_size()) {
            throw std::invalid_argument(
                "remote vocabulary size " + std::to_string(world.provider->vocab_size()) +
                " does not match the profile (" + std::to_string(world.profile.vocab_size()) +
                "); pass the server's decode table via --vocab-file");
        }
    } else {
        throw std::invalid_argument("unknown provider '" + opt.provider_spec +
                                    "' (expected 'toy' or 'remote:URL')");
    }
    return world;
}

WatermarkParams make_params(const Options& opt) {
    WatermarkParams params;
    params.gamma = opt.gamma;
    params.delta = opt.delta;
    params.key = SeedKey{opt.seed_key};
    params.gate = gate_from_name(opt.gate);
    params.entropy_threshold = opt.entropy_threshold;
    params.top_k = opt.top_k;
    params.temperature = opt.temperature;
    params.max_tokens = opt.max_tokens;
    return params;
}

std::vector<StemWeights> parse_weights(const std::vector<std::string>& specs) {
    std::vector<StemWeights> weights;
    for (const std::string& spec : specs) {
        std::istringstream in(spec);
        StemWeights w{};
        char sep1 = 0, sep2 = 0;
        if (!(in >> w.alpha >> sep1 >> w.beta >> sep2 >> w.zeta) || sep1 != ',' || sep2 != ',') {
            throw std::invalid_argument("weight spec must look like a,b,z: " + spec);
        }
        w.validate();
        weights.push_back(w);
    }
    if (weights.empty()) weights.push_back(StemWeights::equal());
    return weights;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<TokenSequence> load_corpus(const std::string& path, const Tokenizer& tokenizer) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::vector<TokenSequence> corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, true);
        if (j.contains("tokens")) {
            corpus.emplace_back(j["tokens"].get<std::vector<TokenId>>());
        } else if (j.contains("text")) {
            corpus.push_back(tokenizer.encode(j["text"].get<std::string>()));
        } else {
            throw std::runtime_error("corpus line " + std::to_string(line_no) +
                                     " needs a 'tokens' or 'text' field");
        }
    }
    return corpus;
}

int cmd_classify(const Options& opt, const std::string& lexeme, const std::string& text,
                 const std::string& file) {
    const LanguageProfile lang = load_language_profile(opt);
    if (!lexeme.empty()) {
        std::cout << nlohmann::json{{"lexeme", lexeme},
                                    {"category", category_name(classify_lexeme(lang, lexeme))}}
                         .dump()
                  << "\n";
        return 0;
    }
    const std::string input = !file.empty() ? read_file(file) : text;
    if (input.empty()) throw std::invalid_argument("classify needs --lexeme, --text or --file");
    const std::vector<std::string> table =
        opt.vocab_file.empty() ? demo_decode_table(opt.language) : load_decode_table(opt.vocab_file);
    const Tokenizer tokenizer(table);
    const VocabularyProfile profile(lang, table);
    const TokenSequence seq = tokenizer.encode(input);
    nlohmann::json tokens = nlohmann::json::array();
    for (TokenId id : seq.tokens) {
        tokens.push_back({{"id", id},
                          {"text", profile.decode(id)},
                          {"category", category_name(profile.category(id))}});
    }
    const CategoryCounts hist = category_histogram(profile, seq);
    nlohmann::json histogram;
    for (std::size_t c = 0; c < kNumCategories; ++c) {
        histogram[std::string(category_name(static_cast<TokenCategory>(c)))] = hist.counts[c];
    }
    std::cout << nlohmann::json{{"tokens", tokens}, {"histogram", histogram}}.dump(2) << "\n";
    return 0;
}

int cmd_partition_demo(const Options& opt, std::size_t vocab_size, TokenId prev,
                       std::size_t head) {
    const std::uint64_t seed = seed_from_token(prev, SeedKey{opt.seed_key});
    const VocabPartition partition = split(vocab_size, opt.gamma, seed);
    const VocabPartition again = split(vocab_size, opt.gamma, seed);
    std::vector<TokenId> ids = partition.green_ids();
    if (ids.size() > head) ids.resize(head);
    std::cout << nlohmann::json{{"prev_token", prev},
                                {"seed", seed},
                                {"vocab_size", vocab_size},
                                {"gamma", opt.gamma},
                                {"green_size", partition.green_size()},
                                {"red_size", partition.red_size()},
                                {"green_head", ids},
                                {"recompute_identical",
                                 partition.green_mask() == again.green_mask()}}
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_generate(const Options& opt, const std::string& prompt, const std::string& prompt_file,
                 bool show_steps) {
    World world = make_world(opt, true);
    const std::string prompt_text = !prompt_file.empty() ? read_file(prompt_file) : prompt;
    if (prompt_text.empty()) throw std::invalid_argument("generate needs --prompt or --prompt-file");
    const TokenSequence prompt_seq = world.tokenizer.encode(prompt_text);
    SplitMix64 rng(mix64(opt.seed));
    const GenerationRecord record =
        generate(*world.provider, prompt_seq, make_params(opt), world.profile, rng);
    const DilutionStats dilution = dilution_stats(record, world.profile);
    nlohmann::json out{{"complete", record.complete},
                       {"tokens", record.output.tokens},
                       {"text", world.tokenizer.decode(record.output)},
                       {"provider_calls", world.provider->call_count()},
                       {"gated_steps", dilution.gated},
                       {"gated_syntax_final", dilution.gated_syntax_final}};
    if (!record.error.empty()) out["error"] = record.error;
    if (show_steps) {
        nlohmann::json steps = nlohmann::json::array();
        for (const StepLog& s : record.steps) {
            nlohmann::json j{{"candidate", s.candidate},
                             {"gated", s.gated},
                             {"token", s.token},
                             {"base_prob", s.base_prob},
                             {"final_prob", s.final_prob}};
            if (s.partition_seed) j["partition_seed"] = *s.partition_seed;
            steps.push_back(std::move(j));
        }
        out["steps"] = std::move(steps);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_detect(const Options& opt, const std::string& input, bool token_ids, bool full,
               bool trace) {
    World world = make_world(opt, false);
    const std::string content = read_file(input);
    DetectionReport report;
    if (token_ids) {
        const nlohmann::json j = nlohmann::json::parse(content);
        TokenSequence seq(j.get<std::vector<TokenId>>());
        report = full ? detect_full(seq, world.profile.vocab_size(), opt.gamma,
                                    SeedKey{opt.seed_key}, opt.z_threshold)
                      : detect_stone(seq, world.profile, opt.gamma, SeedKey{opt.seed_key},
                                     opt.z_threshold);
    } else if (full) {
        report = detect_full(world.tokenizer.encode(content), world.profile.vocab_size(),
                             opt.gamma, SeedKey{opt.seed_key}, opt.z_threshold);
        report.input_kind = "text";
    } else {
        report = detect_from_text(content, world.tokenizer, world.profile, opt.gamma,
                                  SeedKey{opt.seed_key}, opt.z_threshold);
    }
    std::cout << report_to_json(report, trace) << "\n";
    return 0;
}

int cmd_entropy(const Options& opt, const std::string& corpus_path, double threshold,
                bool with_selection, std::size_t selection_top_k, bool as_csv) {
    World world = make_world(opt, true);
    const std::vector<TokenSequence> corpus = load_corpus(corpus_path, world.tokenizer);
    const CategoryEntropyMeans means =
        category_entropy_means(*world.provider, corpus, world.profile);
    if (as_csv) {
        // plot-ready: one bar per category
        std::cout << "category,count,mean_entropy\n";
        for (std::size_t c = 0; c < kNumCategories; ++c) {
            const auto cat = static_cast<TokenCategory>(c);
            std::cout << category_name(cat) << "," << means.counts[c] << ",";
            if (const auto m = means.mean(cat)) std::cout << *m;
            std::cout << "\n";
        }
        return 0;
    }
    nlohmann::json per_category;
    for (std::size_t c = 0; c < kNumCategories; ++c) {
        const auto cat = static_cast<TokenCategory>(c);
        nlohmann::json entry{{"count", means.counts[c]}};
        if (const auto m = means.mean(cat)) {
            entry["mean_entropy"] = *m;
        }
        per_category[std::string(category_name(cat))] = std::move(entry);
    }
    nlohmann::json out{{"sequences", corpus.size()}, {"per_category", per_category}};
    if (with_selection) {
        const SelectionStats stats = sweet_selection_stats(*world.provider, corpus,
                                                           world.profile, threshold,
                                                           selection_top_k);
        nlohmann::json cats;
        for (std::size_t c = 0; c < kNumCategories; ++c) {
            cats[std::string(category_name(static_cast<TokenCategory>(c)))] =
                stats.category_counts[c];
        }
        out["selection"] = {{"threshold", threshold},
                            {"total_steps", stats.total_steps},
                            {"selected", stats.selected},
                            {"selected_fraction", stats.selected_fraction()},
                            {"syntax_fraction_among_selected", stats.syntax_fraction()},
                            {"selected_categories", cats}};
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

PipelineOptions make_pipeline_options(const Options& opt) {
    PipelineOptions po;
    po.params = make_params(opt);
    po.z_threshold = opt.z_threshold;
    po.samples_per_task = opt.samples;
    po.k_values = opt.k_values;
    po.stem_k = opt.k_values.front();
    po.weight_settings = parse_weights(opt.weight_specs);
    po.include_weight_grid = opt.weight_grid_flag;
    po.workers = opt.workers;
    po.master_seed = opt.seed;
    po.test_timeout_seconds = opt.test_timeout;
    po.run_executions = !opt.no_exec;
    return po;
}

int cmd_evaluate(const Options& opt) {
    if (opt.dataset_path.empty()) throw std::invalid_argument("evaluate needs --dataset");
    World world = make_world(opt, true);
    const auto known = LanguageProfile::builtin_languages();
    const auto dataset = load_dataset(opt.dataset_path, {known.begin(), known.end()});
    const PipelineOptions po = make_pipeline_options(opt);
    const std::filesystem::path work = std::filesystem::path(opt.out_dir) / "work";
    const PipelineReport report =
        run_pipeline(dataset, *world.provider, world.profile, world.tokenizer, po, work);
    const auto run_dir = write_pipeline_report(report, opt.out_dir);
    std::cout << "report written to " << run_dir.string() << "\n";
    for (const auto& [k, v] : report.pass_at_k_values) {
        std::cout << "pass@" << k << " = " << v << "\n";
    }
    if (report.detectability) {
        std::cout << "detectability (AUROC) = " << *report.detectability << "\n";
    } else {
        std::cout << "detectability undefined (empty pool)\n";
    }
    std::cout << "imperceptibility = " << report.imperceptibility_value << "\n";
    for (const auto& [w, score] : report.stem_scores) {
        std::cout << "stem(" << w.alpha << "," << w.beta << "," << w.zeta
                  << ") = " << score.composite << "\n";
    }
    return 0;
}

int cmd_sweep(const Options& opt) {
    if (opt.dataset_path.empty()) throw std::invalid_argument("sweep needs --dataset");
    if (opt.gammas.empty() || opt.deltas.empty()) {
        throw std::invalid_argument("sweep needs --gammas and --deltas");
    }
    World world = make_world(opt, true);
    const auto known = LanguageProfile::builtin_languages();
    const auto dataset = load_dataset(opt.dataset_path, {known.begin(), known.end()});
    SweepSpec spec;
    spec.gammas = opt.gammas;
    spec.deltas = opt.deltas;
    const std::filesystem::path out_dir(opt.out_dir);
    const auto rows = sweep(dataset, *world.provider, world.profile, world.tokenizer,
                            make_pipeline_options(opt), spec, out_dir / "work");
    std::filesystem::create_directories(out_dir);
    std::filesystem::path csv_path;
    unsigned index = 1;
    for (;; ++index) {
        csv_path = out_dir / ("sweep-" + std::to_string(index) + ".csv");
        if (!std::filesystem::exists(csv_path)) break;
    }
    std::ofstream csv(csv_path, std::ios::binary);
    csv << sweep_to_csv(rows);
    std::cout << "sweep written to " << csv_path.string() << "\n";
    if (opt.weight_grid_flag || opt.weight_specs.size() > 1) {
        const auto grid_path =
            out_dir / ("sweep-" + std::to_string(index) + "-weights.csv");
        std::ofstream grid_csv(grid_path, std::ios::binary);
        grid_csv << sweep_weights_to_csv(rows);
        std::cout << "per-weight composites written to " << grid_path.string() << "\n";
    }
    return 0;
}

// Reference implementation of the wire contract, backed by the toy model.
// Useful for exercising remote mode without a real inference server.
int cmd_serve(const Options& opt, int port) {
    if (opt.provider_spec != "toy") {
        throw std::invalid_argument("serve hosts the built-in toy provider only");
    }
    World world = make_world(opt, true);
    LogitProvider& provider = *world.provider;

    httplib::Server server;
    server.Get("/v1/meta", [&provider](const httplib::Request&, httplib::Response& res) {
        res.set_content(nlohmann::json{{"vocab_size", provider.vocab_size()}}.dump(),
                        "application/json");
    });
    server.Post("/v1/logits", [&provider](const httplib::Request& req,
                                          httplib::Response& res) {
        try {
            const auto j = nlohmann::json::parse(req.body);
            TokenSequence context(j.at("context").get<std::vector<TokenId>>());
            validate_sequence(context, provider.vocab_size());
            const nlohmann::json out{{"request_id", j.at("request_id")},
                                     {"vocab_size", provider.vocab_size()},
                                     {"logits", provider.logits(context)}};
            res.set_content(out.dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
    });

    int bound = port;
    if (port == 0) {
        bound = server.bind_to_any_port("127.0.0.1");
        if (bound <= 0) throw std::runtime_error("cannot bind a port on 127.0.0.1");
    } else if (!server.bind_to_port("127.0.0.1", port)) {
        throw std::runtime_error("cannot bind 127.0.0.1:" + std::to_string(port));
    }
    std::cout << nlohmann::json{{"listening", "127.0.0.1"},
                                {"port", bound},
                                {"vocab_size", provider.vocab_size()}}
                     .dump()
              << std::endl;
    server.listen_after_bind();
    return 0;
}

int cmd_stats(const Options& opt) {
    if (opt.dataset_path.empty()) throw std::invalid_argument("stats needs --dataset");
    const auto known = LanguageProfile::builtin_languages();
    const auto dataset = load_dataset(opt.dataset_path, {known.begin(), known.end()});
    const Tokenizer tokenizer = demo_tokenizer(opt.language);
    const DatasetStats stats = dataset_stats(dataset, tokenizer);
    std::cout << nlohmann::json{{"problems", stats.problems},
                                {"max", stats.max_len},
                                {"min", stats.min_len},
                                {"mean", stats.mean},
                                {"std", stats.stddev}}
                     .dump(2)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"syntax-preserving code watermarking toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config");

    Options opt;
    app.add_option("--dataset", opt.dataset_path, "dataset file (JSON lines)");
    app.add_option("--provider", opt.provider_spec, "toy or remote:URL");
    app.add_option("--seed", opt.seed, "master rng seed");
    app.add_option("--workers", opt.workers, "worker pool width");
    app.add_option("--out-dir", opt.out_dir, "report output directory");
    app.add_option("--language", opt.language, "python | cpp | java");
    app.add_option("--profile-file", opt.profile_file, "language profile JSON override");
    app.add_option("--vocab-file", opt.vocab_file, "decode table JSON (remote providers)");
    app.add_option("--gamma", opt.gamma, "green list fraction");
    app.add_option("--delta", opt.delta, "green logit boost");
    app.add_option("--gate", opt.gate, "always | non-syntax | entropy-threshold");
    app.add_option("--entropy-threshold", opt.entropy_threshold, "gate threshold in nats");
    app.add_option("--top-k", opt.top_k, "top-k restriction");
    app.add_option("--temperature", opt.temperature, "softmax temperature");
    app.add_option("--seed-key", opt.seed_key, "shared watermark key");
    app.add_option("--max-tokens", opt.max_tokens, "generation length cap");
    app.add_option("--z-threshold", opt.z_threshold, "detection verdict threshold");
    app.add_option("--syntax-burst", opt.syntax_burst, "toy model syntax burst fraction");
    app.add_option("--remote-timeout-ms", opt.remote_timeout_ms, "remote provider timeout");
    app.add_option("--remote-attempts", opt.remote_attempts, "remote transport attempts");

    std::string lexeme, text, file;
    auto* classify = app.add_subcommand("classify", "classify lexemes or tokenized text");
    classify->add_option("--lexeme", lexeme, "classify a single lexeme");
    classify->add_option("--text", text, "classify every token of a text");
    classify->add_option("--file", file, "classify every token of a file");

    std::size_t vocab_size = 256, head = 16;
    TokenId prev_token = 0;
    auto* partition_demo =
        app.add_subcommand("partition-demo", "show the green/red split for one step");
    partition_demo->add_option("--vocab-size", vocab_size, "vocabulary size");
    partition_demo->add_option("--prev-token", prev_token, "seeding token id");
    partition_demo->add_option("--head", head, "how many green ids to print");

    std::string prompt, prompt_file;
    bool show_steps = false;
    auto* generate_cmd = app.add_subcommand("generate", "watermarked generation");
    generate_cmd->add_option("--prompt", prompt, "prompt text");
    generate_cmd->add_option("--prompt-file", prompt_file, "prompt file");
    generate_cmd->add_flag("--steps", show_steps, "include the per-step log");

    std::string detect_input;
    bool token_ids = false, detect_all = false, trace = false;
    auto* detect_cmd = app.add_subcommand("detect", "model-free watermark detection");
    detect_cmd->add_option("--input", detect_input, "raw code file or token-id JSON array")
        ->required();
    detect_cmd->add_flag("--token-ids", token_ids, "input is a JSON array of token ids");
    detect_cmd->add_flag("--full", detect_all, "count every token (baseline statistic)");
    detect_cmd->add_flag("--trace", trace, "include the per-token trace");

    std::string corpus_path;
    double sel_threshold = 0.9;
    bool with_selection = false, entropy_csv = false;
    std::size_t selection_top_k = 0;
    auto* entropy_cmd = app.add_subcommand("entropy", "per-category entropy analysis");
    entropy_cmd->add_option("--corpus", corpus_path, "JSONL corpus ('tokens' or 'text' lines)")
        ->required();
    entropy_cmd->add_flag("--selection", with_selection, "add threshold selection statistics");
    entropy_cmd->add_option("--threshold", sel_threshold, "selection entropy threshold");
    entropy_cmd->add_option("--selection-top-k", selection_top_k,
                            "restrict the measured distribution (0 = raw)");
    entropy_cmd->add_flag("--csv", entropy_csv, "plot-ready per-category CSV");

    int serve_port = 0;
    auto* serve_cmd = app.add_subcommand("serve", "host the toy model on the wire contract");
    serve_cmd->add_option("--port", serve_port, "port to bind (0 picks a free one)");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "full pipeline with composite scores");
    evaluate_cmd->add_option("--samples", opt.samples, "generations per task");
    evaluate_cmd->add_option("--k", opt.k_values, "pass@k values")->delimiter(',');
    evaluate_cmd->add_option("--weights", opt.weight_specs,
                             "weight settings a,b,z (repeatable)");
    evaluate_cmd->add_flag("--weight-grid", opt.weight_grid_flag,
                           "also score the full weight grid");
    evaluate_cmd->add_option("--test-timeout", opt.test_timeout, "per-test timeout seconds");
    evaluate_cmd->add_flag("--no-exec", opt.no_exec, "skip test execution");

    auto* sweep_cmd = app.add_subcommand("sweep", "gamma/delta grid of pipeline runs");
    sweep_cmd->add_option("--gammas", opt.gammas, "gamma values")->delimiter(',');
    sweep_cmd->add_option("--deltas", opt.deltas, "delta values")->delimiter(',');
    sweep_cmd->add_option("--samples", opt.samples, "generations per task");
    sweep_cmd->add_option("--k", opt.k_values, "pass@k values")->delimiter(',');
    sweep_cmd->add_option("--weights", opt.weight_specs, "weight settings a,b,z (repeatable)");
    sweep_cmd->add_flag("--weight-grid", opt.weight_grid_flag,
                        "also score the full weight grid");
    sweep_cmd->add_option("--test-timeout", opt.test_timeout, "per-test timeout seconds");
    sweep_cmd->add_flag("--no-exec", opt.no_exec, "skip test execution");

    auto* stats_cmd = app.add_subcommand("stats", "dataset token-length statistics");
    (void)stats_cmd;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (classify->parsed()) return cmd_classify(opt, lexeme, text, file);
        if (partition_demo->parsed()) {
            return cmd_partition_demo(opt, vocab_size, prev_token, head);
        }
        if (generate_cmd->parsed()) return cmd_generate(opt, prompt, prompt_file, show_steps);
        if (detect_cmd->parsed()) {
            return cmd_detect(opt, detect_input, token_ids, detect_all, trace);
        }
        if (entropy_cmd->parsed()) {
            return cmd_entropy(opt, corpus_path, sel_threshold, with_selection,
                               selection_top_k, entropy_csv);
        }
        if (serve_cmd->parsed()) return cmd_serve(opt, serve_port);
        if (evaluate_cmd->parsed()) return cmd_evaluate(opt);
        if (sweep_cmd->parsed()) return cmd_sweep(opt);
        if (stats_cmd->parsed()) return cmd_stats(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
