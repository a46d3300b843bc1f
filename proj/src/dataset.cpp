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

#include "stone/dataset.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace stone {

namespace {

std::string require_field(const nlohmann::json& j, const char* field, std::size_t line_no) {
    if (!j.contains(field) || !j[field].is_string()) {
        throw std::runtime_error("dataset record on line " + std::to_string(line_no) +
                                 " is missing string field '" + field + "'");
    }
    return j[field].get<std::string>();
}

}  // namespace

std::vector<TaskRecord> load_dataset(const std::filesystem::path& path,
                                     const std::set<std::string>& known_languages) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open dataset file: " + path.string());
    }
    std::vector<TaskRecord> records;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("dataset line " + std::to_string(line_no) +
                                     " is not valid JSON: " + e.what());
        }
        TaskRecord record;
        record.task_id = require_field(j, "task_id", line_no);
        record.prompt = require_field(j, "prompt", line_no);
        record.reference_solution = require_field(j, "reference_solution", line_no);
        record.test_command = require_field(j, "test_command", line_no);
        record.language = require_field(j, "language", line_no);
        if (known_languages.count(record.language) == 0) {
            throw std::runtime_error("dataset record '" + record.task_id +
                                     "' has unknown language '" + record.language + "'");
        }
        if (!seen_ids.insert(record.task_id).second) {
            throw std::runtime_error("duplicate task_id '" + record.task_id + "' on line " +
                                     std::to_string(line_no));
        }
        records.push_back(std::move(record));
    }
    return records;
}

DatasetStats dataset_stats(const std::vector<TaskRecord>& dataset, const Tokenizer& tokenizer) {
    if (dataset.empty()) {
        throw std::invalid_argument("dataset is empty");
    }
    DatasetStats stats;
    stats.problems = dataset.size();
    std::vector<std::size_t> lengths;
    lengths.reserve(dataset.size());
    for (const TaskRecord& task : dataset) {
        lengths.push_back(tokenizer.encode(task.reference_solution).size());
    }
    stats.max_len = *std::max_element(lengths.begin(), lengths.end());
    stats.min_len = *std::min_element(lengths.begin(), lengths.end());
    double sum = 0.0;
    for (std::size_t len : lengths) sum += static_cast<double>(len);
    stats.mean = sum / static_cast<double>(lengths.size());
    if (lengths.size() > 1) {
        double sq = 0.0;
        for (std::size_t len : lengths) {
            const double d = static_cast<double>(len) - stats.mean;
            sq += d * d;
        }
        stats.stddev = std::sqrt(sq / static_cast<double>(lengths.size() - 1));
    }
    return stats;
}

}  // namespace stone
