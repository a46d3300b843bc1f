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
#include <set>
#include <string>
#include <vector>

#include "stone/tokenizer.hpp"

namespace stone {

/// One benchmark problem. `test_command` is a shell template; {code} expands
/// to the candidate source path and {dir} to the scratch directory.
struct TaskRecord {
    std::string task_id;
    std::string prompt;
    std::string reference_solution;
    std::string test_command;
    std::string language;
};

/// Loads newline-delimited JSON records. Every record needs all five fields;
/// errors name the offending field, id, or language.
std::vector<TaskRecord> load_dataset(const std::filesystem::path& path,
                                     const std::set<std::string>& known_languages);

/// Token-length statistics over the reference solutions.
struct DatasetStats {
    std::size_t problems = 0;
    std::size_t max_len = 0;
    std::size_t min_len = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
};

DatasetStats dataset_stats(const std::vector<TaskRecord>& dataset, const Tokenizer& tokenizer);

}  // namespace stone
