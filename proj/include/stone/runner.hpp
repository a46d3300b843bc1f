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
#include <string>

#include "stone/dataset.hpp"

namespace stone {

enum class Outcome { Pass, Fail, Timeout, Error };

std::string_view outcome_name(Outcome outcome);

struct ExecutionResult {
    Outcome outcome = Outcome::Error;
    int exit_code = -1;
    double seconds = 0.0;
    std::string stdout_tail;
    std::string stderr_tail;
};

/// Runs a task's test command against candidate code in a throwaway
/// directory under `work_root`. The candidate is written next to the
/// command's working directory, the command runs under /bin/sh with its
/// output captured, and the whole process group is killed at the timeout.
/// Desk-scale isolation only: temp dir, timeout, captured output. There is
/// no jail, so run only trusted benchmark tests.
ExecutionResult run_tests(const std::string& candidate_code, const TaskRecord& task,
                          double timeout_seconds, const std::filesystem::path& work_root);

}  // namespace stone
