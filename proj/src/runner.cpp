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

#include "stone/runner.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace stone {

namespace {

std::string file_extension(const std::string& language) {
    if (language == "python") return ".py";
    if (language == "cpp") return ".cpp";
    if (language == "java") return ".java";
    return ".txt";
}

void replace_all(std::string& text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
}

std::string read_tail(const std::filesystem::path& path, std::size_t max_bytes = 4096) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    const auto keep = std::min(size, max_bytes);
    in.seekg(static_cast<std::streamoff>(size - keep));
    std::string tail(keep, '\0');
    in.read(tail.data(), static_cast<std::streamsize>(keep));
    return tail;
}

std::filesystem::path make_scratch_dir(const std::filesystem::path& work_root) {
    static std::atomic<std::uint64_t> counter{0};
    std::filesystem::create_directories(work_root);
    for (;;) {
        auto dir = work_root / ("job-" + std::to_string(::getpid()) + "-" +
                                std::to_string(counter.fetch_add(1)));
        std::error_code ec;
        if (std::filesystem::create_directory(dir, ec)) return dir;
        if (ec && ec != std::errc::file_exists) {
            throw std::runtime_error("cannot create scratch directory: " + dir.string());
        }
    }
}

}  // namespace

std::string_view outcome_name(Outcome outcome) {
    switch (outcome) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Timeout: return "timeout";
        case Outcome::Error: return "error";
    }
    throw std::logic_error("unknown outcome");
}

ExecutionResult run_tests(const std::string& candidate_code, const TaskRecord& task,
                          double timeout_seconds, const std::filesystem::path& work_root) {
    ExecutionResult result;
    const auto scratch = make_scratch_dir(work_root);
    const auto code_path = scratch / ("candidate" + file_extension(task.language));
    {
        std::ofstream out(code_path, std::ios::binary);
        if (!out) {
            result.stderr_tail = "cannot write candidate file";
            return result;
        }
        out << candidate_code;
    }

    std::string command = task.test_command;
    replace_all(command, "{code}", code_path.string());
    replace_all(command, "{dir}", scratch.string());

    const auto stdout_path = scratch / "stdout.log";
    const auto stderr_path = scratch / "stderr.log";

    const auto start = std::chrono::steady_clock::now();
    const pid_t pid = ::fork();
    if (pid < 0) {
        result.stderr_tail = "fork failed";
        return result;
    }
    if (pid == 0) {
        ::setpgid(0, 0);  // own process group, so the timeout can kill children too
        if (::chdir(scratch.c_str()) != 0) _exit(127);
        const int out_fd = ::open(stdout_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        const int err_fd = ::open(stderr_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (out_fd >= 0) ::dup2(out_fd, STDOUT_FILENO);
        if (err_fd >= 0) ::dup2(err_fd, STDERR_FILENO);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    const auto deadline =
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(timeout_seconds));
    bool timed_out = false;
    int status = 0;
    for (;;) {
        const pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0) {
            result.stderr_tail = "waitpid failed";
            return result;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            timed_out = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.stdout_tail = read_tail(stdout_path);
    result.stderr_tail = read_tail(stderr_path);

    if (timed_out) {
        result.outcome = Outcome::Timeout;
        return result;
    }
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
        // 127: the shell could not launch the command at all.
        result.outcome = result.exit_code == 0    ? Outcome::Pass
                         : result.exit_code == 127 ? Outcome::Error
                                                   : Outcome::Fail;
    } else {
        result.outcome = Outcome::Error;
    }
    return result;
}

}  // namespace stone
