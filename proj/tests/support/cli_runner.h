// Copyright 2026 The mrlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MRLAB_TESTS_SUPPORT_CLI_RUNNER_H_
#define MRLAB_TESTS_SUPPORT_CLI_RUNNER_H_

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace mrlab::testing {

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string ShellQuote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

// Scratch directory removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int serial = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("mrlab-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(serial++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() { std::filesystem::remove_all(path_); }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Runs `binary args...` through the shell with `env` prefixed
// (e.g. "MRLAB_SEQUENTIAL=1"), capturing stdout and stderr.
inline CliRun RunCli(const std::string& binary, const std::vector<std::string>& args,
                     const ScratchDir& scratch, const std::string& env = "") {
  static int counter = 0;
  const auto out_path = scratch / ("stdout" + std::to_string(counter));
  const auto err_path = scratch / ("stderr" + std::to_string(counter));
  ++counter;
  std::string cmd = env.empty() ? "env -u MRLAB_SEQUENTIAL " : "env " + env + " ";
  cmd += ShellQuote(binary);
  for (const auto& a : args) cmd += " " + ShellQuote(a);
  cmd += " >" + ShellQuote(out_path.string()) + " 2>" + ShellQuote(err_path.string());
  const int status = std::system(cmd.c_str());
  CliRun run;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.out = ReadFile(out_path);
  run.err = ReadFile(err_path);
  return run;
}

}  // namespace mrlab::testing

#endif  // MRLAB_TESTS_SUPPORT_CLI_RUNNER_H_
