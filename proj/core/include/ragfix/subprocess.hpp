/*
 * Copyright 2026 The ragfix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ragfix {

struct ProcessResult {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
  bool timed_out = false;
  std::chrono::milliseconds duration{0};
};

struct ProcessOptions {
  std::filesystem::path working_dir;  // empty: inherit
  std::map<std::string, std::string> env_overrides;
  std::chrono::milliseconds timeout{30'000};
};

/// Runs argv[0] (looked up on PATH) to completion or until the timeout, capturing
/// both streams. Throws EnvironmentError when the executable cannot be started.
/// A timed-out child is killed; the result then has timed_out set.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options = {});

}  // namespace ragfix
