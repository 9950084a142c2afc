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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "ragfix/corpus.hpp"
#include "ragfix/embedding.hpp"
#include "ragfix/java_compiler.hpp"
#include "ragfix/llm_client.hpp"
#include "ragfix/repair_loop.hpp"

namespace ragfix::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEnvironment = 3;
inline constexpr int kExitSemanticOnly = 10;
inline constexpr int kExitRepairFailed = 11;
inline constexpr int kExitAlreadyCompiles = 12;

/// Settings shared by every subcommand. Values come from the config file first;
/// command-line flags override them. Secrets are never stored here: only the
/// names of the environment variables that hold them.
struct AppConfig {
  ChunkingConfig chunking;
  EmbeddingProviderConfig embedding;
  LlmConfig llm;
  CompilerConfig compiler;
  int max_iterations = 3;
  std::size_t top_k = kDefaultTopK;
  std::size_t token_budget = kDefaultTokenBudget;
  std::size_t workers = 1;
  std::filesystem::path index_path;
  std::filesystem::path cases_dir;
  std::filesystem::path logs_dir;
  std::filesystem::path templates_dir;
};

/// Reads an INI file with sections [corpus], [embedding], [llm], [compiler],
/// [repair] and [paths]. Unknown keys and malformed values throw ConfigError.
AppConfig load_app_config(const std::filesystem::path& path);

RepairConfig make_repair_config(const AppConfig& app, Pipeline pipeline);

}  // namespace ragfix::cli
