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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragfix/embedding.hpp"
#include "ragfix/java_compiler.hpp"
#include "ragfix/llm_client.hpp"
#include "ragfix/prompting.hpp"
#include "ragfix/vector_index.hpp"

namespace ragfix {

enum class RepairStatus { kCompiled, kSemanticOnly, kFailed, kAlreadyCompiles };

std::string_view to_string(RepairStatus s) noexcept;
RepairStatus repair_status_from_string(std::string_view name);

struct RepairConfig {
  Pipeline pipeline = Pipeline::kRails;
  int max_iterations = 3;
  std::size_t top_k = kDefaultTopK;
  std::filesystem::path index_path;  // rails only
  EmbeddingProviderConfig embedding;  // must match the provider that built the index
  LlmConfig llm;
  CompilerConfig compiler;           // work_dir is the root for per-session directories
  std::vector<std::string> expected_external_packages;
  std::size_t token_budget = kDefaultTokenBudget;
  std::filesystem::path templates_dir;  // empty: embedded defaults
  std::filesystem::path logs_dir;       // empty: no per-case JSONL log

  void validate() const;
};

struct IterationRecord {
  int turn = 1;
  PromptBundle prompt;
  std::string retrieval_query;
  std::vector<SearchHit> retrieval_hits;
  std::string model_reply;
  std::string extracted_code;
  CompileResult compile_result;
  std::optional<std::string> error;  // generation/extraction/compile failure, if any

  double retrieval_ms = 0.0;
  double prompt_ms = 0.0;
  double generation_ms = 0.0;
  double compile_ms = 0.0;
  double turn_latency_ms = 0.0;

  /// Retrieval + prompt construction + model inference; compile time excluded.
  double iteration_latency_ms() const noexcept { return retrieval_ms + prompt_ms + generation_ms; }
};

struct RepairOutcome {
  RepairStatus status = RepairStatus::kFailed;
  std::string final_code;
  std::vector<IterationRecord> iterations;
  CompileResult initial_compile;
  std::optional<std::string> error;
  double total_latency_ms = 0.0;

  std::size_t model_calls() const noexcept;
  bool model_produced_output() const noexcept;
};

/// Status implied by the last compile of `final_code`: compiled on success;
/// semantic_only when there is at least one error and every error is a miss on an
/// expected external package; failed otherwise.
RepairStatus derive_status(const CompileResult& final_compile, std::string_view final_code,
                           const std::vector<std::string>& expected_external_packages);

/// Compile, retrieve, prompt, generate, extract, recompile; repeat until the file
/// compiles, only expected external packages are missing, or max_iterations
/// model calls have been made. One session is sequential; distinct sessions can
/// share one engine from several threads.
class RepairEngine {
 public:
  RepairEngine(RepairConfig config, std::shared_ptr<TextGenerator> generator,
               std::shared_ptr<const VectorIndex> index = nullptr, std::shared_ptr<Embedder> embedder = nullptr);

  /// Loads index, embedder and generator as described by config. Throws
  /// ConfigError/EnvironmentError/FormatError/CorruptionError before any model call.
  static RepairEngine from_config(const RepairConfig& config);

  /// Environment errors (compiler missing) propagate. Generation and compile
  /// failures inside the loop end the session as failed with `error` set.
  RepairOutcome repair(std::string_view source, std::string_view case_id,
                       const std::vector<std::string>* expected_external_packages = nullptr) const;

  const RepairConfig& config() const noexcept { return config_; }
  const VectorIndex* index() const noexcept { return index_.get(); }
  TextGenerator& generator() const noexcept { return *generator_; }

 private:
  CompilerConfig compiler_for(std::string_view case_id, int turn) const;
  std::vector<SearchHit> retrieve(std::string_view code, const CompileResult& compile, std::string& query) const;
  void write_session_log(std::string_view case_id, const RepairOutcome& outcome) const;

  RepairConfig config_;
  std::shared_ptr<TextGenerator> generator_;
  std::shared_ptr<const VectorIndex> index_;
  std::shared_ptr<Embedder> embedder_;
  PromptBuilder prompts_;
};

RepairOutcome repair(std::string_view source, std::string_view case_id, const RepairConfig& config);

/// Human-readable transcript of one session, as appended to log_<pipeline>.txt.
std::string render_transcript(std::string_view case_id, Pipeline pipeline, const RepairOutcome& outcome);

void to_json(nlohmann::json& j, const IterationRecord& r);
void from_json(const nlohmann::json& j, IterationRecord& r);
void to_json(nlohmann::json& j, const RepairOutcome& o);
void from_json(const nlohmann::json& j, RepairOutcome& o);

}  // namespace ragfix
