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

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragfix/repair_loop.hpp"

namespace ragfix {

/// The eight case families of the import-repair suite, in table order.
enum class Category {
  kStandardJdk,
  kDeprecatedApi,
  kSwingUi,
  kNioFile,
  kExternalCommons,
  kExternalGsonText,
  kJavafxGui,
  kCustomUtility,
};

inline constexpr std::array<Category, 8> kAllCategories = {
    Category::kStandardJdk,     Category::kDeprecatedApi,    Category::kSwingUi,   Category::kNioFile,
    Category::kExternalCommons, Category::kExternalGsonText, Category::kJavafxGui, Category::kCustomUtility};

std::string_view to_string(Category c) noexcept;
/// Row label used in tables and on radar axes.
std::string_view label(Category c) noexcept;
Category category_from_string(std::string_view name);

struct CaseSpec {
  std::string case_id;
  Category category = Category::kStandardJdk;
  std::string source;
  std::string source_file;  // file name inside the case directory
  std::vector<std::string> expected_imports;
  std::vector<std::string> expected_external_packages;
  std::vector<std::string> required_identifiers;
};

/// Parses one case.json document. Throws ConfigError naming the case and field.
CaseSpec parse_case_metadata(const nlohmann::json& meta, std::string_view where);

/// Loads cases/<case_id>/{*.java, case.json} in directory order. With `probe`,
/// each source is compiled once and a case that already compiles is rejected.
std::vector<CaseSpec> load_cases(const std::filesystem::path& dir, const CompilerConfig* probe = nullptr);

struct SemanticVerdict {
  bool semantic_correct = false;
  bool hallucination = false;
  friend bool operator==(const SemanticVerdict&, const SemanticVerdict&) = default;
};

/// Correct: compiled or semantic_only, every expected import present (exact or
/// package wildcard), every required identifier present outside comments.
/// Hallucination: the model produced output but a required identifier is gone.
SemanticVerdict score_semantic(const CaseSpec& spec, const RepairOutcome& outcome);

struct CaseResult {
  std::string case_id;
  Category category = Category::kStandardJdk;
  Pipeline pipeline = Pipeline::kBaseline;
  RepairOutcome outcome;
  bool semantic_correct = false;
  bool hallucination = false;
  double wall_time_ms = 0.0;
};

struct CategoryScore {
  std::size_t correct = 0;
  std::size_t total = 0;
  double fraction() const noexcept { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct OutcomeCounts {
  std::size_t total = 0;
  std::size_t compiled = 0;
  std::size_t semantic_only = 0;
  std::size_t failed = 0;
  std::size_t already_compiles = 0;
  std::size_t hallucinated = 0;
  std::size_t semantic_correct = 0;
  std::size_t compiled_incorrect = 0;  // compiled, yet not semantically correct
};

struct LatencySummary {
  double mean_wall_ms = 0.0;       // per case, end to end
  double mean_iteration_ms = 0.0;  // retrieval + prompt + generation, per iteration
  double mean_retrieval_ms = 0.0;  // per iteration
  double mean_generation_ms = 0.0;
  double mean_compile_ms = 0.0;
  std::size_t iterations = 0;
};

struct PipelineSummary {
  std::map<Category, CategoryScore> categories;
  OutcomeCounts counts;
  LatencySummary latency;
};

struct BenchEnvironment {
  std::string compiler_version;
  std::string provider;
  std::string index_sha256;
  std::string embedding;
  std::string template_version;
  std::string generated_at;
};

struct BenchReport {
  std::vector<Pipeline> pipelines;
  std::vector<CaseResult> results;  // case order, then pipeline order
  std::map<Pipeline, PipelineSummary> summaries;
  BenchEnvironment environment;

  /// Rebuilds `summaries` from `results`.
  void summarize();
  const PipelineSummary* summary(Pipeline p) const;
};

struct BenchmarkOptions {
  std::map<Pipeline, std::shared_ptr<const RepairEngine>> engines;
  std::size_t workers = 1;
  std::filesystem::path out_dir;  // log_<pipeline>.txt goes here; empty: none
};

/// Runs every (case, pipeline) pair once, scoring each result. Errors inside a case
/// are recorded on that case and never stop the run.
BenchReport run_benchmark(const std::vector<CaseSpec>& cases, const std::vector<Pipeline>& pipelines,
                          const BenchmarkOptions& options);

std::string render_table(const BenchReport& report);
/// Self-contained SVG, one axis per category present in the report and one closed
/// polygon per pipeline. Throws InputError with fewer than three categories.
std::string render_radar_svg(const BenchReport& report);

void emit_report(const BenchReport& report, const std::filesystem::path& path);
void emit_table(const BenchReport& report, const std::filesystem::path& path);
void emit_radar_svg(const BenchReport& report, const std::filesystem::path& path);
BenchReport load_report(const std::filesystem::path& path);

/// SHA-256 of the report JSON with timings and the timestamp removed.
std::string report_digest(const BenchReport& report);

void to_json(nlohmann::json& j, const CaseResult& r);
void from_json(const nlohmann::json& j, CaseResult& r);
void to_json(nlohmann::json& j, const BenchReport& r);
void from_json(const nlohmann::json& j, BenchReport& r);

}  // namespace ragfix
