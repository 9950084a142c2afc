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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragfix/java_compiler.hpp"
#include "ragfix/vector_index.hpp"

namespace ragfix {

enum class Pipeline { kBaseline, kRails };
enum class PromptVariant { kBaseline, kRails, kRefinement };

std::string_view to_string(Pipeline p) noexcept;
std::string_view to_string(PromptVariant v) noexcept;
Pipeline pipeline_from_string(std::string_view name);

struct PromptBundle {
  std::string system_text;
  std::string user_text;
  PromptVariant variant = PromptVariant::kBaseline;
  std::vector<std::int64_t> included_chunk_ids;
  std::size_t token_estimate = 0;
  // Carried across turns so refinement prompts can restate the original file.
  std::string broken_source;
  Pipeline pipeline = Pipeline::kBaseline;

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

/// Prompt text assets. Placeholders: {{code}}, {{error}}, {{context}}, {{previous_fix}}.
struct PromptTemplates {
  std::string system;
  std::string baseline;
  std::string rails;
  std::string refine_baseline;
  std::string refine_rails;

  static PromptTemplates defaults();
  /// Reads system.txt, baseline.txt, rails.txt, refine_baseline.txt and
  /// refine_rails.txt from `dir`; any missing file keeps its default.
  static PromptTemplates load(const std::filesystem::path& dir);
};

/// Version tag of the embedded templates, recorded in reports.
inline constexpr std::string_view kTemplateVersion = "v1";
inline constexpr std::size_t kDefaultTokenBudget = 12'000;
inline constexpr std::string_view kNoContextMarker = "No relevant documentation found.";

/// Characters / 4, rounded up.
std::size_t estimate_tokens(std::string_view text) noexcept;

/// Substitutes {{name}} placeholders in one pass; unknown names stay literal.
std::string render_template(std::string_view tmpl, std::span<const std::pair<std::string_view, std::string_view>> values);

/// "[i] doc_id (score s)" blocks in the given order, or the no-context marker.
std::string render_context(std::span<const SearchHit> hits);

class PromptBuilder {
 public:
  explicit PromptBuilder(PromptTemplates templates = PromptTemplates::defaults(),
                         std::size_t token_budget = kDefaultTokenBudget);

  PromptBundle baseline(std::string_view source, std::string_view error_text) const;
  /// `hits` must be sorted by descending score. Whole chunks are dropped from the
  /// end of the list until the prompt fits the token budget.
  PromptBundle rails(std::string_view source, std::string_view error_text, std::vector<SearchHit> hits) const;
  /// Next-turn prompt: previous attempt and its new error are added; `hits`
  /// replaces the previous context. Baseline sessions never carry context.
  PromptBundle refinement(const PromptBundle& previous, std::string_view previous_fix, std::string_view new_error,
                          std::vector<SearchHit> hits) const;

  const PromptTemplates& templates() const noexcept { return templates_; }
  std::size_t token_budget() const noexcept { return token_budget_; }

 private:
  PromptBundle with_context(const std::string& tmpl, PromptVariant variant, std::string_view source,
                            std::string_view error_text, std::string_view previous_fix,
                            std::vector<SearchHit> hits) const;

  PromptTemplates templates_;
  std::size_t token_budget_;
};

PromptBundle build_baseline_prompt(std::string_view source, std::string_view error_text);
PromptBundle build_rails_prompt(std::string_view source, std::string_view error_text, std::vector<SearchHit> hits);
PromptBundle build_refinement_prompt(const PromptBundle& previous, std::string_view previous_fix,
                                     std::string_view new_error, std::vector<SearchHit> hits);

/// Retrieval query: unresolved symbols, missing packages, the first error message,
/// then the offending source lines, one group per line, in diagnostic order.
std::string build_retrieval_query(std::string_view source, std::span<const Diagnostic> diagnostics);

/// Code from a model reply: first fenced block, else everything from the first
/// package/import/class line, else the trimmed reply. Throws InputError on an
/// empty reply.
std::string extract_code(std::string_view model_reply);

void to_json(nlohmann::json& j, const PromptBundle& p);
void from_json(const nlohmann::json& j, PromptBundle& p);
void to_json(nlohmann::json& j, const SearchHit& h);
void from_json(const nlohmann::json& j, SearchHit& h);

}  // namespace ragfix
