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

#include "ragfix/prompting.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <system_error>

#include "ragfix/error.hpp"
#include "ragfix/java_source.hpp"
#include "ragfix/text.hpp"

namespace ragfix {

std::string_view to_string(Pipeline p) noexcept { return p == Pipeline::kBaseline ? "baseline" : "rails"; }

std::string_view to_string(PromptVariant v) noexcept {
  switch (v) {
    case PromptVariant::kBaseline: return "baseline";
    case PromptVariant::kRails: return "rails";
    case PromptVariant::kRefinement: return "refinement";
  }
  return "baseline";
}

Pipeline pipeline_from_string(std::string_view name) {
  if (name == "baseline") return Pipeline::kBaseline;
  if (name == "rails") return Pipeline::kRails;
  throw ConfigError("unknown pipeline '" + std::string(name) + "' (expected baseline or rails)");
}

namespace {

PromptVariant variant_from_string(std::string_view name) {
  if (name == "baseline") return PromptVariant::kBaseline;
  if (name == "rails") return PromptVariant::kRails;
  if (name == "refinement") return PromptVariant::kRefinement;
  throw FormatError("unknown prompt variant '" + std::string(name) + "'");
}

constexpr std::string_view kSystem =
    "You are a Java repair assistant. You fix compilation errors caused by missing or incorrect "
    "import statements and always answer with a complete, compilable Java source file.";

constexpr std::string_view kCodeSection =
    "## Broken code\n"
    "```java\n"
    "{{code}}\n"
    "```\n\n";

constexpr std::string_view kErrorSection =
    "## Compiler error\n"
    "```\n"
    "{{error}}\n"
    "```\n\n";

constexpr std::string_view kPreviousSection =
    "## Previous attempt\n"
    "```java\n"
    "{{previous_fix}}\n"
    "```\n\n"
    "## Compiler error for the previous attempt\n"
    "```\n"
    "{{error}}\n"
    "```\n\n";

constexpr std::string_view kContextSection =
    "## Retrieved documentation\n"
    "{{context}}\n\n";

constexpr std::string_view kInstruction =
    "## Instruction\n"
    "Fix the compilation errors. Add or correct import statements as needed, keep every existing "
    "class, method and call (including project-specific utilities) unchanged, and do not substitute "
    "library code for user code. Return the complete corrected Java file only, in a single ```java "
    "code block.\n";

constexpr std::string_view kFirstTurnIntro = "The following Java file fails to compile.\n\n";
constexpr std::string_view kRefineIntro =
    "The following Java file fails to compile, and the previous attempt to fix it was rejected by the "
    "compiler.\n\n";

std::string cat(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) out += p;
  return out;
}

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", score);
  return buf;
}

}  // namespace

PromptTemplates PromptTemplates::defaults() {
  PromptTemplates t;
  t.system = std::string(kSystem);
  t.baseline = cat({kFirstTurnIntro, kCodeSection, kErrorSection, kInstruction});
  t.rails = cat({kFirstTurnIntro, kCodeSection, kErrorSection, kContextSection, kInstruction});
  t.refine_baseline = cat({kRefineIntro, kCodeSection, kPreviousSection, kInstruction});
  t.refine_rails = cat({kRefineIntro, kCodeSection, kPreviousSection, kContextSection, kInstruction});
  return t;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw ConfigError("template directory not found: " + dir.string());
  PromptTemplates t = defaults();
  const std::pair<const char*, std::string*> files[] = {{"system.txt", &t.system},
                                                        {"baseline.txt", &t.baseline},
                                                        {"rails.txt", &t.rails},
                                                        {"refine_baseline.txt", &t.refine_baseline},
                                                        {"refine_rails.txt", &t.refine_rails}};
  for (const auto& [name, slot] : files) {
    if (std::filesystem::exists(dir / name, ec)) *slot = read_file(dir / name);
  }
  return t;
}

std::size_t estimate_tokens(std::string_view text) noexcept { return (utf8_length(text) + 3) / 4; }

std::string render_template(std::string_view tmpl, std::span<const std::pair<std::string_view, std::string_view>> values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out += tmpl.substr(pos, open - pos);
    const auto name = tmpl.substr(open + 2, close - open - 2);
    const auto it = std::find_if(values.begin(), values.end(), [&](const auto& kv) { return kv.first == name; });
    if (it != values.end()) {
      out += it->second;
    } else {
      out += tmpl.substr(open, close + 2 - open);
    }
    pos = close + 2;
  }
  out += tmpl.substr(std::min(pos, tmpl.size()));
  return out;
}

std::string render_context(std::span<const SearchHit> hits) {
  if (hits.empty()) return std::string(kNoContextMarker);
  std::string out;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += "[" + std::to_string(i + 1) + "] " + hits[i].doc_id + " (score " + format_score(hits[i].score) + ")\n";
    out += hits[i].text;
  }
  return out;
}

PromptBuilder::PromptBuilder(PromptTemplates templates, std::size_t token_budget)
    : templates_(std::move(templates)), token_budget_(token_budget) {}

PromptBundle PromptBuilder::baseline(std::string_view source, std::string_view error_text) const {
  if (trim(error_text).empty()) throw InputError("baseline prompt needs a compiler error");
  const std::pair<std::string_view, std::string_view> values[] = {{"code", source}, {"error", error_text}};
  PromptBundle b;
  b.system_text = templates_.system;
  b.user_text = render_template(templates_.baseline, values);
  b.variant = PromptVariant::kBaseline;
  b.token_estimate = estimate_tokens(b.system_text) + estimate_tokens(b.user_text);
  b.broken_source = std::string(source);
  b.pipeline = Pipeline::kBaseline;
  return b;
}

PromptBundle PromptBuilder::with_context(const std::string& tmpl, PromptVariant variant, std::string_view source,
                                         std::string_view error_text, std::string_view previous_fix,
                                         std::vector<SearchHit> hits) const {
  PromptBundle b;
  b.system_text = templates_.system;
  b.variant = variant;
  b.broken_source = std::string(source);
  b.pipeline = Pipeline::kRails;
  for (;;) {
    const std::string context = render_context(hits);
    const std::pair<std::string_view, std::string_view> values[] = {
        {"code", source}, {"error", error_text}, {"previous_fix", previous_fix}, {"context", context}};
    b.user_text = render_template(tmpl, values);
    b.token_estimate = estimate_tokens(b.system_text) + estimate_tokens(b.user_text);
    if (b.token_estimate <= token_budget_ || hits.empty()) break;
    hits.pop_back();
  }
  b.included_chunk_ids.clear();
  for (const auto& h : hits) b.included_chunk_ids.push_back(h.chunk_id);
  return b;
}

PromptBundle PromptBuilder::rails(std::string_view source, std::string_view error_text, std::vector<SearchHit> hits) const {
  if (trim(error_text).empty()) throw InputError("rails prompt needs a compiler error");
  return with_context(templates_.rails, PromptVariant::kRails, source, error_text, {}, std::move(hits));
}

PromptBundle PromptBuilder::refinement(const PromptBundle& previous, std::string_view previous_fix,
                                       std::string_view new_error, std::vector<SearchHit> hits) const {
  if (previous_fix.empty()) throw InputError("refinement prompt needs the previous attempt");
  if (previous.pipeline == Pipeline::kRails) {
    return with_context(templates_.refine_rails, PromptVariant::kRefinement, previous.broken_source, new_error,
                        previous_fix, std::move(hits));
  }
  const std::pair<std::string_view, std::string_view> values[] = {
      {"code", previous.broken_source}, {"error", new_error}, {"previous_fix", previous_fix}};
  PromptBundle b;
  b.system_text = templates_.system;
  b.user_text = render_template(templates_.refine_baseline, values);
  b.variant = PromptVariant::kRefinement;
  b.token_estimate = estimate_tokens(b.system_text) + estimate_tokens(b.user_text);
  b.broken_source = previous.broken_source;
  b.pipeline = Pipeline::kBaseline;
  return b;
}

PromptBundle build_baseline_prompt(std::string_view source, std::string_view error_text) {
  return PromptBuilder().baseline(source, error_text);
}

PromptBundle build_rails_prompt(std::string_view source, std::string_view error_text, std::vector<SearchHit> hits) {
  return PromptBuilder().rails(source, error_text, std::move(hits));
}

PromptBundle build_refinement_prompt(const PromptBundle& previous, std::string_view previous_fix,
                                     std::string_view new_error, std::vector<SearchHit> hits) {
  return PromptBuilder().refinement(previous, previous_fix, new_error, std::move(hits));
}

std::string build_retrieval_query(std::string_view source, std::span<const Diagnostic> diagnostics) {
  std::vector<std::string> symbols;
  std::vector<std::string> packages;
  std::vector<std::string> lines;
  std::string first_message;
  auto add_unique = [](std::vector<std::string>& v, std::string s) {
    if (!s.empty() && std::find(v.begin(), v.end(), s) == v.end()) v.push_back(std::move(s));
  };
  for (const auto& d : diagnostics) {
    if (!d.is_error()) continue;
    if (first_message.empty()) first_message = d.message;
    if (d.kind == DiagnosticKind::kCannotFindSymbol) add_unique(symbols, *d.symbol);
    if (d.kind == DiagnosticKind::kPackageDoesNotExist) add_unique(packages, *d.package);
    add_unique(lines, std::string(trim(source_line(source, d.line))));
  }

  auto join = [](const std::vector<std::string>& v, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += sep;
      out += v[i];
    }
    return out;
  };
  std::vector<std::string> parts;
  if (!symbols.empty()) parts.push_back(join(symbols, " "));
  if (!packages.empty()) parts.push_back(join(packages, " "));
  if (!first_message.empty()) parts.push_back(first_message);
  for (auto& l : lines) parts.push_back(std::move(l));
  return join(parts, "\n");
}

std::string extract_code(std::string_view model_reply) {
  if (trim(model_reply).empty()) throw InputError("model returned no content");

  std::vector<std::string_view> lines;
  for (std::size_t start = 0;;) {
    const auto nl = model_reply.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(model_reply.substr(start));
      break;
    }
    lines.push_back(model_reply.substr(start, nl - start));
    start = nl + 1;
  }
  auto is_fence = [](std::string_view line) {
    const auto first = line.find_first_not_of(" \t");
    return first != std::string_view::npos && line.substr(first).starts_with("```");
  };

  const auto open = std::find_if(lines.begin(), lines.end(), is_fence);
  if (open != lines.end()) {
    const auto close = std::find_if(open + 1, lines.end(), is_fence);
    std::string out;
    for (auto it = open + 1; it != close; ++it) {
      if (it != open + 1) out += '\n';
      out += *it;
    }
    return out;
  }

  static const std::regex kCodeStart(
      R"(^\s*(package\s|import\s|((public|final|abstract|sealed)\s+)*(class|interface|enum|record)\s))");
  std::size_t offset = 0;
  for (const auto line : lines) {
    if (std::regex_search(line.begin(), line.end(), kCodeStart)) {
      auto rest = model_reply.substr(offset);
      const auto last = rest.find_last_not_of(" \t\r\n");
      return std::string(rest.substr(0, last + 1));
    }
    offset += line.size() + 1;
  }
  return std::string(trim(model_reply));
}

void to_json(nlohmann::json& j, const SearchHit& h) {
  j = {{"chunk_id", h.chunk_id}, {"score", h.score}, {"doc_id", h.doc_id}, {"text", h.text}};
}

void from_json(const nlohmann::json& j, SearchHit& h) {
  h.chunk_id = j.at("chunk_id").get<std::int64_t>();
  h.score = j.at("score").get<double>();
  h.doc_id = j.at("doc_id").get<std::string>();
  h.text = j.at("text").get<std::string>();
}

void to_json(nlohmann::json& j, const PromptBundle& p) {
  j = {{"system_text", p.system_text},
       {"user_text", p.user_text},
       {"variant", to_string(p.variant)},
       {"included_chunk_ids", p.included_chunk_ids},
       {"token_estimate", p.token_estimate},
       {"pipeline", to_string(p.pipeline)},
       {"broken_source", p.broken_source}};
}

void from_json(const nlohmann::json& j, PromptBundle& p) {
  p.system_text = j.at("system_text").get<std::string>();
  p.user_text = j.at("user_text").get<std::string>();
  p.variant = variant_from_string(j.at("variant").get<std::string>());
  p.included_chunk_ids = j.at("included_chunk_ids").get<std::vector<std::int64_t>>();
  p.token_estimate = j.at("token_estimate").get<std::size_t>();
  p.pipeline = pipeline_from_string(j.value("pipeline", std::string("baseline")));
  p.broken_source = j.value("broken_source", std::string());
}

}  // namespace ragfix
