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

#include "ragfix/repair_loop.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>

#include "ragfix/error.hpp"
#include "ragfix/java_source.hpp"
#include "ragfix/text.hpp"

namespace ragfix {

std::string_view to_string(RepairStatus s) noexcept {
  switch (s) {
    case RepairStatus::kCompiled: return "compiled";
    case RepairStatus::kSemanticOnly: return "semantic_only";
    case RepairStatus::kFailed: return "failed";
    case RepairStatus::kAlreadyCompiles: return "already_compiles";
  }
  return "failed";
}

RepairStatus repair_status_from_string(std::string_view name) {
  if (name == "compiled") return RepairStatus::kCompiled;
  if (name == "semantic_only") return RepairStatus::kSemanticOnly;
  if (name == "failed") return RepairStatus::kFailed;
  if (name == "already_compiles") return RepairStatus::kAlreadyCompiles;
  throw FormatError("unknown repair status '" + std::string(name) + "'");
}

void RepairConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
  if (pipeline == Pipeline::kRails && index_path.empty()) throw ConfigError("the rails pipeline requires an index path");
  compiler.validate();
  llm.validate();
}

std::size_t RepairOutcome::model_calls() const noexcept {
  // Every recorded turn issued exactly one generation request.
  return iterations.size();
}

bool RepairOutcome::model_produced_output() const noexcept {
  for (const auto& it : iterations) {
    if (!trim(it.model_reply).empty()) return true;
  }
  return false;
}

RepairStatus derive_status(const CompileResult& final_compile, std::string_view final_code,
                           const std::vector<std::string>& expected_external_packages) {
  if (final_compile.success) return RepairStatus::kCompiled;
  if (final_compile.error_count() > 0 && !expected_external_packages.empty() &&
      is_missing_dependency_only(final_compile.diagnostics, expected_external_packages,
                                 external_symbols_in(final_code, expected_external_packages))) {
    return RepairStatus::kSemanticOnly;
  }
  return RepairStatus::kFailed;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string safe_component(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_";
  return out;
}

std::string class_name_for(std::string_view code, std::string_view fallback) {
  if (auto name = find_primary_type_name(code); name && is_java_identifier(*name)) return *name;
  return std::string(fallback);
}

}  // namespace

RepairEngine::RepairEngine(RepairConfig config, std::shared_ptr<TextGenerator> generator,
                           std::shared_ptr<const VectorIndex> index, std::shared_ptr<Embedder> embedder)
    : config_(std::move(config)),
      generator_(std::move(generator)),
      index_(std::move(index)),
      embedder_(std::move(embedder)),
      prompts_(config_.templates_dir.empty() ? PromptTemplates::defaults() : PromptTemplates::load(config_.templates_dir),
               config_.token_budget) {
  if (config_.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (config_.top_k < 1) throw ConfigError("top_k must be >= 1");
  config_.compiler.validate();
  if (!generator_) throw ConfigError("repair engine needs a text generator");
  if (config_.pipeline == Pipeline::kRails) {
    if (!index_) throw ConfigError("the rails pipeline requires a vector index");
    if (!embedder_) embedder_ = std::make_shared<HashEmbedder>(index_->dim());
    if (embedder_->dim() != index_->dim()) {
      throw ConfigError("query embedder dim " + std::to_string(embedder_->dim()) + " does not match index dim " +
                        std::to_string(index_->dim()));
    }
  }
  if (config_.compiler.work_dir.empty()) {
    config_.compiler.work_dir = config_.logs_dir.empty()
                                    ? std::filesystem::temp_directory_path() / ("ragfix-" + std::to_string(::getpid()))
                                    : config_.logs_dir / "work";
  }
}

RepairEngine RepairEngine::from_config(const RepairConfig& config) {
  config.validate();
  std::shared_ptr<const VectorIndex> index;
  std::shared_ptr<Embedder> embedder;
  if (config.pipeline == Pipeline::kRails) {
    std::error_code ec;
    if (!std::filesystem::exists(config.index_path, ec)) {
      throw ConfigError("index not found: " + config.index_path.string());
    }
    index = std::make_shared<const VectorIndex>(VectorIndex::load(config.index_path));
    auto emb_config = config.embedding;
    if (emb_config.kind == EmbeddingKind::kOfflineHash) emb_config.dim = index->dim();
    embedder = make_embedder(emb_config);
  }
  return RepairEngine(config, make_generator(config.llm), std::move(index), std::move(embedder));
}

CompilerConfig RepairEngine::compiler_for(std::string_view case_id, int turn) const {
  CompilerConfig c = config_.compiler;
  c.work_dir = config_.compiler.work_dir / std::string(to_string(config_.pipeline)) / safe_component(case_id) /
               ("turn-" + std::to_string(turn));
  return c;
}

std::vector<SearchHit> RepairEngine::retrieve(std::string_view code, const CompileResult& compile,
                                              std::string& query) const {
  query = build_retrieval_query(code, compile.diagnostics);
  if (trim(query).empty()) query = compile.error_text();
  if (trim(query).empty()) return {};
  return index_->search(embedder_->embed(query), config_.top_k);
}

RepairOutcome RepairEngine::repair(std::string_view source, std::string_view case_id,
                                   const std::vector<std::string>* expected_external_packages) const {
  if (trim(source).empty()) throw InputError("cannot repair an empty source file");
  const auto& packages = expected_external_packages ? *expected_external_packages : config_.expected_external_packages;
  const auto session_start = Clock::now();
  const std::string original_class = class_name_for(source, "Main");

  RepairOutcome outcome;
  outcome.initial_compile = compile_source(source, original_class, compiler_for(case_id, 0));
  outcome.final_code = std::string(source);
  if (outcome.initial_compile.success) {
    outcome.status = RepairStatus::kAlreadyCompiles;
    outcome.total_latency_ms = ms_since(session_start);
    write_session_log(case_id, outcome);
    return outcome;
  }

  std::string current_code(source);
  CompileResult current_compile = outcome.initial_compile;
  std::optional<PromptBundle> previous_prompt;
  outcome.status = RepairStatus::kFailed;

  for (int turn = 1; turn <= config_.max_iterations; ++turn) {
    const auto turn_start = Clock::now();
    IterationRecord rec;
    rec.turn = turn;

    if (config_.pipeline == Pipeline::kRails) {
      const auto t0 = Clock::now();
      rec.retrieval_hits = retrieve(current_code, current_compile, rec.retrieval_query);
      rec.retrieval_ms = ms_since(t0);
    }

    const auto t1 = Clock::now();
    const std::string error_text = current_compile.error_text();
    if (!previous_prompt) {
      rec.prompt = config_.pipeline == Pipeline::kRails ? prompts_.rails(source, error_text, rec.retrieval_hits)
                                                        : prompts_.baseline(source, error_text);
    } else {
      rec.prompt = prompts_.refinement(*previous_prompt, current_code, error_text, rec.retrieval_hits);
    }
    rec.prompt_ms = ms_since(t1);

    bool stop = false;
    const auto t2 = Clock::now();
    try {
      rec.model_reply = generator_->generate(rec.prompt, {std::string(case_id), turn, config_.pipeline}).text;
      rec.generation_ms = ms_since(t2);
      rec.extracted_code = extract_code(rec.model_reply);
    } catch (const Error& e) {
      if (rec.generation_ms == 0.0) rec.generation_ms = ms_since(t2);
      rec.error = e.what();
      outcome.error = e.what();
      stop = true;
    }

    if (!stop) {
      const auto t3 = Clock::now();
      try {
        rec.compile_result =
            compile_source(rec.extracted_code, class_name_for(rec.extracted_code, original_class), compiler_for(case_id, turn));
      } catch (const TimeoutError& e) {
        rec.error = e.what();
        outcome.error = e.what();
        stop = true;
      } catch (const InputError& e) {
        rec.error = e.what();
        outcome.error = e.what();
        stop = true;
      }
      rec.compile_ms = ms_since(t3);
    }
    rec.turn_latency_ms = ms_since(turn_start);
    outcome.iterations.push_back(std::move(rec));
    const auto& last = outcome.iterations.back();
    if (stop) break;

    outcome.final_code = last.extracted_code;
    outcome.status = derive_status(last.compile_result, last.extracted_code, packages);
    if (outcome.status != RepairStatus::kFailed) break;

    current_code = last.extracted_code;
    current_compile = last.compile_result;
    previous_prompt = last.prompt;
  }

  outcome.total_latency_ms = ms_since(session_start);
  write_session_log(case_id, outcome);
  return outcome;
}

void RepairEngine::write_session_log(std::string_view case_id, const RepairOutcome& outcome) const {
  if (config_.logs_dir.empty()) return;
  const auto path =
      config_.logs_dir / std::string(to_string(config_.pipeline)) / (safe_component(case_id) + ".jsonl");
  std::string lines;
  for (const auto& rec : outcome.iterations) {
    nlohmann::json j = rec;
    j["case_id"] = case_id;
    j["pipeline"] = to_string(config_.pipeline);
    lines += j.dump() + "\n";
  }
  write_file(path, lines);
}

RepairOutcome repair(std::string_view source, std::string_view case_id, const RepairConfig& config) {
  return RepairEngine::from_config(config).repair(source, case_id);
}

namespace {

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f ms", ms);
  return buf;
}

}  // namespace

std::string render_transcript(std::string_view case_id, Pipeline pipeline, const RepairOutcome& outcome) {
  std::string out;
  out += "=== case " + std::string(case_id) + " | pipeline " + std::string(to_string(pipeline)) + " | status " +
         std::string(to_string(outcome.status)) + " | iterations " + std::to_string(outcome.iterations.size()) +
         " ===\n";
  out += "--- original compile (exit " + std::to_string(outcome.initial_compile.exit_code) + ") ---\n";
  out += outcome.initial_compile.raw_output.empty() ? "(no output)\n" : outcome.initial_compile.raw_output;
  if (!out.ends_with('\n')) out += '\n';
  for (const auto& rec : outcome.iterations) {
    out += "--- turn " + std::to_string(rec.turn) + " (" + std::string(to_string(rec.prompt.variant)) + ", ~" +
           std::to_string(rec.prompt.token_estimate) + " tokens) ---\n";
    if (pipeline == Pipeline::kRails) {
      out += "retrieved:";
      if (rec.retrieval_hits.empty()) out += " none";
      for (const auto& h : rec.retrieval_hits) {
        char score[16];
        std::snprintf(score, sizeof score, "%.4f", h.score);
        out += " [" + std::to_string(h.chunk_id) + "] " + h.doc_id + " (" + score + ")";
      }
      out += "\n";
    }
    out += "model reply:\n" + rec.model_reply;
    if (!out.ends_with('\n')) out += '\n';
    if (rec.error) {
      out += "error: " + *rec.error + "\n";
      continue;
    }
    out += "compile (exit " + std::to_string(rec.compile_result.exit_code) + "): " +
           (rec.compile_result.success ? std::string("ok\n") : std::string("failed\n"));
    if (!rec.compile_result.success) {
      out += rec.compile_result.raw_output;
      if (!out.ends_with('\n')) out += '\n';
    }
    out += "timing: retrieval " + fmt_ms(rec.retrieval_ms) + ", prompt " + fmt_ms(rec.prompt_ms) + ", generation " +
           fmt_ms(rec.generation_ms) + ", compile " + fmt_ms(rec.compile_ms) + "\n";
  }
  if (outcome.error) out += "session error: " + *outcome.error + "\n";
  out += "\n";
  return out;
}

void to_json(nlohmann::json& j, const IterationRecord& r) {
  j = {{"turn", r.turn},
       {"prompt", r.prompt},
       {"retrieval_query", r.retrieval_query},
       {"retrieval_hits", r.retrieval_hits},
       {"model_reply", r.model_reply},
       {"extracted_code", r.extracted_code},
       {"compile_result", r.compile_result},
       {"retrieval_ms", r.retrieval_ms},
       {"prompt_ms", r.prompt_ms},
       {"generation_ms", r.generation_ms},
       {"compile_ms", r.compile_ms},
       {"turn_latency_ms", r.turn_latency_ms}};
  if (r.error) j["error"] = *r.error;
}

void from_json(const nlohmann::json& j, IterationRecord& r) {
  r.turn = j.at("turn").get<int>();
  r.prompt = j.at("prompt").get<PromptBundle>();
  r.retrieval_query = j.value("retrieval_query", std::string());
  r.retrieval_hits = j.at("retrieval_hits").get<std::vector<SearchHit>>();
  r.model_reply = j.at("model_reply").get<std::string>();
  r.extracted_code = j.at("extracted_code").get<std::string>();
  r.compile_result = j.at("compile_result").get<CompileResult>();
  r.retrieval_ms = j.value("retrieval_ms", 0.0);
  r.prompt_ms = j.value("prompt_ms", 0.0);
  r.generation_ms = j.value("generation_ms", 0.0);
  r.compile_ms = j.value("compile_ms", 0.0);
  r.turn_latency_ms = j.value("turn_latency_ms", 0.0);
  r.error.reset();
  if (j.contains("error")) r.error = j["error"].get<std::string>();
}

void to_json(nlohmann::json& j, const RepairOutcome& o) {
  j = {{"status", to_string(o.status)},
       {"final_code", o.final_code},
       {"iterations", o.iterations},
       {"initial_compile", o.initial_compile},
       {"total_latency_ms", o.total_latency_ms}};
  if (o.error) j["error"] = *o.error;
}

void from_json(const nlohmann::json& j, RepairOutcome& o) {
  o.status = repair_status_from_string(j.at("status").get<std::string>());
  o.final_code = j.at("final_code").get<std::string>();
  o.iterations = j.at("iterations").get<std::vector<IterationRecord>>();
  o.initial_compile = j.at("initial_compile").get<CompileResult>();
  o.total_latency_ms = j.value("total_latency_ms", 0.0);
  o.error.reset();
  if (j.contains("error")) o.error = j["error"].get<std::string>();
}

}  // namespace ragfix
