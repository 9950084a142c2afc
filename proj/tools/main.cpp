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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "app_config.hpp"
#include "ragfix/benchmark.hpp"
#include "ragfix/corpus.hpp"
#include "ragfix/embedding.hpp"
#include "ragfix/error.hpp"
#include "ragfix/repair_loop.hpp"
#include "ragfix/text.hpp"
#include "ragfix/vector_index.hpp"

namespace ragfix::cli {
namespace {

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> index;
  std::optional<std::string> embedding_provider;
  std::optional<std::string> llm_provider;
  std::optional<std::string> script;
  std::optional<std::string> javac;
  std::optional<std::string> classpath;
  std::optional<std::string> logs;
  std::optional<std::string> templates;
  std::optional<int> max_iterations;
  std::optional<std::size_t> top_k;
};

void add_index_flag(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--index", f.index, "Vector index file (a .meta.json sidecar sits next to it)");
}

void add_embedding_flag(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--provider", f.embedding_provider, "Embedding provider")
      ->check(CLI::IsMember({"offline", "remote"}));
}

void add_repair_flags(CLI::App* cmd, CommonFlags& f) {
  add_index_flag(cmd, f);
  add_embedding_flag(cmd, f);
  cmd->add_option("--llm", f.llm_provider, "Text generation provider")->check(CLI::IsMember({"scripted", "remote"}));
  cmd->add_option("--script", f.script, "Scripted replies (JSON) for the scripted provider");
  cmd->add_option("--javac", f.javac, "Java compiler executable");
  cmd->add_option("--classpath", f.classpath, "Colon-separated compile classpath");
  cmd->add_option("--logs", f.logs, "Directory for per-case JSONL session logs");
  cmd->add_option("--templates", f.templates, "Directory with prompt template overrides");
  cmd->add_option("--max-iterations", f.max_iterations, "Model calls per case")->check(CLI::PositiveNumber);
  cmd->add_option("--top-k", f.top_k, "Retrieved chunks per prompt")->check(CLI::PositiveNumber);
}

AppConfig resolve(const CommonFlags& f) {
  AppConfig app = f.config_path ? load_app_config(*f.config_path) : AppConfig{};
  if (f.index) app.index_path = *f.index;
  if (f.embedding_provider) {
    app.embedding.kind = *f.embedding_provider == "remote" ? EmbeddingKind::kRemote : EmbeddingKind::kOfflineHash;
  }
  if (f.llm_provider) app.llm.kind = *f.llm_provider == "remote" ? LlmKind::kRemote : LlmKind::kScripted;
  if (f.script) app.llm.script_path = *f.script;
  if (f.javac) app.compiler.compiler_path = *f.javac;
  if (f.classpath) {
    app.compiler.classpath_entries.clear();
    std::string rest = *f.classpath;
    for (std::size_t pos; !rest.empty();) {
      pos = rest.find(':');
      const std::string part = rest.substr(0, pos);
      if (!part.empty()) app.compiler.classpath_entries.emplace_back(part);
      rest = pos == std::string::npos ? "" : rest.substr(pos + 1);
    }
  }
  if (f.logs) app.logs_dir = *f.logs;
  if (f.templates) app.templates_dir = *f.templates;
  if (f.max_iterations) app.max_iterations = *f.max_iterations;
  if (f.top_k) app.top_k = *f.top_k;
  return app;
}

int exit_code_for(RepairStatus status) {
  switch (status) {
    case RepairStatus::kCompiled: return kExitOk;
    case RepairStatus::kSemanticOnly: return kExitSemanticOnly;
    case RepairStatus::kFailed: return kExitRepairFailed;
    case RepairStatus::kAlreadyCompiles: return kExitAlreadyCompiles;
  }
  return kExitFailure;
}

int cmd_ingest(const CommonFlags& f, const std::string& corpus, std::optional<std::size_t> chunk_size,
               std::optional<std::size_t> overlap) {
  AppConfig app = resolve(f);
  if (chunk_size) app.chunking.chunk_size = *chunk_size;
  if (overlap) app.chunking.overlap = *overlap;
  if (app.index_path.empty()) throw ConfigError("--index is required");
  app.chunking.validate();
  app.embedding.validate();

  const IngestResult ingest = ingest_corpus(corpus, app.chunking);
  for (const auto& w : ingest.manifest.warnings) std::cerr << "warning: " << w << "\n";

  auto embedder = make_embedder(app.embedding);
  std::vector<std::string> texts;
  texts.reserve(ingest.chunks.size());
  for (const auto& c : ingest.chunks) texts.push_back(c.text);
  const auto vectors = embedder->embed_batch(texts);

  VectorIndex index(embedder->dim());
  index.add_chunks(ingest.chunks, vectors);
  index.save(app.index_path);
  auto manifest_path = app.index_path;
  manifest_path += ".manifest.json";
  write_file(manifest_path, nlohmann::json(ingest.manifest).dump(2) + "\n");

  std::cout << "documents: " << ingest.manifest.documents.size() << "\n";
  std::cout << "chunks: " << ingest.chunks.size() << ", dim: " << index.dim() << "\n";
  std::cout << "index sha256: " << sha256_file(app.index_path) << "\n";
  return kExitOk;
}

int cmd_index(const CommonFlags& f, const std::optional<std::string>& query) {
  const AppConfig app = resolve(f);
  if (app.index_path.empty()) throw ConfigError("--index is required");
  if (!std::filesystem::exists(app.index_path)) throw ConfigError("index not found: " + app.index_path.string());
  const VectorIndex index = VectorIndex::load(app.index_path);
  std::cout << "chunks: " << index.size() << ", dim: " << index.dim() << "\n";
  std::cout << "index sha256: " << sha256_file(app.index_path) << "\n";
  if (query) {
    auto emb = app.embedding;
    if (emb.kind == EmbeddingKind::kOfflineHash) emb.dim = index.dim();
    const auto hits = index.search(make_embedder(emb)->embed(*query), app.top_k);
    for (std::size_t i = 0; i < hits.size(); ++i) {
      char score[32];
      std::snprintf(score, sizeof score, "%.4f", hits[i].score);
      std::cout << "[" << i + 1 << "] " << hits[i].doc_id << " #" << hits[i].chunk_id << " (score " << score << ")\n"
                << hits[i].text << "\n";
    }
  }
  return kExitOk;
}

int cmd_repair(const CommonFlags& f, const std::string& file, const std::string& pipeline_name,
               const std::optional<std::string>& case_id, const std::vector<std::string>& packages) {
  const AppConfig app = resolve(f);
  RepairConfig rc = make_repair_config(app, pipeline_from_string(pipeline_name));
  rc.expected_external_packages = packages;
  const std::filesystem::path path(file);
  if (!std::filesystem::exists(path)) throw ConfigError("input file not found: " + file);
  const std::string source = read_file(path);

  const RepairEngine engine = RepairEngine::from_config(rc);
  const RepairOutcome outcome = engine.repair(source, case_id.value_or(path.stem().string()));

  std::cout << "status: " << to_string(outcome.status) << "\n";
  std::cout << "model calls: " << outcome.model_calls() << "\n";
  if (outcome.error) std::cout << "error: " << *outcome.error << "\n";
  if (outcome.status != RepairStatus::kAlreadyCompiles) {
    auto fixed = path.parent_path() / (path.stem().string() + ".fixed" + path.extension().string());
    std::string text = outcome.final_code;
    if (!text.empty() && !text.ends_with('\n')) text += '\n';
    write_file(fixed, text);
    std::cout << "fixed file: " << fixed.string() << "\n";
  }
  return exit_code_for(outcome.status);
}

std::vector<Pipeline> parse_pipelines(const std::string& name) {
  if (name == "both") return {Pipeline::kBaseline, Pipeline::kRails};
  return {pipeline_from_string(name)};
}

void write_outputs(const BenchReport& report, const std::filesystem::path& table, const std::filesystem::path& radar) {
  if (!table.empty()) emit_table(report, table);
  if (!radar.empty()) {
    try {
      emit_radar_svg(report, radar);
    } catch (const InputError& ex) {
      std::cerr << "warning: radar chart skipped: " << ex.what() << "\n";
    }
  }
}

int cmd_bench(const CommonFlags& f, const std::optional<std::string>& cases_flag, const std::string& pipelines_name,
              const std::string& out, std::optional<std::size_t> workers, bool probe) {
  AppConfig app = resolve(f);
  if (cases_flag) app.cases_dir = *cases_flag;
  if (workers) app.workers = *workers;
  if (app.cases_dir.empty()) throw ConfigError("--cases is required");
  const std::filesystem::path out_dir(out);
  if (app.logs_dir.empty()) app.logs_dir = out_dir / "logs";
  if (app.compiler.work_dir.empty()) app.compiler.work_dir = out_dir / "work";

  const auto pipelines = parse_pipelines(pipelines_name);
  BenchmarkOptions options;
  options.workers = app.workers;
  options.out_dir = out_dir;
  for (Pipeline p : pipelines) {
    options.engines[p] = std::make_shared<const RepairEngine>(RepairEngine::from_config(make_repair_config(app, p)));
  }
  const auto cases = load_cases(app.cases_dir, probe ? &app.compiler : nullptr);
  const BenchReport report = run_benchmark(cases, pipelines, options);

  emit_report(report, out_dir / "report.json");
  write_outputs(report, out_dir / "table.txt", out_dir / "radar.svg");
  std::cout << render_table(report);
  std::cout << "\nreport digest: " << report_digest(report) << "\n";
  return kExitOk;
}

int cmd_report(const std::string& in, const std::optional<std::string>& table, const std::optional<std::string>& radar) {
  if (!std::filesystem::exists(in)) throw ConfigError("report not found: " + in);
  const BenchReport report = load_report(in);
  write_outputs(report, table.value_or(""), radar.value_or(""));
  std::cout << render_table(report);
  return kExitOk;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const InputError& ex) {
    std::cerr << "input error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const FormatError& ex) {
    std::cerr << "format error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const CorruptionError& ex) {
    std::cerr << "corrupt data: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const EnvironmentError& ex) {
    std::cerr << "environment error: " << ex.what() << "\n";
    return kExitEnvironment;
  } catch (const TransportError& ex) {
    std::cerr << "transport error: " << ex.what() << "\n";
    return kExitEnvironment;
  } catch (const TimeoutError& ex) {
    std::cerr << "timeout: " << ex.what() << "\n";
    return kExitEnvironment;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace
}  // namespace ragfix::cli

int main(int argc, char** argv) {
  using namespace ragfix::cli;
  CLI::App app{"Repair Java import errors with retrieval-augmented prompting and compiler feedback"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ragfix 0.1.0");
  CommonFlags flags;
  app.add_option("--config", flags.config_path, "INI configuration file; flags override its values")
      ->check(CLI::ExistingFile);

  auto* ingest = app.add_subcommand("ingest", "Chunk a documentation corpus, embed it and save a vector index");
  std::string corpus;
  std::optional<std::size_t> chunk_size;
  std::optional<std::size_t> overlap;
  ingest->add_option("--corpus", corpus, "Corpus root directory")->required();
  add_index_flag(ingest, flags);
  add_embedding_flag(ingest, flags);
  ingest->add_option("--chunk-size", chunk_size, "Maximum chunk length in characters");
  ingest->add_option("--overlap", overlap, "Characters shared by consecutive chunks");

  auto* index = app.add_subcommand("index", "Show index statistics and optionally run a query");
  std::optional<std::string> query;
  add_index_flag(index, flags);
  add_embedding_flag(index, flags);
  index->add_option("--query", query, "Text to search for");
  index->add_option("--top-k", flags.top_k, "Number of hits")->check(CLI::PositiveNumber);

  auto* repair = app.add_subcommand("repair", "Repair one Java file");
  std::string file;
  std::string pipeline = "rails";
  std::optional<std::string> case_id;
  std::vector<std::string> packages;
  repair->add_option("--file", file, "Broken Java source file")->required();
  repair->add_option("--pipeline", pipeline, "Prompting pipeline")
      ->check(CLI::IsMember({"baseline", "rails"}))
      ->capture_default_str();
  repair->add_option("--case-id", case_id, "Session id for logs and scripted replies (default: file stem)");
  repair->add_option("--external-package", packages, "Package expected to be missing at compile time (repeatable)");
  add_repair_flags(repair, flags);

  auto* bench = app.add_subcommand("bench", "Run the case suite through one or both pipelines");
  std::optional<std::string> cases;
  std::string pipelines = "both";
  std::string out = "bench-out";
  std::optional<std::size_t> workers;
  bool no_probe = false;
  bench->add_option("--cases", cases, "Directory of cases (<id>/Main.java + case.json)");
  bench->add_option("--pipelines", pipelines, "Pipelines to run")
      ->check(CLI::IsMember({"baseline", "rails", "both"}))
      ->capture_default_str();
  bench->add_option("--out", out, "Output directory")->capture_default_str();
  bench->add_option("--workers", workers, "Cases processed in parallel")->check(CLI::PositiveNumber);
  bench->add_flag("--no-probe", no_probe, "Skip the check that every case fails to compile as given");
  add_repair_flags(bench, flags);

  auto* report = app.add_subcommand("report", "Regenerate table and radar chart from a saved report");
  std::string in;
  std::optional<std::string> table;
  std::optional<std::string> radar;
  report->add_option("--in", in, "report.json written by bench")->required();
  report->add_option("--table", table, "Write the text table here");
  report->add_option("--radar", radar, "Write the radar chart SVG here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*ingest) return guarded([&] { return cmd_ingest(flags, corpus, chunk_size, overlap); });
  if (*index) return guarded([&] { return cmd_index(flags, query); });
  if (*repair) return guarded([&] { return cmd_repair(flags, file, pipeline, case_id, packages); });
  if (*bench) return guarded([&] { return cmd_bench(flags, cases, pipelines, out, workers, !no_probe); });
  if (*report) return guarded([&] { return cmd_report(in, table, radar); });
  return kExitConfig;
}
