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

#include "ragfix/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include "ragfix/error.hpp"
#include "ragfix/java_source.hpp"
#include "ragfix/text.hpp"

namespace ragfix {

namespace {

struct CategoryName {
  Category category;
  std::string_view id;
  std::string_view label;
};

constexpr std::array<CategoryName, 8> kCategoryNames = {{
    {Category::kStandardJdk, "standard_jdk", "Standard JDK Import"},
    {Category::kDeprecatedApi, "deprecated_api", "Deprecated API Fix"},
    {Category::kSwingUi, "swing_ui", "Swing UI Component"},
    {Category::kNioFile, "nio_file", "java.nio.file Usage"},
    {Category::kExternalCommons, "external_commons", "External Lib (Commons IO)"},
    {Category::kExternalGsonText, "external_gson_text", "External Lib (Gson, Text)"},
    {Category::kJavafxGui, "javafx_gui", "GUI with JavaFX"},
    {Category::kCustomUtility, "custom_utility", "Custom Utility Class"},
}};

std::string_view display_name(Pipeline p) noexcept { return p == Pipeline::kRails ? "RAILS" : "Baseline"; }

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string pad_right(std::string s, std::size_t width) {
  const std::size_t len = utf8_length(s);
  if (len < width) s.append(width - len, ' ');
  return s;
}

std::string pad_left(std::string s, std::size_t width) {
  const std::size_t len = utf8_length(s);
  if (len < width) s.insert(0, width - len, ' ');
  return s;
}

bool valid_case_id(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.';
  });
}

std::vector<std::string> string_array(const nlohmann::json& meta, const char* field, std::string_view where) {
  if (!meta.contains(field)) throw ConfigError(std::string(where) + ": missing field '" + field + "'");
  const auto& arr = meta.at(field);
  if (!arr.is_array()) throw ConfigError(std::string(where) + ": field '" + field + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string() || v.get<std::string>().empty()) {
      throw ConfigError(std::string(where) + ": field '" + field + "' must contain non-empty strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

// Whole-token occurrence: the match may not extend an identifier on either side.
bool contains_token(std::string_view code, std::string_view needle) {
  auto is_part = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '$' || u >= 0x80;
  };
  if (needle.empty()) return true;
  std::size_t pos = 0;
  while ((pos = code.find(needle, pos)) != std::string_view::npos) {
    const bool left_ok = pos == 0 || !is_part(code[pos - 1]) || !is_part(needle.front());
    const std::size_t end = pos + needle.size();
    const bool right_ok = end == code.size() || !is_part(code[end]) || !is_part(needle.back());
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

std::filesystem::path pick_source(const std::filesystem::path& case_dir) {
  std::vector<std::filesystem::path> java;
  for (const auto& e : std::filesystem::directory_iterator(case_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".java") java.push_back(e.path());
  }
  std::sort(java.begin(), java.end());
  for (const auto& p : java) {
    if (p.filename() == "Main.java") return p;
  }
  if (java.size() == 1) return java.front();
  if (java.empty()) throw ConfigError("case " + case_dir.filename().string() + ": no .java source file");
  throw ConfigError("case " + case_dir.filename().string() + ": several .java files and none is Main.java");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void strip_timings(nlohmann::json& j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end();) {
      const std::string& key = it.key();
      if (key == "generated_at" || (key.size() > 3 && key.ends_with("_ms"))) {
        it = j.erase(it);
      } else {
        strip_timings(*it);
        ++it;
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) strip_timings(v);
  }
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Category c) noexcept {
  for (const auto& n : kCategoryNames) {
    if (n.category == c) return n.id;
  }
  return "unknown";
}

std::string_view label(Category c) noexcept {
  for (const auto& n : kCategoryNames) {
    if (n.category == c) return n.label;
  }
  return "unknown";
}

Category category_from_string(std::string_view name) {
  for (const auto& n : kCategoryNames) {
    if (n.id == name) return n.category;
  }
  throw ConfigError("unknown category '" + std::string(name) + "'");
}

CaseSpec parse_case_metadata(const nlohmann::json& meta, std::string_view where) {
  const std::string at(where);
  if (!meta.is_object()) throw ConfigError(at + ": metadata must be a JSON object");
  CaseSpec spec;
  if (!meta.contains("case_id") || !meta.at("case_id").is_string()) {
    throw ConfigError(at + ": field 'case_id' must be a string");
  }
  spec.case_id = meta.at("case_id").get<std::string>();
  if (!valid_case_id(spec.case_id)) throw ConfigError(at + ": field 'case_id' has invalid value '" + spec.case_id + "'");
  if (!meta.contains("category") || !meta.at("category").is_string()) {
    throw ConfigError(at + ": field 'category' must be a string");
  }
  try {
    spec.category = category_from_string(meta.at("category").get<std::string>());
  } catch (const ConfigError& ex) {
    throw ConfigError(at + ": field 'category': " + ex.what());
  }
  spec.expected_imports = string_array(meta, "expected_imports", where);
  spec.expected_external_packages = string_array(meta, "expected_external_packages", where);
  spec.required_identifiers = string_array(meta, "required_identifiers", where);
  return spec;
}

std::vector<CaseSpec> load_cases(const std::filesystem::path& dir, const CompilerConfig* probe) {
  if (!std::filesystem::is_directory(dir)) throw EnvironmentError("case directory not found: " + dir.string());
  std::vector<std::filesystem::path> case_dirs;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_directory()) case_dirs.push_back(e.path());
  }
  std::sort(case_dirs.begin(), case_dirs.end());

  std::vector<CaseSpec> cases;
  std::set<std::string> seen;
  for (const auto& case_dir : case_dirs) {
    const auto meta_path = case_dir / "case.json";
    if (!std::filesystem::exists(meta_path)) continue;
    const std::string where = "case " + case_dir.filename().string();
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(read_file(meta_path));
    } catch (const nlohmann::json::parse_error& ex) {
      throw ConfigError(where + ": case.json is not valid JSON: " + ex.what());
    }
    CaseSpec spec = parse_case_metadata(meta, where);
    if (!seen.insert(spec.case_id).second) throw ConfigError(where + ": duplicate case_id '" + spec.case_id + "'");
    const auto src = pick_source(case_dir);
    spec.source = read_file(src);
    spec.source_file = src.filename().string();
    if (!is_valid_utf8(spec.source)) throw ConfigError(where + ": source is not valid UTF-8");

    if (probe != nullptr) {
      CompilerConfig cfg = *probe;
      cfg.work_dir = probe->work_dir / "probe" / spec.case_id;
      auto cls = find_primary_type_name(spec.source);
      const std::string class_name =
          cls && is_java_identifier(*cls) ? *cls : std::filesystem::path(spec.source_file).stem().string();
      if (compile_source(spec.source, class_name, cfg).success) {
        throw ConfigError(where + ": source already compiles; a case must start broken");
      }
    }
    cases.push_back(std::move(spec));
  }
  if (cases.empty()) throw InputError("no cases found in " + dir.string());
  return cases;
}

SemanticVerdict score_semantic(const CaseSpec& spec, const RepairOutcome& outcome) {
  const bool status_ok = outcome.status == RepairStatus::kCompiled || outcome.status == RepairStatus::kSemanticOnly;
  const auto imports = parse_imports(outcome.final_code);
  const bool imports_ok = std::all_of(spec.expected_imports.begin(), spec.expected_imports.end(),
                                      [&](const std::string& fqn) { return imports_type(imports, fqn); });
  const std::string code = strip_comments(outcome.final_code);
  const bool identifiers_ok =
      std::all_of(spec.required_identifiers.begin(), spec.required_identifiers.end(),
                  [&](const std::string& id) { return contains_token(code, id); });

  SemanticVerdict v;
  v.hallucination = outcome.model_produced_output() && !identifiers_ok;
  v.semantic_correct = status_ok && imports_ok && identifiers_ok;
  return v;
}

void BenchReport::summarize() {
  summaries.clear();
  for (Pipeline p : pipelines) summaries[p];
  std::map<Pipeline, std::size_t> iteration_totals;
  std::map<Pipeline, std::array<double, 5>> sums;  // wall, iteration, retrieval, generation, compile
  for (const auto& r : results) {
    auto& s = summaries[r.pipeline];
    auto& cat = s.categories[r.category];
    ++cat.total;
    if (r.semantic_correct) ++cat.correct;

    auto& c = s.counts;
    ++c.total;
    switch (r.outcome.status) {
      case RepairStatus::kCompiled: ++c.compiled; break;
      case RepairStatus::kSemanticOnly: ++c.semantic_only; break;
      case RepairStatus::kFailed: ++c.failed; break;
      case RepairStatus::kAlreadyCompiles: ++c.already_compiles; break;
    }
    if (r.hallucination) ++c.hallucinated;
    if (r.outcome.status == RepairStatus::kCompiled && !r.semantic_correct) ++c.compiled_incorrect;
    if (r.semantic_correct) ++c.semantic_correct;

    auto& sum = sums[r.pipeline];
    sum[0] += r.wall_time_ms;
    for (const auto& it : r.outcome.iterations) {
      sum[1] += it.iteration_latency_ms();
      sum[2] += it.retrieval_ms;
      sum[3] += it.generation_ms;
      sum[4] += it.compile_ms;
      ++iteration_totals[r.pipeline];
    }
  }
  for (auto& [p, s] : summaries) {
    auto& l = s.latency;
    const auto& sum = sums[p];
    const std::size_t n = iteration_totals[p];
    l.iterations = n;
    l.mean_wall_ms = s.counts.total == 0 ? 0.0 : sum[0] / static_cast<double>(s.counts.total);
    if (n > 0) {
      l.mean_iteration_ms = sum[1] / static_cast<double>(n);
      l.mean_retrieval_ms = sum[2] / static_cast<double>(n);
      l.mean_generation_ms = sum[3] / static_cast<double>(n);
      l.mean_compile_ms = sum[4] / static_cast<double>(n);
    }
  }
}

const PipelineSummary* BenchReport::summary(Pipeline p) const {
  const auto it = summaries.find(p);
  return it == summaries.end() ? nullptr : &it->second;
}

BenchReport run_benchmark(const std::vector<CaseSpec>& cases, const std::vector<Pipeline>& pipelines,
                          const BenchmarkOptions& options) {
  if (pipelines.empty()) throw ConfigError("no pipelines selected");
  for (Pipeline p : pipelines) {
    const auto it = options.engines.find(p);
    if (it == options.engines.end() || !it->second) {
      throw ConfigError("no engine configured for pipeline " + std::string(to_string(p)));
    }
  }

  BenchReport report;
  report.pipelines = pipelines;
  report.results.resize(cases.size() * pipelines.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < report.results.size(); task = next++) {
      const CaseSpec& spec = cases[task / pipelines.size()];
      const Pipeline pipeline = pipelines[task % pipelines.size()];
      const RepairEngine& engine = *options.engines.at(pipeline);
      CaseResult& r = report.results[task];
      r.case_id = spec.case_id;
      r.category = spec.category;
      r.pipeline = pipeline;
      const auto start = std::chrono::steady_clock::now();
      try {
        r.outcome = engine.repair(spec.source, spec.case_id, &spec.expected_external_packages);
      } catch (const std::exception& ex) {
        r.outcome = RepairOutcome{};
        r.outcome.status = RepairStatus::kFailed;
        r.outcome.final_code = spec.source;
        r.outcome.error = ex.what();
      }
      r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      const auto v = score_semantic(spec, r.outcome);
      r.semantic_correct = v.semantic_correct;
      r.hallucination = v.hallucination;
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(1, report.results.size()));
  std::vector<std::thread> threads;
  for (std::size_t i = 1; i < n_workers; ++i) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  report.summarize();

  auto& env = report.environment;
  env.template_version = std::string(kTemplateVersion);
  env.generated_at = utc_timestamp();
  const RepairEngine& first = *options.engines.at(pipelines.front());
  try {
    env.compiler_version = compiler_version(first.config().compiler);
  } catch (const Error&) {
    env.compiler_version = "unavailable";
  }
  for (Pipeline p : pipelines) {
    const RepairEngine& engine = *options.engines.at(p);
    if (!env.provider.empty()) env.provider += "; ";
    env.provider += std::string(to_string(p)) + "=" + engine.generator().describe();
    if (p == Pipeline::kRails) {
      const auto& cfg = engine.config();
      if (!cfg.index_path.empty() && std::filesystem::exists(cfg.index_path)) {
        env.index_sha256 = sha256_file(cfg.index_path);
      }
      env.embedding = (cfg.embedding.kind == EmbeddingKind::kRemote ? "remote:" + cfg.embedding.model_name
                                                                     : std::string("offline_hash")) +
                      "/" + std::to_string(engine.index() ? engine.index()->dim() : cfg.embedding.dim);
    }
  }

  if (!options.out_dir.empty()) {
    for (Pipeline p : pipelines) {
      std::string log;
      for (const auto& r : report.results) {
        if (r.pipeline == p) log += render_transcript(r.case_id, p, r.outcome);
      }
      write_file(options.out_dir / ("log_" + std::string(to_string(p)) + ".txt"), log);
    }
  }
  return report;
}

std::string render_table(const BenchReport& report) {
  std::vector<Pipeline> columns;
  for (Pipeline p : {Pipeline::kRails, Pipeline::kBaseline}) {
    if (std::find(report.pipelines.begin(), report.pipelines.end(), p) != report.pipelines.end()) columns.push_back(p);
  }

  std::size_t label_width = std::string_view("Case type").size();
  for (const auto& n : kCategoryNames) label_width = std::max(label_width, n.label.size());
  constexpr std::size_t kCell = 10;

  std::string out = "Semantic correctness by case category\n\n";
  out += pad_right("Case type", label_width);
  for (Pipeline p : columns) out += "  " + pad_right(std::string(display_name(p)), kCell);
  while (!out.empty() && out.back() == ' ') out.pop_back();
  out += '\n';
  out += std::string(label_width, '-');
  for (std::size_t i = 0; i < columns.size(); ++i) out += "  " + std::string(kCell, '-');
  out += '\n';
  for (const auto& n : kCategoryNames) {
    out += pad_right(std::string(n.label), label_width);
    for (Pipeline p : columns) {
      std::string cell = "-";
      if (const auto* s = report.summary(p)) {
        if (const auto it = s->categories.find(n.category); it != s->categories.end() && it->second.total > 0) {
          const auto& c = it->second;
          cell = std::string(c.correct == c.total ? "✓" : "✗") + " " + std::to_string(c.correct) + "/" +
                 std::to_string(c.total);
        }
      }
      out += "  " + pad_right(cell, kCell);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }

  out += "\nOutcomes\n";
  for (Pipeline p : columns) {
    const auto* s = report.summary(p);
    if (s == nullptr) continue;
    const auto& c = s->counts;
    out += "  " + pad_right(std::string(display_name(p)) + ":", 10) + std::to_string(c.total) + " cases, " +
           std::to_string(c.semantic_correct) + " semantically correct (" +
           format("%.1f", c.total == 0 ? 0.0 : 100.0 * c.semantic_correct / c.total) + "%)\n";
    out += "            compiled " + std::to_string(c.compiled) + ", semantic_only " + std::to_string(c.semantic_only) +
           ", failed " + std::to_string(c.failed) + ", already_compiles " + std::to_string(c.already_compiles) +
           ", hallucinated " + std::to_string(c.hallucinated) + "\n";
    out += "            did not compile: " + std::to_string(c.semantic_only + c.failed) + " (" +
           std::to_string(c.semantic_only) + " only for missing external dependencies); compiled but incorrect: " +
           std::to_string(c.compiled_incorrect) + "\n";
  }
  out += "  (a partial fix whose only remaining errors are missing external packages counts as semantic_only)\n";

  out += "\nLatency (mean, ms)\n";
  const std::array<std::string_view, 6> headers = {"per case", "per iteration", "retrieval", "generation", "compile",
                                                   "iterations"};
  out += "  " + std::string(10, ' ');
  for (auto h : headers) out += "  " + pad_left(std::string(h), 13);
  out += '\n';
  for (Pipeline p : columns) {
    const auto* s = report.summary(p);
    if (s == nullptr) continue;
    const auto& l = s->latency;
    out += "  " + pad_right(std::string(display_name(p)), 10);
    for (double v : {l.mean_wall_ms, l.mean_iteration_ms, l.mean_retrieval_ms, l.mean_generation_ms, l.mean_compile_ms}) {
      out += "  " + pad_left(format("%.3f", v), 13);
    }
    out += "  " + pad_left(std::to_string(l.iterations), 13) + "\n";
  }
  return out;
}

std::string render_radar_svg(const BenchReport& report) {
  std::vector<Category> axes;
  for (Category c : kAllCategories) {
    const bool present = std::any_of(report.results.begin(), report.results.end(),
                                     [c](const CaseResult& r) { return r.category == c; });
    if (present) axes.push_back(c);
  }
  if (axes.size() < 3) {
    throw InputError("radar chart needs at least 3 categories, report has " + std::to_string(axes.size()));
  }

  constexpr double kWidth = 720, kHeight = 620, kCx = 360, kCy = 320, kRadius = 200;
  const std::size_t n = axes.size();
  auto angle = [n](std::size_t i) { return -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / n; };
  auto point = [&](std::size_t i, double r) {
    const double x = kCx + r * kRadius * std::cos(angle(i));
    const double y = kCy + r * kRadius * std::sin(angle(i));
    return format("%.2f", x) + "," + format("%.2f", y);
  };
  auto polygon = [&](double r) {
    std::string pts;
    for (std::size_t i = 0; i < n; ++i) pts += (i ? " " : "") + point(i, r);
    return pts;
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format("%.0f", kWidth) + "\" height=\"" +
         format("%.0f", kHeight) + "\" viewBox=\"0 0 " + format("%.0f", kWidth) + " " + format("%.0f", kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "  <text x=\"" + format("%.2f", kCx) +
         "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">Semantic correctness by category</text>\n";
  svg += "  <g id=\"grid\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\">\n";
  for (double r : {0.25, 0.5, 0.75, 1.0}) svg += "    <polygon points=\"" + polygon(r) + "\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    svg += "    <line x1=\"" + format("%.2f", kCx) + "\" y1=\"" + format("%.2f", kCy) + "\" x2=\"" +
           format("%.2f", kCx + kRadius * std::cos(angle(i))) + "\" y2=\"" +
           format("%.2f", kCy + kRadius * std::sin(angle(i))) + "\"/>\n";
  }
  svg += "  </g>\n";

  svg += "  <g id=\"labels\" fill=\"#333333\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(angle(i));
    const double s = std::sin(angle(i));
    const char* anchor = c > 0.1 ? "start" : (c < -0.1 ? "end" : "middle");
    const double x = kCx + (kRadius + 14) * c;
    const double y = kCy + (kRadius + 14) * s + (s > 0.1 ? 10 : (s < -0.1 ? -4 : 4));
    svg += "    <text x=\"" + format("%.2f", x) + "\" y=\"" + format("%.2f", y) + "\" text-anchor=\"" + anchor + "\">" +
           xml_escape(label(axes[i])) + "</text>\n";
  }
  svg += "  </g>\n";

  auto color = [](Pipeline p) { return p == Pipeline::kRails ? "#1f77b4" : "#d62728"; };
  for (Pipeline p : report.pipelines) {
    const auto* s = report.summary(p);
    std::string pts;
    std::string dots;
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      if (s != nullptr) {
        if (const auto it = s->categories.find(axes[i]); it != s->categories.end()) v = it->second.fraction();
      }
      const std::string pt = point(i, v);
      pts += (i ? " " : "") + pt;
      const auto comma = pt.find(',');
      dots += "    <circle cx=\"" + pt.substr(0, comma) + "\" cy=\"" + pt.substr(comma + 1) + "\" r=\"3\"/>\n";
    }
    const std::string name(to_string(p));
    svg += "  <g id=\"series-" + name + "\" fill=\"" + color(p) + "\" stroke=\"" + color(p) + "\">\n";
    svg += "    <polygon points=\"" + pts + "\" fill-opacity=\"0.15\" stroke-width=\"2\"/>\n";
    svg += dots;
    svg += "  </g>\n";
  }

  svg += "  <g id=\"legend\">\n";
  double ly = 56;
  for (Pipeline p : report.pipelines) {
    svg += "    <rect x=\"20\" y=\"" + format("%.2f", ly - 10) + "\" width=\"14\" height=\"14\" fill=\"" + color(p) +
           "\"/>\n";
    svg += "    <text x=\"40\" y=\"" + format("%.2f", ly + 2) + "\">" + std::string(display_name(p)) + "</text>\n";
    ly += 22;
  }
  svg += "  </g>\n";
  svg += "</svg>\n";
  return svg;
}

void emit_report(const BenchReport& report, const std::filesystem::path& path) {
  write_file(path, nlohmann::json(report).dump(2) + "\n");
}

void emit_table(const BenchReport& report, const std::filesystem::path& path) {
  write_file(path, render_table(report));
}

void emit_radar_svg(const BenchReport& report, const std::filesystem::path& path) {
  write_file(path, render_radar_svg(report));
}

BenchReport load_report(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_file(path)).get<BenchReport>();
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError("invalid report " + path.string() + ": " + ex.what());
  }
}

std::string report_digest(const BenchReport& report) {
  nlohmann::json j = report;
  strip_timings(j);
  return sha256_hex(j.dump());
}

void to_json(nlohmann::json& j, const CaseResult& r) {
  j = nlohmann::json{{"case_id", r.case_id},
                     {"category", to_string(r.category)},
                     {"pipeline", to_string(r.pipeline)},
                     {"semantic_correct", r.semantic_correct},
                     {"hallucination", r.hallucination},
                     {"wall_time_ms", r.wall_time_ms},
                     {"outcome", r.outcome}};
}

void from_json(const nlohmann::json& j, CaseResult& r) {
  r.case_id = j.at("case_id").get<std::string>();
  r.category = category_from_string(j.at("category").get<std::string>());
  r.pipeline = pipeline_from_string(j.at("pipeline").get<std::string>());
  r.semantic_correct = j.at("semantic_correct").get<bool>();
  r.hallucination = j.at("hallucination").get<bool>();
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  r.outcome = j.at("outcome").get<RepairOutcome>();
}

void to_json(nlohmann::json& j, const BenchReport& r) {
  nlohmann::json pipelines = nlohmann::json::array();
  for (Pipeline p : r.pipelines) pipelines.push_back(to_string(p));
  nlohmann::json summaries = nlohmann::json::object();
  for (const auto& [p, s] : r.summaries) {
    nlohmann::json cats = nlohmann::json::object();
    for (const auto& [c, score] : s.categories) {
      cats[std::string(to_string(c))] = {{"correct", score.correct}, {"total", score.total}, {"fraction", score.fraction()}};
    }
    const auto& c = s.counts;
    const auto& l = s.latency;
    summaries[std::string(to_string(p))] = {
        {"categories", cats},
        {"counts",
         {{"total", c.total},
          {"compiled", c.compiled},
          {"semantic_only", c.semantic_only},
          {"failed", c.failed},
          {"already_compiles", c.already_compiles},
          {"hallucinated", c.hallucinated},
          {"compiled_incorrect", c.compiled_incorrect},
          {"semantic_correct", c.semantic_correct}}},
        {"latency",
         {{"mean_wall_ms", l.mean_wall_ms},
          {"mean_iteration_ms", l.mean_iteration_ms},
          {"mean_retrieval_ms", l.mean_retrieval_ms},
          {"mean_generation_ms", l.mean_generation_ms},
          {"mean_compile_ms", l.mean_compile_ms},
          {"iterations", l.iterations}}}};
  }
  const auto& e = r.environment;
  j = nlohmann::json{{"format_version", 1},
                     {"pipelines", pipelines},
                     {"environment",
                      {{"compiler_version", e.compiler_version},
                       {"provider", e.provider},
                       {"index_sha256", e.index_sha256},
                       {"embedding", e.embedding},
                       {"template_version", e.template_version},
                       {"generated_at", e.generated_at}}},
                     {"summaries", summaries},
                     {"results", r.results}};
}

void from_json(const nlohmann::json& j, BenchReport& r) {
  if (j.at("format_version").get<int>() != 1) throw FormatError("unsupported report format_version");
  r.pipelines.clear();
  for (const auto& p : j.at("pipelines")) r.pipelines.push_back(pipeline_from_string(p.get<std::string>()));
  const auto& e = j.at("environment");
  r.environment.compiler_version = e.at("compiler_version").get<std::string>();
  r.environment.provider = e.at("provider").get<std::string>();
  r.environment.index_sha256 = e.at("index_sha256").get<std::string>();
  r.environment.embedding = e.at("embedding").get<std::string>();
  r.environment.template_version = e.at("template_version").get<std::string>();
  r.environment.generated_at = e.at("generated_at").get<std::string>();
  r.results = j.at("results").get<std::vector<CaseResult>>();
  r.summarize();
}

}  // namespace ragfix
