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

#include <gtest/gtest.h>

#include "ragfix/benchmark.hpp"
#include "ragfix/error.hpp"
#include "ragfix/text.hpp"
#include "suite_fixture.hpp"

namespace ragfix {
namespace {

CaseSpec spec_with(std::vector<std::string> imports, std::vector<std::string> ids) {
  CaseSpec s;
  s.case_id = "x";
  s.category = Category::kCustomUtility;
  s.expected_imports = std::move(imports);
  s.required_identifiers = std::move(ids);
  return s;
}

RepairOutcome outcome_with(RepairStatus status, std::string code, bool model_output = true) {
  RepairOutcome o;
  o.status = status;
  o.final_code = std::move(code);
  if (model_output) {
    IterationRecord rec;
    rec.model_reply = "```java\n" + o.final_code + "\n```";
    o.iterations.push_back(rec);
  }
  return o;
}

void write_case(const std::filesystem::path& dir, const std::string& name, const std::string& json,
                const std::string& source = "class Main { List<String> x; }") {
  write_file(dir / name / "case.json", json);
  write_file(dir / name / "Main.java", source);
}

constexpr const char* kMeta =
    R"({"case_id":"k1","category":"standard_jdk","expected_imports":["java.util.List"],)"
    R"("expected_external_packages":[],"required_identifiers":["x"]})";

TEST(Categories, NamesAndLabels) {
  for (auto c : kAllCategories) EXPECT_EQ(category_from_string(to_string(c)), c);
  EXPECT_EQ(label(Category::kCustomUtility), "Custom Utility Class");
  EXPECT_THROW(category_from_string("gui"), ConfigError);
}

TEST(CaseMetadata, AllFieldsRequired) {
  const auto full = nlohmann::json::parse(kMeta);
  EXPECT_EQ(parse_case_metadata(full, "here").case_id, "k1");
  for (const char* field :
       {"case_id", "category", "expected_imports", "expected_external_packages", "required_identifiers"}) {
    auto j = full;
    j.erase(field);
    try {
      parse_case_metadata(j, "here");
      FAIL() << field;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
    }
  }
  auto bad = full;
  bad["category"] = "nope";
  EXPECT_THROW(parse_case_metadata(bad, "here"), ConfigError);
}

TEST(LoadCases, ShippedSuite) {
  const auto cases = load_cases(testing::data_dir() / "cases");
  ASSERT_EQ(cases.size(), 8u);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    EXPECT_EQ(cases[i].category, kAllCategories[i]);
    EXPECT_EQ(cases[i].source_file, "Main.java");
    EXPECT_FALSE(cases[i].required_identifiers.empty());
  }
}

TEST(LoadCases, ErrorsAndSkips) {
  testing::TempDir dir;
  EXPECT_THROW(load_cases(dir / "missing"), EnvironmentError);
  EXPECT_THROW(load_cases(dir.path()), InputError);

  std::filesystem::create_directories(dir / "notes");  // no case.json: skipped
  write_case(dir.path(), "a", kMeta);
  EXPECT_EQ(load_cases(dir.path()).size(), 1u);

  write_case(dir.path(), "b", kMeta);
  EXPECT_THROW(load_cases(dir.path()), ConfigError);  // duplicate case_id
}

TEST(LoadCases, ProbeRejectsCompilingSources) {
  testing::TempDir dir;
  write_case(dir / "cases", "a", kMeta, "class Main { String x; }");
  CompilerConfig probe;
  probe.compiler_path = testing::emulator_path();
  probe.work_dir = dir / "work";
  EXPECT_EQ(load_cases(dir / "cases").size(), 1u);
  EXPECT_THROW(load_cases(dir / "cases", &probe), ConfigError);
}

TEST(ScoreSemantic, CorrectNeedsStatusImportsAndIdentifiers) {
  const auto spec = spec_with({"com.example.util.MySpecialUtils"}, {"cleanNames", "MySpecialUtils.normalize"});
  const std::string good =
      "import com.example.util.MySpecialUtils;\nclass Main { void cleanNames() { MySpecialUtils.normalize(\"a\"); } }";
  EXPECT_EQ(score_semantic(spec, outcome_with(RepairStatus::kSemanticOnly, good)), (SemanticVerdict{true, false}));
  EXPECT_EQ(score_semantic(spec, outcome_with(RepairStatus::kCompiled, good)), (SemanticVerdict{true, false}));
  EXPECT_EQ(score_semantic(spec, outcome_with(RepairStatus::kFailed, good)), (SemanticVerdict{false, false}));

  const std::string wildcard = "import com.example.util.*;\n" + good.substr(good.find('\n') + 1);
  EXPECT_TRUE(score_semantic(spec, outcome_with(RepairStatus::kCompiled, wildcard)).semantic_correct);

  const std::string no_import = good.substr(good.find('\n') + 1);
  EXPECT_EQ(score_semantic(spec, outcome_with(RepairStatus::kCompiled, no_import)), (SemanticVerdict{false, false}));
}

TEST(ScoreSemantic, HallucinationWhenModelDropsRequiredCode) {
  const auto spec = spec_with({"java.util.List"}, {"cleanNames", "MySpecialUtils.normalize"});
  const std::string replaced = "import java.util.List;\nclass Main { void cleanNames() { \"a\".trim(); } }";
  EXPECT_EQ(score_semantic(spec, outcome_with(RepairStatus::kCompiled, replaced)), (SemanticVerdict{false, true}));
  // Only mentioned in a comment: still missing.
  const std::string commented = "import java.util.List;\nclass Main { void cleanNames() {} // MySpecialUtils.normalize\n}";
  EXPECT_TRUE(score_semantic(spec, outcome_with(RepairStatus::kCompiled, commented)).hallucination);
  // Whole-token match: a longer name does not count.
  const auto spec2 = spec_with({}, {"cleanNames"});
  EXPECT_TRUE(score_semantic(spec2, outcome_with(RepairStatus::kCompiled, "class M { void cleanNamesAll() {} }"))
                  .hallucination);
  // No model output: nothing to hallucinate.
  EXPECT_EQ(score_semantic(spec, outcome_with(RepairStatus::kFailed, "class Main {}", false)),
            (SemanticVerdict{false, false}));
}

TEST(ScoreSemantic, AlreadyCompilesIsNotARepair) {
  const auto spec = spec_with({}, {"x"});
  EXPECT_FALSE(score_semantic(spec, outcome_with(RepairStatus::kAlreadyCompiles, "class x {}", false)).semantic_correct);
}

BenchReport synthetic_report() {
  BenchReport r;
  r.pipelines = {Pipeline::kBaseline, Pipeline::kRails};
  const RepairStatus statuses[] = {RepairStatus::kCompiled, RepairStatus::kFailed, RepairStatus::kSemanticOnly};
  for (int i = 0; i < 6; ++i) {
    for (auto p : r.pipelines) {
      CaseResult c;
      c.case_id = "case" + std::to_string(i);
      c.category = kAllCategories[i % 4];
      c.pipeline = p;
      c.outcome.status = statuses[(i + static_cast<int>(p)) % 3];
      c.semantic_correct = c.outcome.status != RepairStatus::kFailed && i % 2 == 0;
      c.hallucination = !c.semantic_correct && i == 3;
      IterationRecord rec;
      rec.retrieval_ms = p == Pipeline::kRails ? 2.0 : 0.0;
      rec.prompt_ms = 1.0;
      rec.generation_ms = 10.0 + i;
      rec.compile_ms = 5.0;
      c.outcome.iterations.push_back(rec);
      c.wall_time_ms = 20.0 + i;
      r.results.push_back(c);
    }
  }
  r.environment = {"javac 17", "x", "abc", "offline_hash/256", "v1", "2026-01-01T00:00:00Z"};
  r.summarize();
  return r;
}

TEST(Report, SummaryArithmetic) {
  const auto r = synthetic_report();
  for (auto p : r.pipelines) {
    const auto* s = r.summary(p);
    ASSERT_NE(s, nullptr);
    const auto& n = s->counts;
    EXPECT_EQ(n.total, 6u);
    EXPECT_EQ(n.compiled + n.semantic_only + n.failed + n.already_compiles, n.total);
    std::size_t correct = 0, total = 0;
    for (const auto& [cat, score] : s->categories) {
      correct += score.correct;
      total += score.total;
    }
    EXPECT_EQ(correct, n.semantic_correct);
    EXPECT_EQ(total, n.total);
  }
  EXPECT_DOUBLE_EQ(r.summary(Pipeline::kRails)->latency.mean_iteration_ms, 3.0 + 12.5);
  EXPECT_DOUBLE_EQ(r.summary(Pipeline::kBaseline)->latency.mean_iteration_ms, 1.0 + 12.5);
  EXPECT_DOUBLE_EQ(r.summary(Pipeline::kRails)->latency.mean_wall_ms, 22.5);
}

TEST(Report, JsonRoundTripAndDigest) {
  const auto r = synthetic_report();
  testing::TempDir dir;
  emit_report(r, dir / "report.json");
  const auto back = load_report(dir / "report.json");
  EXPECT_EQ(report_digest(back), report_digest(r));
  ASSERT_EQ(back.results.size(), r.results.size());
  EXPECT_EQ(render_table(back), render_table(r));
  EXPECT_EQ(render_radar_svg(back), render_radar_svg(r));

  auto timing_only = r;
  timing_only.results[0].wall_time_ms += 100;
  timing_only.environment.generated_at = "later";
  timing_only.summarize();
  EXPECT_EQ(report_digest(timing_only), report_digest(r));

  auto verdict = r;
  verdict.results[0].semantic_correct = !verdict.results[0].semantic_correct;
  verdict.summarize();
  EXPECT_NE(report_digest(verdict), report_digest(r));

  write_file(dir / "bad.json", "{\"format_version\": 9}");
  EXPECT_THROW(load_report(dir / "bad.json"), FormatError);
}

TEST(Report, RadarNeedsThreeAxes) {
  auto r = synthetic_report();
  std::erase_if(r.results, [](const CaseResult& c) { return c.category != Category::kStandardJdk; });
  r.summarize();
  EXPECT_THROW(render_radar_svg(r), InputError);
}

TEST(Benchmark, ShippedSuiteEndToEnd) {
  testing::TempDir dir;
  const auto cases = load_cases(testing::data_dir() / "cases");
  const auto report = run_benchmark(cases, {Pipeline::kBaseline, Pipeline::kRails}, testing::suite_options(dir.path(), 4));
  ASSERT_EQ(report.results.size(), 16u);
  const auto* rails = report.summary(Pipeline::kRails);
  const auto* base = report.summary(Pipeline::kBaseline);
  EXPECT_EQ(rails->counts.semantic_correct, 8u);
  EXPECT_EQ(base->counts.semantic_correct, 4u);
  EXPECT_EQ(base->counts.hallucinated, 1u);
  for (const auto& r : report.results) {
    EXPECT_FALSE(r.outcome.error.has_value()) << r.case_id << ": " << r.outcome.error.value_or("");
    const bool custom_baseline = r.pipeline == Pipeline::kBaseline && r.category == Category::kCustomUtility;
    EXPECT_EQ(r.hallucination, custom_baseline) << r.case_id;
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "out/log_rails.txt"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out/log_baseline.txt"));
  EXPECT_EQ(report.environment.compiler_version, "javac 17.0.0-emulator");
}

TEST(Benchmark, CaseErrorsAreRecordedNotThrown) {
  testing::TempDir dir;
  auto cases = load_cases(testing::data_dir() / "cases");
  cases.resize(1);
  cases[0].case_id = "unscripted";
  auto options = testing::suite_options(dir.path());
  const auto report = run_benchmark(cases, {Pipeline::kRails}, options);
  ASSERT_EQ(report.results.size(), 1u);
  EXPECT_EQ(report.results[0].outcome.status, RepairStatus::kFailed);
  EXPECT_TRUE(report.results[0].outcome.error.has_value());
}

}  // namespace
}  // namespace ragfix
