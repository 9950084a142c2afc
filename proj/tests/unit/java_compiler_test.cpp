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

#include <sys/stat.h>

#include <thread>

#include "ragfix/error.hpp"
#include "ragfix/java_compiler.hpp"
#include "ragfix/text.hpp"
#include "test_support.hpp"

namespace ragfix {
namespace {

struct ExpectedDiag {
  int line;
  std::string kind;
  std::optional<std::string> symbol;
  std::optional<std::string> symbol_kind;
  std::optional<std::string> package;
  std::optional<std::string> location;
};

std::vector<ExpectedDiag> load_expected(const std::string& name) {
  const auto j = nlohmann::json::parse(read_file(testing::fixtures_dir() / "javac" / (name + ".expected.json")));
  std::vector<ExpectedDiag> out;
  auto opt = [](const nlohmann::json& o, const char* k) -> std::optional<std::string> {
    return o.contains(k) ? std::optional<std::string>(o.at(k).get<std::string>()) : std::nullopt;
  };
  for (const auto& e : j) {
    out.push_back({e.at("line").get<int>(), e.at("kind").get<std::string>(), opt(e, "symbol"), opt(e, "symbol_kind"),
                   opt(e, "package"), opt(e, "location")});
  }
  return out;
}

void expect_matches(const std::vector<Diagnostic>& got, const std::vector<ExpectedDiag>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    SCOPED_TRACE("diagnostic " + std::to_string(i));
    EXPECT_EQ(got[i].file, "Main.java");
    EXPECT_EQ(got[i].line, want[i].line);
    EXPECT_EQ(to_string(got[i].kind), want[i].kind);
    EXPECT_EQ(got[i].symbol, want[i].symbol);
    EXPECT_EQ(got[i].symbol_kind, want[i].symbol_kind);
    EXPECT_EQ(got[i].package, want[i].package);
    EXPECT_EQ(got[i].location, want[i].location);
    EXPECT_TRUE(got[i].is_error());
  }
}

class FrozenFixtures : public ::testing::TestWithParam<std::string> {};

TEST_P(FrozenFixtures, ParseToExpectedDiagnostics) {
  const auto raw = read_file(testing::fixtures_dir() / "javac" / (GetParam() + ".stderr"));
  expect_matches(parse_diagnostics(raw), load_expected(GetParam()));
}

TEST_P(FrozenFixtures, CrlfOutputParsesTheSame) {
  std::string raw = read_file(testing::fixtures_dir() / "javac" / (GetParam() + ".stderr"));
  std::string crlf;
  for (char c : raw) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  expect_matches(parse_diagnostics(crlf), load_expected(GetParam()));
}

INSTANTIATE_TEST_SUITE_P(Javac, FrozenFixtures,
                         ::testing::Values("missing_jdk_import", "missing_external_package", "mixed_errors"));

TEST(ParseDiagnostics, WarningsOtherErrorsAndUnlocated) {
  const std::string raw =
      "Main.java:4: warning: [deprecation] getYear() in Date has been deprecated\n"
      "        return d.getYear();\n"
      "                ^\n"
      "Main.java:9: error: ';' expected\n"
      "        int x = 1\n"
      "                 ^\n"
      "error: invalid flag: -bogus\n"
      "1 warning\n"
      "2 errors\n";
  const auto diags = parse_diagnostics(raw);
  ASSERT_EQ(diags.size(), 3u);
  EXPECT_EQ(diags[0].severity, Severity::kWarning);
  EXPECT_EQ(diags[0].line, 4);
  EXPECT_EQ(diags[1].kind, DiagnosticKind::kOther);
  EXPECT_EQ(diags[1].message, "';' expected");
  EXPECT_EQ(diags[2].line, 0);
  EXPECT_EQ(diags[2].message, "invalid flag: -bogus");
}

TEST(ParseDiagnostics, EmptyOutput) { EXPECT_TRUE(parse_diagnostics("").empty()); }

TEST(MissingDependency, OnlyExpectedPackagesCount) {
  const auto diags = parse_diagnostics(read_file(testing::fixtures_dir() / "javac/missing_external_package.stderr"));
  const std::vector<std::string> commons = {"org.apache.commons.io"};
  const std::vector<std::string> external = {"FileUtils"};
  EXPECT_TRUE(is_missing_dependency_only(diags, commons, external));
  EXPECT_FALSE(is_missing_dependency_only(diags, commons));  // FileUtils not known to be external
  EXPECT_FALSE(is_missing_dependency_only(diags, std::vector<std::string>{"com.google.gson"}, external));

  const auto mixed = parse_diagnostics(read_file(testing::fixtures_dir() / "javac/mixed_errors.stderr"));
  EXPECT_FALSE(is_missing_dependency_only(mixed, std::vector<std::string>{"com.google.gson"}));
}

TEST(MissingDependency, PackagePrefixMatching) {
  const std::vector<std::string> javafx = {"javafx"};
  EXPECT_TRUE(package_matches("javafx.scene.control", javafx));
  EXPECT_TRUE(package_matches("javafx", javafx));
  EXPECT_FALSE(package_matches("javafxml", javafx));
}

TEST(MissingDependency, ExternalSymbolsFromImports) {
  const std::string src =
      "import org.apache.commons.io.FileUtils;\nimport org.apache.commons.io.input.*;\nimport java.util.List;\n";
  EXPECT_EQ(external_symbols_in(src, std::vector<std::string>{"org.apache.commons.io"}),
            (std::vector<std::string>{"FileUtils"}));
}

TEST(CompilerConfig, Validation) {
  CompilerConfig c;
  c.compiler_path = "";
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.timeout = std::chrono::seconds(0);
  EXPECT_THROW(c.validate(), ConfigError);
}

class CompileWithEmulator : public ::testing::Test {
 protected:
  CompilerConfig config() const {
    CompilerConfig c;
    c.compiler_path = testing::emulator_path();
    c.work_dir = dir_.path() / "work";
    return c;
  }
  testing::TempDir dir_;
};

TEST_F(CompileWithEmulator, SuccessWritesClassFile) {
  const auto r = compile_source("public class Main { public static void main(String[] a) {} }", "Main", config());
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "work/Main.class"));
}

TEST_F(CompileWithEmulator, FailureMatchesFrozenFixture) {
  const auto src = read_file(testing::fixtures_dir() / "javac/missing_jdk_import.java");
  const auto r = compile_source(src, "Main", config());
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.raw_output, read_file(testing::fixtures_dir() / "javac/missing_jdk_import.stderr"));
  EXPECT_EQ(r.error_count(), 2u);
  EXPECT_EQ(r.error_text().find("2 errors"), std::string::npos);
}

TEST_F(CompileWithEmulator, InvalidClassNameIsInputError) {
  EXPECT_THROW(compile_source("class X {}", "not-valid", config()), InputError);
  EXPECT_THROW(compile_source("class X {}", "class", config()), InputError);
}

TEST_F(CompileWithEmulator, MissingCompilerIsEnvironmentError) {
  auto c = config();
  c.compiler_path = (dir_.path() / "no-such-javac").string();
  EXPECT_THROW(compile_source("class Main {}", "Main", c), EnvironmentError);
}

TEST_F(CompileWithEmulator, TimeoutCarriesPartialOutput) {
  const auto script = dir_.path() / "slow-javac";
  write_file(script, "#!/bin/sh\necho 'compiling...' >&2\nexec sleep 5\n");
  chmod(script.c_str(), 0755);
  auto c = config();
  c.compiler_path = script.string();
  c.timeout = std::chrono::seconds(1);
  try {
    compile_source("class Main {}", "Main", c);
    FAIL() << "expected timeout";
  } catch (const TimeoutError& ex) {
    EXPECT_NE(ex.partial_output().find("compiling..."), std::string::npos);
  }
}

TEST_F(CompileWithEmulator, NonZeroExitWithoutDiagnosticsIsStillAnError) {
  const auto script = dir_.path() / "crashy-javac";
  write_file(script, "#!/bin/sh\necho 'An exception has occurred in the compiler' >&2\nexit 4\n");
  chmod(script.c_str(), 0755);
  auto c = config();
  c.compiler_path = script.string();
  const auto r = compile_source("class Main {}", "Main", c);
  EXPECT_FALSE(r.success);
  ASSERT_EQ(r.error_count(), 1u);
  EXPECT_EQ(r.diagnostics[0].kind, DiagnosticKind::kOther);
}

TEST_F(CompileWithEmulator, ConcurrentCompilesInSeparateDirectories) {
  std::vector<std::thread> threads;
  std::vector<int> ok(8, 0);
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      auto c = config();
      c.work_dir = dir_.path() / ("w" + std::to_string(i));
      const std::string src = i % 2 ? "class Main { List<String> x; }" : "class Main { String x; }";
      ok[i] = compile_source(src, "Main", c).success ? 1 : 0;
    });
  }
  for (auto& t : threads) t.join();
  for (int i = 0; i < 8; ++i) EXPECT_EQ(ok[i], i % 2 ? 0 : 1);
}

TEST_F(CompileWithEmulator, VersionString) {
  EXPECT_EQ(compiler_version(config()), "javac 17.0.0-emulator");
}

TEST(CompileResultJson, RoundTrip) {
  CompileResult r;
  r.success = false;
  r.exit_code = 1;
  r.raw_output = read_file(testing::fixtures_dir() / "javac/mixed_errors.stderr");
  r.diagnostics = parse_diagnostics(r.raw_output);
  r.duration = std::chrono::milliseconds(12);
  const nlohmann::json j = r;
  const auto back = j.get<CompileResult>();
  EXPECT_EQ(back.diagnostics, r.diagnostics);
  EXPECT_EQ(back.raw_output, r.raw_output);
  EXPECT_EQ(back.duration, r.duration);
}

}  // namespace
}  // namespace ragfix
