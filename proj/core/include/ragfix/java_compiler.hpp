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

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ragfix {

enum class Severity { kError, kWarning };
enum class DiagnosticKind { kCannotFindSymbol, kPackageDoesNotExist, kOther };

std::string_view to_string(Severity s) noexcept;
std::string_view to_string(DiagnosticKind k) noexcept;

/// One compiler message. `message` is the header text after "error: " verbatim.
/// line == 0 marks a message the compiler did not attach to a source location.
struct Diagnostic {
  std::string file;
  int line = 0;
  Severity severity = Severity::kError;
  DiagnosticKind kind = DiagnosticKind::kOther;
  std::optional<std::string> symbol;       // simple name, for cannot_find_symbol
  std::optional<std::string> symbol_kind;  // "class", "variable", "method", ...
  std::optional<std::string> package;      // for package_does_not_exist
  std::optional<std::string> location;     // text of the "location:" line
  std::string message;

  bool is_error() const noexcept { return severity == Severity::kError; }
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct CompilerConfig {
  std::string compiler_path = "javac";
  std::vector<std::filesystem::path> classpath_entries;
  std::filesystem::path work_dir;
  std::chrono::seconds timeout{30};

  void validate() const;
};

struct CompileResult {
  bool success = false;
  std::vector<Diagnostic> diagnostics;
  std::string raw_output;
  std::chrono::milliseconds duration{0};
  int exit_code = 0;

  std::size_t error_count() const noexcept;
  /// raw_output without the trailing "N errors" summary, for prompts.
  std::string error_text() const;
};

/// Writes `source_text` to work_dir/<class_name>.java and runs
/// `<compiler> -d <work_dir> -cp <classpath> <file>` under the C.UTF-8 locale.
/// Throws InputError for a bad class name, EnvironmentError if the compiler cannot
/// be started and TimeoutError (with partial output) if it overruns.
CompileResult compile_source(std::string_view source_text, std::string_view class_name, const CompilerConfig& config);

/// First line of `<compiler> -version`, e.g. "javac 21.0.2".
std::string compiler_version(const CompilerConfig& config);

/// Parses javac's English output. Total: unrecognised error lines become kind
/// other with the text kept.
std::vector<Diagnostic> parse_diagnostics(std::string_view raw_output);

/// True if `package` equals one of `expected` or is a sub-package of one.
bool package_matches(std::string_view package, std::span<const std::string> expected);

/// Every error is a missing expected package, or an unresolved symbol that the
/// case attributes to one (`external_symbols`). Vacuously true for no errors.
bool is_missing_dependency_only(std::span<const Diagnostic> diagnostics, std::span<const std::string> expected_packages,
                                std::span<const std::string> external_symbols = {});

/// Simple names the source imports from any expected external package.
std::vector<std::string> external_symbols_in(std::string_view source, std::span<const std::string> expected_packages);

void to_json(nlohmann::json& j, const Diagnostic& d);
void from_json(const nlohmann::json& j, Diagnostic& d);
void to_json(nlohmann::json& j, const CompileResult& r);
void from_json(const nlohmann::json& j, CompileResult& r);

}  // namespace ragfix
