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

#include "ragfix/java_compiler.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "ragfix/error.hpp"
#include "ragfix/java_source.hpp"
#include "ragfix/subprocess.hpp"
#include "ragfix/text.hpp"

namespace ragfix {

std::string_view to_string(Severity s) noexcept { return s == Severity::kError ? "error" : "warning"; }

std::string_view to_string(DiagnosticKind k) noexcept {
  switch (k) {
    case DiagnosticKind::kCannotFindSymbol: return "cannot_find_symbol";
    case DiagnosticKind::kPackageDoesNotExist: return "package_does_not_exist";
    case DiagnosticKind::kOther: return "other";
  }
  return "other";
}

namespace {

DiagnosticKind kind_from_string(std::string_view s) {
  if (s == "cannot_find_symbol") return DiagnosticKind::kCannotFindSymbol;
  if (s == "package_does_not_exist") return DiagnosticKind::kPackageDoesNotExist;
  if (s == "other") return DiagnosticKind::kOther;
  throw FormatError("unknown diagnostic kind '" + std::string(s) + "'");
}

const std::map<std::string, std::string>& compiler_env() {
  static const std::map<std::string, std::string> env = {
      {"LC_ALL", "C.UTF-8"}, {"LANG", "C.UTF-8"}, {"LANGUAGE", "C"}};
  return env;
}

}  // namespace

void CompilerConfig::validate() const {
  if (compiler_path.empty()) throw ConfigError("compiler_path is empty");
  if (timeout.count() <= 0) throw ConfigError("compiler timeout must be positive");
}

std::size_t CompileResult::error_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.is_error(); }));
}

CompileResult compile_source(std::string_view source_text, std::string_view class_name, const CompilerConfig& config) {
  config.validate();
  if (!is_java_identifier(class_name)) {
    throw InputError("'" + std::string(class_name) + "' is not a valid Java class name");
  }
  if (config.work_dir.empty()) throw ConfigError("compiler work_dir is not set");
  std::filesystem::create_directories(config.work_dir);
  const auto work_dir = std::filesystem::absolute(config.work_dir);
  const auto file = work_dir / (std::string(class_name) + ".java");
  write_file(file, source_text);

  std::string classpath;
  for (const auto& entry : config.classpath_entries) {
    if (!classpath.empty()) classpath += ':';
    classpath += entry.string();
  }
  if (classpath.empty()) classpath = work_dir.string();

  ProcessOptions options;
  options.working_dir = work_dir;
  options.env_overrides = compiler_env();
  options.timeout = std::chrono::duration_cast<std::chrono::milliseconds>(config.timeout);
  // A relative file name keeps diagnostics free of the work-dir path.
  std::string compiler = config.compiler_path;
  if (compiler.find('/') != std::string::npos) compiler = std::filesystem::absolute(compiler).string();
  const auto proc = run_process({compiler, "-d", work_dir.string(), "-cp", classpath, file.filename().string()}, options);

  CompileResult result;
  result.raw_output = proc.stderr_text + proc.stdout_text;
  if (proc.timed_out) {
    throw TimeoutError("compiler timed out after " + std::to_string(config.timeout.count()) + " s", result.raw_output);
  }
  result.exit_code = proc.exit_code;
  result.duration = proc.duration;
  result.diagnostics = parse_diagnostics(result.raw_output);
  if (proc.exit_code != 0 && result.error_count() == 0) {
    Diagnostic d;
    d.file = file.filename().string();
    d.message = trim(result.raw_output).empty() ? "compiler exited with status " + std::to_string(proc.exit_code)
                                                 : std::string(trim(result.raw_output));
    result.diagnostics.push_back(std::move(d));
  }
  result.success = proc.exit_code == 0 && result.error_count() == 0;
  return result;
}

std::string compiler_version(const CompilerConfig& config) {
  ProcessOptions options;
  options.env_overrides = compiler_env();
  options.timeout = std::chrono::duration_cast<std::chrono::milliseconds>(config.timeout);
  const auto proc = run_process({config.compiler_path, "-version"}, options);
  const std::string out = proc.stdout_text + proc.stderr_text;
  return std::string(trim(out.substr(0, out.find('\n'))));
}

namespace {

std::string simple_symbol_name(std::string_view text) {
  std::size_t end = 0;
  while (end < text.size() && text[end] != '(' && text[end] != '<' && text[end] != ' ') ++end;
  auto name = text.substr(0, end);
  const auto dot = name.rfind('.');
  if (dot != std::string_view::npos) name = name.substr(dot + 1);
  return std::string(name);
}

}  // namespace

namespace {

struct Header {
  std::string file;
  int line = 0;
  Severity severity = Severity::kError;
  std::string message;
};

bool all_digits(std::string_view s) noexcept {
  return !s.empty() && s.size() <= 9 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// "<file>:<line>: error: <msg>" or a bare "error: <msg>".
std::optional<Header> parse_header(std::string_view line) {
  for (const auto severity : {Severity::kError, Severity::kWarning}) {
    const std::string tag = std::string(to_string(severity)) + ": ";
    if (line.starts_with(tag)) return Header{"", 0, severity, std::string(line.substr(tag.size()))};
    const auto pos = line.find(": " + tag);
    if (pos == std::string_view::npos) continue;
    const auto prefix = line.substr(0, pos);
    const auto colon = prefix.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || !all_digits(prefix.substr(colon + 1))) continue;
    return Header{std::string(prefix.substr(0, colon)), std::stoi(std::string(prefix.substr(colon + 1))), severity,
                  std::string(line.substr(pos + 2 + tag.size()))};
  }
  return std::nullopt;
}

// Value of an indented "<key>: <value>" continuation line.
std::optional<std::string_view> continuation(std::string_view line, std::string_view key) {
  const auto t = trim(line);
  if (!t.starts_with(key) || t.size() <= key.size() || t[key.size()] != ':') return std::nullopt;
  return trim(t.substr(key.size() + 1));
}

bool is_summary_line(std::string_view line) {
  const auto space = line.find(' ');
  if (space == std::string_view::npos || !all_digits(line.substr(0, space))) return false;
  const auto rest = line.substr(space + 1);
  return rest == "error" || rest == "errors" || rest == "warning" || rest == "warnings";
}

}  // namespace

std::vector<Diagnostic> parse_diagnostics(std::string_view raw_output) {
  constexpr std::string_view kPackagePrefix = "package ";
  constexpr std::string_view kPackageSuffix = " does not exist";

  std::vector<Diagnostic> out;
  bool in_diagnostic = false;
  std::size_t start = 0;
  while (start < raw_output.size()) {
    auto end = raw_output.find('\n', start);
    if (end == std::string_view::npos) end = raw_output.size();
    auto line = raw_output.substr(start, end - start);
    start = end + 1;
    if (line.ends_with('\r')) line.remove_suffix(1);

    if (auto header = parse_header(line)) {
      Diagnostic d;
      d.file = std::move(header->file);
      d.line = header->line;
      d.severity = header->severity;
      d.message = std::move(header->message);
      out.push_back(std::move(d));
      in_diagnostic = true;
    } else if (in_diagnostic) {
      if (auto value = continuation(line, "symbol")) {
        const auto space = value->find(' ');
        if (space == std::string_view::npos) {
          out.back().symbol = simple_symbol_name(*value);
        } else {
          out.back().symbol_kind = std::string(value->substr(0, space));
          out.back().symbol = simple_symbol_name(trim(value->substr(space + 1)));
        }
      } else if (auto loc = continuation(line, "location")) {
        out.back().location = std::string(*loc);
      }
    }
  }

  for (auto& d : out) {
    const std::string_view msg = d.message;
    if (msg == "cannot find symbol" && d.symbol && !d.symbol->empty()) {
      d.kind = DiagnosticKind::kCannotFindSymbol;
    } else if (msg.starts_with(kPackagePrefix) && msg.ends_with(kPackageSuffix) &&
               msg.size() > kPackagePrefix.size() + kPackageSuffix.size()) {
      d.kind = DiagnosticKind::kPackageDoesNotExist;
      d.package = std::string(msg.substr(kPackagePrefix.size(), msg.size() - kPackagePrefix.size() - kPackageSuffix.size()));
    } else {
      d.kind = DiagnosticKind::kOther;
    }
  }
  return out;
}

std::string CompileResult::error_text() const {
  std::istringstream in(raw_output);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_summary_line(line)) continue;
    out += line;
    out += '\n';
  }
  return std::string(trim(out));
}

bool package_matches(std::string_view package, std::span<const std::string> expected) {
  return std::any_of(expected.begin(), expected.end(), [&](const std::string& e) {
    return !e.empty() && (package == e || (package.size() > e.size() && package.starts_with(e) && package[e.size()] == '.'));
  });
}

bool is_missing_dependency_only(std::span<const Diagnostic> diagnostics, std::span<const std::string> expected_packages,
                                std::span<const std::string> external_symbols) {
  return std::all_of(diagnostics.begin(), diagnostics.end(), [&](const Diagnostic& d) {
    if (!d.is_error()) return true;
    if (d.kind == DiagnosticKind::kPackageDoesNotExist) return package_matches(*d.package, expected_packages);
    if (d.kind == DiagnosticKind::kCannotFindSymbol) {
      return std::find(external_symbols.begin(), external_symbols.end(), *d.symbol) != external_symbols.end();
    }
    return false;
  });
}

std::vector<std::string> external_symbols_in(std::string_view source, std::span<const std::string> expected_packages) {
  std::vector<std::string> out;
  for (const auto& imp : parse_imports(source)) {
    if (imp.wildcard || imp.is_static || !package_matches(imp.package(), expected_packages)) continue;
    auto name = imp.simple_name();
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
  }
  return out;
}

void to_json(nlohmann::json& j, const Diagnostic& d) {
  j = {{"file", d.file},
       {"line", d.line},
       {"severity", to_string(d.severity)},
       {"kind", to_string(d.kind)},
       {"message", d.message}};
  if (d.symbol) j["symbol"] = *d.symbol;
  if (d.symbol_kind) j["symbol_kind"] = *d.symbol_kind;
  if (d.package) j["package"] = *d.package;
  if (d.location) j["location"] = *d.location;
}

void from_json(const nlohmann::json& j, Diagnostic& d) {
  d = {};
  d.file = j.at("file").get<std::string>();
  d.line = j.at("line").get<int>();
  d.severity = j.at("severity").get<std::string>() == "error" ? Severity::kError : Severity::kWarning;
  d.kind = kind_from_string(j.at("kind").get<std::string>());
  d.message = j.at("message").get<std::string>();
  if (j.contains("symbol")) d.symbol = j["symbol"].get<std::string>();
  if (j.contains("symbol_kind")) d.symbol_kind = j["symbol_kind"].get<std::string>();
  if (j.contains("package")) d.package = j["package"].get<std::string>();
  if (j.contains("location")) d.location = j["location"].get<std::string>();
}

void to_json(nlohmann::json& j, const CompileResult& r) {
  j = {{"success", r.success},
       {"exit_code", r.exit_code},
       {"diagnostics", r.diagnostics},
       {"raw_output", r.raw_output},
       {"duration_ms", r.duration.count()}};
}

void from_json(const nlohmann::json& j, CompileResult& r) {
  r.success = j.at("success").get<bool>();
  r.exit_code = j.value("exit_code", 0);
  r.diagnostics = j.at("diagnostics").get<std::vector<Diagnostic>>();
  r.raw_output = j.at("raw_output").get<std::string>();
  r.duration = std::chrono::milliseconds(j.value("duration_ms", std::int64_t{0}));
}

}  // namespace ragfix
