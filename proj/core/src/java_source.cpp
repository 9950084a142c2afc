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

#include "ragfix/java_source.hpp"

#include <algorithm>
#include <array>

namespace ragfix {

namespace {

enum class TokKind { kIdent, kPunct, kOther };

struct Token {
  TokKind kind;
  std::string_view text;
  int line;
};

bool ident_start(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || u >= 0x80;
}

bool ident_part(char c) noexcept { return ident_start(c) || (c >= '0' && c <= '9'); }

// Tokenizer that understands enough Java to step over comments, string/char
// literals and text blocks.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokens() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        ++pos_;
      } else if (starts("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (starts("/*")) {
        skip_until("*/", 2);
      } else if (starts("\"\"\"")) {
        const int l = line_;
        const auto begin = pos_;
        skip_until("\"\"\"", 3);
        out.push_back({TokKind::kOther, src_.substr(begin, pos_ - begin), l});
      } else if (c == '"' || c == '\'') {
        const int l = line_;
        const auto begin = pos_;
        skip_quoted(c);
        out.push_back({TokKind::kOther, src_.substr(begin, pos_ - begin), l});
      } else if (ident_start(c)) {
        const auto begin = pos_;
        while (pos_ < src_.size() && ident_part(src_[pos_])) ++pos_;
        out.push_back({TokKind::kIdent, src_.substr(begin, pos_ - begin), line_});
      } else if (c >= '0' && c <= '9') {
        const auto begin = pos_;
        while (pos_ < src_.size() && (ident_part(src_[pos_]) || src_[pos_] == '.')) ++pos_;
        out.push_back({TokKind::kOther, src_.substr(begin, pos_ - begin), line_});
      } else {
        out.push_back({TokKind::kPunct, src_.substr(pos_, 1), line_});
        ++pos_;
      }
    }
    return out;
  }

 private:
  bool starts(std::string_view s) const noexcept { return src_.substr(pos_, s.size()) == s; }

  void skip_until(std::string_view terminator, std::size_t opener_len) {
    pos_ += opener_len;
    while (pos_ < src_.size() && !starts(terminator)) {
      if (src_[pos_] == '\n') ++line_;
      if (src_[pos_] == '\\' && terminator == "\"\"\"") ++pos_;
      ++pos_;
    }
    pos_ = std::min(src_.size(), pos_ + terminator.size());
  }

  void skip_quoted(char quote) {
    ++pos_;
    while (pos_ < src_.size() && src_[pos_] != quote && src_[pos_] != '\n') {
      if (src_[pos_] == '\\') ++pos_;
      ++pos_;
    }
    if (pos_ < src_.size() && src_[pos_] == quote) ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

bool is_punct(const Token& t, char c) noexcept { return t.kind == TokKind::kPunct && t.text[0] == c; }

}  // namespace

std::string ImportDecl::package() const {
  if (wildcard) return name;
  const auto dot = name.rfind('.');
  return dot == std::string::npos ? std::string() : name.substr(0, dot);
}

std::string ImportDecl::simple_name() const {
  if (wildcard) return {};
  const auto dot = name.rfind('.');
  return dot == std::string::npos ? name : name.substr(dot + 1);
}

std::vector<ImportDecl> parse_imports(std::string_view source) {
  const auto toks = Lexer(source).tokens();
  std::vector<ImportDecl> out;
  int depth = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (is_punct(t, '{')) ++depth;
    if (is_punct(t, '}')) depth = std::max(0, depth - 1);
    if (depth != 0 || t.kind != TokKind::kIdent || t.text != "import") continue;

    ImportDecl decl;
    decl.line = t.line;
    std::size_t j = i + 1;
    if (j < toks.size() && toks[j].kind == TokKind::kIdent && toks[j].text == "static") {
      decl.is_static = true;
      ++j;
    }
    bool ok = false;
    while (j < toks.size()) {
      if (toks[j].kind == TokKind::kIdent) {
        decl.name += toks[j].text;
      } else if (is_punct(toks[j], '*')) {
        decl.wildcard = true;
      } else {
        break;
      }
      ++j;
      if (j < toks.size() && is_punct(toks[j], '.')) {
        decl.name += '.';
        ++j;
        continue;
      }
      ok = j < toks.size() && is_punct(toks[j], ';');
      break;
    }
    if (ok && !decl.name.empty()) {
      if (decl.wildcard && decl.name.ends_with('.')) decl.name.pop_back();
      out.push_back(std::move(decl));
      i = j;
    }
  }
  return out;
}

bool imports_type(std::span<const ImportDecl> imports, std::string_view fqn) {
  const auto dot = fqn.rfind('.');
  const std::string_view pkg = dot == std::string_view::npos ? std::string_view() : fqn.substr(0, dot);
  return std::any_of(imports.begin(), imports.end(), [&](const ImportDecl& d) {
    if (d.is_static) return false;
    return d.wildcard ? d.name == pkg : d.name == fqn;
  });
}

std::optional<std::string> find_primary_type_name(std::string_view source) {
  const auto toks = Lexer(source).tokens();
  std::optional<std::string> first;
  int depth = 0;
  bool saw_public = false;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (is_punct(t, '{')) {
      ++depth;
      continue;
    }
    if (is_punct(t, '}')) {
      depth = std::max(0, depth - 1);
      saw_public = false;
      continue;
    }
    if (depth != 0) continue;
    if (is_punct(t, ';')) {
      saw_public = false;
      continue;
    }
    if (t.kind != TokKind::kIdent) continue;
    if (t.text == "public") {
      saw_public = true;
      continue;
    }
    const bool type_kw = t.text == "class" || t.text == "interface" || t.text == "enum" || t.text == "record";
    if (!type_kw || i + 1 >= toks.size() || toks[i + 1].kind != TokKind::kIdent) continue;
    std::string name(toks[i + 1].text);
    if (saw_public) return name;
    if (!first) first = std::move(name);
  }
  return first;
}

bool is_java_identifier(std::string_view name) noexcept {
  static constexpr std::array<std::string_view, 53> kReserved = {
      "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
      "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
      "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
      "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp", "super",
      "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void", "volatile", "while",
      "true", "false", "null"};
  if (name.empty() || !ident_start(name[0])) return false;
  if (!std::all_of(name.begin(), name.end(), ident_part)) return false;
  return std::find(kReserved.begin(), kReserved.end(), name) == kReserved.end() && name != "_";
}

std::string strip_comments(std::string_view source) {
  std::string out(source);
  std::size_t i = 0;
  auto blank = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to && k < out.size(); ++k) {
      if (out[k] != '\n') out[k] = ' ';
    }
  };
  while (i < source.size()) {
    const char c = source[i];
    if (source.substr(i, 2) == "//") {
      const auto end = source.find('\n', i);
      const auto stop = end == std::string_view::npos ? source.size() : end;
      blank(i, stop);
      i = stop;
    } else if (source.substr(i, 2) == "/*") {
      const auto end = source.find("*/", i + 2);
      const auto stop = end == std::string_view::npos ? source.size() : end + 2;
      blank(i, stop);
      i = stop;
    } else if (source.substr(i, 3) == "\"\"\"") {
      const auto end = source.find("\"\"\"", i + 3);
      i = end == std::string_view::npos ? source.size() : end + 3;
    } else if (c == '"' || c == '\'') {
      ++i;
      while (i < source.size() && source[i] != c && source[i] != '\n') {
        if (source[i] == '\\') ++i;
        ++i;
      }
      ++i;
    } else {
      ++i;
    }
  }
  return out;
}

std::string_view source_line(std::string_view text, int line) noexcept {
  if (line < 1) return {};
  std::size_t start = 0;
  for (int l = 1; l < line; ++l) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) return {};
    start = nl + 1;
  }
  auto end = text.find('\n', start);
  if (end == std::string_view::npos) end = text.size();
  auto s = text.substr(start, end - start);
  if (s.ends_with('\r')) s.remove_suffix(1);
  return s;
}

}  // namespace ragfix
