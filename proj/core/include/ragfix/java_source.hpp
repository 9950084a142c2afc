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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ragfix {

struct ImportDecl {
  std::string name;  // "java.util.ArrayList", or the package for wildcard imports
  bool is_static = false;
  bool wildcard = false;
  int line = 0;

  std::string package() const;     // enclosing package of a single-type import
  std::string simple_name() const;  // empty for wildcard imports

  friend bool operator==(const ImportDecl&, const ImportDecl&) = default;
};

/// Top-level import declarations, ignoring anything inside comments or literals.
std::vector<ImportDecl> parse_imports(std::string_view source);

/// True if `fqn` is imported exactly, or its enclosing package is imported with `.*`.
bool imports_type(std::span<const ImportDecl> imports, std::string_view fqn);

/// Name of the public top-level type, else of the first top-level type.
std::optional<std::string> find_primary_type_name(std::string_view source);

/// Java identifier that is not a reserved word.
bool is_java_identifier(std::string_view name) noexcept;

/// Source with comments blanked out (newlines kept, so line numbers still match).
std::string strip_comments(std::string_view source);

/// Line `line` (1-based) of text without its terminator; empty if out of range.
std::string_view source_line(std::string_view text, int line) noexcept;

}  // namespace ragfix
