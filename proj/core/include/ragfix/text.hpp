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

#include <filesystem>
#include <string>
#include <string_view>

namespace ragfix {

/// Decodes UTF-8 into Unicode scalar values. Invalid sequences throw InputError.
std::u32string utf8_decode(std::string_view bytes);

std::string utf8_encode(std::u32string_view text);

/// Number of Unicode scalar values in a valid UTF-8 string.
std::size_t utf8_length(std::string_view bytes);

bool is_valid_utf8(std::string_view bytes) noexcept;

/// Same set of code points Python's str.isspace() accepts.
bool is_unicode_space(char32_t c) noexcept;

std::string_view trim(std::string_view s) noexcept;

std::string read_file(const std::filesystem::path& path);

/// Writes atomically enough for our purposes: temp file in the same directory, then rename.
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string sha256_hex(std::string_view bytes);

std::string sha256_file(const std::filesystem::path& path);

/// Replaces every occurrence of `secret` with "***". Empty secrets are ignored.
std::string redact(std::string text, std::string_view secret);

}  // namespace ragfix
