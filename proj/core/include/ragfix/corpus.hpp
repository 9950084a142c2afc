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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ragfix {

enum class Origin { kOfficialDocs, kTutorial, kCommunity };

std::string_view to_string(Origin origin) noexcept;
Origin origin_from_string(std::string_view name);

struct SourceDocument {
  std::string doc_id;  // path relative to the corpus root, '/'-separated
  std::string text;
  Origin origin = Origin::kOfficialDocs;
};

/// A contiguous slice of a document. Offsets and lengths count Unicode scalar
/// values, not bytes.
struct Chunk {
  std::int64_t chunk_id = 0;
  std::string doc_id;
  std::size_t start_offset = 0;
  std::string text;
  std::size_t length = 0;

  friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct ChunkingConfig {
  std::size_t chunk_size = 300;
  std::size_t overlap = 50;
  /// Coarse to fine. Must end with "" (split into single characters).
  std::vector<std::string> separators = {"\n\n", "\n", " ", ""};

  /// Throws ConfigError unless 0 <= overlap < chunk_size and the separator list
  /// ends with the empty string.
  void validate() const;
};

/// Recursive character splitting: split on the coarsest separator present, recurse
/// into pieces that are still too long with the next separator, then greedily merge
/// neighbouring pieces up to chunk_size, carrying at most `overlap` trailing
/// characters into the next chunk. Separators stay attached to the start of the
/// piece that follows them and chunk edges are whitespace-trimmed.
///
/// Returned chunks have empty doc_id and ids numbered from 0.
std::vector<Chunk> split_text(std::string_view text, const ChunkingConfig& config);

struct ManifestEntry {
  std::string doc_id;
  Origin origin = Origin::kOfficialDocs;
  std::size_t chunk_count = 0;
  std::string sha256;
};

struct CorpusManifest {
  std::vector<ManifestEntry> documents;
  std::vector<std::string> warnings;
  std::size_t total_chunks = 0;
};

struct IngestResult {
  std::vector<SourceDocument> documents;
  std::vector<Chunk> chunks;
  CorpusManifest manifest;
};

/// Crude HTML to text: drops tags, script/style bodies and comments; decodes the
/// handful of entities that show up in Javadoc.
std::string strip_html(std::string_view html);

/// Discovers .txt/.md/.html files under root in lexicographic path order, splits
/// each and numbers chunks densely across the corpus. A file whose first path
/// component is "tutorial(s)" or "community" gets that origin; everything else is
/// official_docs.
IngestResult ingest_corpus(const std::filesystem::path& root, const ChunkingConfig& config);

void to_json(nlohmann::json& j, const CorpusManifest& manifest);
void from_json(const nlohmann::json& j, CorpusManifest& manifest);
void to_json(nlohmann::json& j, const Chunk& chunk);
void from_json(const nlohmann::json& j, Chunk& chunk);

}  // namespace ragfix
