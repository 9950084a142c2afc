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
#include <unordered_map>
#include <vector>

#include "ragfix/corpus.hpp"
#include "ragfix/embedding.hpp"

namespace ragfix {

struct ChunkMetadata {
  std::string doc_id;
  std::size_t start_offset = 0;
  std::string text;

  friend bool operator==(const ChunkMetadata&, const ChunkMetadata&) = default;
};

struct SearchHit {
  std::int64_t chunk_id = 0;
  double score = 0.0;
  std::string text;
  std::string doc_id;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Default number of chunks returned per retrieval query.
inline constexpr std::size_t kDefaultTopK = 4;

/// Flat, exact cosine index. Vectors are stored row-major in insertion order.
/// Build single-threaded; once built, const access is safe from any thread.
class VectorIndex {
 public:
  explicit VectorIndex(std::size_t dim = kOfflineDim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  /// Appends chunks with their vectors. All-or-nothing: on a dimension mismatch or
  /// duplicate id nothing is added and ContractError is thrown.
  void add_chunks(const std::vector<Chunk>& chunks, const std::vector<EmbeddingVector>& vectors);

  /// Exact top-k by cosine, scores non-increasing, ties by ascending chunk_id.
  std::vector<SearchHit> search(const EmbeddingVector& query, std::size_t k = kDefaultTopK) const;

  const std::vector<std::int64_t>& ids() const noexcept { return ids_; }
  const ChunkMetadata& metadata(std::int64_t chunk_id) const;
  /// Row for the entry at insertion position `pos`.
  std::vector<float> vector_at(std::size_t pos) const;

  /// Writes the little-endian payload to `path` and the JSON sidecar to
  /// sidecar_path(path).
  void save(const std::filesystem::path& path) const;
  static VectorIndex load(const std::filesystem::path& path);

  /// Byte size of the payload file for `count` entries of dimension `dim`.
  static std::uint64_t payload_size(std::size_t dim, std::uint64_t count) noexcept;

 private:
  double score_row(std::size_t pos, const EmbeddingVector& query) const;

  std::size_t dim_;
  std::vector<std::int64_t> ids_;
  std::vector<float> data_;
  std::unordered_map<std::int64_t, ChunkMetadata> metadata_;
  std::unordered_map<std::int64_t, std::size_t> position_;
};

std::filesystem::path sidecar_path(const std::filesystem::path& payload_path);

/// Payload format constants.
inline constexpr char kIndexMagic[4] = {'R', 'V', 'I', 'X'};
inline constexpr std::uint32_t kIndexFormatVersion = 1;
inline constexpr std::size_t kIndexHeaderBytes = 4 + 4 + 4 + 8;

}  // namespace ragfix
