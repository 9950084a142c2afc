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

#include "ragfix/vector_index.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <system_error>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ragfix/error.hpp"
#include "ragfix/text.hpp"

namespace ragfix {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(const std::string& in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& payload_path) {
  auto p = payload_path;
  p += ".meta.json";
  return p;
}

VectorIndex::VectorIndex(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ContractError("index dimension must be positive");
}

void VectorIndex::add_chunks(const std::vector<Chunk>& chunks, const std::vector<EmbeddingVector>& vectors) {
  if (chunks.size() != vectors.size()) {
    throw ContractError("add_chunks: " + std::to_string(chunks.size()) + " chunks but " +
                        std::to_string(vectors.size()) + " vectors");
  }
  std::unordered_set<std::int64_t> incoming;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (vectors[i].dim() != dim_) {
      throw ContractError("add_chunks: vector " + std::to_string(i) + " has dim " + std::to_string(vectors[i].dim()) +
                          ", index dim is " + std::to_string(dim_));
    }
    const auto id = chunks[i].chunk_id;
    if (metadata_.count(id) != 0 || !incoming.insert(id).second) {
      throw ContractError("add_chunks: duplicate chunk_id " + std::to_string(id));
    }
  }
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto& c = chunks[i];
    position_.emplace(c.chunk_id, ids_.size());
    ids_.push_back(c.chunk_id);
    data_.insert(data_.end(), vectors[i].values.begin(), vectors[i].values.end());
    metadata_.emplace(c.chunk_id, ChunkMetadata{c.doc_id, c.start_offset, c.text});
  }
}

double VectorIndex::score_row(std::size_t pos, const EmbeddingVector& query) const {
  const float* row = data_.data() + pos * dim_;
  double sum = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    sum += static_cast<double>(row[d]) * static_cast<double>(query.values[d]);
  }
  return sum;
}

std::vector<SearchHit> VectorIndex::search(const EmbeddingVector& query, std::size_t k) const {
  if (k == 0) throw ContractError("search: k must be >= 1");
  if (query.dim() != dim_) {
    throw ContractError("search: query dim " + std::to_string(query.dim()) + " does not match index dim " +
                        std::to_string(dim_));
  }
  if (ids_.empty()) return {};

  std::vector<std::pair<double, std::int64_t>> scored;
  scored.reserve(ids_.size());
  for (std::size_t pos = 0; pos < ids_.size(); ++pos) scored.emplace_back(score_row(pos, query), ids_[pos]);

  const auto better = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(), better);

  std::vector<SearchHit> hits;
  hits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& meta = metadata_.at(scored[i].second);
    hits.push_back({scored[i].second, scored[i].first, meta.text, meta.doc_id});
  }
  return hits;
}

const ChunkMetadata& VectorIndex::metadata(std::int64_t chunk_id) const {
  const auto it = metadata_.find(chunk_id);
  if (it == metadata_.end()) throw ContractError("unknown chunk_id " + std::to_string(chunk_id));
  return it->second;
}

std::vector<float> VectorIndex::vector_at(std::size_t pos) const {
  const auto first = data_.begin() + static_cast<std::ptrdiff_t>(pos * dim_);
  return {first, first + static_cast<std::ptrdiff_t>(dim_)};
}

std::uint64_t VectorIndex::payload_size(std::size_t dim, std::uint64_t count) noexcept {
  return kIndexHeaderBytes + count * dim * sizeof(float);
}

void VectorIndex::save(const std::filesystem::path& path) const {
  std::string payload;
  payload.reserve(payload_size(dim_, ids_.size()));
  payload.append(kIndexMagic, 4);
  put_u32(payload, kIndexFormatVersion);
  put_u32(payload, static_cast<std::uint32_t>(dim_));
  put_u64(payload, ids_.size());
  for (float f : data_) put_u32(payload, std::bit_cast<std::uint32_t>(f));

  nlohmann::json entries = nlohmann::json::array();
  for (auto id : ids_) {
    const auto& m = metadata_.at(id);
    entries.push_back({{"chunk_id", id}, {"doc_id", m.doc_id}, {"start_offset", m.start_offset}, {"text", m.text}});
  }
  const nlohmann::json sidecar = {{"format_version", kIndexFormatVersion},
                                  {"dim", dim_},
                                  {"count", ids_.size()},
                                  {"payload_sha256", sha256_hex(payload)},
                                  {"entries", std::move(entries)}};
  write_file(path, payload);
  write_file(sidecar_path(path), sidecar.dump(1) + "\n");
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) throw EnvironmentError("index not found: " + path.string());
  const std::string payload = read_file(path);
  if (payload.size() < kIndexHeaderBytes) {
    throw CorruptionError("index payload truncated: " + std::to_string(payload.size()) + " bytes");
  }
  if (std::memcmp(payload.data(), kIndexMagic, 4) != 0) throw FormatError("not an index file (bad magic): " + path.string());
  const auto version = static_cast<std::uint32_t>(get_le(payload, 4, 4));
  if (version != kIndexFormatVersion) {
    throw FormatError("unsupported index format version " + std::to_string(version));
  }
  const auto dim = static_cast<std::size_t>(get_le(payload, 8, 4));
  const auto count = get_le(payload, 12, 8);
  if (dim == 0) throw CorruptionError("index header declares dim 0");
  if (count > (payload.size() / sizeof(float)) || payload.size() != payload_size(dim, count)) {
    throw CorruptionError("index payload size " + std::to_string(payload.size()) + " does not match header (dim " +
                          std::to_string(dim) + ", count " + std::to_string(count) + ")");
  }

  const auto meta_path = sidecar_path(path);
  if (!std::filesystem::exists(meta_path, ec)) throw CorruptionError("index sidecar missing: " + meta_path.string());
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(read_file(meta_path));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError(std::string("index sidecar unreadable: ") + e.what());
  }

  try {
    if (sidecar.at("payload_sha256").get<std::string>() != sha256_hex(payload)) {
      throw CorruptionError("index payload digest does not match sidecar");
    }
    const auto& entries = sidecar.at("entries");
    if (entries.size() != count || sidecar.at("dim").get<std::size_t>() != dim ||
        sidecar.at("count").get<std::uint64_t>() != count) {
      throw CorruptionError("index sidecar disagrees with payload on dim/count");
    }

    VectorIndex index(dim);
    std::vector<Chunk> chunks;
    std::vector<EmbeddingVector> vectors;
    chunks.reserve(count);
    vectors.reserve(count);
    std::size_t offset = kIndexHeaderBytes;
    for (const auto& e : entries) {
      Chunk c;
      c.chunk_id = e.at("chunk_id").get<std::int64_t>();
      c.doc_id = e.at("doc_id").get<std::string>();
      c.start_offset = e.at("start_offset").get<std::size_t>();
      c.text = e.at("text").get<std::string>();
      c.length = utf8_length(c.text);
      EmbeddingVector v{std::vector<float>(dim)};
      for (std::size_t d = 0; d < dim; ++d, offset += 4) {
        v.values[d] = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(payload, offset, 4)));
      }
      chunks.push_back(std::move(c));
      vectors.push_back(std::move(v));
    }
    index.add_chunks(chunks, vectors);
    return index;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError(std::string("index sidecar malformed: ") + e.what());
  } catch (const ContractError& e) {
    throw CorruptionError(std::string("index sidecar inconsistent: ") + e.what());
  }
}

}  // namespace ragfix
