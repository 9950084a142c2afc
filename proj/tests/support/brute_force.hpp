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

// Brute-force nearest-neighbour oracle: score every row, fully sort by
// (score desc, id asc), keep the first k.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "ragfix/corpus.hpp"
#include "ragfix/embedding.hpp"

namespace ragfix::testing {

struct BruteForceRow {
  std::int64_t id;
  std::vector<float> values;
};

inline std::vector<std::int64_t> brute_force_top_k(const std::vector<BruteForceRow>& rows,
                                                   const std::vector<float>& query, std::size_t k) {
  std::vector<std::pair<double, std::int64_t>> all;
  for (const auto& r : rows) {
    double dot = 0.0;
    for (std::size_t d = 0; d < query.size(); ++d) dot += double{r.values[d]} * double{query[d]};
    all.emplace_back(dot, r.id);
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.first > b.first) return true;
    if (a.first < b.first) return false;
    return a.second < b.second;
  });
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
  return out;
}

inline EmbeddingVector random_unit_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> n(0.0f, 1.0f);
  EmbeddingVector v{std::vector<float>(dim)};
  for (auto& x : v.values) x = n(rng);
  normalize(v);
  return v;
}

/// Random rows with some exact duplicates so score ties occur; ids are shuffled
/// so insertion order differs from id order.
struct RandomIndexData {
  std::vector<Chunk> chunks;
  std::vector<EmbeddingVector> vectors;
  std::vector<BruteForceRow> rows;
};

inline RandomIndexData random_index_data(std::mt19937_64& rng, std::size_t count, std::size_t dim) {
  RandomIndexData data;
  std::vector<std::int64_t> ids(count);
  for (std::size_t i = 0; i < count; ++i) ids[i] = static_cast<std::int64_t>(i * 3 + 1);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::uniform_int_distribution<int> dup(0, 9);
  for (std::size_t i = 0; i < count; ++i) {
    EmbeddingVector v = (i > 0 && dup(rng) == 0) ? data.vectors[rng() % i] : random_unit_vector(rng, dim);
    Chunk c;
    c.chunk_id = ids[i];
    c.doc_id = "doc" + std::to_string(i % 7);
    c.text = "chunk " + std::to_string(ids[i]);
    c.length = c.text.size();
    data.rows.push_back({c.chunk_id, v.values});
    data.chunks.push_back(std::move(c));
    data.vectors.push_back(std::move(v));
  }
  return data;
}

}  // namespace ragfix::testing
