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

#include <fstream>
#include <random>

#include "brute_force.hpp"
#include "ragfix/error.hpp"
#include "ragfix/text.hpp"
#include "ragfix/vector_index.hpp"
#include "test_support.hpp"

namespace ragfix {
namespace {

std::vector<std::int64_t> ids_of(const std::vector<SearchHit>& hits) {
  std::vector<std::int64_t> out;
  for (const auto& h : hits) out.push_back(h.chunk_id);
  return out;
}

Chunk chunk(std::int64_t id, std::string text = "t") {
  Chunk c;
  c.chunk_id = id;
  c.doc_id = "d.md";
  c.text = std::move(text);
  c.length = c.text.size();
  return c;
}

TEST(VectorIndex, SearchMatchesBruteForceIncludingTies) {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 10; ++round) {
    const auto data = testing::random_index_data(rng, 300, 32);
    VectorIndex index(32);
    index.add_chunks(data.chunks, data.vectors);
    for (int q = 0; q < 10; ++q) {
      // Some queries equal a stored vector, which makes duplicate rows tie at the top.
      const auto query = q % 3 == 0 ? data.vectors[rng() % data.vectors.size()] : testing::random_unit_vector(rng, 32);
      for (std::size_t k : {1u, 4u, 17u}) {
        EXPECT_EQ(ids_of(index.search(query, k)), testing::brute_force_top_k(data.rows, query.values, k));
      }
    }
  }
}

TEST(VectorIndex, TiesBreakByAscendingChunkId) {
  VectorIndex index(2);
  const EmbeddingVector v{{1.0f, 0.0f}};
  index.add_chunks({chunk(9), chunk(3), chunk(5)}, {v, v, v});
  EXPECT_EQ(ids_of(index.search(v, 2)), (std::vector<std::int64_t>{3, 5}));
}

TEST(VectorIndex, SmallAndEmptyIndexes) {
  VectorIndex index(2);
  EXPECT_TRUE(index.search({{1.0f, 0.0f}}, 4).empty());
  index.add_chunks({chunk(1, "only")}, {{{0.0f, 1.0f}}});
  const auto hits = index.search({{0.0f, 1.0f}}, 4);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].text, "only");
  EXPECT_NEAR(hits[0].score, 1.0, 1e-9);
}

TEST(VectorIndex, ContractViolations) {
  VectorIndex index(2);
  EXPECT_THROW(index.add_chunks({chunk(1)}, {}), ContractError);
  EXPECT_THROW(index.add_chunks({chunk(1)}, {{{1.0f, 0.0f, 0.0f}}}), ContractError);
  EXPECT_THROW(index.add_chunks({chunk(1), chunk(1)}, {{{1.0f, 0.0f}}, {{0.0f, 1.0f}}}), ContractError);
  index.add_chunks({chunk(1)}, {{{1.0f, 0.0f}}});
  EXPECT_THROW(index.add_chunks({chunk(1)}, {{{1.0f, 0.0f}}}), ContractError);
  EXPECT_EQ(index.size(), 1u);  // failed adds leave the index untouched
  EXPECT_THROW(index.search({{1.0f, 0.0f}}, 0), ContractError);
  EXPECT_THROW(index.search({{1.0f, 0.0f, 0.0f}}, 1), ContractError);
}

TEST(VectorIndex, SaveLoadRoundTrip) {
  testing::TempDir dir;
  std::mt19937_64 rng(5);
  const auto data = testing::random_index_data(rng, 120, 16);
  VectorIndex index(16);
  index.add_chunks(data.chunks, data.vectors);
  index.save(dir / "idx.bin");

  const auto loaded = VectorIndex::load(dir / "idx.bin");
  EXPECT_EQ(loaded.size(), index.size());
  EXPECT_EQ(loaded.ids(), index.ids());
  for (int q = 0; q < 5; ++q) {
    const auto query = testing::random_unit_vector(rng, 16);
    EXPECT_EQ(loaded.search(query, 4), index.search(query, 4));
  }
  loaded.save(dir / "again.bin");
  EXPECT_EQ(read_file(dir / "idx.bin"), read_file(dir / "again.bin"));
  EXPECT_EQ(std::filesystem::file_size(dir / "idx.bin"), VectorIndex::payload_size(16, 120));
  EXPECT_TRUE(std::filesystem::exists(sidecar_path(dir / "idx.bin")));
}

TEST(VectorIndex, PayloadSizeArithmetic) {
  // 1,456 chunks of 256 float32 values plus the 20-byte header: about 1.49 MB.
  EXPECT_EQ(VectorIndex::payload_size(256, 1456), 20u + 1456u * 256u * 4u);
  EXPECT_NEAR(static_cast<double>(VectorIndex::payload_size(256, 1456)) / 1e6, 1.49, 0.01);
}

class VectorIndexFileErrors : public ::testing::Test {
 protected:
  void SetUp() override {
    VectorIndex index(4);
    index.add_chunks({chunk(1), chunk(2)}, {{{1, 0, 0, 0}}, {{0, 1, 0, 0}}});
    index.save(path());
  }
  std::filesystem::path path() const { return dir_ / "idx.bin"; }
  void patch(std::size_t offset, char byte) {
    std::string bytes = read_file(path());
    bytes[offset] = byte;
    write_file(path(), bytes);
  }
  testing::TempDir dir_;
};

TEST_F(VectorIndexFileErrors, MissingFile) {
  EXPECT_THROW(VectorIndex::load(dir_ / "absent.bin"), EnvironmentError);
}

TEST_F(VectorIndexFileErrors, BadMagic) {
  patch(0, 'X');
  EXPECT_THROW(VectorIndex::load(path()), FormatError);
}

TEST_F(VectorIndexFileErrors, UnsupportedVersion) {
  patch(4, 9);
  EXPECT_THROW(VectorIndex::load(path()), FormatError);
}

TEST_F(VectorIndexFileErrors, TruncatedPayload) {
  std::string bytes = read_file(path());
  bytes.resize(bytes.size() - 4);
  write_file(path(), bytes);
  EXPECT_THROW(VectorIndex::load(path()), CorruptionError);
}

TEST_F(VectorIndexFileErrors, FlippedVectorByteFailsDigest) {
  patch(24, 0x55);
  EXPECT_THROW(VectorIndex::load(path()), CorruptionError);
}

TEST_F(VectorIndexFileErrors, SidecarCountMismatch) {
  auto meta = nlohmann::json::parse(read_file(sidecar_path(path())));
  meta["entries"].erase(1);
  write_file(sidecar_path(path()), meta.dump());
  EXPECT_THROW(VectorIndex::load(path()), CorruptionError);
}

}  // namespace
}  // namespace ragfix
