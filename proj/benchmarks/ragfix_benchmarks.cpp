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

#include <benchmark/benchmark.h>

#include <random>

#include "ragfix/corpus.hpp"
#include "ragfix/embedding.hpp"
#include "ragfix/java_compiler.hpp"
#include "ragfix/vector_index.hpp"

namespace {

std::string sample_text(std::size_t length) {
  std::mt19937 rng(7);
  const char* words[] = {"import", "java.util.List", "class", "Files.readAllLines", "\n", "\n\n", "path"};
  std::string out;
  while (out.size() < length) {
    out += words[rng() % 7];
    out += ' ';
  }
  out.resize(length);
  return out;
}

void BM_SplitText(benchmark::State& state) {
  const std::string text = sample_text(static_cast<std::size_t>(state.range(0)));
  const ragfix::ChunkingConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(ragfix::split_text(text, config));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SplitText)->Arg(5'000)->Arg(45'500);

void BM_HashEmbed(benchmark::State& state) {
  const std::string text = sample_text(300);
  ragfix::HashEmbedder embedder;
  for (auto _ : state) benchmark::DoNotOptimize(embedder.embed(text));
}
BENCHMARK(BM_HashEmbed);

void BM_Search(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(11);
  std::normal_distribution<float> n;
  auto random_vector = [&] {
    ragfix::EmbeddingVector v{std::vector<float>(ragfix::kOfflineDim)};
    for (auto& x : v.values) x = n(rng);
    ragfix::normalize(v);
    return v;
  };
  std::vector<ragfix::Chunk> chunks(count);
  std::vector<ragfix::EmbeddingVector> vectors;
  for (std::size_t i = 0; i < count; ++i) {
    chunks[i].chunk_id = static_cast<std::int64_t>(i);
    chunks[i].text = "c";
    chunks[i].length = 1;
    vectors.push_back(random_vector());
  }
  ragfix::VectorIndex index;
  index.add_chunks(chunks, vectors);
  const auto query = random_vector();
  for (auto _ : state) benchmark::DoNotOptimize(index.search(query, ragfix::kDefaultTopK));
}
BENCHMARK(BM_Search)->Arg(38)->Arg(1'456)->Arg(20'000);

void BM_ParseDiagnostics(benchmark::State& state) {
  std::string raw;
  for (int i = 1; i <= 20; ++i) {
    raw += "Main.java:" + std::to_string(i) + ": error: cannot find symbol\n        List<String> xs;\n        ^\n"
           "  symbol:   class List\n  location: class Main\n";
  }
  raw += "20 errors\n";
  for (auto _ : state) benchmark::DoNotOptimize(ragfix::parse_diagnostics(raw));
}
BENCHMARK(BM_ParseDiagnostics);

}  // namespace

BENCHMARK_MAIN();
