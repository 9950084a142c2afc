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
#include <map>
#include <memory>

#include "ragfix/benchmark.hpp"
#include "ragfix/corpus.hpp"
#include "ragfix/embedding.hpp"
#include "ragfix/vector_index.hpp"
#include "test_support.hpp"

namespace ragfix::testing {

/// Offline index over the shipped corpus, saved to `path`.
inline void build_sample_index(const std::filesystem::path& path) {
  const auto ingest = ingest_corpus(data_dir() / "corpus", ChunkingConfig{});
  HashEmbedder emb;
  std::vector<std::string> texts;
  for (const auto& c : ingest.chunks) texts.push_back(c.text);
  VectorIndex index(emb.dim());
  index.add_chunks(ingest.chunks, emb.embed_batch(texts));
  index.save(path);
}

/// Engines for both pipelines over the shipped cases and scripted replies. Every
/// artefact lives under `root`.
inline BenchmarkOptions suite_options(const std::filesystem::path& root, std::size_t workers = 1) {
  const auto index_path = root / "index.bin";
  if (!std::filesystem::exists(index_path)) build_sample_index(index_path);
  BenchmarkOptions options;
  options.workers = workers;
  options.out_dir = root / "out";
  for (auto p : {Pipeline::kBaseline, Pipeline::kRails}) {
    RepairConfig c;
    c.pipeline = p;
    c.index_path = index_path;
    c.llm.kind = LlmKind::kScripted;
    c.llm.script_path = data_dir() / "scripts/suite.json";
    c.compiler.compiler_path = emulator_path();
    c.compiler.work_dir = root / "work";
    options.engines[p] = std::make_shared<const RepairEngine>(RepairEngine::from_config(c));
  }
  return options;
}

}  // namespace ragfix::testing
