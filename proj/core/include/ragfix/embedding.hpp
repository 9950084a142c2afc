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

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ragfix/http.hpp"

namespace ragfix {

/// Unit-normalized embedding. Dimension is values.size().
struct EmbeddingVector {
  std::vector<float> values;

  std::size_t dim() const noexcept { return values.size(); }
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

/// Dot product accumulated in double. For unit vectors this is cosine similarity.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

enum class EmbeddingKind { kRemote, kOfflineHash };

struct EmbeddingProviderConfig {
  EmbeddingKind kind = EmbeddingKind::kOfflineHash;
  std::string endpoint_url;  // remote only
  std::string model_name = "text-embedding-ada-002";
  std::string api_key_env_var = "OPENAI_API_KEY";
  std::size_t dim = 256;
  std::size_t batch_size = 64;
  std::chrono::seconds timeout{30};
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff{200};
  std::size_t max_in_flight = 4;

  void validate() const;
};

/// Offline providers use 256 dimensions; the remote ada-002 style models return 1536.
inline constexpr std::size_t kOfflineDim = 256;
inline constexpr std::size_t kRemoteAdaDim = 1536;

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  virtual EmbeddingVector embed(std::string_view text) = 0;
  /// Output order matches input order.
  virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) = 0;
};

/// Character-trigram feature hashing with signed buckets, L2-normalized. Pure
/// function of the input bytes.
class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dim = kOfflineDim);

  std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(std::string_view text) override;
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override;

 private:
  std::size_t dim_;
};

/// Embeddings-endpoint client: POST {"model", "input": [...]}, read data[].embedding.
/// Batches of batch_size are sent with at most max_in_flight concurrent requests;
/// a batch is retried as a whole.
class RemoteEmbedder final : public Embedder {
 public:
  RemoteEmbedder(EmbeddingProviderConfig config, std::shared_ptr<HttpTransport> transport);

  std::size_t dim() const override { return config_.dim; }
  EmbeddingVector embed(std::string_view text) override;
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override;

 private:
  std::vector<EmbeddingVector> request_batch(const std::vector<std::string>& texts, std::size_t first,
                                             std::size_t last);

  EmbeddingProviderConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::string api_key_;
};

/// Builds the provider described by config. A null transport means the real HTTP client.
std::unique_ptr<Embedder> make_embedder(const EmbeddingProviderConfig& config,
                                        std::shared_ptr<HttpTransport> transport = nullptr);

EmbeddingVector embed_text(std::string_view text, const EmbeddingProviderConfig& config);
std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts, const EmbeddingProviderConfig& config);

/// Scales to unit length in place. Throws ContractError on NaN/Inf or a zero vector.
void normalize(EmbeddingVector& v);

}  // namespace ragfix
