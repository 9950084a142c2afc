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

#include "ragfix/embedding.hpp"

#include <cmath>
#include <algorithm>
#include <future>
#include <thread>

#include <nlohmann/json.hpp>

#include "ragfix/error.hpp"
#include "ragfix/text.hpp"

namespace ragfix {

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw ContractError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    sum += static_cast<double>(a.values[i]) * static_cast<double>(b.values[i]);
  }
  return sum;
}

void normalize(EmbeddingVector& v) {
  double sq = 0.0;
  for (float x : v.values) {
    if (!std::isfinite(x)) throw ContractError("embedding contains NaN or Inf");
    sq += static_cast<double>(x) * static_cast<double>(x);
  }
  if (sq <= 0.0) throw ContractError("cannot normalize a zero vector");
  const double inv = 1.0 / std::sqrt(sq);
  for (float& x : v.values) x = static_cast<float>(static_cast<double>(x) * inv);
}

void EmbeddingProviderConfig::validate() const {
  if (dim == 0) throw ConfigError("embedding dim must be positive");
  if (batch_size == 0) throw ConfigError("embedding batch_size must be >= 1");
  if (max_retries < 0) throw ConfigError("embedding max_retries must be >= 0");
  if (kind == EmbeddingKind::kRemote) {
    if (endpoint_url.empty()) throw ConfigError("remote embedding provider requires endpoint_url");
    if (api_key_env_var.empty()) throw ConfigError("remote embedding provider requires api_key_env_var");
  }
}

namespace {

void require_text(std::string_view text) {
  if (trim(text).empty()) throw InputError("cannot embed empty text");
}

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

HashEmbedder::HashEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ConfigError("embedding dim must be positive");
}

EmbeddingVector HashEmbedder::embed(std::string_view text) {
  require_text(text);
  const std::u32string chars = utf8_decode(text);
  EmbeddingVector v{std::vector<float>(dim_, 0.0f)};

  auto add_gram = [&](std::u32string_view gram) {
    const std::uint64_t h = fnv1a(utf8_encode(gram));
    const float sign = ((h >> 63) & 1U) != 0 ? -1.0f : 1.0f;
    v.values[h % dim_] += sign;
  };
  if (chars.size() < 3) {
    add_gram(chars);
  } else {
    for (std::size_t i = 0; i + 3 <= chars.size(); ++i) add_gram(std::u32string_view(chars).substr(i, 3));
  }

  bool all_zero = true;
  for (float x : v.values) all_zero = all_zero && x == 0.0f;
  if (all_zero) {
    // Signed buckets cancelled out exactly; fall back to a one-hot on the whole text.
    v.values[fnv1a(text) % dim_] = 1.0f;
  }
  normalize(v);
  return v;
}

std::vector<EmbeddingVector> HashEmbedder::embed_batch(const std::vector<std::string>& texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

RemoteEmbedder::RemoteEmbedder(EmbeddingProviderConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  config_.validate();
  if (!transport_) transport_ = make_http_transport();
  api_key_ = read_secret_env(config_.api_key_env_var);
}

EmbeddingVector RemoteEmbedder::embed(std::string_view text) {
  require_text(text);
  return std::move(request_batch({std::string(text)}, 0, 1).front());
}

std::vector<EmbeddingVector> RemoteEmbedder::request_batch(const std::vector<std::string>& texts, std::size_t first,
                                                           std::size_t last) {
  nlohmann::json body = {{"model", config_.model_name}, {"input", nlohmann::json::array()}};
  for (std::size_t i = first; i < last; ++i) body["input"].push_back(texts[i]);

  HttpRequest request{config_.endpoint_url,
                      body.dump(),
                      {{"Authorization", "Bearer " + api_key_}},
                      std::chrono::duration_cast<std::chrono::milliseconds>(config_.timeout)};
  const RetryPolicy policy{config_.max_retries, config_.retry_backoff};
  const std::string range = "[" + std::to_string(first) + ", " + std::to_string(last) + ")";

  std::string last_problem;
  // A malformed or short response counts as a failed attempt of the whole batch.
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    HttpResponse res;
    try {
      res = post_with_retry(*transport_, request, {0, policy.initial_backoff}, api_key_);
    } catch (const TransportError& e) {
      last_problem = e.what();
      if (attempt < config_.max_retries) {
        std::this_thread::sleep_for(policy.initial_backoff * (1 << attempt));
      }
      continue;
    }

    std::vector<EmbeddingVector> out(last - first);
    std::vector<bool> seen(last - first, false);
    try {
      const auto parsed = nlohmann::json::parse(res.body);
      for (const auto& item : parsed.at("data")) {
        const auto index = item.at("index").get<std::size_t>();
        if (index >= out.size()) throw ContractError("embedding index out of range");
        out[index].values = item.at("embedding").get<std::vector<float>>();
        seen[index] = true;
      }
    } catch (const nlohmann::json::exception& e) {
      last_problem = std::string("malformed embeddings response: ") + e.what();
      continue;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      last_problem = "response is missing embeddings";
      continue;
    }
    for (auto& v : out) {
      if (v.dim() != config_.dim) {
        throw ContractError("embedding dimension " + std::to_string(v.dim()) + " does not match configured " +
                            std::to_string(config_.dim));
      }
      normalize(v);
    }
    return out;
  }
  throw TransportError(redact("embedding batch " + range + " failed: " + last_problem, api_key_));
}

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(const std::vector<std::string>& texts) {
  for (const auto& t : texts) require_text(t);
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());

  std::vector<std::pair<std::size_t, std::size_t>> batches;
  for (std::size_t i = 0; i < texts.size(); i += config_.batch_size) {
    batches.emplace_back(i, std::min(texts.size(), i + config_.batch_size));
  }
  const std::size_t in_flight = std::max<std::size_t>(1, config_.max_in_flight);
  for (std::size_t b = 0; b < batches.size(); b += in_flight) {
    std::vector<std::future<std::vector<EmbeddingVector>>> pending;
    for (std::size_t k = b; k < std::min(batches.size(), b + in_flight); ++k) {
      pending.push_back(std::async(std::launch::async, [this, &texts, range = batches[k]] {
        return request_batch(texts, range.first, range.second);
      }));
    }
    for (auto& f : pending) {
      for (auto& v : f.get()) out.push_back(std::move(v));
    }
  }
  return out;
}

std::unique_ptr<Embedder> make_embedder(const EmbeddingProviderConfig& config, std::shared_ptr<HttpTransport> transport) {
  config.validate();
  if (config.kind == EmbeddingKind::kOfflineHash) return std::make_unique<HashEmbedder>(config.dim);
  return std::make_unique<RemoteEmbedder>(config, std::move(transport));
}

EmbeddingVector embed_text(std::string_view text, const EmbeddingProviderConfig& config) {
  return make_embedder(config)->embed(text);
}

std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts, const EmbeddingProviderConfig& config) {
  return make_embedder(config)->embed_batch(texts);
}

}  // namespace ragfix
