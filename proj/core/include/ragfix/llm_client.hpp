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
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragfix/http.hpp"
#include "ragfix/prompting.hpp"

namespace ragfix {

enum class LlmKind { kRemote, kScripted };

struct LlmConfig {
  LlmKind kind = LlmKind::kScripted;
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string model_name = "gpt-3.5-turbo";
  std::string api_key_env_var = "OPENAI_API_KEY";
  double temperature = 0.0;
  int max_output_tokens = 2048;
  std::chrono::seconds timeout{60};
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff{500};
  std::filesystem::path script_path;  // scripted only

  void validate() const;
};

struct TokenUsage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct LlmResponse {
  std::string text;
  std::string model_name;
  double latency_ms = 0.0;
  std::optional<TokenUsage> usage;
};

/// Identifies which case and turn a request belongs to. The scripted provider
/// keys its replies on this; the remote provider ignores it.
struct RequestTag {
  std::string case_id;
  int turn = 1;
  Pipeline pipeline = Pipeline::kBaseline;
};

/// Receives one key-redacted JSON record per call.
using CallLogSink = std::function<void(const nlohmann::json&)>;

class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual LlmResponse generate(const PromptBundle& prompt, const RequestTag& tag) = 0;
  /// Provider description for reports, e.g. "scripted:cases.json".
  virtual std::string describe() const = 0;
};

struct ScriptEntry {
  std::string case_id;
  int turn = 1;
  std::string reply;
  std::optional<Pipeline> pipeline;  // unset: serves either pipeline
};

/// Replays canned replies keyed by (case_id, turn[, pipeline]). Each entry is used
/// once; entries sharing a key are served in file order. Thread-safe.
class ScriptedGenerator final : public TextGenerator {
 public:
  explicit ScriptedGenerator(std::vector<ScriptEntry> entries, std::string name = "inline");
  static std::unique_ptr<ScriptedGenerator> from_file(const std::filesystem::path& path);

  LlmResponse generate(const PromptBundle& prompt, const RequestTag& tag) override;
  std::string describe() const override { return "scripted:" + name_; }
  std::size_t remaining() const;

 private:
  using Key = std::tuple<std::string, int, int>;  // pipeline -1 means "any"

  mutable std::mutex mu_;
  std::map<Key, std::deque<std::string>> queues_;
  std::string name_;
};

/// Chat-completions client: system + user message, single choice, no streaming.
class RemoteChatGenerator final : public TextGenerator {
 public:
  RemoteChatGenerator(LlmConfig config, std::shared_ptr<HttpTransport> transport = nullptr,
                      CallLogSink log = nullptr);

  LlmResponse generate(const PromptBundle& prompt, const RequestTag& tag) override;
  std::string describe() const override { return "remote:" + config_.model_name; }

  /// Request body as sent; exposed for tests.
  nlohmann::json request_body(const PromptBundle& prompt) const;

 private:
  LlmConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  CallLogSink log_;
  std::string api_key_;
};

std::vector<ScriptEntry> load_script(const std::filesystem::path& path);

std::unique_ptr<TextGenerator> make_generator(const LlmConfig& config, std::shared_ptr<HttpTransport> transport = nullptr,
                                              CallLogSink log = nullptr);

LlmResponse generate(const PromptBundle& prompt, const LlmConfig& config, const RequestTag& tag);

}  // namespace ragfix
