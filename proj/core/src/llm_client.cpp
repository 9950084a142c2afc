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

#include "ragfix/llm_client.hpp"

#include "ragfix/error.hpp"
#include "ragfix/text.hpp"

namespace ragfix {

void LlmConfig::validate() const {
  if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (kind == LlmKind::kScripted && script_path.empty()) throw ConfigError("scripted provider requires script_path");
  if (kind == LlmKind::kRemote) {
    if (endpoint_url.empty()) throw ConfigError("remote provider requires endpoint_url");
    if (api_key_env_var.empty()) throw ConfigError("remote provider requires api_key_env_var");
  }
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<ScriptEntry> load_script(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("script " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!doc.is_array()) throw ConfigError("script " + path.string() + " must be a JSON array");
  std::vector<ScriptEntry> entries;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& e = doc[i];
    try {
      ScriptEntry entry;
      entry.case_id = (e.contains("case_id") ? e.at("case_id") : e.at("case")).get<std::string>();
      entry.turn = e.at("turn").get<int>();
      entry.reply = e.at("reply").get<std::string>();
      if (e.contains("pipeline")) entry.pipeline = pipeline_from_string(e.at("pipeline").get<std::string>());
      if (entry.turn < 1) throw ConfigError("turn must be >= 1");
      entries.push_back(std::move(entry));
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError("script " + path.string() + " entry " + std::to_string(i) + ": " + ex.what());
    } catch (const ConfigError& ex) {
      throw ConfigError("script " + path.string() + " entry " + std::to_string(i) + ": " + ex.what());
    }
  }
  return entries;
}

ScriptedGenerator::ScriptedGenerator(std::vector<ScriptEntry> entries, std::string name) : name_(std::move(name)) {
  for (auto& e : entries) {
    const int p = e.pipeline ? static_cast<int>(*e.pipeline) : -1;
    queues_[{e.case_id, e.turn, p}].push_back(std::move(e.reply));
  }
}

std::unique_ptr<ScriptedGenerator> ScriptedGenerator::from_file(const std::filesystem::path& path) {
  return std::make_unique<ScriptedGenerator>(load_script(path), path.filename().string());
}

LlmResponse ScriptedGenerator::generate(const PromptBundle& prompt, const RequestTag& tag) {
  if (prompt.user_text.empty()) throw InputError("empty prompt");
  const auto start = std::chrono::steady_clock::now();
  std::lock_guard lock(mu_);
  for (int p : {static_cast<int>(tag.pipeline), -1}) {
    auto it = queues_.find({tag.case_id, tag.turn, p});
    if (it == queues_.end() || it->second.empty()) continue;
    LlmResponse res;
    res.text = std::move(it->second.front());
    it->second.pop_front();
    res.model_name = describe();
    res.latency_ms = elapsed_ms(start);
    return res;
  }
  throw HarnessError("scripted provider has no reply for case '" + tag.case_id + "' turn " + std::to_string(tag.turn) +
                     " (" + std::string(to_string(tag.pipeline)) + ")");
}

std::size_t ScriptedGenerator::remaining() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [k, q] : queues_) n += q.size();
  return n;
}

RemoteChatGenerator::RemoteChatGenerator(LlmConfig config, std::shared_ptr<HttpTransport> transport, CallLogSink log)
    : config_(std::move(config)), transport_(std::move(transport)), log_(std::move(log)) {
  config_.validate();
  if (!transport_) transport_ = make_http_transport();
  api_key_ = read_secret_env(config_.api_key_env_var);
}

nlohmann::json RemoteChatGenerator::request_body(const PromptBundle& prompt) const {
  nlohmann::json messages = nlohmann::json::array();
  if (!prompt.system_text.empty()) messages.push_back({{"role", "system"}, {"content", prompt.system_text}});
  messages.push_back({{"role", "user"}, {"content", prompt.user_text}});
  return {{"model", config_.model_name},
          {"temperature", config_.temperature},
          {"max_tokens", config_.max_output_tokens},
          {"messages", std::move(messages)}};
}

LlmResponse RemoteChatGenerator::generate(const PromptBundle& prompt, const RequestTag& tag) {
  if (prompt.user_text.empty()) throw InputError("empty prompt");
  const auto body = request_body(prompt);
  HttpRequest request{config_.endpoint_url,
                      body.dump(),
                      {{"Authorization", "Bearer " + api_key_}},
                      std::chrono::duration_cast<std::chrono::milliseconds>(config_.timeout)};

  const auto start = std::chrono::steady_clock::now();
  HttpResponse res;
  try {
    res = post_with_retry(*transport_, request, {config_.max_retries, config_.retry_backoff}, api_key_);
  } catch (const Error& e) {
    if (log_) {
      log_({{"case_id", tag.case_id}, {"turn", tag.turn}, {"request", body}, {"error", redact(e.what(), api_key_)}});
    }
    throw;
  }

  LlmResponse out;
  out.latency_ms = elapsed_ms(start);
  try {
    const auto parsed = nlohmann::json::parse(res.body);
    const auto& content = parsed.at("choices").at(0).at("message").at("content");
    out.text = content.is_null() ? std::string() : content.get<std::string>();
    out.model_name = parsed.value("model", config_.model_name);
    if (parsed.contains("usage")) {
      const auto& u = parsed["usage"];
      out.usage = TokenUsage{u.value("prompt_tokens", 0), u.value("completion_tokens", 0)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed chat response: ") + e.what());
  }
  if (log_) {
    log_({{"case_id", tag.case_id},
          {"turn", tag.turn},
          {"request", body},
          {"response", redact(res.body, api_key_)},
          {"latency_ms", out.latency_ms}});
  }
  return out;
}

std::unique_ptr<TextGenerator> make_generator(const LlmConfig& config, std::shared_ptr<HttpTransport> transport,
                                              CallLogSink log) {
  config.validate();
  if (config.kind == LlmKind::kScripted) return ScriptedGenerator::from_file(config.script_path);
  return std::make_unique<RemoteChatGenerator>(config, std::move(transport), std::move(log));
}

LlmResponse generate(const PromptBundle& prompt, const LlmConfig& config, const RequestTag& tag) {
  return make_generator(config)->generate(prompt, tag);
}

}  // namespace ragfix
