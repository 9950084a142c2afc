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

#include "app_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "ragfix/error.hpp"
#include "ragfix/text.hpp"

namespace ragfix::cli {

namespace {

using Setter = std::function<void(AppConfig&, const std::string&)>;

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": expected a number, got '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + value + "'");
}

std::vector<std::filesystem::path> split_path_list(const std::string& value) {
  std::vector<std::filesystem::path> out;
  std::stringstream in(value);
  std::string part;
  while (std::getline(in, part, ':')) {
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> kSetters = {
      {"corpus.chunk_size",
       [](AppConfig& c, const std::string& v) { c.chunking.chunk_size = parse_number<std::size_t>("corpus.chunk_size", v); }},
      {"corpus.overlap",
       [](AppConfig& c, const std::string& v) { c.chunking.overlap = parse_number<std::size_t>("corpus.overlap", v); }},
      {"embedding.provider",
       [](AppConfig& c, const std::string& v) {
         if (v == "offline") c.embedding.kind = EmbeddingKind::kOfflineHash;
         else if (v == "remote") c.embedding.kind = EmbeddingKind::kRemote;
         else throw ConfigError("embedding.provider: expected offline or remote, got '" + v + "'");
       }},
      {"embedding.endpoint", [](AppConfig& c, const std::string& v) { c.embedding.endpoint_url = v; }},
      {"embedding.model", [](AppConfig& c, const std::string& v) { c.embedding.model_name = v; }},
      {"embedding.api_key_env", [](AppConfig& c, const std::string& v) { c.embedding.api_key_env_var = v; }},
      {"embedding.dim",
       [](AppConfig& c, const std::string& v) { c.embedding.dim = parse_number<std::size_t>("embedding.dim", v); }},
      {"embedding.batch_size",
       [](AppConfig& c, const std::string& v) {
         c.embedding.batch_size = parse_number<std::size_t>("embedding.batch_size", v);
       }},
      {"embedding.timeout_s",
       [](AppConfig& c, const std::string& v) {
         c.embedding.timeout = std::chrono::seconds(parse_number<long>("embedding.timeout_s", v));
       }},
      {"embedding.max_retries",
       [](AppConfig& c, const std::string& v) { c.embedding.max_retries = parse_number<int>("embedding.max_retries", v); }},
      {"embedding.max_in_flight",
       [](AppConfig& c, const std::string& v) {
         c.embedding.max_in_flight = parse_number<std::size_t>("embedding.max_in_flight", v);
       }},
      {"llm.provider",
       [](AppConfig& c, const std::string& v) {
         if (v == "scripted") c.llm.kind = LlmKind::kScripted;
         else if (v == "remote") c.llm.kind = LlmKind::kRemote;
         else throw ConfigError("llm.provider: expected scripted or remote, got '" + v + "'");
       }},
      {"llm.endpoint", [](AppConfig& c, const std::string& v) { c.llm.endpoint_url = v; }},
      {"llm.model", [](AppConfig& c, const std::string& v) { c.llm.model_name = v; }},
      {"llm.api_key_env", [](AppConfig& c, const std::string& v) { c.llm.api_key_env_var = v; }},
      {"llm.temperature",
       [](AppConfig& c, const std::string& v) { c.llm.temperature = parse_double("llm.temperature", v); }},
      {"llm.max_tokens",
       [](AppConfig& c, const std::string& v) { c.llm.max_output_tokens = parse_number<int>("llm.max_tokens", v); }},
      {"llm.timeout_s",
       [](AppConfig& c, const std::string& v) {
         c.llm.timeout = std::chrono::seconds(parse_number<long>("llm.timeout_s", v));
       }},
      {"llm.max_retries",
       [](AppConfig& c, const std::string& v) { c.llm.max_retries = parse_number<int>("llm.max_retries", v); }},
      {"llm.script", [](AppConfig& c, const std::string& v) { c.llm.script_path = v; }},
      {"compiler.javac", [](AppConfig& c, const std::string& v) { c.compiler.compiler_path = v; }},
      {"compiler.classpath",
       [](AppConfig& c, const std::string& v) { c.compiler.classpath_entries = split_path_list(v); }},
      {"compiler.timeout_s",
       [](AppConfig& c, const std::string& v) {
         c.compiler.timeout = std::chrono::seconds(parse_number<long>("compiler.timeout_s", v));
       }},
      {"compiler.work_dir", [](AppConfig& c, const std::string& v) { c.compiler.work_dir = v; }},
      {"repair.max_iterations",
       [](AppConfig& c, const std::string& v) { c.max_iterations = parse_number<int>("repair.max_iterations", v); }},
      {"repair.top_k", [](AppConfig& c, const std::string& v) { c.top_k = parse_number<std::size_t>("repair.top_k", v); }},
      {"repair.token_budget",
       [](AppConfig& c, const std::string& v) { c.token_budget = parse_number<std::size_t>("repair.token_budget", v); }},
      {"repair.workers",
       [](AppConfig& c, const std::string& v) { c.workers = parse_number<std::size_t>("repair.workers", v); }},
      {"paths.index", [](AppConfig& c, const std::string& v) { c.index_path = v; }},
      {"paths.cases", [](AppConfig& c, const std::string& v) { c.cases_dir = v; }},
      {"paths.logs", [](AppConfig& c, const std::string& v) { c.logs_dir = v; }},
      {"paths.templates", [](AppConfig& c, const std::string& v) { c.templates_dir = v; }},
  };
  return kSetters;
}

}  // namespace

AppConfig load_app_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& ex) {
    throw ConfigError("cannot parse " + path.string() + ": " + ex.what());
  }
  AppConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(path.string() + ": key '" + section + "' must be inside a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end()) throw ConfigError(path.string() + ": unknown key '" + full + "'");
      it->second(config, std::string(trim(value.data())));
    }
  }
  return config;
}

RepairConfig make_repair_config(const AppConfig& app, Pipeline pipeline) {
  RepairConfig rc;
  rc.pipeline = pipeline;
  rc.max_iterations = app.max_iterations;
  rc.top_k = app.top_k;
  rc.index_path = app.index_path;
  rc.embedding = app.embedding;
  rc.llm = app.llm;
  rc.compiler = app.compiler;
  rc.token_budget = app.token_budget;
  rc.templates_dir = app.templates_dir;
  rc.logs_dir = app.logs_dir;
  return rc;
}

}  // namespace ragfix::cli
