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

#include <cstdlib>

#include "ragfix/error.hpp"
#include "ragfix/llm_client.hpp"
#include "ragfix/text.hpp"
#include "test_support.hpp"

namespace ragfix {
namespace {

constexpr const char* kKeyVar = "RAGFIX_TEST_LLM_KEY";
constexpr const char* kKey = "sk-test-4f9a1c";

PromptBundle prompt() { return build_baseline_prompt("class Main {}", "Main.java:1: error: x"); }

std::string chat_reply(const std::string& content) {
  return nlohmann::json{{"model", "m-1"},
                        {"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
                        {"usage", {{"prompt_tokens", 11}, {"completion_tokens", 5}}}}
      .dump();
}

LlmConfig remote_config() {
  LlmConfig c;
  c.kind = LlmKind::kRemote;
  c.endpoint_url = "http://fake.local/v1/chat/completions";
  c.model_name = "m-1";
  c.api_key_env_var = kKeyVar;
  c.retry_backoff = std::chrono::milliseconds(1);
  c.max_retries = 2;
  return c;
}

class RemoteChat : public ::testing::Test {
 protected:
  void SetUp() override { setenv(kKeyVar, kKey, 1); }
  void TearDown() override { unsetenv(kKeyVar); }
};

TEST(Scripted, ServesByCaseTurnAndPipeline) {
  ScriptedGenerator gen({{"c1", 1, "any-1", std::nullopt},
                         {"c1", 1, "rails-1", Pipeline::kRails},
                         {"c1", 2, "any-2a", std::nullopt},
                         {"c1", 2, "any-2b", std::nullopt}});
  EXPECT_EQ(gen.generate(prompt(), {"c1", 1, Pipeline::kRails}).text, "rails-1");
  EXPECT_EQ(gen.generate(prompt(), {"c1", 1, Pipeline::kRails}).text, "any-1");
  EXPECT_EQ(gen.generate(prompt(), {"c1", 2, Pipeline::kBaseline}).text, "any-2a");
  EXPECT_EQ(gen.generate(prompt(), {"c1", 2, Pipeline::kBaseline}).text, "any-2b");
  EXPECT_EQ(gen.remaining(), 0u);
  EXPECT_THROW(gen.generate(prompt(), {"c1", 1, Pipeline::kRails}), HarnessError);
  EXPECT_THROW(gen.generate(prompt(), {"c9", 1, Pipeline::kRails}), HarnessError);
}

TEST(Scripted, EmptyPromptRejected) {
  ScriptedGenerator gen({{"c1", 1, "r", std::nullopt}});
  EXPECT_THROW(gen.generate(PromptBundle{}, {"c1", 1, Pipeline::kBaseline}), InputError);
}

TEST(Scripted, LoadScriptFileAndErrors) {
  testing::TempDir dir;
  write_file(dir / "s.json",
             R"([{"case_id":"a","turn":1,"reply":"x"},{"case":"b","turn":2,"reply":"y","pipeline":"rails"}])");
  const auto entries = load_script(dir / "s.json");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[1].case_id, "b");
  EXPECT_EQ(entries[1].pipeline, Pipeline::kRails);
  EXPECT_EQ(ScriptedGenerator::from_file(dir / "s.json")->describe(), "scripted:s.json");

  write_file(dir / "bad.json", "{not json");
  EXPECT_THROW(load_script(dir / "bad.json"), ConfigError);
  write_file(dir / "obj.json", "{}");
  EXPECT_THROW(load_script(dir / "obj.json"), ConfigError);
  write_file(dir / "turn.json", R"([{"case_id":"a","turn":0,"reply":"x"}])");
  EXPECT_THROW(load_script(dir / "turn.json"), ConfigError);
  write_file(dir / "pipe.json", R"([{"case_id":"a","turn":1,"reply":"x","pipeline":"other"}])");
  EXPECT_THROW(load_script(dir / "pipe.json"), ConfigError);
}

TEST(Scripted, ShippedSuiteLoads) {
  const auto entries = load_script(testing::data_dir() / "scripts/suite.json");
  EXPECT_FALSE(entries.empty());
  for (const auto& e : entries) EXPECT_TRUE(e.pipeline.has_value()) << e.case_id;
}

TEST(LlmConfigTest, Validation) {
  LlmConfig c;
  EXPECT_THROW(c.validate(), ConfigError);  // scripted without script
  c = remote_config();
  c.validate();
  c.temperature = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = remote_config();
  c.endpoint_url.clear();
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST_F(RemoteChat, RequestShapeAndResponseParsing) {
  auto transport = std::make_shared<testing::FakeTransport>(
      [](const HttpRequest&, int) { return HttpResponse{200, chat_reply("```java\nclass Main {}\n```")}; });
  RemoteChatGenerator gen(remote_config(), transport);
  const auto p = prompt();
  const auto res = gen.generate(p, {"c1", 1, Pipeline::kBaseline});
  EXPECT_EQ(res.text, "```java\nclass Main {}\n```");
  EXPECT_EQ(res.model_name, "m-1");
  ASSERT_TRUE(res.usage.has_value());
  EXPECT_EQ(*res.usage, (TokenUsage{11, 5}));

  const auto reqs = transport->requests();
  ASSERT_EQ(reqs.size(), 1u);
  const auto body = nlohmann::json::parse(reqs[0].body);
  EXPECT_EQ(body, gen.request_body(p));
  EXPECT_EQ(body["model"], "m-1");
  EXPECT_EQ(body["temperature"], 0.0);
  ASSERT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], p.user_text);
  EXPECT_EQ(reqs[0].headers.at(0).second, std::string("Bearer ") + kKey);
}

TEST_F(RemoteChat, RetriesTransientFailures) {
  auto transport = std::make_shared<testing::FakeTransport>([](const HttpRequest&, int i) {
    if (i == 0) return HttpResponse{503, "busy"};
    if (i == 1) return HttpResponse{429, "slow down"};
    return HttpResponse{200, chat_reply("ok")};
  });
  RemoteChatGenerator gen(remote_config(), transport);
  EXPECT_EQ(gen.generate(prompt(), {"c1", 1, Pipeline::kBaseline}).text, "ok");
  EXPECT_EQ(transport->requests().size(), 3u);
}

TEST_F(RemoteChat, ExhaustedRetriesAndMalformedBodies) {
  auto down = std::make_shared<testing::FakeTransport>([](const HttpRequest&, int) { return HttpResponse{500, ""}; });
  RemoteChatGenerator gen(remote_config(), down);
  EXPECT_THROW(gen.generate(prompt(), {"c1", 1, Pipeline::kBaseline}), TransportError);
  EXPECT_EQ(down->requests().size(), 3u);

  auto junk = std::make_shared<testing::FakeTransport>([](const HttpRequest&, int) { return HttpResponse{200, "[]"}; });
  RemoteChatGenerator gen2(remote_config(), junk);
  EXPECT_THROW(gen2.generate(prompt(), {"c1", 1, Pipeline::kBaseline}), TransportError);

  auto denied = std::make_shared<testing::FakeTransport>(
      [](const HttpRequest&, int) { return HttpResponse{401, "bad key"}; });
  RemoteChatGenerator gen3(remote_config(), denied);
  EXPECT_THROW(gen3.generate(prompt(), {"c1", 1, Pipeline::kBaseline}), ConfigError);
  EXPECT_EQ(denied->requests().size(), 1u);
}

TEST_F(RemoteChat, KeyNeverReachesLogsOrErrors) {
  std::vector<nlohmann::json> records;
  auto echo = std::make_shared<testing::FakeTransport>([](const HttpRequest& r, int i) {
    if (i == 0) return HttpResponse{200, chat_reply(std::string("echo ") + kKey + " " + r.headers[0].second)};
    return HttpResponse{400, std::string("invalid key ") + kKey};
  });
  RemoteChatGenerator gen(remote_config(), echo, [&](const nlohmann::json& j) { records.push_back(j); });
  gen.generate(prompt(), {"c1", 1, Pipeline::kBaseline});
  try {
    gen.generate(prompt(), {"c1", 2, Pipeline::kBaseline});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).find(kKey), std::string::npos);
  }
  ASSERT_EQ(records.size(), 2u);
  for (const auto& r : records) EXPECT_EQ(r.dump().find(kKey), std::string::npos) << r.dump();
}

TEST(RemoteChatKey, MissingEnvironmentVariableIsConfigError) {
  unsetenv(kKeyVar);
  EXPECT_THROW(RemoteChatGenerator(remote_config(), nullptr), ConfigError);
}

}  // namespace
}  // namespace ragfix
