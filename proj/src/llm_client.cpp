// Copyright 2026 The Hyposcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hyposcore/llm_client.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "hyposcore/digest.hpp"
#include "hyposcore/error.hpp"

namespace hyposcore::llm {

HttpTransport::HttpTransport(const EndpointConfig& cfg) : cfg_(cfg) {
  const char* key = std::getenv(kApiKeyEnv);
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::kAuthMissing,
                std::string(kApiKeyEnv) + " is not set");
  }
  api_key_ = key;
}

Attempt HttpTransport::attempt(const std::string& prompt) {
  // Split base_url into origin and path prefix; httplib clients take the
  // origin only.
  std::string origin = cfg_.base_url;
  std::string prefix;
  auto scheme_end = origin.find("://");
  auto path_start = origin.find('/', scheme_end == std::string::npos
                                          ? 0
                                          : scheme_end + 3);
  if (path_start != std::string::npos) {
    prefix = origin.substr(path_start);
    origin = origin.substr(0, path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  }

  httplib::Client client(origin);
  client.set_connection_timeout(cfg_.timeout.count(), 0);
  client.set_read_timeout(cfg_.timeout.count(), 0);
  client.set_bearer_token_auth(api_key_);

  nlohmann::json body;
  body["model"] = cfg_.model_name;
  body["messages"] = nlohmann::json::array(
      {nlohmann::json{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = cfg_.temperature;

  auto res = client.Post(prefix + "/chat/completions", body.dump(),
                         "application/json");
  if (!res) {
    return {false, true, "connection failed: " + httplib::to_string(res.error())};
  }
  if (res->status == 429 || res->status >= 500) {
    return {false, true, "HTTP " + std::to_string(res->status)};
  }
  if (res->status != 200) {
    return {false, false, "HTTP " + std::to_string(res->status)};
  }
  nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") ||
      !reply["choices"].is_array() || reply["choices"].empty() ||
      !reply["choices"][0].contains("message") ||
      !reply["choices"][0]["message"].contains("content") ||
      !reply["choices"][0]["message"]["content"].is_string()) {
    return {false, false, "malformed completion response"};
  }
  return {true, false,
          reply["choices"][0]["message"]["content"].get<std::string>()};
}

Attempt MockTransport::attempt(const std::string& prompt) {
  auto it = replies_.find(sha256_hex(prompt));
  if (it == replies_.end()) {
    return {false, true, "no fixture for prompt"};
  }
  return {true, false, it->second};
}

std::unordered_map<std::string, std::string> load_mock_fixtures(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open fixtures " + path.string());
  }
  std::unordered_map<std::string, std::string> fixtures;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("prompt_sha256") ||
        !j.contains("reply") || !j["prompt_sha256"].is_string() ||
        !j["reply"].is_string()) {
      throw Error(ErrorCode::kSchemaError,
                  path.filename().string() + ":" + std::to_string(line_no) +
                      ": expected {\"prompt_sha256\", \"reply\"}");
    }
    fixtures[j["prompt_sha256"].get<std::string>()] =
        j["reply"].get<std::string>();
  }
  return fixtures;
}

std::string complete(Transport& transport, const std::string& prompt,
                     const EndpointConfig& cfg) {
  std::chrono::milliseconds delay = cfg.backoff.initial;
  std::string last_error;
  for (unsigned attempt_no = 0; attempt_no <= cfg.max_retries; ++attempt_no) {
    Attempt a = transport.attempt(prompt);
    if (a.ok) return a.text;
    last_error = a.text;
    if (!a.retryable) {
      throw Error(ErrorCode::kTransportExhausted,
                  "non-retryable failure after " +
                      std::to_string(attempt_no + 1) + " attempt(s): " +
                      last_error);
    }
    if (attempt_no < cfg.max_retries && delay.count() > 0) {
      std::this_thread::sleep_for(delay);
      delay = std::chrono::milliseconds(static_cast<long long>(
          static_cast<double>(delay.count()) * cfg.backoff.multiplier));
    }
  }
  throw Error(ErrorCode::kTransportExhausted,
              std::to_string(cfg.max_retries + 1) + " attempt(s) failed: " +
                  last_error);
}

std::vector<Completion> complete_batch(Transport& transport,
                                       const std::vector<std::string>& prompts,
                                       const EndpointConfig& cfg) {
  std::vector<Completion> results(prompts.size());
  if (prompts.empty()) return results;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= prompts.size()) return;
      try {
        results[i] = {true, complete(transport, prompts[i], cfg), ""};
      } catch (const Error& e) {
        results[i] = {false, "", e.what()};
      }
    }
  };

  std::size_t pool = std::min<std::size_t>(std::max(1u, cfg.max_parallel),
                                           prompts.size());
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace hyposcore::llm
