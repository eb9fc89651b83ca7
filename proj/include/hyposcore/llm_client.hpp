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

#ifndef HYPOSCORE_LLM_CLIENT_HPP_
#define HYPOSCORE_LLM_CLIENT_HPP_

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace hyposcore::llm {

struct RetryBackoff {
  std::chrono::milliseconds initial{500};
  double multiplier = 2.0;
};

struct EndpointConfig {
  std::string base_url;
  std::string model_name;
  double temperature = 0.0;
  std::chrono::seconds timeout{60};
  unsigned max_retries = 3;
  RetryBackoff backoff;
  unsigned max_parallel = 4;
};

// Name of the environment variable carrying the bearer credential.
inline constexpr const char* kApiKeyEnv = "HYPOSCORE_API_KEY";

// Outcome of a single transport attempt.
struct Attempt {
  bool ok = false;
  bool retryable = false;  // meaningful when !ok
  std::string text;        // reply content, or the error description
};

// One chat-completion backend. Implementations must be safe to call from
// multiple threads at once.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Attempt attempt(const std::string& prompt) = 0;
};

// OpenAI-compatible chat-completions client: POST {base_url}/chat/completions
// with a single user message. Retryable failures are connect errors, 429 and
// 5xx statuses.
class HttpTransport : public Transport {
 public:
  // Reads the credential from HYPOSCORE_API_KEY; throws AuthMissing when the
  // variable is empty or unset.
  explicit HttpTransport(const EndpointConfig& cfg);
  Attempt attempt(const std::string& prompt) override;

 private:
  EndpointConfig cfg_;
  std::string api_key_;
};

// Deterministic offline backend: replies come from a fixture keyed by the
// SHA-256 of the prompt. Prompts missing from the fixture fail as transport
// errors (retryable, so retry accounting matches the live path).
class MockTransport : public Transport {
 public:
  explicit MockTransport(
      std::unordered_map<std::string, std::string> replies_by_hash)
      : replies_(std::move(replies_by_hash)) {}

  Attempt attempt(const std::string& prompt) override;

 private:
  std::unordered_map<std::string, std::string> replies_;
};

// Fixture JSONL: {"prompt_sha256": str, "reply": str} per line.
std::unordered_map<std::string, std::string> load_mock_fixtures(
    const std::filesystem::path& path);

// Blocking single completion with exponential-backoff retries. Attempts are
// exactly min(failures + 1, max_retries + 1); throws TransportExhausted when
// they run out, and fails fast on non-retryable errors.
std::string complete(Transport& transport, const std::string& prompt,
                     const EndpointConfig& cfg);

struct Completion {
  bool ok = false;
  std::string text;   // reply on success
  std::string error;  // description on failure
};

// Bounded-parallel batch: at most cfg.max_parallel requests in flight,
// results in input order, per-item failures embedded.
std::vector<Completion> complete_batch(Transport& transport,
                                       const std::vector<std::string>& prompts,
                                       const EndpointConfig& cfg);

}  // namespace hyposcore::llm

#endif  // HYPOSCORE_LLM_CLIENT_HPP_
