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

#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "hyposcore/digest.hpp"
#include "hyposcore/error.hpp"
#include "hyposcore/eval.hpp"
#include "hyposcore/report.hpp"
#include "helpers.hpp"

using namespace hyposcore;
using namespace hyposcore::eval;
namespace ht = hyposcore::testing;

namespace {

const dataset::NormalizationPolicy kRaw = dataset::NormalizationPolicy::none();

std::vector<dataset::HypothesisSet> sample_records() {
  auto loaded = dataset::load_corpus(
      ht::data_dir() / "samples" / "sample.jsonl", kRaw);
  return loaded.records;
}

EvalOptions make_options(const std::string& spec_name) {
  EvalOptions options;
  options.spec_name = spec_name;
  options.spec = *promptgen::spec_by_name(spec_name);
  options.policy = kRaw;
  return options;
}

llm::EndpointConfig fast_endpoint() {
  llm::EndpointConfig cfg;
  cfg.max_retries = 0;
  cfg.max_parallel = 2;
  cfg.backoff.initial = std::chrono::milliseconds(0);
  return cfg;
}

// Builds the fixture map for a record set by replaying the deterministic
// prompt construction, mapping each prompt to reply(record).
template <typename ReplyFn>
llm::MockTransport make_mock(const std::vector<dataset::HypothesisSet>& records,
                             const EvalOptions& options, ReplyFn reply) {
  std::unordered_map<std::string, std::string> fixtures;
  for (const auto& rec : records) {
    std::string prompt = promptgen::build_direct_prompt(
        rec, options.spec, ht::bundled_lexicon(), options.templates);
    fixtures[sha256_hex(prompt)] = reply(rec);
  }
  return llm::MockTransport(std::move(fixtures));
}

}  // namespace

TEST_CASE("identity replies drive the corpus CER to zero") {
  auto records = sample_records();
  auto options = make_options("Prompt2");
  auto mock = make_mock(records, options, [](const dataset::HypothesisSet& r) {
    return std::string(R"({"correction": ")") + r.transcription + R"("})";
  });
  auto endpoint = fast_endpoint();
  auto outcome = run_evaluation(records, ht::bundled_lexicon(), &mock,
                                endpoint, options);

  CHECK(outcome.scored == records.size());
  CHECK(outcome.parse_failures == 0);
  REQUIRE_FALSE(outcome.rows.empty());
  const auto& all = outcome.rows.back();
  CHECK(all.corpus == "ALL");
  CHECK(report::fmt2(all.cer) == "0.00");
  REQUIRE(all.minus_cerr.has_value());
  CHECK(report::fmt2(*all.minus_cerr) == "-100.00");
}

TEST_CASE("echo replies reproduce the baseline exactly") {
  auto records = sample_records();
  auto options = make_options("Prompt1");
  auto mock = make_mock(records, options, [](const dataset::HypothesisSet& r) {
    return std::string(R"({"correction": ")") + r.hypotheses.front() + R"("})";
  });
  auto endpoint = fast_endpoint();
  auto outcome = run_evaluation(records, ht::bundled_lexicon(), &mock,
                                endpoint, options);

  const auto& all = outcome.rows.back();
  CHECK(all.cer == doctest::Approx(all.baseline_cer));
  REQUIRE(all.minus_cerr.has_value());
  CHECK(report::fmt2(*all.minus_cerr) == "0.00");
  CHECK(outcome.parse_failures == 0);
}

TEST_CASE("garbage replies fall back to the baseline with parse flags") {
  auto records = sample_records();
  auto options = make_options("Prompt1");
  auto mock = make_mock(records, options, [](const dataset::HypothesisSet&) {
    return std::string("I think the answer is...");
  });
  auto endpoint = fast_endpoint();
  auto outcome = run_evaluation(records, ht::bundled_lexicon(), &mock,
                                endpoint, options);

  CHECK(outcome.parse_failures == outcome.scored);
  const auto& all = outcome.rows.back();
  CHECK(all.cer == doctest::Approx(all.baseline_cer));
  for (const auto& utt : outcome.utterances) {
    CHECK(utt.correction.fallback_used);
    CHECK(utt.correction.failure_reason == promptgen::FailureReason::kParse);
  }
}

TEST_CASE("finetune specs evaluate through the same pipeline") {
  auto records = sample_records();
  auto options = make_options("Finetune2");
  std::unordered_map<std::string, std::string> fixtures;
  for (const auto& rec : records) {
    auto [prompt, response] = promptgen::build_finetune_pair(
        rec, options.spec, ht::bundled_lexicon(), options.templates,
        options.policy);
    fixtures[sha256_hex(prompt)] =
        std::string(R"({"correction": ")") + response + R"("})";
  }
  llm::MockTransport mock(std::move(fixtures));
  auto endpoint = fast_endpoint();
  auto outcome = run_evaluation(records, ht::bundled_lexicon(), &mock,
                                endpoint, options);
  CHECK(outcome.scored == records.size());
  CHECK(report::fmt2(outcome.rows.back().cer) == "0.00");
}

TEST_CASE("the baseline spec runs without a transport") {
  auto records = sample_records();
  auto options = make_options("Baseline");
  auto endpoint = fast_endpoint();
  auto outcome = run_evaluation(records, ht::bundled_lexicon(), nullptr,
                                endpoint, options);
  const auto& all = outcome.rows.back();
  CHECK(all.cer == doctest::Approx(all.baseline_cer));
  CHECK(outcome.transport_failures == 0);
}

TEST_CASE("missing fixtures abort once failures pass the threshold") {
  auto records = sample_records();
  auto options = make_options("Prompt1");
  llm::MockTransport empty_mock({});
  auto endpoint = fast_endpoint();
  auto outcome = run_evaluation(records, ht::bundled_lexicon(), &empty_mock,
                                endpoint, options);
  CHECK(outcome.transport_failures == outcome.scored);
  CHECK(outcome.aborted);
  // everything still scored via fallback
  const auto& all = outcome.rows.back();
  CHECK(all.cer == doctest::Approx(all.baseline_cer));
}

TEST_CASE("records that cannot take the spec are skipped") {
  auto records = sample_records();
  records.push_back(
      ht::make_record("slim", "aishell1/test", {"你好"}, "你好"));
  auto options = make_options("Prompt2");
  auto mock = make_mock(sample_records(), options,
                        [](const dataset::HypothesisSet& r) {
                          return std::string(R"({"correction": ")") +
                                 r.transcription + R"("})";
                        });
  auto endpoint = fast_endpoint();
  auto outcome = run_evaluation(records, ht::bundled_lexicon(), &mock,
                                endpoint, options);
  CHECK(outcome.scored == records.size() - 1);
  CHECK(outcome.skipped_not_enough_hypotheses == 1);
}

TEST_CASE("empty references are excluded with a tally") {
  std::vector<dataset::HypothesisSet> records = {
      ht::make_record("a", "c", {"你好"}, "你好"),
      ht::make_record("b", "c", {"你好"}, ""),
  };
  auto options = make_options("Baseline");
  auto endpoint = fast_endpoint();
  auto outcome = run_evaluation(records, ht::bundled_lexicon(), nullptr,
                                endpoint, options);
  CHECK(outcome.scored == 1);
  CHECK(outcome.skipped_empty_reference == 1);
}

TEST_CASE("manifest timestamps honor SOURCE_DATE_EPOCH") {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  CHECK(manifest_timestamp() == "1970-01-01T00:00:00Z");
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  CHECK(manifest_timestamp() == "2023-11-14T22:13:20Z");
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("run artifacts round-trip as a baseline source") {
  auto records = sample_records();
  auto options = make_options("Baseline");
  auto endpoint = fast_endpoint();
  auto outcome = run_evaluation(records, ht::bundled_lexicon(), nullptr,
                                endpoint, options);

  auto dir = std::filesystem::temp_directory_path() / "hyposcore_run";
  std::filesystem::remove_all(dir);
  RunManifest manifest;
  manifest.command_line = "test";
  manifest.tool_version = "test";
  manifest.timestamp = "1970-01-01T00:00:00Z";
  write_run_artifacts(outcome, manifest, dir);

  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(std::filesystem::exists(dir / "scores.tsv"));
  CHECK(std::filesystem::exists(dir / "utterances.jsonl"));

  auto baselines = load_baseline_run(dir);
  REQUIRE(baselines.contains("ALL"));
  CHECK(baselines.at("ALL") ==
        doctest::Approx(outcome.rows.back().cer).epsilon(0.01));

  std::ifstream artifacts(dir / "utterances.jsonl");
  std::size_t lines = 0;
  std::string line;
  while (std::getline(artifacts, line)) ++lines;
  CHECK(lines == outcome.scored);
  std::filesystem::remove_all(dir);
}
