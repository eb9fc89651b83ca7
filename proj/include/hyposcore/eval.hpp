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

#ifndef HYPOSCORE_EVAL_HPP_
#define HYPOSCORE_EVAL_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyposcore/dataset.hpp"
#include "hyposcore/llm_client.hpp"
#include "hyposcore/promptgen.hpp"
#include "hyposcore/scoring.hpp"

namespace hyposcore::eval {

struct EvalOptions {
  std::string spec_name;
  promptgen::PromptSpec spec;
  promptgen::Templates templates = promptgen::Templates::builtin();
  dataset::NormalizationPolicy policy;
  const dataset::SimpTable* simp_table = nullptr;
  std::size_t max_chars = 100;
  // Abort (exit 3 at the CLI) when transport failures exceed this share of
  // the attempted calls.
  double abort_failure_rate = 0.5;
  // Baseline CER per corpus loaded from a previous run; when absent the
  // baseline is the in-run 1-best CER.
  std::optional<std::map<std::string, double>> baseline_by_corpus;
  std::string baseline_label = "in-run 1-best";
};

// One scored utterance, kept for the audit artifacts.
struct UttOutcome {
  std::string id;
  std::string corpus;
  std::string prompt;  // empty for the baseline spec
  promptgen::CorrectionRecord correction;
  scoring::EditStats cer;           // of the correction
  scoring::EditStats baseline_cer;  // of the 1-best hypothesis
};

struct EvalRow {
  std::string corpus;
  std::size_t n = 0;
  double baseline_cer = 0.0;  // percent
  double cer = 0.0;           // percent
  // -CERR, negative is an improvement; unset when the baseline is zero.
  std::optional<double> minus_cerr;
};

struct EvalOutcome {
  std::vector<EvalRow> rows;  // per corpus, sorted by tag; last row is ALL
  std::vector<UttOutcome> utterances;

  std::size_t scored = 0;
  std::size_t skipped_not_enough_hypotheses = 0;
  std::size_t skipped_empty_reference = 0;
  std::size_t transport_failures = 0;
  std::size_t parse_failures = 0;
  std::size_t overlength_failures = 0;
  bool aborted = false;
};

// Builds prompts, runs the transport with fallback bookkeeping, scores the
// corrections against the references and aggregates per corpus.
// transport may be null only for the pass-through baseline spec.
EvalOutcome run_evaluation(const std::vector<dataset::HypothesisSet>& records,
                           const pinyin::Lexicon& lex,
                           llm::Transport* transport,
                           const llm::EndpointConfig& endpoint,
                           const EvalOptions& options);

// Everything recorded in the run manifest.
struct RunManifest {
  std::string command_line;
  std::map<std::string, std::string> config;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> input_digests;  // path -> sha256
  std::string tool_version;
  std::string timestamp;  // from SOURCE_DATE_EPOCH when set, UTC
};

// ISO-8601 UTC; honors SOURCE_DATE_EPOCH for reproducible runs.
std::string manifest_timestamp();

// Writes manifest.json, scores.tsv and utterances.jsonl. Byte-identical for
// identical inputs, seeds and fixtures.
void write_run_artifacts(const EvalOutcome& outcome,
                         const RunManifest& manifest,
                         const std::filesystem::path& out_dir);

// Reads the method CER per corpus from a previous run's scores.tsv.
std::map<std::string, double> load_baseline_run(
    const std::filesystem::path& run_dir);

// The scores table as printed and saved, legend included in pretty mode.
std::string scores_tsv(const EvalOutcome& outcome);
std::string scores_pretty(const EvalOutcome& outcome,
                          const std::string& baseline_label);

}  // namespace hyposcore::eval

#endif  // HYPOSCORE_EVAL_HPP_
