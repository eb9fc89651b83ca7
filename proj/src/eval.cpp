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

#include "hyposcore/eval.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyposcore/error.hpp"
#include "hyposcore/report.hpp"
#include "hyposcore/version.hpp"

namespace hyposcore::eval {

namespace {

using ordered_json = nlohmann::ordered_json;

struct CorpusAcc {
  std::size_t n = 0;
  std::size_t ref_len = 0;
  std::size_t cer_dist = 0;
  std::size_t baseline_dist = 0;
};

EvalRow to_row(const std::string& tag, const CorpusAcc& acc,
               const std::optional<std::map<std::string, double>>& baselines) {
  EvalRow row;
  row.corpus = tag;
  row.n = acc.n;
  row.cer = acc.ref_len == 0 ? 0.0
                             : 100.0 * static_cast<double>(acc.cer_dist) /
                                   static_cast<double>(acc.ref_len);
  if (baselines) {
    auto it = baselines->find(tag);
    row.baseline_cer = it == baselines->end() ? 0.0 : it->second;
  } else {
    row.baseline_cer = acc.ref_len == 0
                           ? 0.0
                           : 100.0 * static_cast<double>(acc.baseline_dist) /
                                 static_cast<double>(acc.ref_len);
  }
  if (row.baseline_cer > 0.0) {
    row.minus_cerr = -scoring::cerr(row.baseline_cer, row.cer);
  }
  return row;
}

}  // namespace

EvalOutcome run_evaluation(const std::vector<dataset::HypothesisSet>& records,
                           const pinyin::Lexicon& lex,
                           llm::Transport* transport,
                           const llm::EndpointConfig& endpoint,
                           const EvalOptions& options) {
  options.spec.check();
  if (!options.spec.passthrough && transport == nullptr) {
    throw Error(ErrorCode::kUsageError,
                "spec " + options.spec_name + " needs a transport");
  }

  EvalOutcome outcome;

  // Build prompts first; records that cannot take the spec are skipped so
  // baseline and method stay comparable over the same set.
  struct Pending {
    const dataset::HypothesisSet* record;
    std::string prompt;
  };
  std::vector<Pending> pending;
  for (const auto& rec : records) {
    std::string ref_norm =
        dataset::normalize(rec.transcription, options.policy,
                           options.simp_table);
    if (ref_norm.empty()) {
      ++outcome.skipped_empty_reference;
      continue;
    }
    if (options.spec.passthrough) {
      pending.push_back({&rec, ""});
      continue;
    }
    try {
      std::string prompt;
      if (options.spec.style == promptgen::PromptStyle::kDirect) {
        prompt = promptgen::build_direct_prompt(rec, options.spec, lex,
                                                options.templates);
      } else {
        prompt = promptgen::build_finetune_pair(rec, options.spec, lex,
                                                options.templates,
                                                options.policy,
                                                options.simp_table)
                     .first;
      }
      pending.push_back({&rec, std::move(prompt)});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNotEnoughHypotheses) {
        ++outcome.skipped_not_enough_hypotheses;
      } else {
        throw;
      }
    }
  }

  // Run the transport over everything that has a prompt.
  std::vector<llm::Completion> completions;
  if (!options.spec.passthrough) {
    std::vector<std::string> prompts;
    prompts.reserve(pending.size());
    for (const auto& p : pending) prompts.push_back(p.prompt);
    completions = llm::complete_batch(*transport, prompts, endpoint);
  }

  std::map<std::string, CorpusAcc> by_corpus;
  CorpusAcc all;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& rec = *pending[i].record;

    promptgen::CorrectionRecord correction;
    if (options.spec.passthrough) {
      correction.id = rec.id;
      correction.correction = rec.hypotheses.front();
    } else if (!completions[i].ok) {
      correction = promptgen::transport_failure_record(rec, completions[i].error);
      ++outcome.transport_failures;
    } else {
      correction =
          promptgen::parse_response(completions[i].text, rec,
                                    options.max_chars, options.policy,
                                    options.simp_table);
      if (correction.failure_reason == promptgen::FailureReason::kParse) {
        ++outcome.parse_failures;
      } else if (correction.failure_reason ==
                 promptgen::FailureReason::kOverlength) {
        ++outcome.overlength_failures;
      }
    }

    UttOutcome utt;
    utt.id = rec.id;
    utt.corpus = rec.corpus;
    utt.prompt = pending[i].prompt;
    utt.cer = scoring::cer(correction.correction.value_or(""),
                           rec.transcription, options.policy,
                           options.simp_table);
    utt.baseline_cer = scoring::cer(rec.hypotheses.front(), rec.transcription,
                                    options.policy, options.simp_table);
    utt.correction = std::move(correction);

    auto& acc = by_corpus[rec.corpus];
    for (CorpusAcc* a : {&acc, &all}) {
      a->n += 1;
      a->ref_len += utt.cer.ref_len;
      a->cer_dist += utt.cer.distance();
      a->baseline_dist += utt.baseline_cer.distance();
    }
    outcome.utterances.push_back(std::move(utt));
    ++outcome.scored;
  }

  for (const auto& [tag, acc] : by_corpus) {
    outcome.rows.push_back(to_row(tag, acc, options.baseline_by_corpus));
  }
  if (outcome.scored > 0) {
    outcome.rows.push_back(to_row("ALL", all, options.baseline_by_corpus));
  }

  if (!options.spec.passthrough && outcome.scored > 0) {
    double failure_share = static_cast<double>(outcome.transport_failures) /
                           static_cast<double>(outcome.scored);
    outcome.aborted = failure_share > options.abort_failure_rate;
  }
  return outcome;
}

std::string manifest_timestamp() {
  std::time_t t;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH");
      sde != nullptr && *sde != '\0') {
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string scores_tsv(const EvalOutcome& outcome) {
  report::Table table;
  table.header = {"corpus", "N", "baseline_cer", "cer", "minus_cerr"};
  for (const auto& row : outcome.rows) {
    table.rows.push_back({row.corpus, std::to_string(row.n),
                          report::fmt2(row.baseline_cer),
                          report::fmt2(row.cer),
                          row.minus_cerr ? report::fmt2(*row.minus_cerr)
                                         : "-"});
  }
  return table.tsv();
}

std::string scores_pretty(const EvalOutcome& outcome,
                          const std::string& baseline_label) {
  report::Table table;
  table.header = {"corpus", "N", "baseline_cer", "cer", "minus_cerr"};
  for (const auto& row : outcome.rows) {
    table.rows.push_back({row.corpus, std::to_string(row.n),
                          report::fmt2(row.baseline_cer),
                          report::fmt2(row.cer),
                          row.minus_cerr ? report::fmt2(*row.minus_cerr)
                                         : "-"});
  }
  std::string out = table.pretty();
  out += "baseline: " + baseline_label +
         "; minus_cerr: negative means improvement over the baseline\n";
  return out;
}

void write_run_artifacts(const EvalOutcome& outcome,
                         const RunManifest& manifest,
                         const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  {
    ordered_json j;
    j["command_line"] = manifest.command_line;
    j["config"] = manifest.config;
    if (manifest.seed) {
      j["seed"] = *manifest.seed;
    } else {
      j["seed"] = nullptr;
    }
    j["input_digests"] = manifest.input_digests;
    j["tool_version"] = manifest.tool_version;
    j["timestamp"] = manifest.timestamp;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) {
      throw Error(ErrorCode::kIoError,
                  "cannot write " + (out_dir / "manifest.json").string());
    }
    out << j.dump(2) << "\n";
  }

  {
    std::ofstream out(out_dir / "scores.tsv", std::ios::binary);
    if (!out) {
      throw Error(ErrorCode::kIoError,
                  "cannot write " + (out_dir / "scores.tsv").string());
    }
    out << scores_tsv(outcome);
  }

  {
    std::ofstream out(out_dir / "utterances.jsonl", std::ios::binary);
    if (!out) {
      throw Error(ErrorCode::kIoError,
                  "cannot write " + (out_dir / "utterances.jsonl").string());
    }
    for (const auto& utt : outcome.utterances) {
      ordered_json j;
      j["id"] = utt.id;
      j["corpus"] = utt.corpus;
      j["prompt"] = utt.prompt;
      j["raw_response"] = utt.correction.raw_response;
      j["correction"] = utt.correction.correction.value_or("");
      j["fallback_used"] = utt.correction.fallback_used;
      j["failure_reason"] =
          promptgen::failure_reason_name(utt.correction.failure_reason);
      j["cer_distance"] = utt.cer.distance();
      j["baseline_cer_distance"] = utt.baseline_cer.distance();
      j["ref_len"] = utt.cer.ref_len;
      out << j.dump() << "\n";
    }
  }
}

std::map<std::string, double> load_baseline_run(
    const std::filesystem::path& run_dir) {
  std::ifstream in(run_dir / "scores.tsv");
  if (!in) {
    throw Error(ErrorCode::kIoError,
                "cannot open " + (run_dir / "scores.tsv").string());
  }
  std::map<std::string, double> baselines;
  std::string line;
  bool header = true;
  std::vector<std::string> columns;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (header) {
      columns = fields;
      header = false;
      continue;
    }
    std::size_t cer_col = 0;
    bool found = false;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == "cer") {
        cer_col = i;
        found = true;
      }
    }
    if (!found || fields.size() <= cer_col) {
      throw Error(ErrorCode::kParseError,
                  "scores.tsv in " + run_dir.string() + " has no cer column");
    }
    baselines[fields[0]] = std::strtod(fields[cer_col].c_str(), nullptr);
  }
  return baselines;
}

}  // namespace hyposcore::eval
