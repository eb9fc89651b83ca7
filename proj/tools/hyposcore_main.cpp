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
//
// hyposcore: score, analyze and prompt-package N-best Chinese ASR
// hypotheses. See `hyposcore --help` and the subcommand help texts.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyposcore/dataset.hpp"
#include "hyposcore/digest.hpp"
#include "hyposcore/error.hpp"
#include "hyposcore/eval.hpp"
#include "hyposcore/llm_client.hpp"
#include "hyposcore/pinyin.hpp"
#include "hyposcore/promptgen.hpp"
#include "hyposcore/report.hpp"
#include "hyposcore/scoring.hpp"
#include "hyposcore/unicode.hpp"
#include "hyposcore/version.hpp"

namespace {

namespace hs = hyposcore;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAborted = 3;

// Options shared by every dataset-consuming subcommand.
struct CommonOptions {
  std::vector<std::string> lexicon_paths;
  std::string t2s_path;
  bool keep_whitespace = false;
  bool keep_punctuation = false;
  bool no_width_fold = false;
};

void add_common_options(CLI::App* sub, CommonOptions* opts,
                        bool with_lexicon = true) {
  if (with_lexicon) {
    sub->add_option("--lexicon", opts->lexicon_paths,
                    "Pinyin lexicon TSV (repeatable; later files override)");
  }
  sub->add_option("--t2s", opts->t2s_path,
                  "traditional->simplified TSV; enables simplification");
  sub->add_flag("--keep-whitespace", opts->keep_whitespace,
                "do not strip whitespace before scoring");
  sub->add_flag("--keep-punctuation", opts->keep_punctuation,
                "do not strip punctuation before scoring");
  sub->add_flag("--no-width-fold", opts->no_width_fold,
                "keep full-width ASCII forms as-is");
}

struct Normalization {
  hs::dataset::NormalizationPolicy policy;
  std::optional<hs::dataset::SimpTable> table;

  const hs::dataset::SimpTable* table_ptr() const {
    return table ? &*table : nullptr;
  }
};

Normalization make_normalization(const CommonOptions& opts) {
  Normalization norm;
  norm.policy.strip_whitespace = !opts.keep_whitespace;
  norm.policy.strip_punctuation = !opts.keep_punctuation;
  norm.policy.width_fold = !opts.no_width_fold;
  if (!opts.t2s_path.empty()) {
    norm.table = hs::dataset::load_t2s(opts.t2s_path);
    norm.policy.to_simplified = true;
  } else {
    norm.policy.to_simplified = false;
  }
  return norm;
}

hs::pinyin::Lexicon load_lexicon_or_fail(const CommonOptions& opts) {
  if (opts.lexicon_paths.empty()) {
    throw hs::Error(hs::ErrorCode::kUsageError,
                    "this command needs --lexicon <tsv> (the bundled files "
                    "live under data/lexicon/)");
  }
  std::vector<std::filesystem::path> paths(opts.lexicon_paths.begin(),
                                           opts.lexicon_paths.end());
  auto lex = hs::pinyin::load_lexicon(paths);
  for (const auto& w : lex.stats().warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return lex;
}

std::vector<hs::dataset::HypothesisSet> load_records(
    const std::string& path, const Normalization& norm) {
  auto loaded = hs::dataset::load_corpus(path, norm.policy, norm.table_ptr());
  if (loaded.deduped_hypotheses > 0) {
    std::cerr << "warning: dropped " << loaded.deduped_hypotheses
              << " duplicate hypotheses while loading " << path << "\n";
  }
  return std::move(loaded.records);
}

std::string join_command_line(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out.push_back(' ');
    out += argv[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// transliterate

struct TransliterateArgs {
  CommonOptions common;
  std::string text;
  std::string file;
  std::string mode = "contextual";
  bool strict = false;
};

int run_transliterate(const TransliterateArgs& args) {
  auto lex = load_lexicon_or_fail(args.common);
  hs::pinyin::TranslitOptions options;
  options.mode = args.mode == "per_char"
                     ? hs::pinyin::TranslitMode::kPerChar
                     : hs::pinyin::TranslitMode::kContextual;
  options.strict = args.strict;

  std::size_t unknown = 0;
  auto emit = [&](const std::string& line) {
    auto result = hs::pinyin::transliterate(line, lex, options);
    unknown += result.unknown_han;
    std::cout << result.rendered() << "\n";
  };

  if (!args.file.empty()) {
    std::ifstream in(args.file);
    if (!in) {
      throw hs::Error(hs::ErrorCode::kIoError, "cannot open " + args.file);
    }
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      emit(line);
    }
  } else if (!args.text.empty()) {
    emit(args.text);
  }
  if (unknown > 0) {
    std::cerr << "warning: " << unknown
              << " Han character(s) without a lexicon reading passed through"
              << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
  CommonOptions common;
  std::string dataset;
  std::string metric = "cer";
  std::string mode = "per_char";
  bool tone_insensitive = false;
  bool per_utt = false;
  bool macro = false;
  bool tsv = false;
};

int run_score(const ScoreArgs& args) {
  auto norm = make_normalization(args.common);
  auto records = load_records(args.dataset, norm);
  const bool want_pinyin = args.metric == "pinyin";

  std::optional<hs::pinyin::Lexicon> lex;
  if (want_pinyin) lex = load_lexicon_or_fail(args.common);
  auto mode = args.mode == "contextual" ? hs::pinyin::TranslitMode::kContextual
                                        : hs::pinyin::TranslitMode::kPerChar;

  std::vector<hs::scoring::UttScore> scores;
  std::size_t skipped = 0;
  for (const auto& rec : records) {
    hs::scoring::UttScore utt;
    utt.id = rec.id;
    utt.corpus = rec.corpus;
    try {
      utt.cer = hs::scoring::cer(rec.hypotheses.front(), rec.transcription,
                                 norm.policy, norm.table_ptr());
    } catch (const hs::Error& e) {
      if (e.code() == hs::ErrorCode::kEmptyReference) {
        std::cerr << "warning: skipping " << rec.id
                  << " (empty reference after normalization)\n";
        ++skipped;
        continue;
      }
      throw;
    }
    if (want_pinyin) {
      utt.pinyin = hs::scoring::pinyin_er(
          rec.hypotheses.front(), rec.transcription, *lex, mode,
          !args.tone_insensitive, norm.policy, norm.table_ptr());
    }
    if (args.per_utt) {
      std::cout << rec.id << "\t" << hs::report::fmt2(utt.cer.percent());
      if (utt.pinyin) {
        std::cout << "\t" << hs::report::fmt2(utt.pinyin->percent());
      }
      std::cout << "\n";
    }
    scores.push_back(std::move(utt));
  }

  auto agg = hs::scoring::corpus_aggregate(scores);
  hs::report::Table table;
  table.header = {"corpus", "N", "cer"};
  if (want_pinyin) table.header.push_back("pinyin_er");
  auto add_row = [&](const hs::scoring::CorpusScore& c) {
    std::vector<std::string> row = {c.corpus, std::to_string(c.n),
                                    hs::report::fmt2(c.cer_percent(args.macro))};
    if (want_pinyin) {
      row.push_back(hs::report::fmt2(c.pinyin_percent(args.macro)));
    }
    table.rows.push_back(std::move(row));
  };
  for (const auto& c : agg.per_corpus) add_row(c);
  if (!agg.per_corpus.empty()) add_row(agg.overall);
  std::cout << (args.tsv ? table.tsv() : table.pretty());
  if (skipped > 0) {
    std::cerr << "warning: " << skipped
              << " record(s) skipped (empty reference)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
  CommonOptions common;
  std::string dataset;
  bool per_utt = false;
  bool tsv = false;
};

int run_oracle(const OracleArgs& args) {
  auto norm = make_normalization(args.common);
  auto records = load_records(args.dataset, norm);

  std::vector<hs::scoring::UttScore> scores;
  std::size_t skipped = 0;
  for (const auto& rec : records) {
    hs::scoring::UttScore utt;
    utt.id = rec.id;
    utt.corpus = rec.corpus;
    try {
      utt.cer = hs::scoring::cer(rec.hypotheses.front(), rec.transcription,
                                 norm.policy, norm.table_ptr());
      auto [index, nb] =
          hs::scoring::oracle_nbest(rec, norm.policy, norm.table_ptr());
      utt.nbest_oracle = nb;
      utt.nbest_index = index;
      utt.compositional_oracle =
          hs::scoring::oracle_compositional(rec, norm.policy, norm.table_ptr());
    } catch (const hs::Error& e) {
      if (e.code() == hs::ErrorCode::kEmptyReference) {
        std::cerr << "warning: skipping " << rec.id
                  << " (empty reference after normalization)\n";
        ++skipped;
        continue;
      }
      throw;
    }
    if (args.per_utt) {
      std::cout << rec.id << "\t" << hs::report::fmt2(utt.cer.percent())
                << "\t" << hs::report::fmt2(utt.nbest_oracle->percent()) << "\t"
                << hs::report::fmt2(utt.compositional_oracle->percent())
                << "\tbest_index=" << *utt.nbest_index << "\n";
    }
    scores.push_back(std::move(utt));
  }

  auto agg = hs::scoring::corpus_aggregate(scores);
  hs::report::Table table;
  table.header = {"corpus", "N", "cer", "o_nb", "o_cp"};
  auto add_row = [&](const hs::scoring::CorpusScore& c) {
    table.rows.push_back({c.corpus, std::to_string(c.n),
                          hs::report::fmt2(c.cer_percent()),
                          hs::report::fmt2(c.onb_percent()),
                          hs::report::fmt2(c.ocp_percent())});
  };
  for (const auto& c : agg.per_corpus) add_row(c);
  if (!agg.per_corpus.empty()) add_row(agg.overall);
  std::cout << (args.tsv ? table.tsv() : table.pretty());

  bool ordered = true;
  for (const auto& c : agg.per_corpus) {
    if (c.ocp_percent() > c.onb_percent() + 1e-9) ordered = false;
  }
  std::cout << (ordered ? "check: o_cp <= o_nb holds for every corpus\n"
                        : "check: VIOLATION: o_cp > o_nb somewhere\n");
  if (skipped > 0) {
    std::cerr << "warning: " << skipped
              << " record(s) skipped (empty reference)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prompt

struct PromptArgs {
  CommonOptions common;
  std::string dataset;
  std::string spec_name;
  std::string out_dir;
  std::string direct_template;
  std::string finetune_template;
};

std::string known_spec_names() {
  std::string names;
  for (const auto& [name, spec] : hs::promptgen::table3_specs()) {
    if (!names.empty()) names += ", ";
    names += name;
  }
  for (const auto& [name, spec] : hs::promptgen::table4_specs()) {
    names += ", " + name;
  }
  return names;
}

hs::promptgen::Templates load_templates(const PromptArgs& args) {
  std::optional<std::filesystem::path> direct, finetune;
  if (!args.direct_template.empty()) direct = args.direct_template;
  if (!args.finetune_template.empty()) finetune = args.finetune_template;
  return hs::promptgen::Templates::load(direct, finetune);
}

int run_prompt(const PromptArgs& args) {
  auto spec = hs::promptgen::spec_by_name(args.spec_name);
  if (!spec) {
    throw hs::Error(hs::ErrorCode::kUsageError,
                    "unknown spec \"" + args.spec_name + "\"; valid names: " +
                        known_spec_names());
  }
  if (spec->passthrough) {
    throw hs::Error(hs::ErrorCode::kUsageError,
                    "Baseline makes no model call; nothing to generate");
  }
  if (spec->analysis_only()) {
    std::cerr << "warning: spec " << args.spec_name
              << " uses ground-truth Pinyin; analysis-only, unavailable in "
                 "practice\n";
  }

  auto norm = make_normalization(args.common);
  auto records = load_records(args.dataset, norm);
  bool needs_pinyin = spec->pinyin_transcribed.count > 0 ||
                      spec->pinyin_ground_truth.count > 0;
  hs::pinyin::Lexicon lex;
  if (needs_pinyin) lex = load_lexicon_or_fail(args.common);
  auto templates = load_templates(args);

  std::size_t skipped = 0;
  if (spec->style == hs::promptgen::PromptStyle::kFinetune) {
    std::optional<std::ofstream> out;
    if (!args.out_dir.empty()) {
      std::filesystem::create_directories(args.out_dir);
      out.emplace(std::filesystem::path(args.out_dir) / "finetune.jsonl",
                  std::ios::binary);
    }
    for (const auto& rec : records) {
      try {
        auto [prompt, response] = hs::promptgen::build_finetune_pair(
            rec, *spec, lex, templates, norm.policy, norm.table_ptr());
        nlohmann::ordered_json j;
        j["prompt"] = prompt;
        j["response"] = response;
        (out ? *out : std::cout) << j.dump() << "\n";
      } catch (const hs::Error& e) {
        if (e.code() == hs::ErrorCode::kNotEnoughHypotheses) {
          std::cerr << "warning: skipping " << rec.id << " (" << e.what()
                    << ")\n";
          ++skipped;
        } else {
          throw;
        }
      }
    }
  } else {
    for (const auto& rec : records) {
      try {
        std::string prompt =
            hs::promptgen::build_direct_prompt(rec, *spec, lex, templates);
        if (!args.out_dir.empty()) {
          std::filesystem::create_directories(args.out_dir);
          std::ofstream out(std::filesystem::path(args.out_dir) /
                                (rec.id + ".prompt.txt"),
                            std::ios::binary);
          out << prompt;
        } else {
          std::cout << "=== " << rec.id << " ===\n" << prompt;
        }
      } catch (const hs::Error& e) {
        if (e.code() == hs::ErrorCode::kNotEnoughHypotheses) {
          std::cerr << "warning: skipping " << rec.id << " (" << e.what()
                    << ")\n";
          ++skipped;
        } else {
          throw;
        }
      }
    }
  }
  if (skipped > 0) {
    std::cerr << "warning: " << skipped << " record(s) skipped\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  CommonOptions common;
  std::string dataset;
  std::string spec_name;
  std::string out_dir;
  std::string mock_fixtures;
  std::string base_url;
  std::string model_name;
  double temperature = 0.0;
  unsigned timeout_s = 60;
  unsigned max_retries = 3;
  unsigned retry_initial_ms = 500;
  double retry_multiplier = 2.0;
  unsigned max_parallel = 4;
  std::size_t sample_n = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t max_chars = 100;
  double abort_failure_rate = 0.5;
  std::string baseline_run;
  std::string direct_template;
  std::string finetune_template;
};

int run_evaluate(const EvaluateArgs& args, const std::string& command_line) {
  auto spec = hs::promptgen::spec_by_name(args.spec_name);
  if (!spec) {
    throw hs::Error(hs::ErrorCode::kUsageError,
                    "unknown spec \"" + args.spec_name + "\"; valid names: " +
                        known_spec_names());
  }
  if (spec->analysis_only()) {
    std::cerr << "warning: spec " << args.spec_name
              << " uses ground-truth Pinyin; analysis-only, unavailable in "
                 "practice\n";
  }
  if (args.out_dir.empty()) {
    throw hs::Error(hs::ErrorCode::kUsageError, "--out <dir> is required");
  }

  auto norm = make_normalization(args.common);
  auto records = load_records(args.dataset, norm);
  if (args.sample_n > 0) {
    records = hs::dataset::sample(records, args.sample_n, args.seed);
  }

  bool needs_pinyin = spec->pinyin_transcribed.count > 0 ||
                      spec->pinyin_ground_truth.count > 0;
  hs::pinyin::Lexicon lex;
  if (needs_pinyin) lex = load_lexicon_or_fail(args.common);

  hs::llm::EndpointConfig endpoint;
  endpoint.base_url = args.base_url;
  endpoint.model_name = args.model_name;
  endpoint.temperature = args.temperature;
  endpoint.timeout = std::chrono::seconds(args.timeout_s);
  endpoint.max_retries = args.max_retries;
  endpoint.backoff.initial = std::chrono::milliseconds(args.retry_initial_ms);
  endpoint.backoff.multiplier = args.retry_multiplier;
  endpoint.max_parallel = args.max_parallel;

  std::unique_ptr<hs::llm::Transport> transport;
  if (!args.mock_fixtures.empty()) {
    transport = std::make_unique<hs::llm::MockTransport>(
        hs::llm::load_mock_fixtures(args.mock_fixtures));
  } else if (!spec->passthrough) {
    if (args.base_url.empty() || args.model_name.empty()) {
      throw hs::Error(hs::ErrorCode::kUsageError,
                      "pass --mock <fixtures.jsonl>, or --base-url and "
                      "--model for a live endpoint");
    }
    transport = std::make_unique<hs::llm::HttpTransport>(endpoint);
  }

  hs::eval::EvalOptions options;
  options.spec_name = args.spec_name;
  options.spec = *spec;
  PromptArgs template_args;
  template_args.direct_template = args.direct_template;
  template_args.finetune_template = args.finetune_template;
  options.templates = load_templates(template_args);
  options.policy = norm.policy;
  options.simp_table = norm.table_ptr();
  options.max_chars = args.max_chars;
  options.abort_failure_rate = args.abort_failure_rate;
  if (!args.baseline_run.empty()) {
    options.baseline_by_corpus = hs::eval::load_baseline_run(args.baseline_run);
    options.baseline_label = args.baseline_run;
  }

  auto outcome =
      hs::eval::run_evaluation(records, lex, transport.get(), endpoint,
                               options);

  hs::eval::RunManifest manifest;
  manifest.command_line = command_line;
  manifest.config = {
      {"spec", args.spec_name},
      {"dataset", args.dataset},
      {"out", args.out_dir},
      {"max_chars", std::to_string(args.max_chars)},
      {"sample", std::to_string(args.sample_n)},
      {"abort_failure_rate", hs::report::fmt2(args.abort_failure_rate)},
      {"mock", args.mock_fixtures},
      {"base_url", args.base_url},
      {"model", args.model_name},
      {"baseline_run", args.baseline_run},
      {"temperature", hs::report::fmt2(args.temperature)},
      {"timeout_s", std::to_string(args.timeout_s)},
      {"max_retries", std::to_string(args.max_retries)},
      {"retry_initial_ms", std::to_string(args.retry_initial_ms)},
      {"retry_multiplier", hs::report::fmt2(args.retry_multiplier)},
      {"max_parallel", std::to_string(args.max_parallel)},
      {"t2s", args.common.t2s_path},
  };
  if (args.seed_given || args.sample_n > 0) manifest.seed = args.seed;
  auto digest_of = [&](const std::string& path) {
    if (!path.empty()) {
      manifest.input_digests[path] = hs::sha256_file(path);
    }
  };
  digest_of(args.dataset);
  for (const auto& p : args.common.lexicon_paths) digest_of(p);
  digest_of(args.common.t2s_path);
  digest_of(args.mock_fixtures);
  digest_of(args.direct_template);
  digest_of(args.finetune_template);
  manifest.tool_version = hs::kVersion;
  manifest.timestamp = hs::eval::manifest_timestamp();

  hs::eval::write_run_artifacts(outcome, manifest, args.out_dir);

  std::cout << hs::eval::scores_pretty(outcome, options.baseline_label);
  std::cout << "scored=" << outcome.scored
            << " transport_failures=" << outcome.transport_failures
            << " parse_failures=" << outcome.parse_failures
            << " overlength_failures=" << outcome.overlength_failures
            << " skipped=" << (outcome.skipped_not_enough_hypotheses +
                               outcome.skipped_empty_reference)
            << "\n";
  std::cout << "run artifacts written to " << args.out_dir << "\n";

  if (outcome.aborted) {
    std::cerr << "error: aborted: transport failures exceed "
              << hs::report::fmt2(100.0 * args.abort_failure_rate)
              << "% of attempted calls\n";
    return kExitAborted;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prepare-finetune

struct PrepareArgs {
  CommonOptions common;
  std::vector<std::string> datasets;
  std::vector<std::string> quotas;  // corpus=N
  std::string spec_name = "Finetune2";
  std::uint64_t seed = 0;
  std::size_t max_chars = 100;
  std::string out_file;
  std::string finetune_template;
};

int run_prepare_finetune(const PrepareArgs& args) {
  auto spec = hs::promptgen::spec_by_name(args.spec_name);
  if (!spec || spec->style != hs::promptgen::PromptStyle::kFinetune) {
    throw hs::Error(hs::ErrorCode::kUsageError,
                    "--spec must be one of Finetune1..Finetune4");
  }
  if (args.out_file.empty()) {
    throw hs::Error(hs::ErrorCode::kUsageError, "--out <file> is required");
  }
  if (args.quotas.empty()) {
    throw hs::Error(hs::ErrorCode::kUsageError,
                    "at least one --quota corpus=N is required");
  }

  auto norm = make_normalization(args.common);
  std::vector<hs::dataset::HypothesisSet> records;
  for (const auto& path : args.datasets) {
    auto batch = load_records(path, norm);
    records.insert(records.end(), batch.begin(), batch.end());
  }
  auto filtered = hs::dataset::filter_by_length(records, args.max_chars);
  if (filtered.dropped > 0) {
    std::cerr << "length filter: kept " << filtered.kept.size()
              << ", dropped " << filtered.dropped << "\n";
  }

  bool needs_pinyin = spec->pinyin_transcribed.count > 0;
  hs::pinyin::Lexicon lex;
  if (needs_pinyin) lex = load_lexicon_or_fail(args.common);
  std::optional<std::filesystem::path> finetune_file;
  if (!args.finetune_template.empty()) finetune_file = args.finetune_template;
  auto templates = hs::promptgen::Templates::load(std::nullopt, finetune_file);

  // Only records with enough hypotheses for the spec are eligible, so each
  // quota is met exactly.
  std::size_t needed_hyps = 1;
  for (const hs::promptgen::LineCount* lc :
       {&spec->text, &spec->pinyin_transcribed}) {
    if (lc->count == 0) continue;
    needed_hyps = std::max<std::size_t>(needed_hyps,
                                        lc->repeat_first ? 1 : lc->count);
  }
  std::map<std::string, std::vector<hs::dataset::HypothesisSet>> by_corpus;
  std::size_t ineligible = 0;
  for (auto& rec : filtered.kept) {
    if (rec.hypotheses.size() < needed_hyps) {
      ++ineligible;
      continue;
    }
    by_corpus[rec.corpus].push_back(std::move(rec));
  }
  if (ineligible > 0) {
    std::cerr << "warning: " << ineligible
              << " record(s) have too few hypotheses for " << args.spec_name
              << " and were excluded\n";
  }

  std::map<std::string, std::size_t> quotas;
  for (const auto& q : args.quotas) {
    auto eq = q.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= q.size()) {
      throw hs::Error(hs::ErrorCode::kUsageError,
                      "--quota expects corpus=N, got \"" + q + "\"");
    }
    quotas[q.substr(0, eq)] =
        static_cast<std::size_t>(std::stoull(q.substr(eq + 1)));
  }

  std::ofstream out(args.out_file, std::ios::binary);
  if (!out) {
    throw hs::Error(hs::ErrorCode::kIoError, "cannot write " + args.out_file);
  }
  std::size_t total = 0;
  for (const auto& [corpus, quota] : quotas) {
    auto it = by_corpus.find(corpus);
    std::size_t available = it == by_corpus.end() ? 0 : it->second.size();
    if (quota > available) {
      throw hs::Error(hs::ErrorCode::kSampleTooLarge,
                      "quota " + std::to_string(quota) + " for " + corpus +
                          " exceeds " + std::to_string(available) +
                          " eligible record(s)");
    }
    auto chosen = hs::dataset::sample(it->second, quota, args.seed);
    for (const auto& rec : chosen) {
      auto [prompt, response] = hs::promptgen::build_finetune_pair(
          rec, *spec, lex, templates, norm.policy, norm.table_ptr());
      nlohmann::ordered_json j;
      j["prompt"] = prompt;
      j["response"] = response;
      out << j.dump() << "\n";
      ++total;
    }
    std::cout << corpus << ": " << quota << " pair(s)\n";
  }
  std::cout << "wrote " << total << " pair(s) to " << args.out_file << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  CommonOptions common;
  std::string dataset;
  bool tsv = false;
};

int run_stats(const StatsArgs& args) {
  auto norm = make_normalization(args.common);
  auto records = load_records(args.dataset, norm);
  auto lex = load_lexicon_or_fail(args.common);

  auto rows = hs::dataset::stats(records, lex, norm.policy, norm.table_ptr());
  hs::report::Table table;
  table.header = {"corpus", "pairs", "mean_hyps", "cer",
                  "pinyin_er", "o_nb", "o_cp"};
  for (const auto& r : rows) {
    table.rows.push_back({r.corpus, std::to_string(r.pairs),
                          hs::report::fmt2(r.mean_hypotheses),
                          hs::report::fmt2(r.cer),
                          hs::report::fmt2(r.pinyin_er),
                          hs::report::fmt2(r.oracle_nbest),
                          hs::report::fmt2(r.oracle_compositional)});
  }
  std::cout << (args.tsv ? table.tsv() : table.pretty());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyposcore: N-best Chinese ASR hypothesis scoring, Pinyin "
               "transliteration and LLM correction harness"};
  app.set_version_flag("--version", hs::kVersion);
  app.set_config("--config", "", "config file with key=value pairs");
  app.require_subcommand(1);

  TransliterateArgs translit;
  auto* translit_cmd =
      app.add_subcommand("transliterate", "Chinese text to tone-numbered Pinyin");
  translit_cmd->add_option("text", translit.text, "text to transliterate");
  translit_cmd->add_option("--file", translit.file,
                           "read input lines from a file instead");
  translit_cmd->add_option("--mode", translit.mode, "contextual|per_char")
      ->check(CLI::IsMember({"contextual", "per_char"}));
  translit_cmd->add_flag("--strict", translit.strict,
                         "fail on Han characters missing from the lexicon");
  add_common_options(translit_cmd, &translit.common);

  ScoreArgs score;
  auto* score_cmd =
      app.add_subcommand("score", "CER / PinyinER over a dataset");
  score_cmd->add_option("dataset", score.dataset, "dataset JSONL")->required();
  score_cmd->add_option("--metric", score.metric, "cer|pinyin")
      ->check(CLI::IsMember({"cer", "pinyin"}));
  score_cmd->add_option("--mode", score.mode,
                        "transliteration mode for PinyinER")
      ->check(CLI::IsMember({"contextual", "per_char"}));
  score_cmd->add_flag("--tone-insensitive", score.tone_insensitive,
                      "compare syllables without tones");
  score_cmd->add_flag("--per-utt", score.per_utt, "print per-utterance lines");
  score_cmd->add_flag("--macro", score.macro,
                      "macro-average (per-utterance mean) instead of micro");
  score_cmd->add_flag("--tsv", score.tsv, "emit TSV instead of a table");
  add_common_options(score_cmd, &score.common);

  OracleArgs oracle;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "n-best and compositional oracle CERs");
  oracle_cmd->add_option("dataset", oracle.dataset, "dataset JSONL")
      ->required();
  oracle_cmd->add_flag("--per-utt", oracle.per_utt,
                       "print per-utterance lines");
  oracle_cmd->add_flag("--tsv", oracle.tsv, "emit TSV instead of a table");
  add_common_options(oracle_cmd, &oracle.common, /*with_lexicon=*/false);

  PromptArgs prompt;
  auto* prompt_cmd =
      app.add_subcommand("prompt", "build correction prompts from a dataset");
  prompt_cmd->add_option("dataset", prompt.dataset, "dataset JSONL")
      ->required();
  prompt_cmd->add_option("--spec", prompt.spec_name,
                         "Prompt1..Prompt9 | Finetune1..Finetune4")
      ->required();
  prompt_cmd->add_option("--out", prompt.out_dir, "output directory");
  prompt_cmd->add_option("--direct-template", prompt.direct_template,
                         "override the direct prompt template file");
  prompt_cmd->add_option("--finetune-template", prompt.finetune_template,
                         "override the fine-tuning template file");
  add_common_options(prompt_cmd, &prompt.common);

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "end-to-end correction run against an endpoint or mock");
  evaluate_cmd->add_option("dataset", evaluate.dataset, "dataset JSONL")
      ->required();
  evaluate_cmd->add_option("--spec", evaluate.spec_name, "prompt spec name")
      ->required();
  evaluate_cmd->add_option("--out", evaluate.out_dir,
                           "run directory for scores and audit artifacts")
      ->required();
  evaluate_cmd->add_option("--mock", evaluate.mock_fixtures,
                           "mock fixture JSONL (offline run)");
  evaluate_cmd->add_option("--base-url", evaluate.base_url,
                           "chat-completions endpoint base URL");
  evaluate_cmd->add_option("--model", evaluate.model_name, "model name");
  evaluate_cmd->add_option("--temperature", evaluate.temperature,
                           "sampling temperature");
  evaluate_cmd->add_option("--timeout", evaluate.timeout_s,
                           "per-request timeout, seconds");
  evaluate_cmd->add_option("--max-retries", evaluate.max_retries,
                           "retries after a failed attempt");
  evaluate_cmd->add_option("--retry-initial-ms", evaluate.retry_initial_ms,
                           "initial retry backoff");
  evaluate_cmd->add_option("--retry-multiplier", evaluate.retry_multiplier,
                           "backoff multiplier");
  evaluate_cmd->add_option("--max-parallel", evaluate.max_parallel,
                           "max in-flight requests");
  evaluate_cmd->add_option("--sample", evaluate.sample_n,
                           "evaluate a random sample of N records");
  evaluate_cmd
      ->add_option("--seed", evaluate.seed, "sampling seed (default 0)")
      ->each([&evaluate](const std::string&) { evaluate.seed_given = true; });
  evaluate_cmd->add_option("--max-chars", evaluate.max_chars,
                           "fallback threshold for correction length");
  evaluate_cmd->add_option("--abort-failure-rate", evaluate.abort_failure_rate,
                           "abort when transport failures exceed this share");
  evaluate_cmd->add_option("--baseline-run", evaluate.baseline_run,
                           "read baseline CERs from a previous run directory");
  evaluate_cmd->add_option("--direct-template", evaluate.direct_template,
                           "override the direct prompt template file");
  evaluate_cmd->add_option("--finetune-template", evaluate.finetune_template,
                           "override the fine-tuning template file");
  add_common_options(evaluate_cmd, &evaluate.common);

  PrepareArgs prepare;
  auto* prepare_cmd = app.add_subcommand(
      "prepare-finetune", "sample per-corpus quotas into training JSONL");
  prepare_cmd->add_option("datasets", prepare.datasets, "dataset JSONL file(s)")
      ->required();
  prepare_cmd->add_option("--quota", prepare.quotas,
                          "corpus=N (repeatable)")
      ->required();
  prepare_cmd->add_option("--spec", prepare.spec_name,
                          "Finetune1..Finetune4 (default Finetune2)");
  prepare_cmd->add_option("--seed", prepare.seed, "sampling seed");
  prepare_cmd->add_option("--max-chars", prepare.max_chars,
                          "length filter threshold (strict <)");
  prepare_cmd->add_option("--out", prepare.out_file, "output JSONL")
      ->required();
  prepare_cmd->add_option("--finetune-template", prepare.finetune_template,
                          "override the fine-tuning template file");
  add_common_options(prepare_cmd, &prepare.common);

  StatsArgs stats;
  auto* stats_cmd =
      app.add_subcommand("stats", "per-corpus dataset summary");
  stats_cmd->add_option("dataset", stats.dataset, "dataset JSONL")->required();
  stats_cmd->add_flag("--tsv", stats.tsv, "emit TSV instead of a table");
  add_common_options(stats_cmd, &stats.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (translit_cmd->parsed()) return run_transliterate(translit);
    if (score_cmd->parsed()) return run_score(score);
    if (oracle_cmd->parsed()) return run_oracle(oracle);
    if (prompt_cmd->parsed()) return run_prompt(prompt);
    if (evaluate_cmd->parsed()) {
      return run_evaluate(evaluate, join_command_line(argc, argv));
    }
    if (prepare_cmd->parsed()) return run_prepare_finetune(prepare);
    if (stats_cmd->parsed()) return run_stats(stats);
  } catch (const hs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
