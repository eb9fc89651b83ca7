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
// Acceptance gates. Runs offline against the bundled data, the library and
// the CLI binary; prints one PASS/FAIL line per criterion.
//
//   acceptance_tests <data_dir> <cli_binary> <work_dir>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyposcore/dataset.hpp"
#include "hyposcore/digest.hpp"
#include "hyposcore/error.hpp"
#include "hyposcore/pinyin.hpp"
#include "hyposcore/promptgen.hpp"
#include "hyposcore/report.hpp"
#include "hyposcore/scoring.hpp"
#include "hyposcore/unicode.hpp"

namespace fs = std::filesystem;
using namespace hyposcore;

namespace {

fs::path g_data_dir;
std::string g_cli;
fs::path g_work_dir;

// CLI defaults: fold width, strip whitespace and punctuation, no
// simplification unless --t2s is passed. Fixture generation must match.
dataset::NormalizationPolicy cli_default_policy() {
  dataset::NormalizationPolicy policy;
  policy.to_simplified = false;
  return policy;
}

const pinyin::Lexicon& lexicon() {
  static const pinyin::Lexicon lex = pinyin::load_lexicon(
      {g_data_dir / "lexicon" / "pinyin_chars.tsv",
       g_data_dir / "lexicon" / "pinyin_phrases.tsv"});
  return lex;
}

std::vector<dataset::HypothesisSet> bundled_sample() {
  return dataset::load_corpus(g_data_dir / "samples" / "sample.jsonl",
                              cli_default_policy())
      .records;
}

const dataset::HypothesisSet& record_by_id(
    const std::vector<dataset::HypothesisSet>& records, const std::string& id) {
  for (const auto& rec : records) {
    if (rec.id == id) return rec;
  }
  throw Error(ErrorCode::kUsageError, "missing record " + id);
}

struct Check {
  std::string label;
  bool passed;
  std::string detail;
};

std::vector<Check> g_failures;
int g_criteria_failed = 0;

void require(std::vector<std::string>& problems, bool condition,
             const std::string& detail) {
  if (!condition) problems.push_back(detail);
}

void run_criterion(int number, const std::string& title,
                   const std::function<void(std::vector<std::string>&)>& body) {
  std::vector<std::string> problems;
  try {
    body(problems);
  } catch (const std::exception& e) {
    problems.push_back(std::string("exception: ") + e.what());
  }
  if (problems.empty()) {
    std::printf("[PASS] criterion %2d: %s\n", number, title.c_str());
  } else {
    ++g_criteria_failed;
    std::printf("[FAIL] criterion %2d: %s\n", number, title.c_str());
    for (const auto& p : problems) {
      std::printf("       - %s\n", p.c_str());
    }
  }
  std::fflush(stdout);
}

std::string fmt2(double v) { return report::fmt2(v); }

// --- subprocess helpers -----------------------------------------------------

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_command(const std::string& command) {
  RunResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return result;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) {
    result.output += buf;
  }
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// scores.tsv -> corpus -> column -> value
std::map<std::string, std::map<std::string, std::string>> read_scores(
    const fs::path& path) {
  std::map<std::string, std::map<std::string, std::string>> rows;
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (header.empty()) {
      header = fields;
      continue;
    }
    for (std::size_t i = 1; i < fields.size() && i < header.size(); ++i) {
      rows[fields[0]][header[i]] = fields[i];
    }
  }
  return rows;
}

void write_fixtures(const fs::path& path,
                    const std::vector<dataset::HypothesisSet>& records,
                    const promptgen::PromptSpec& spec,
                    const std::function<std::string(
                        const dataset::HypothesisSet&)>& reply) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& rec : records) {
    std::string prompt = promptgen::build_direct_prompt(rec, spec, lexicon());
    nlohmann::json j;
    j["prompt_sha256"] = sha256_hex(prompt);
    j["reply"] = reply(rec);
    out << j.dump() << "\n";
  }
}

std::string evaluate_command(const std::string& dataset,
                             const std::string& spec,
                             const fs::path& fixtures, const fs::path& out,
                             const std::string& extra = "") {
  std::string cmd = g_cli + " evaluate " + dataset + " --spec " + spec +
                    " --mock " + fixtures.string() + " --out " + out.string() +
                    " --lexicon " +
                    (g_data_dir / "lexicon" / "pinyin_chars.tsv").string() +
                    " --lexicon " +
                    (g_data_dir / "lexicon" / "pinyin_phrases.tsv").string();
  if (!extra.empty()) cmd += " " + extra;
  return cmd;
}

// --- independent oracles ----------------------------------------------------

std::size_t brute_force_distance(const std::vector<std::string>& a,
                                 std::size_t ai,
                                 const std::vector<std::string>& b,
                                 std::size_t bi) {
  if (ai == a.size()) return b.size() - bi;
  if (bi == b.size()) return a.size() - ai;
  std::size_t best =
      brute_force_distance(a, ai + 1, b, bi + 1) + (a[ai] == b[bi] ? 0 : 1);
  best = std::min(best, brute_force_distance(a, ai + 1, b, bi) + 1);
  best = std::min(best, brute_force_distance(a, ai, b, bi + 1) + 1);
  return best;
}

std::size_t brute_force_compositional(const std::set<std::string>& pool,
                                      const std::vector<std::string>& ref) {
  std::vector<std::string> alphabet(pool.begin(), pool.end());
  std::size_t best = ref.size();
  std::vector<std::string> current;
  std::function<void()> walk = [&]() {
    if (!current.empty()) {
      best = std::min(best, scoring::edit_distance(current, ref).distance());
    }
    if (current.size() >= ref.size() + 2) return;
    for (const auto& ch : alphabet) {
      current.push_back(ch);
      walk();
      current.pop_back();
    }
  };
  walk();
  return best;
}

std::string random_text(std::mt19937& rng,
                        const std::vector<std::string>& alphabet,
                        std::size_t max_len, std::size_t min_len) {
  std::size_t len = min_len + rng() % (max_len - min_len + 1);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) out += alphabet[rng() % alphabet.size()];
  return out;
}

// --- criteria ----------------------------------------------------------------

void criterion_1_golden_case_cers(std::vector<std::string>& problems) {
  auto policy = cli_default_policy();
  auto records = bundled_sample();

  const auto& case1 = record_by_id(records, "aishell1-test-0001");
  std::vector<std::string> case1_expected = {"11.11", "11.11", "11.11",
                                             "22.22", "22.22"};
  require(problems, case1.hypotheses.size() == 5, "case 1 needs 5 candidates");
  for (std::size_t i = 0; i < case1.hypotheses.size(); ++i) {
    auto stats =
        scoring::cer(case1.hypotheses[i], case1.transcription, policy);
    require(problems, fmt2(stats.percent()) == case1_expected[i],
            "case1 candidate " + std::to_string(i) + ": got " +
                fmt2(stats.percent()) + ", want " + case1_expected[i]);
  }
  std::vector<std::pair<std::string, std::string>> case1_finetune = {
      {"一线楼市成交量继续保持", "44.44"},
      {"一线楼市成交量激增", "0.00"},
      {"一线楼市成交量激增", "0.00"},
      {"一线楼市成交量即增", "11.11"},
  };
  for (const auto& [output, expected] : case1_finetune) {
    auto stats = scoring::cer(output, case1.transcription, policy);
    require(problems, fmt2(stats.percent()) == expected,
            "case1 finetune output: got " + fmt2(stats.percent()) + ", want " +
                expected);
  }

  const auto& case2 = record_by_id(records, "kespeech-test-0001");
  std::vector<std::string> case2_expected = {"50.00", "42.86", "42.86",
                                             "50.00", "42.86"};
  require(problems, case2.hypotheses.size() == 5, "case 2 needs 5 candidates");
  for (std::size_t i = 0; i < case2.hypotheses.size(); ++i) {
    auto stats =
        scoring::cer(case2.hypotheses[i], case2.transcription, policy);
    require(problems, fmt2(stats.percent()) == case2_expected[i],
            "case2 candidate " + std::to_string(i) + ": got " +
                fmt2(stats.percent()) + ", want " + case2_expected[i]);
  }
  std::vector<std::pair<std::string, std::string>> case2_finetune = {
      {"但面对马宁实事求是地回答了问题", "92.86"},
      {"但面对马宁试马则不愿意前进一步", "64.29"},
      {"但面对马赛时马则不愿意前进一步", "57.14"},
      {"但面对马宁失事马则不愿意签新", "57.14"},
  };
  for (const auto& [output, expected] : case2_finetune) {
    auto stats = scoring::cer(output, case2.transcription, policy);
    require(problems, fmt2(stats.percent()) == expected,
            "case2 finetune output: got " + fmt2(stats.percent()) + ", want " +
                expected);
  }
}

void criterion_2_cerr_table(std::vector<std::string>& problems) {
  const std::vector<std::string> corpora = {
      "Aishell-1", "Wenetspeech/test_net", "Wenetspeech/test_meeting",
      "Aishell-4", "KeSpeech"};
  const std::vector<double> baseline = {5.84, 11.62, 16.03, 25.19, 29.81};
  // method -> {CER per corpus, printed -CERR per corpus}
  struct MethodRow {
    std::string name;
    std::vector<double> cer;
    std::vector<double> printed_minus_cerr;
  };
  const std::vector<MethodRow> rows = {
      {"o_cp", {2.93, 6.89, 8.67, 13.34, 22.9},
       {-49.83, -40.71, -45.91, -47.04, -23.18}},
      {"o_nb", {3.49, 8.48, 12.76, 20.06, 25.49},
       {-40.24, -27.02, -20.40, -20.37, -14.49}},
      {"Finetune1", {5.14, 13.27, 17.3, 27.4, 31.12},
       {-11.99, 14.20, 7.92, 8.77, 4.39}},
      {"Finetune2", {4.74, 12.28, 16.33, 25.61, 28.73},
       {-18.84, 5.68, 1.87, 1.67, -3.62}},
      {"Finetune3", {6.88, 14.36, 18.25, 28.09, 33.25},
       {17.81, 23.58, 13.85, 11.51, 11.54}},
      {"Finetune4", {6.26, 14.06, 17.94, 27.61, 31.2},
       {7.19, 21.00, 11.92, 9.61, 4.66}},
  };
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < corpora.size(); ++c) {
      double printed = -scoring::cerr(baseline[c], row.cer[c]);
      double want = row.printed_minus_cerr[c];
      if (std::abs(printed - want) > 0.01) {
        problems.push_back(row.name + " on " + corpora[c] + ": got " +
                           fmt2(printed) + ", want " + fmt2(want));
      }
    }
  }
}

void criterion_3_oracle_ordering(std::vector<std::string>& problems) {
  const std::vector<std::string> alphabet = {"甲", "乙", "丙", "丁", "戊",
                                             "己", "庚", "辛", "壬", "癸"};
  auto policy = dataset::NormalizationPolicy::none();
  std::mt19937 rng(20260809);
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    dataset::HypothesisSet rec;
    rec.id = "r" + std::to_string(trial);
    rec.corpus = "synthetic";
    rec.transcription = random_text(rng, alphabet, 10, 1);
    std::size_t n = 1 + rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      rec.hypotheses.push_back(random_text(rng, alphabet, 10, 0));
    }
    auto one_best = scoring::cer(rec.hypotheses.front(), rec.transcription,
                                 policy);
    auto [index, nb] = scoring::oracle_nbest(rec, policy);
    auto cp = scoring::oracle_compositional(rec, policy);
    if (!(cp.distance() <= nb.distance() &&
          nb.distance() <= one_best.distance())) {
      ++violations;
    }
  }
  require(problems, violations == 0,
          std::to_string(violations) + " ordering violations in 1000 trials");
}

void criterion_4_compositional_equivalence(std::vector<std::string>& problems) {
  const std::vector<std::string> alphabet = {"甲", "乙", "丙", "丁", "戊",
                                             "己"};
  auto policy = dataset::NormalizationPolicy::none();
  std::mt19937 rng(424242);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> pool_alphabet(
        alphabet.begin(), alphabet.begin() + 2 + rng() % 3);  // pool <= 4
    dataset::HypothesisSet rec;
    rec.id = "r";
    rec.corpus = "synthetic";
    rec.transcription = random_text(rng, alphabet, 6, 1);
    std::size_t n = 1 + rng() % 3;
    for (std::size_t i = 0; i < n; ++i) {
      rec.hypotheses.push_back(random_text(rng, pool_alphabet, 5, 1));
    }
    std::set<std::string> pool;
    for (const auto& h : rec.hypotheses) {
      for (const auto& ch : split_utf8(h)) pool.insert(ch);
    }
    auto closed = scoring::oracle_compositional(rec, policy).distance();
    auto brute =
        brute_force_compositional(pool, split_utf8(rec.transcription));
    if (closed != brute) ++mismatches;
  }
  require(problems, mismatches == 0,
          std::to_string(mismatches) + " mismatches in 200 instances");
}

void criterion_5_edit_distance_oracle(std::vector<std::string>& problems) {
  std::mt19937 rng(555);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d"};
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> a, b;
    for (std::size_t i = rng() % 8; i > 0; --i) {
      a.push_back(alphabet[rng() % alphabet.size()]);
    }
    for (std::size_t i = rng() % 8; i > 0; --i) {
      b.push_back(alphabet[rng() % alphabet.size()]);
    }
    if (scoring::edit_distance(a, b).distance() !=
        brute_force_distance(a, 0, b, 0)) {
      ++mismatches;
    }
  }
  require(problems, mismatches == 0,
          std::to_string(mismatches) + " mismatches in 500 pairs");
}

void criterion_6_pinyin_regularization(std::vector<std::string>& problems) {
  auto policy = cli_default_policy();
  const auto& lex = lexicon();

  // homophone groups from the bundled single-character lexicon
  std::ifstream in(g_data_dir / "lexicon" / "pinyin_chars.tsv");
  std::map<std::string, std::vector<std::string>> by_reading;
  std::vector<std::string> all_chars;
  std::string line;
  while (std::getline(in, line) && all_chars.size() < 6000) {
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    std::string ch = line.substr(0, tab);
    std::string first = line.substr(tab + 1);
    if (auto comma = first.find(','); comma != std::string::npos) {
      first = first.substr(0, comma);
    }
    by_reading[first].push_back(ch);
    all_chars.push_back(ch);
  }
  std::vector<std::vector<std::string>> groups;
  for (auto& [reading, chars] : by_reading) {
    if (chars.size() >= 2) groups.push_back(chars);
  }
  require(problems, groups.size() > 50, "too few homophone groups");

  std::mt19937 rng(606060);
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // reference from random homophone-group members, hypothesis perturbed
    std::size_t len = 1 + rng() % 10;
    std::string ref, hyp;
    for (std::size_t i = 0; i < len; ++i) {
      const auto& group = groups[rng() % groups.size()];
      const std::string& ref_ch = group[rng() % group.size()];
      ref += ref_ch;
      unsigned roll = rng() % 10;
      if (roll < 5) {
        hyp += ref_ch;  // keep
      } else if (roll < 8) {
        hyp += group[rng() % group.size()];  // homophone swap
      } else if (roll < 9) {
        hyp += all_chars[rng() % all_chars.size()];  // arbitrary error
      }  // else drop the character
    }
    auto c = scoring::cer(hyp, ref, policy);
    auto p = scoring::pinyin_er(hyp, ref, lex,
                                pinyin::TranslitMode::kPerChar, true, policy);
    if (p.distance() > c.distance()) ++violations;
  }
  require(problems, violations == 0,
          std::to_string(violations) + " PinyinER > CER violations in 1000");

  // direction check on the bundled sample: 1-best PinyinER < 1-best CER
  std::size_t cer_dist = 0, pinyin_dist = 0, ref_len = 0;
  for (const auto& rec : bundled_sample()) {
    auto c = scoring::cer(rec.hypotheses.front(), rec.transcription, policy);
    auto p = scoring::pinyin_er(rec.hypotheses.front(), rec.transcription,
                                lex, pinyin::TranslitMode::kPerChar, true,
                                policy);
    cer_dist += c.distance();
    pinyin_dist += p.distance();
    ref_len += c.ref_len;
  }
  require(problems, pinyin_dist < cer_dist,
          "bundled sample: PinyinER " + std::to_string(pinyin_dist) + "/" +
              std::to_string(ref_len) + " not strictly below CER " +
              std::to_string(cer_dist) + "/" + std::to_string(ref_len));
}

void criterion_7_syllable_roundtrip(std::vector<std::string>& problems) {
  std::size_t checked = 0;
  for (int tone = 1; tone <= 5; ++tone) {
    for (const auto& final_part : pinyin::kFinals) {
      std::vector<std::string> initials(pinyin::kInitials.begin(),
                                        pinyin::kInitials.end());
      initials.push_back("");  // no-initial form
      for (const auto& initial : initials) {
        pinyin::Syllable s{initial, std::string(final_part), tone};
        std::string text = pinyin::format_syllable(s);
        pinyin::Syllable back = pinyin::parse_syllable(text);
        if (!(back == s)) {
          problems.push_back("parse(format(" + text + ")) diverged");
          return;
        }
        if (pinyin::format_syllable(back) != text) {
          problems.push_back("format(parse(" + text + ")) diverged");
          return;
        }
        ++checked;
      }
    }
  }
  require(problems, checked == 5 * 34 * 24,
          "expected 4080 enumerated forms, saw " + std::to_string(checked));

  // format∘parse over fuzzed digit-terminated strings that happen to parse
  std::mt19937 rng(70707);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  for (int trial = 0; trial < 30000; ++trial) {
    std::string s;
    for (std::size_t i = 1 + rng() % 5; i > 0; --i) {
      s.push_back(alphabet[rng() % alphabet.size()]);
    }
    s.push_back(static_cast<char>('1' + rng() % 5));
    try {
      pinyin::Syllable parsed = pinyin::parse_syllable(s);
      if (pinyin::format_syllable(parsed) != s) {
        problems.push_back("format(parse(" + s + ")) != " + s);
        return;
      }
    } catch (const Error&) {
    }
  }
}

void criterion_8_prompt_fidelity(std::vector<std::string>& problems) {
  auto records = bundled_sample();
  const auto& lex = lexicon();

  auto count_prefix = [](const std::string& text, std::string_view prefix) {
    std::size_t count = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind(prefix, 0) == 0) ++count;
    }
    return count;
  };
  auto collect_prefix = [](const std::string& text, std::string_view prefix) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind(prefix, 0) == 0) out.push_back(line);
    }
    return out;
  };

  for (const auto& rec : records) {
    for (const auto& [name, spec] : promptgen::table3_specs()) {
      if (spec.passthrough) continue;
      std::string prompt = promptgen::build_direct_prompt(rec, spec, lex);
      bool counts_ok =
          count_prefix(prompt, promptgen::kHypothesisPrefix) ==
              spec.text.count &&
          count_prefix(prompt, promptgen::kPinyinPrefix) ==
              spec.pinyin_transcribed.count &&
          count_prefix(prompt, promptgen::kGroundTruthPinyinPrefix) ==
              spec.pinyin_ground_truth.count;
      if (!counts_ok) {
        problems.push_back(name + " on " + rec.id + ": wrong line counts");
        return;
      }
      for (auto [lc, prefix] :
           {std::pair{spec.text, promptgen::kHypothesisPrefix},
            std::pair{spec.pinyin_transcribed, promptgen::kPinyinPrefix},
            std::pair{spec.pinyin_ground_truth,
                      promptgen::kGroundTruthPinyinPrefix}}) {
        if (!lc.repeat_first) continue;
        auto lines = collect_prefix(prompt, prefix);
        for (const auto& line : lines) {
          if (line != lines.front()) {
            problems.push_back(name + " on " + rec.id +
                               ": repeated lines differ");
            return;
          }
        }
      }
    }

    // The leaked-string check only separates provenance when no hypothesis
    // is a perfect homophone of the reference.
    pinyin::TranslitOptions contextual;
    std::string ref_pinyin =
        pinyin::transliterate(rec.transcription, lex, contextual).rendered();
    bool ref_equals_some_hyp = false;
    for (const auto& h : rec.hypotheses) {
      if (pinyin::transliterate(h, lex, contextual).rendered() == ref_pinyin) {
        ref_equals_some_hyp = true;
      }
    }
    for (const auto& [name, spec] : promptgen::table4_specs()) {
      auto [prompt, response] = promptgen::build_finetune_pair(
          rec, spec, lex, promptgen::Templates::builtin(),
          cli_default_policy());
      bool counts_ok =
          count_prefix(prompt, promptgen::kFinetuneHypothesisPrefix) ==
              spec.text.count &&
          count_prefix(prompt, promptgen::kFinetunePinyinPrefix) ==
              spec.pinyin_transcribed.count;
      if (!counts_ok) {
        problems.push_back(name + " on " + rec.id + ": wrong line counts");
        return;
      }
      if (!ref_equals_some_hyp &&
          prompt.find(ref_pinyin) != std::string::npos) {
        problems.push_back(name + " on " + rec.id +
                           ": reference Pinyin leaked into the prompt");
        return;
      }
    }
  }
}

void criterion_9_mock_evaluation(std::vector<std::string>& problems) {
  auto records = bundled_sample();
  auto spec = *promptgen::spec_by_name("Prompt2");
  const std::string dataset =
      (g_data_dir / "samples" / "sample.jsonl").string();

  // identity: reply with the reference
  auto identity_fixtures = g_work_dir / "fixtures_identity.jsonl";
  write_fixtures(identity_fixtures, records, spec,
                 [](const dataset::HypothesisSet& rec) {
                   nlohmann::json j;
                   j["correction"] = rec.transcription;
                   return j.dump();
                 });
  auto identity_out = g_work_dir / "run_identity";
  auto identity = run_command(evaluate_command(dataset, "Prompt2",
                                               identity_fixtures,
                                               identity_out));
  require(problems, identity.exit_code == 0,
          "identity run exited " + std::to_string(identity.exit_code));
  auto identity_scores = read_scores(identity_out / "scores.tsv");
  require(problems, identity_scores.contains("ALL"), "identity: no ALL row");
  if (identity_scores.contains("ALL")) {
    require(problems, identity_scores["ALL"]["cer"] == "0.00",
            "identity CER " + identity_scores["ALL"]["cer"] + " != 0.00");
    require(problems, identity_scores["ALL"]["minus_cerr"] == "-100.00",
            "identity -CERR " + identity_scores["ALL"]["minus_cerr"] +
                " != -100.00");
  }

  // echo: reply with the 1-best hypothesis
  auto echo_fixtures = g_work_dir / "fixtures_echo.jsonl";
  write_fixtures(echo_fixtures, records, spec,
                 [](const dataset::HypothesisSet& rec) {
                   nlohmann::json j;
                   j["correction"] = rec.hypotheses.front();
                   return j.dump();
                 });
  auto echo_out = g_work_dir / "run_echo";
  auto echo =
      run_command(evaluate_command(dataset, "Prompt2", echo_fixtures, echo_out));
  require(problems, echo.exit_code == 0,
          "echo run exited " + std::to_string(echo.exit_code));
  auto echo_scores = read_scores(echo_out / "scores.tsv");
  if (echo_scores.contains("ALL")) {
    require(problems,
            echo_scores["ALL"]["cer"] == echo_scores["ALL"]["baseline_cer"],
            "echo CER " + echo_scores["ALL"]["cer"] + " != baseline " +
                echo_scores["ALL"]["baseline_cer"]);
    require(problems, echo_scores["ALL"]["minus_cerr"] == "0.00",
            "echo -CERR " + echo_scores["ALL"]["minus_cerr"] + " != 0.00");
  }

  // garbage: unparsable replies, fallback to the 1-best everywhere
  auto garbage_fixtures = g_work_dir / "fixtures_garbage.jsonl";
  write_fixtures(garbage_fixtures, records, spec,
                 [](const dataset::HypothesisSet&) {
                   return std::string("I think the answer is...");
                 });
  auto garbage_out = g_work_dir / "run_garbage";
  auto garbage = run_command(evaluate_command(dataset, "Prompt2",
                                              garbage_fixtures, garbage_out));
  require(problems, garbage.exit_code == 0,
          "garbage run exited " + std::to_string(garbage.exit_code));
  auto garbage_scores = read_scores(garbage_out / "scores.tsv");
  if (garbage_scores.contains("ALL")) {
    require(problems,
            garbage_scores["ALL"]["cer"] ==
                garbage_scores["ALL"]["baseline_cer"],
            "garbage CER != baseline");
  }
  std::ifstream artifacts(garbage_out / "utterances.jsonl");
  std::string line;
  std::size_t total = 0, parse_flagged = 0;
  while (std::getline(artifacts, line)) {
    ++total;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_object() && j["failure_reason"] == "parse") ++parse_flagged;
  }
  require(problems, total == records.size(),
          "garbage artifacts cover " + std::to_string(total) + " of " +
              std::to_string(records.size()));
  require(problems, parse_flagged == total,
          std::to_string(parse_flagged) + "/" + std::to_string(total) +
              " records flagged parse");
}

void criterion_10_determinism(std::vector<std::string>& problems) {
  auto records = bundled_sample();
  auto spec = *promptgen::spec_by_name("Prompt2");
  const std::string dataset =
      (g_data_dir / "samples" / "sample.jsonl").string();

  auto fixtures = g_work_dir / "fixtures_det.jsonl";
  write_fixtures(fixtures, records, spec,
                 [](const dataset::HypothesisSet& rec) {
                   nlohmann::json j;
                   j["correction"] = rec.transcription;
                   return j.dump();
                 });

  // the same command twice: identical seed, fixtures and output directory
  auto out_dir = g_work_dir / "run_det";
  const std::string command =
      evaluate_command(dataset, "Prompt2", fixtures, out_dir,
                       "--sample 8 --seed 7");
  auto run_a = run_command(command);
  require(problems, run_a.exit_code == 0,
          "first run exited " + std::to_string(run_a.exit_code));
  std::map<std::string, std::string> snapshot;
  for (const char* name : {"scores.tsv", "manifest.json", "utterances.jsonl"}) {
    snapshot[name] = read_file(out_dir / name);
    require(problems, !snapshot[name].empty(),
            std::string(name) + " is empty");
  }
  auto run_b = run_command(command);
  require(problems, run_b.exit_code == 0,
          "second run exited " + std::to_string(run_b.exit_code));
  for (const auto& [name, bytes] : snapshot) {
    require(problems, read_file(out_dir / name) == bytes,
            name + " differs between identical runs");
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: %s <data_dir> <cli_binary> <work_dir>\n",
                 argv[0]);
    return 64;
  }
  g_data_dir = argv[1];
  g_cli = argv[2];
  g_work_dir = argv[3];
  std::error_code ec;
  fs::remove_all(g_work_dir, ec);
  fs::create_directories(g_work_dir);

  // reproducible manifests for the subprocess runs
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);

  run_criterion(1, "golden case CERs reproduce exactly",
                criterion_1_golden_case_cers);
  run_criterion(2, "CERR arithmetic matches the reference grid (+-0.01)",
                criterion_2_cerr_table);
  run_criterion(3, "oracle ordering o_cp <= o_nb <= 1-best on 1000 sets",
                criterion_3_oracle_ordering);
  run_criterion(4, "compositional oracle equals brute force on 200 instances",
                criterion_4_compositional_equivalence);
  run_criterion(5, "edit distance equals brute force on 500 pairs",
                criterion_5_edit_distance_oracle);
  run_criterion(6, "per-char PinyinER <= CER; sample PinyinER below CER",
                criterion_6_pinyin_regularization);
  run_criterion(7, "syllable parse/format roundtrip over the full space",
                criterion_7_syllable_roundtrip);
  run_criterion(8, "prompt line counts, repeats and leakage guard",
                criterion_8_prompt_fidelity);
  run_criterion(9, "mock end-to-end evaluation (identity/echo/garbage)",
                criterion_9_mock_evaluation);
  run_criterion(10, "byte-identical score files and manifests across reruns",
                criterion_10_determinism);

  if (g_criteria_failed == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_criteria_failed);
  return 1;
}
