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

#include "hyposcore/scoring.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "hyposcore/error.hpp"
#include "hyposcore/unicode.hpp"

namespace hyposcore::scoring {

EditStats cer(std::string_view hyp, std::string_view ref,
              const dataset::NormalizationPolicy& policy,
              const dataset::SimpTable* simp_table) {
  auto ref_chars = split_utf8(dataset::normalize(ref, policy, simp_table));
  if (ref_chars.empty()) {
    throw Error(ErrorCode::kEmptyReference,
                "reference is empty after normalization");
  }
  auto hyp_chars = split_utf8(dataset::normalize(hyp, policy, simp_table));
  return edit_distance(hyp_chars, ref_chars);
}

EditStats pinyin_er(std::string_view hyp, std::string_view ref,
                    const pinyin::Lexicon& lex, pinyin::TranslitMode mode,
                    bool tone_sensitive,
                    const dataset::NormalizationPolicy& policy,
                    const dataset::SimpTable* simp_table) {
  std::string ref_norm = dataset::normalize(ref, policy, simp_table);
  if (utf8_length(ref_norm) == 0) {
    throw Error(ErrorCode::kEmptyReference,
                "reference is empty after normalization");
  }
  std::string hyp_norm = dataset::normalize(hyp, policy, simp_table);
  pinyin::TranslitOptions options;
  options.mode = mode;
  auto hyp_tokens = transliterate(hyp_norm, lex, options).tokens;
  auto ref_tokens = transliterate(ref_norm, lex, options).tokens;
  return edit_distance(hyp_tokens, ref_tokens,
                       [tone_sensitive](const pinyin::PinyinToken& a,
                                        const pinyin::PinyinToken& b) {
                         return a.equivalent(b, tone_sensitive);
                       });
}

double cerr(double baseline_cer, double method_cer) {
  if (baseline_cer <= 0.0) {
    throw Error(ErrorCode::kZeroBaseline,
                "CERR is undefined for a zero baseline");
  }
  return 100.0 * (baseline_cer - method_cer) / baseline_cer;
}

std::pair<std::size_t, EditStats> oracle_nbest(
    const dataset::HypothesisSet& h, const dataset::NormalizationPolicy& policy,
    const dataset::SimpTable* simp_table) {
  if (h.hypotheses.empty()) {
    throw Error(ErrorCode::kEmptyHypothesisList,
                "utterance " + h.id + " has no hypotheses");
  }
  std::size_t best_index = 0;
  EditStats best;
  for (std::size_t i = 0; i < h.hypotheses.size(); ++i) {
    EditStats stats = cer(h.hypotheses[i], h.transcription, policy, simp_table);
    if (i == 0 || stats.distance() < best.distance()) {
      best = stats;
      best_index = i;
    }
  }
  return {best_index, best};
}

EditStats oracle_compositional(const dataset::HypothesisSet& h,
                               const dataset::NormalizationPolicy& policy,
                               const dataset::SimpTable* simp_table) {
  if (h.hypotheses.empty()) {
    throw Error(ErrorCode::kEmptyHypothesisList,
                "utterance " + h.id + " has no hypotheses");
  }
  auto ref_chars =
      split_utf8(dataset::normalize(h.transcription, policy, simp_table));
  if (ref_chars.empty()) {
    throw Error(ErrorCode::kEmptyReference,
                "reference is empty after normalization");
  }
  std::unordered_set<std::string> pool;
  for (const auto& hyp : h.hypotheses) {
    for (auto& ch : split_utf8(dataset::normalize(hyp, policy, simp_table))) {
      pool.insert(std::move(ch));
    }
  }
  EditStats stats;
  stats.ref_len = ref_chars.size();
  for (const auto& ch : ref_chars) {
    if (!pool.contains(ch)) ++stats.insertions;
  }
  return stats;
}

double CorpusScore::cer_percent(bool macro) const {
  if (macro) {
    return n == 0 ? 0.0 : 100.0 * macro_cer_sum / static_cast<double>(n);
  }
  return ref_len == 0 ? 0.0
                      : 100.0 * static_cast<double>(cer_dist) /
                            static_cast<double>(ref_len);
}

double CorpusScore::pinyin_percent(bool macro) const {
  if (macro) {
    return n == 0 ? 0.0 : 100.0 * macro_pinyin_sum / static_cast<double>(n);
  }
  return ref_len == 0 ? 0.0
                      : 100.0 * static_cast<double>(pinyin_dist) /
                            static_cast<double>(ref_len);
}

double CorpusScore::onb_percent() const {
  return ref_len == 0 ? 0.0
                      : 100.0 * static_cast<double>(onb_dist) /
                            static_cast<double>(ref_len);
}

double CorpusScore::ocp_percent() const {
  return ref_len == 0 ? 0.0
                      : 100.0 * static_cast<double>(ocp_dist) /
                            static_cast<double>(ref_len);
}

ScoreReport corpus_aggregate(const std::vector<UttScore>& per_utt) {
  std::map<std::string, CorpusScore> by_corpus;
  ScoreReport report;
  report.overall.corpus = "ALL";

  auto fold = [](CorpusScore& acc, const UttScore& u) {
    acc.n += 1;
    acc.ref_len += u.cer.ref_len;
    acc.cer_dist += u.cer.distance();
    acc.macro_cer_sum += u.cer.rate();
    if (u.pinyin) {
      acc.has_pinyin = true;
      acc.pinyin_dist += u.pinyin->distance();
      acc.macro_pinyin_sum += u.pinyin->rate();
    }
    if (u.nbest_oracle && u.compositional_oracle) {
      acc.has_oracles = true;
      acc.onb_dist += u.nbest_oracle->distance();
      acc.ocp_dist += u.compositional_oracle->distance();
    }
  };

  for (const auto& u : per_utt) {
    auto& acc = by_corpus[u.corpus];
    acc.corpus = u.corpus;
    fold(acc, u);
    fold(report.overall, u);
  }
  for (auto& [tag, acc] : by_corpus) report.per_corpus.push_back(acc);
  return report;
}

}  // namespace hyposcore::scoring
