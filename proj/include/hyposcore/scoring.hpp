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

#ifndef HYPOSCORE_SCORING_HPP_
#define HYPOSCORE_SCORING_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyposcore/dataset.hpp"
#include "hyposcore/pinyin.hpp"

namespace hyposcore::scoring {

// Counts from one minimal alignment of a hypothesis against a reference.
// Operations are expressed on the hypothesis: an insertion adds a missing
// reference token to it, a deletion removes an extra one.
struct EditStats {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t ref_len = 0;

  std::size_t distance() const {
    return substitutions + insertions + deletions;
  }
  // May exceed 1.0 for deletion-heavy hypotheses; 0 when the reference is
  // empty (callers are expected to guard with ref_len).
  double rate() const {
    return ref_len == 0 ? 0.0
                        : static_cast<double>(distance()) /
                              static_cast<double>(ref_len);
  }
  double percent() const { return 100.0 * rate(); }
};

// Minimal unit-cost alignment of hyp against ref. Ties are resolved with a
// fixed backtrace order (substitution, then deletion, then insertion) so the
// count split is reproducible; the total distance is unique regardless.
template <typename Token, typename Equal>
EditStats edit_distance(const std::vector<Token>& hyp,
                        const std::vector<Token>& ref, Equal equal) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& {
    return d[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = at(i - 1, j - 1) + (equal(hyp[i - 1], ref[j - 1]) ? 0 : 1);
      std::size_t del = at(i - 1, j) + 1;
      std::size_t ins = at(i, j - 1) + 1;
      at(i, j) = std::min({sub, del, ins});
    }
  }

  EditStats stats;
  stats.ref_len = m;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      bool match = equal(hyp[i - 1], ref[j - 1]);
      if (at(i, j) == at(i - 1, j - 1) + (match ? 0 : 1)) {
        if (!match) ++stats.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++stats.deletions;
      --i;
      continue;
    }
    ++stats.insertions;
    --j;
  }
  return stats;
}

template <typename Token>
EditStats edit_distance(const std::vector<Token>& hyp,
                        const std::vector<Token>& ref) {
  return edit_distance(hyp, ref,
                       [](const Token& a, const Token& b) { return a == b; });
}

// Character-level CER over normalized strings. Throws EmptyReference when
// the reference normalizes to nothing.
EditStats cer(std::string_view hyp, std::string_view ref,
              const dataset::NormalizationPolicy& policy = {},
              const dataset::SimpTable* simp_table = nullptr);

// Token-level edit distance over transliterated Pinyin. Literal tokens
// compare by text, syllables by segments and optionally tone.
EditStats pinyin_er(std::string_view hyp, std::string_view ref,
                    const pinyin::Lexicon& lex,
                    pinyin::TranslitMode mode = pinyin::TranslitMode::kPerChar,
                    bool tone_sensitive = true,
                    const dataset::NormalizationPolicy& policy = {},
                    const dataset::SimpTable* simp_table = nullptr);

// Relative CER reduction in percent: positive means the method improved on
// the baseline. Reports print the negated value to keep the usual
// lower-is-better reading.
double cerr(double baseline_cer, double method_cer);

// Lowest per-candidate CER and the smallest index achieving it.
std::pair<std::size_t, EditStats> oracle_nbest(
    const dataset::HypothesisSet& h,
    const dataset::NormalizationPolicy& policy = {},
    const dataset::SimpTable* simp_table = nullptr);

// Characters of the reference absent from every hypothesis, over ref_len.
// Equals the minimum edit distance to the reference over all strings
// composable from the pooled hypothesis characters.
EditStats oracle_compositional(const dataset::HypothesisSet& h,
                               const dataset::NormalizationPolicy& policy = {},
                               const dataset::SimpTable* simp_table = nullptr);

// Everything known about one scored utterance.
struct UttScore {
  std::string id;
  std::string corpus;
  EditStats cer;
  std::optional<EditStats> pinyin;
  std::optional<EditStats> nbest_oracle;
  std::optional<std::size_t> nbest_index;
  std::optional<EditStats> compositional_oracle;
};

struct CorpusScore {
  std::string corpus;
  std::size_t n = 0;

  std::size_t ref_len = 0;
  std::size_t cer_dist = 0;
  std::size_t pinyin_dist = 0;
  std::size_t onb_dist = 0;
  std::size_t ocp_dist = 0;
  bool has_pinyin = false;
  bool has_oracles = false;

  // Per-utterance mean rates, used by the macro-averaged report.
  double macro_cer_sum = 0.0;
  double macro_pinyin_sum = 0.0;

  double cer_percent(bool macro = false) const;
  double pinyin_percent(bool macro = false) const;
  double onb_percent() const;
  double ocp_percent() const;
};

struct ScoreReport {
  std::vector<CorpusScore> per_corpus;  // sorted by tag
  CorpusScore overall;                  // tagged "ALL"
};

// Micro-averaged fold over per-utterance stats, grouped by corpus tag.
// Deterministic and independent of input order up to the stable grouping.
ScoreReport corpus_aggregate(const std::vector<UttScore>& per_utt);

}  // namespace hyposcore::scoring

#endif  // HYPOSCORE_SCORING_HPP_
