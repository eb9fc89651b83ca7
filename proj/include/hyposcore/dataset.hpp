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

#ifndef HYPOSCORE_DATASET_HPP_
#define HYPOSCORE_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hyposcore::pinyin {
class Lexicon;
}

namespace hyposcore::dataset {

// One utterance: N-best hypotheses (best first, pairwise distinct after
// normalization) paired with the reference transcription.
struct HypothesisSet {
  std::string id;
  std::string corpus;
  std::vector<std::string> hypotheses;
  std::string transcription;
};

// One-to-one traditional -> simplified character mapping.
using SimpTable = std::unordered_map<char32_t, char32_t>;

// TSV rows: <trad-char>\t<simp-char>; '#' starts a comment.
SimpTable load_t2s(const std::filesystem::path& path);

std::unordered_set<char32_t> default_punctuation();

// Text normalization applied before scoring. Applying the policy twice
// equals applying it once.
struct NormalizationPolicy {
  bool to_simplified = true;
  bool strip_whitespace = true;
  bool strip_punctuation = true;
  bool width_fold = true;
  std::unordered_set<char32_t> punctuation = default_punctuation();

  static NormalizationPolicy none() {
    return NormalizationPolicy{false, false, false, false, {}};
  }
};

// Character-by-character: simplified mapping, width folding, whitespace and
// punctuation stripping, in that order. Unmapped characters pass through.
// simp_table must be non-null while to_simplified is set.
std::string normalize(std::string_view text, const NormalizationPolicy& policy,
                      const SimpTable* simp_table);

struct LoadResult {
  std::vector<HypothesisSet> records;
  std::size_t deduped_hypotheses = 0;  // dropped as normalized duplicates
};

// JSONL, one utterance per line: {"id", "corpus", "hyps", "ref"}.
// Duplicate ids are rejected; hypotheses duplicated under the given policy
// are dropped (first kept) so loaded records satisfy the invariants.
LoadResult load_corpus(const std::filesystem::path& path,
                       const NormalizationPolicy& policy = {},
                       const SimpTable* simp_table = nullptr);

// Canonical serialization; load -> write -> load is the identity.
void write_corpus(const std::vector<HypothesisSet>& records,
                  const std::filesystem::path& path);

// First occurrence kept, relative order preserved.
std::vector<std::string> dedup(const std::vector<std::string>& hyps);

// Uniform sample without replacement, deterministic for a fixed seed on any
// platform; output sorted by id.
std::vector<HypothesisSet> sample(const std::vector<HypothesisSet>& corpus,
                                  std::size_t n, std::uint64_t seed);

struct FilterResult {
  std::vector<HypothesisSet> kept;
  std::size_t dropped = 0;
};

// Keeps records whose reference and every hypothesis are strictly shorter
// than max_chars characters.
FilterResult filter_by_length(const std::vector<HypothesisSet>& records,
                              std::size_t max_chars);

struct StatsRow {
  std::string corpus;
  std::size_t pairs = 0;
  double mean_hypotheses = 0.0;
  double cer = 0.0;        // 1-best, percent
  double pinyin_er = 0.0;  // 1-best, percent
  double oracle_nbest = 0.0;
  double oracle_compositional = 0.0;
};

// Per-corpus summary over the 1-best hypotheses, micro-averaged. Rows sorted
// by corpus tag; a final row tagged "ALL" aggregates everything.
std::vector<StatsRow> stats(const std::vector<HypothesisSet>& records,
                            const pinyin::Lexicon& lex,
                            const NormalizationPolicy& policy = {},
                            const SimpTable* simp_table = nullptr);

}  // namespace hyposcore::dataset

#endif  // HYPOSCORE_DATASET_HPP_
