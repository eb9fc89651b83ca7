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

#ifndef HYPOSCORE_TESTS_HELPERS_HPP_
#define HYPOSCORE_TESTS_HELPERS_HPP_

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "hyposcore/dataset.hpp"
#include "hyposcore/pinyin.hpp"

namespace hyposcore::testing {

inline std::filesystem::path repo_root() {
  return std::filesystem::path(HYPOSCORE_SOURCE_DIR);
}

inline std::filesystem::path data_dir() { return repo_root() / "data"; }

inline const pinyin::Lexicon& bundled_lexicon() {
  static const pinyin::Lexicon lex = pinyin::load_lexicon(
      {data_dir() / "lexicon" / "pinyin_chars.tsv",
       data_dir() / "lexicon" / "pinyin_phrases.tsv"});
  return lex;
}

inline const dataset::SimpTable& bundled_t2s() {
  static const dataset::SimpTable table =
      dataset::load_t2s(data_dir() / "t2s" / "t2s.tsv");
  return table;
}

inline dataset::HypothesisSet make_record(std::string id, std::string corpus,
                                          std::vector<std::string> hyps,
                                          std::string ref) {
  return dataset::HypothesisSet{std::move(id), std::move(corpus),
                                std::move(hyps), std::move(ref)};
}

// Golden case 1: reading-style utterance, near-homophone confusions.
inline dataset::HypothesisSet case1_record() {
  return make_record("case1", "aishell1/test",
                     {"一线楼市成交量基增", "一线楼市成交量机增",
                      "一线楼市成交量积增", "一线楼市成交量基僧",
                      "一线楼市成交量基升"},
                     "一线楼市成交量激增");
}

// Golden case 2: accented speech, heavier error load.
inline dataset::HypothesisSet case2_record() {
  return make_record("case2", "kespeech/test",
                     {"但念面对马宁事实马则不愿意牵行",
                      "但你面对马宁事实马则不愿意牵行",
                      "当年面对马宁事实马则不愿意牵行",
                      "但念面对马宁事实马则不愿意谦行",
                      "但你面对马宁事实马则不愿意谦行"},
                     "当你面对马凝视时马则不愿前行");
}

// Independent reference implementation: plain recursion, no memoization.
// Only usable for short sequences; that is the point.
template <typename T>
std::size_t brute_force_distance(const std::vector<T>& a, std::size_t ai,
                                 const std::vector<T>& b, std::size_t bi) {
  if (ai == a.size()) return b.size() - bi;
  if (bi == b.size()) return a.size() - ai;
  std::size_t best = brute_force_distance(a, ai + 1, b, bi + 1) +
                     (a[ai] == b[bi] ? 0 : 1);
  best = std::min(best, brute_force_distance(a, ai + 1, b, bi) + 1);
  best = std::min(best, brute_force_distance(a, ai, b, bi + 1) + 1);
  return best;
}

template <typename T>
std::size_t brute_force_distance(const std::vector<T>& a,
                                 const std::vector<T>& b) {
  return brute_force_distance(a, 0, b, 0);
}

}  // namespace hyposcore::testing

#endif  // HYPOSCORE_TESTS_HELPERS_HPP_
