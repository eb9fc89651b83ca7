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

#include "hyposcore/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <unordered_set>

#include <json.hpp>

#include "hyposcore/error.hpp"
#include "hyposcore/scoring.hpp"
#include "hyposcore/unicode.hpp"

namespace hyposcore::dataset {

namespace {

using ordered_json = nlohmann::ordered_json;

// Uniform draw from [0, bound) by rejection; mt19937_64 output is fixed by
// the standard, so results are identical across platforms.
std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

SimpTable load_t2s(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open t2s table " + path.string());
  }
  SimpTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kParseError,
                  path.filename().string() + ":" + std::to_string(line_no) +
                      ": expected <trad>\\t<simp>");
    }
    auto trad = split_utf8(line.substr(0, tab));
    auto simp = split_utf8(line.substr(tab + 1));
    if (trad.size() != 1 || simp.size() != 1) {
      throw Error(ErrorCode::kParseError,
                  path.filename().string() + ":" + std::to_string(line_no) +
                      ": mapping must be one character to one character");
    }
    table[decode_codepoint(trad[0])] = decode_codepoint(simp[0]);
  }
  return table;
}

std::unordered_set<char32_t> default_punctuation() {
  static const char32_t kPunct[] = {
      // ASCII
      U'!', U'"', U'#', U'$', U'%', U'&', U'\'', U'(', U')', U'*', U'+',
      U',', U'-', U'.', U'/', U':', U';', U'<', U'=', U'>', U'?', U'@',
      U'[', U'\\', U']', U'^', U'_', U'`', U'{', U'|', U'}', U'~',
      // CJK punctuation and common symbols
      U'。', U'，', U'、', U'；', U'：', U'？', U'！', U'“', U'”', U'‘',
      U'’', U'（', U'）', U'《', U'》', U'〈', U'〉', U'【', U'】', U'〔',
      U'〕', U'「', U'」', U'『', U'』', U'—', U'…', U'·', U'～', U'〜',
      U'﹑', U'﹔', U'•',
  };
  return {std::begin(kPunct), std::end(kPunct)};
}

std::string normalize(std::string_view text, const NormalizationPolicy& policy,
                      const SimpTable* simp_table) {
  if (policy.to_simplified && simp_table == nullptr) {
    throw Error(ErrorCode::kUsageError,
                "to_simplified requires a loaded traditional->simplified "
                "table");
  }
  std::string out;
  out.reserve(text.size());
  for (const auto& ch : split_utf8(text)) {
    char32_t cp = decode_codepoint(ch);
    if (policy.to_simplified) {
      if (auto it = simp_table->find(cp); it != simp_table->end()) {
        cp = it->second;
      }
    }
    if (policy.width_fold) {
      if (cp >= 0xFF01 && cp <= 0xFF5E) cp = cp - 0xFF01 + 0x21;
      if (cp == 0x3000) cp = 0x20;
    }
    if (policy.strip_whitespace &&
        (cp == 0x20 || cp == 0x09 || cp == 0x0A || cp == 0x0D ||
         cp == 0x3000)) {
      continue;
    }
    if (policy.strip_punctuation && policy.punctuation.contains(cp)) continue;
    out += encode_codepoint(cp);
  }
  return out;
}

LoadResult load_corpus(const std::filesystem::path& path,
                       const NormalizationPolicy& policy,
                       const SimpTable* simp_table) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open dataset " + path.string());
  }
  // The policy here only keys hypothesis dedup; skip conversion when no
  // table was supplied instead of failing the load.
  NormalizationPolicy dedup_policy = policy;
  if (dedup_policy.to_simplified && simp_table == nullptr) {
    dedup_policy.to_simplified = false;
  }
  LoadResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where =
        path.filename().string() + ":" + std::to_string(line_no);

    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::kSchemaError, where + ": not a JSON object");
    }
    for (const char* field : {"id", "corpus", "hyps", "ref"}) {
      if (!j.contains(field)) {
        throw Error(ErrorCode::kSchemaError,
                    where + ": missing field \"" + field + "\"");
      }
    }
    if (!j["id"].is_string() || !j["corpus"].is_string() ||
        !j["ref"].is_string() || !j["hyps"].is_array()) {
      throw Error(ErrorCode::kSchemaError, where + ": wrong field type");
    }

    HypothesisSet rec;
    rec.id = j["id"].get<std::string>();
    rec.corpus = j["corpus"].get<std::string>();
    rec.transcription = j["ref"].get<std::string>();
    if (rec.id.empty()) {
      throw Error(ErrorCode::kSchemaError, where + ": empty id");
    }
    if (!seen_ids.insert(rec.id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  where + ": id \"" + rec.id + "\" already seen");
    }

    std::unordered_set<std::string> seen_hyps;
    for (const auto& h : j["hyps"]) {
      if (!h.is_string()) {
        throw Error(ErrorCode::kSchemaError,
                    where + ": hyps must be strings");
      }
      std::string hyp = h.get<std::string>();
      std::string key = normalize(hyp, dedup_policy, simp_table);
      if (seen_hyps.insert(key).second) {
        rec.hypotheses.push_back(std::move(hyp));
      } else {
        ++result.deduped_hypotheses;
      }
    }
    if (rec.hypotheses.empty()) {
      throw Error(ErrorCode::kSchemaError, where + ": no hypotheses");
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

void write_corpus(const std::vector<HypothesisSet>& records,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  for (const auto& rec : records) {
    ordered_json j;
    j["id"] = rec.id;
    j["corpus"] = rec.corpus;
    j["hyps"] = rec.hypotheses;
    j["ref"] = rec.transcription;
    out << j.dump() << "\n";
  }
}

std::vector<std::string> dedup(const std::vector<std::string>& hyps) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& h : hyps) {
    if (seen.insert(h).second) out.push_back(h);
  }
  return out;
}

std::vector<HypothesisSet> sample(const std::vector<HypothesisSet>& corpus,
                                  std::size_t n, std::uint64_t seed) {
  if (n > corpus.size()) {
    throw Error(ErrorCode::kSampleTooLarge,
                "requested " + std::to_string(n) + " of " +
                    std::to_string(corpus.size()) + " records");
  }
  std::vector<std::size_t> idx(corpus.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + bounded_uniform(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  std::vector<HypothesisSet> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(corpus[idx[i]]);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

FilterResult filter_by_length(const std::vector<HypothesisSet>& records,
                              std::size_t max_chars) {
  if (max_chars < 1) {
    throw Error(ErrorCode::kUsageError, "max_chars must be >= 1");
  }
  FilterResult result;
  for (const auto& rec : records) {
    bool keep = utf8_length(rec.transcription) < max_chars;
    for (const auto& h : rec.hypotheses) {
      if (!keep) break;
      keep = utf8_length(h) < max_chars;
    }
    if (keep) {
      result.kept.push_back(rec);
    } else {
      ++result.dropped;
    }
  }
  return result;
}

std::vector<StatsRow> stats(const std::vector<HypothesisSet>& records,
                            const pinyin::Lexicon& lex,
                            const NormalizationPolicy& policy,
                            const SimpTable* simp_table) {
  struct Acc {
    std::size_t pairs = 0;
    std::size_t hyp_count = 0;
    std::size_t ref_len = 0;
    std::size_t cer_dist = 0;
    std::size_t pinyin_dist = 0;
    std::size_t onb_dist = 0;
    std::size_t ocp_dist = 0;
  };
  std::map<std::string, Acc> by_corpus;
  Acc all;

  for (const auto& rec : records) {
    auto cer_stats =
        scoring::cer(rec.hypotheses.front(), rec.transcription, policy,
                     simp_table);
    auto pinyin_stats = scoring::pinyin_er(
        rec.hypotheses.front(), rec.transcription, lex,
        pinyin::TranslitMode::kPerChar, /*tone_sensitive=*/true, policy,
        simp_table);
    auto [nb_index, nb_stats] = scoring::oracle_nbest(rec, policy, simp_table);
    auto cp_stats = scoring::oracle_compositional(rec, policy, simp_table);
    (void)nb_index;

    for (Acc* acc : {&by_corpus[rec.corpus], &all}) {
      acc->pairs += 1;
      acc->hyp_count += rec.hypotheses.size();
      acc->ref_len += cer_stats.ref_len;
      acc->cer_dist += cer_stats.distance();
      acc->pinyin_dist += pinyin_stats.distance();
      acc->onb_dist += nb_stats.distance();
      acc->ocp_dist += cp_stats.distance();
    }
  }

  auto to_row = [](const std::string& tag, const Acc& acc) {
    StatsRow row;
    row.corpus = tag;
    row.pairs = acc.pairs;
    row.mean_hypotheses =
        acc.pairs == 0 ? 0.0
                       : static_cast<double>(acc.hyp_count) /
                             static_cast<double>(acc.pairs);
    auto pct = [&](std::size_t dist) {
      return acc.ref_len == 0 ? 0.0
                              : 100.0 * static_cast<double>(dist) /
                                    static_cast<double>(acc.ref_len);
    };
    row.cer = pct(acc.cer_dist);
    row.pinyin_er = pct(acc.pinyin_dist);
    row.oracle_nbest = pct(acc.onb_dist);
    row.oracle_compositional = pct(acc.ocp_dist);
    return row;
  };

  std::vector<StatsRow> rows;
  for (const auto& [tag, acc] : by_corpus) rows.push_back(to_row(tag, acc));
  if (!records.empty()) rows.push_back(to_row("ALL", all));
  return rows;
}

}  // namespace hyposcore::dataset
