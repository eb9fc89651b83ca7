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

#ifndef HYPOSCORE_PROMPTGEN_HPP_
#define HYPOSCORE_PROMPTGEN_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "hyposcore/dataset.hpp"
#include "hyposcore/pinyin.hpp"

namespace hyposcore::promptgen {

// Line-prefix markers used by the templates. Machine-checkable: counting
// lines with these prefixes recovers the PromptSpec counts.
inline constexpr std::string_view kHypothesisPrefix = "hypothesis: ";
inline constexpr std::string_view kPinyinPrefix = "pinyin: ";
inline constexpr std::string_view kGroundTruthPinyinPrefix =
    "ground-truth pinyin: ";
inline constexpr std::string_view kFinetuneHypothesisPrefix =
    "候选: ";  // 候选:
inline constexpr std::string_view kFinetunePinyinPrefix =
    "拼音: ";  // 拼音:

// How many lines of one kind a prompt carries. With repeat_first set the
// first candidate's line is repeated count times.
struct LineCount {
  unsigned count = 0;
  bool repeat_first = false;
};

enum class PromptStyle { kDirect, kFinetune };

// Encodes one prompt-layout row: how many hypothesis text lines, transcribed
// Pinyin lines, and ground-truth Pinyin lines to emit.
struct PromptSpec {
  LineCount text;
  LineCount pinyin_transcribed;
  LineCount pinyin_ground_truth;
  PromptStyle style = PromptStyle::kDirect;
  // The baseline row: pass the 1-best through with no model call.
  bool passthrough = false;

  // Ground-truth Pinyin comes from the reference and is unavailable in
  // practice; every output mentioning such a spec is flagged.
  bool analysis_only() const { return pinyin_ground_truth.count > 0; }

  void check() const;
};

// Canonical template text. The built-in strings are byte-identical to the
// files under data/templates/; either can be overridden so researchers can
// pin their own phrasing.
struct Templates {
  std::string direct_en;
  std::string finetune_zh;

  static Templates builtin();
  static Templates load(const std::optional<std::filesystem::path>& direct_file,
                        const std::optional<std::filesystem::path>& finetune_file);
};

// English instruction block with hypothesis/Pinyin lines filled in; closes
// with the JSON reply instruction. Deterministic: identical inputs yield
// identical bytes.
std::string build_direct_prompt(const dataset::HypothesisSet& h,
                                const PromptSpec& spec,
                                const pinyin::Lexicon& lex,
                                const Templates& templates = Templates::builtin());

// Chinese fine-tuning prompt plus the expected response (the normalized
// transcription). Ground-truth Pinyin never appears in this style.
std::pair<std::string, std::string> build_finetune_pair(
    const dataset::HypothesisSet& h, const PromptSpec& spec,
    const pinyin::Lexicon& lex,
    const Templates& templates = Templates::builtin(),
    const dataset::NormalizationPolicy& policy = {},
    const dataset::SimpTable* simp_table = nullptr);

// The nine direct-prompt layouts plus the no-call baseline, by name.
std::map<std::string, PromptSpec> table3_specs();

// The four fine-tuning layouts, by name.
std::map<std::string, PromptSpec> table4_specs();

// Lookup across both tables; nullopt for unknown names.
std::optional<PromptSpec> spec_by_name(const std::string& name);

enum class FailureReason { kNone, kParse, kOverlength, kTransport };

const char* failure_reason_name(FailureReason reason);

// Outcome of one correction attempt. correction is always set: on any
// failure it falls back to the 1-best hypothesis so the evaluation stays
// comparable to the baseline.
struct CorrectionRecord {
  std::string id;
  std::string raw_response;
  std::optional<std::string> correction;
  bool fallback_used = false;
  FailureReason failure_reason = FailureReason::kNone;
};

// Total over arbitrary bytes: extracts the first JSON object in raw
// (tolerating code fences and prose), reads "correction" and normalizes it.
// Extraction failure or a correction of >= max_chars characters falls back
// to the 1-best hypothesis with the matching failure reason.
CorrectionRecord parse_response(std::string_view raw,
                                const dataset::HypothesisSet& h,
                                std::size_t max_chars = 100,
                                const dataset::NormalizationPolicy& policy = {},
                                const dataset::SimpTable* simp_table = nullptr);

// A record for an upstream transport failure: same fallback, no raw text.
CorrectionRecord transport_failure_record(const dataset::HypothesisSet& h,
                                          const std::string& error);

}  // namespace hyposcore::promptgen

#endif  // HYPOSCORE_PROMPTGEN_HPP_
