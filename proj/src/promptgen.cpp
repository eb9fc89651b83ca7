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

#include "hyposcore/promptgen.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyposcore/error.hpp"
#include "hyposcore/unicode.hpp"

namespace hyposcore::promptgen {

namespace {

// Byte-identical to data/templates/direct_en_v1.txt (checked by tests).
constexpr std::string_view kDirectTemplate =
    R"(You are an assistant that corrects Chinese automatic speech recognition output.
Below are candidate transcriptions of one Chinese utterance, ordered from most
to least confident. Some characters may be wrong, but their pronunciation is
usually close to the true one. Recover the correct transcription.

{HYPS}
{PINYIN}
{GT_PINYIN}

Reply using a JSON format with exactly this shape: {"correction": "<Chinese text>"}. Do not add any other text.
)";

// Byte-identical to data/templates/finetune_zh_v1.txt (checked by tests).
constexpr std::string_view kFinetuneTemplate =
    "你是一个中文语音识别纠错"
    "助手。下面是同一句话的若"
    "干候选识别结果，按置信度"
    "从高到低排列，其中可能存"
    "在错别字。请结合候选文本"
    "和拼音，输出纠正后的句子"
    "。\n"
    "\n"
    "{HYPS}\n"
    "{PINYIN}\n"
    "\n"
    "纠正后的句子是：\n";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open template " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Replaces a placeholder line with the given lines, or removes it when
// there is nothing to fill in.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::vector<std::string>>&
                                slots) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= tmpl.size()) {
    std::size_t nl = tmpl.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? tmpl.substr(pos)
                                : tmpl.substr(pos, nl - pos);
    auto slot = slots.find(std::string(line));
    if (slot != slots.end()) {
      for (const auto& filled : slot->second) {
        out += filled;
        out.push_back('\n');
      }
    } else if (nl != std::string_view::npos) {
      out += line;
      out.push_back('\n');
    } else if (!line.empty()) {
      out += line;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::string pinyin_line(const std::string& text, const pinyin::Lexicon& lex) {
  pinyin::TranslitOptions options;
  options.mode = pinyin::TranslitMode::kContextual;
  return transliterate(text, lex, options).rendered();
}

// Selects the hypothesis for the i-th line of a slot.
const std::string& selected_hypothesis(const dataset::HypothesisSet& h,
                                       const LineCount& lc, unsigned i) {
  return lc.repeat_first ? h.hypotheses.front() : h.hypotheses[i];
}

void require_hypotheses(const dataset::HypothesisSet& h,
                        const PromptSpec& spec) {
  std::size_t needed = 1;
  for (const LineCount* lc : {&spec.text, &spec.pinyin_transcribed}) {
    if (lc->count == 0) continue;
    needed = std::max<std::size_t>(needed, lc->repeat_first ? 1 : lc->count);
  }
  if (h.hypotheses.size() < needed) {
    throw Error(ErrorCode::kNotEnoughHypotheses,
                "utterance " + h.id + " has " +
                    std::to_string(h.hypotheses.size()) + " hypotheses, " +
                    std::to_string(needed) + " required");
  }
}

}  // namespace

void PromptSpec::check() const {
  for (const LineCount* lc : {&text, &pinyin_transcribed, &pinyin_ground_truth}) {
    if (lc->repeat_first && lc->count < 2) {
      throw Error(ErrorCode::kInvariantViolation,
                  "repeat_first requires a count of at least 2");
    }
  }
  if (!passthrough && text.count < 1) {
    throw Error(ErrorCode::kInvariantViolation,
                "a prompt needs at least one text line");
  }
  if (style == PromptStyle::kFinetune && pinyin_ground_truth.count > 0) {
    throw Error(ErrorCode::kInvariantViolation,
                "fine-tuning prompts never carry ground-truth Pinyin");
  }
}

Templates Templates::builtin() {
  return Templates{std::string(kDirectTemplate), std::string(kFinetuneTemplate)};
}

Templates Templates::load(
    const std::optional<std::filesystem::path>& direct_file,
    const std::optional<std::filesystem::path>& finetune_file) {
  Templates t = builtin();
  if (direct_file) t.direct_en = read_file(*direct_file);
  if (finetune_file) t.finetune_zh = read_file(*finetune_file);
  return t;
}

std::string build_direct_prompt(const dataset::HypothesisSet& h,
                                const PromptSpec& spec,
                                const pinyin::Lexicon& lex,
                                const Templates& templates) {
  spec.check();
  if (spec.passthrough) {
    throw Error(ErrorCode::kUsageError,
                "the baseline spec makes no model call and has no prompt");
  }
  if (spec.style != PromptStyle::kDirect) {
    throw Error(ErrorCode::kUsageError,
                "build_direct_prompt needs a direct-style spec");
  }
  require_hypotheses(h, spec);
  if (spec.pinyin_ground_truth.count > 0 && h.transcription.empty()) {
    throw Error(ErrorCode::kMissingReference,
                "utterance " + h.id +
                    " has no transcription for ground-truth Pinyin");
  }

  std::vector<std::string> hyp_lines;
  for (unsigned i = 0; i < spec.text.count; ++i) {
    hyp_lines.push_back(std::string(kHypothesisPrefix) +
                        selected_hypothesis(h, spec.text, i));
  }
  std::vector<std::string> pinyin_lines;
  for (unsigned i = 0; i < spec.pinyin_transcribed.count; ++i) {
    pinyin_lines.push_back(
        std::string(kPinyinPrefix) +
        pinyin_line(selected_hypothesis(h, spec.pinyin_transcribed, i), lex));
  }
  std::vector<std::string> gt_lines;
  if (spec.pinyin_ground_truth.count > 0) {
    std::string rendered = pinyin_line(h.transcription, lex);
    for (unsigned i = 0; i < spec.pinyin_ground_truth.count; ++i) {
      gt_lines.push_back(std::string(kGroundTruthPinyinPrefix) + rendered);
    }
  }

  return render_template(templates.direct_en,
                         {{"{HYPS}", hyp_lines},
                          {"{PINYIN}", pinyin_lines},
                          {"{GT_PINYIN}", gt_lines}});
}

std::pair<std::string, std::string> build_finetune_pair(
    const dataset::HypothesisSet& h, const PromptSpec& spec,
    const pinyin::Lexicon& lex, const Templates& templates,
    const dataset::NormalizationPolicy& policy,
    const dataset::SimpTable* simp_table) {
  spec.check();
  if (spec.style != PromptStyle::kFinetune) {
    throw Error(ErrorCode::kUsageError,
                "build_finetune_pair needs a finetune-style spec");
  }
  require_hypotheses(h, spec);
  if (h.transcription.empty()) {
    throw Error(ErrorCode::kMissingReference,
                "utterance " + h.id + " has no transcription");
  }

  std::vector<std::string> hyp_lines;
  for (unsigned i = 0; i < spec.text.count; ++i) {
    hyp_lines.push_back(std::string(kFinetuneHypothesisPrefix) +
                        selected_hypothesis(h, spec.text, i));
  }
  std::vector<std::string> pinyin_lines;
  for (unsigned i = 0; i < spec.pinyin_transcribed.count; ++i) {
    pinyin_lines.push_back(
        std::string(kFinetunePinyinPrefix) +
        pinyin_line(selected_hypothesis(h, spec.pinyin_transcribed, i), lex));
  }

  std::string prompt = render_template(
      templates.finetune_zh, {{"{HYPS}", hyp_lines}, {"{PINYIN}", pinyin_lines}});
  std::string response =
      dataset::normalize(h.transcription, policy, simp_table);
  return {std::move(prompt), std::move(response)};
}

std::map<std::string, PromptSpec> table3_specs() {
  auto direct = [](LineCount text, LineCount transcribed, LineCount gt) {
    return PromptSpec{text, transcribed, gt, PromptStyle::kDirect, false};
  };
  std::map<std::string, PromptSpec> specs;
  specs["Baseline"] =
      PromptSpec{{1, false}, {0, false}, {0, false}, PromptStyle::kDirect, true};
  specs["Prompt1"] = direct({5, false}, {0, false}, {0, false});
  specs["Prompt2"] = direct({5, false}, {5, false}, {0, false});
  specs["Prompt3"] = direct({5, false}, {0, false}, {1, false});
  specs["Prompt4"] = direct({5, false}, {0, false}, {5, true});
  specs["Prompt5"] = direct({1, false}, {0, false}, {0, false});
  specs["Prompt6"] = direct({1, false}, {1, false}, {0, false});
  specs["Prompt7"] = direct({1, false}, {0, false}, {1, false});
  specs["Prompt8"] = direct({2, true}, {0, false}, {0, false});
  specs["Prompt9"] = direct({1, false}, {2, true}, {0, false});
  return specs;
}

std::map<std::string, PromptSpec> table4_specs() {
  auto finetune = [](LineCount text, LineCount transcribed) {
    return PromptSpec{text, transcribed, {0, false}, PromptStyle::kFinetune,
                      false};
  };
  std::map<std::string, PromptSpec> specs;
  specs["Finetune1"] = finetune({5, false}, {0, false});
  specs["Finetune2"] = finetune({5, false}, {5, false});
  specs["Finetune3"] = finetune({1, false}, {0, false});
  specs["Finetune4"] = finetune({1, false}, {1, false});
  return specs;
}

std::optional<PromptSpec> spec_by_name(const std::string& name) {
  auto t3 = table3_specs();
  if (auto it = t3.find(name); it != t3.end()) return it->second;
  auto t4 = table4_specs();
  if (auto it = t4.find(name); it != t4.end()) return it->second;
  return std::nullopt;
}

const char* failure_reason_name(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone: return "none";
    case FailureReason::kParse: return "parse";
    case FailureReason::kOverlength: return "overlength";
    case FailureReason::kTransport: return "transport";
  }
  return "none";
}

namespace {

// Extracts the balanced JSON object starting at raw[start] ('{'), honoring
// strings and escapes; npos when unbalanced.
std::size_t balanced_object_end(std::string_view raw, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < raw.size(); ++i) {
    char c = raw[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

CorrectionRecord fallback(const dataset::HypothesisSet& h,
                          std::string_view raw, FailureReason reason) {
  CorrectionRecord rec;
  rec.id = h.id;
  rec.raw_response = std::string(raw);
  rec.fallback_used = true;
  rec.failure_reason = reason;
  if (!h.hypotheses.empty()) rec.correction = h.hypotheses.front();
  return rec;
}

}  // namespace

CorrectionRecord parse_response(std::string_view raw,
                                const dataset::HypothesisSet& h,
                                std::size_t max_chars,
                                const dataset::NormalizationPolicy& policy,
                                const dataset::SimpTable* simp_table) {
  // Stay total: never require a conversion table here.
  dataset::NormalizationPolicy safe = policy;
  if (safe.to_simplified && simp_table == nullptr) safe.to_simplified = false;

  std::size_t search = 0;
  while ((search = raw.find('{', search)) != std::string_view::npos) {
    std::size_t end = balanced_object_end(raw, search);
    if (end == std::string_view::npos) break;
    auto candidate = raw.substr(search, end - search + 1);
    nlohmann::json j = nlohmann::json::parse(candidate, nullptr, false);
    if (j.is_object() && j.contains("correction") &&
        j["correction"].is_string()) {
      std::string correction =
          dataset::normalize(j["correction"].get<std::string>(), safe,
                             simp_table);
      if (utf8_length(correction) >= max_chars) {
        return fallback(h, raw, FailureReason::kOverlength);
      }
      CorrectionRecord rec;
      rec.id = h.id;
      rec.raw_response = std::string(raw);
      rec.correction = std::move(correction);
      return rec;
    }
    search += 1;
  }
  return fallback(h, raw, FailureReason::kParse);
}

CorrectionRecord transport_failure_record(const dataset::HypothesisSet& h,
                                          const std::string& error) {
  return fallback(h, error, FailureReason::kTransport);
}

}  // namespace hyposcore::promptgen
