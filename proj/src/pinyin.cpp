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

#include "hyposcore/pinyin.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "hyposcore/error.hpp"
#include "hyposcore/unicode.hpp"

namespace hyposcore::pinyin {

namespace {

const std::unordered_set<std::string_view>& final_set() {
  static const std::unordered_set<std::string_view> finals(kFinals.begin(),
                                                           kFinals.end());
  return finals;
}

bool is_single_initial(char c) {
  switch (c) {
    case 'b': case 'c': case 'd': case 'f': case 'g': case 'h': case 'j':
    case 'k': case 'l': case 'm': case 'n': case 'p': case 'q': case 'r':
    case 's': case 't': case 'w': case 'x': case 'y': case 'z':
      return true;
    default:
      return false;
  }
}

std::string normalize_reading(std::string_view raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c == 'v') {
      s += "ü";  // ü
    } else {
      s.push_back(c);
    }
  }
  // Split off a trailing tone digit, if any, so the syllabic-nasal rule
  // sees the bare body.
  std::string tone;
  if (!s.empty() && s.back() >= '0' && s.back() <= '9') {
    tone = s.substr(s.size() - 1);
    s.pop_back();
  }
  if (s == "n" || s == "ng") s = "en";  // standalone nasal is written "en"
  return s + tone;
}

}  // namespace

Syllable parse_syllable(std::string_view text, ToneDigit tone_digit) {
  if (text.empty()) {
    throw Error(ErrorCode::kEmptyFinal, "empty syllable text");
  }
  int tone = 5;
  std::string_view body = text;
  char last = text.back();
  if (last >= '0' && last <= '9') {
    if (last < '1' || last > '5') {
      throw Error(ErrorCode::kBadToneDigit,
                  "tone digit out of range in '" + std::string(text) + "'");
    }
    tone = last - '0';
    body = text.substr(0, text.size() - 1);
  } else if (tone_digit == ToneDigit::kRequired) {
    throw Error(ErrorCode::kBadToneDigit,
                "missing tone digit in '" + std::string(text) + "'");
  }
  if (body.empty()) {
    throw Error(ErrorCode::kEmptyFinal,
                "no syllable body in '" + std::string(text) + "'");
  }

  // Longest-prefix match: two-letter initials before their one-letter
  // prefixes.
  std::string_view initial;
  if (body.size() >= 2 &&
      (body.substr(0, 2) == "zh" || body.substr(0, 2) == "ch" ||
       body.substr(0, 2) == "sh")) {
    initial = body.substr(0, 2);
  } else if (is_single_initial(body.front())) {
    initial = body.substr(0, 1);
  }

  std::string_view rest = body.substr(initial.size());
  if (rest.empty()) {
    throw Error(ErrorCode::kEmptyFinal,
                "'" + std::string(text) + "' is consumed by the initial");
  }
  if (!final_set().contains(rest)) {
    throw Error(ErrorCode::kRemainderNotAFinal,
                "'" + std::string(rest) + "' is not a final in '" +
                    std::string(text) + "'");
  }
  return Syllable{std::string(initial), std::string(rest), tone};
}

std::string format_syllable(const Syllable& s) {
  std::string out = s.initial;
  out += s.final_part;
  out.push_back(static_cast<char>('0' + s.tone));
  return out;
}

void Lexicon::add_normalized(const std::string& key,
                             const std::vector<std::string>& key_chars,
                             std::vector<Syllable> readings,
                             const std::string& where) {
  if (key_chars.size() == 1) {
    auto [it, inserted] = chars_.insert_or_assign(key, std::move(readings));
    if (!inserted) {
      ++stats_.duplicate_overrides;
      stats_.warnings.push_back("duplicate entry for '" + key + "' at " +
                                where + " overrides earlier reading");
    } else {
      ++stats_.char_entries;
    }
  } else {
    if (readings.size() != key_chars.size()) {
      throw Error(ErrorCode::kInvariantViolation,
                  "phrase '" + key + "' at " + where + " has " +
                      std::to_string(readings.size()) + " readings for " +
                      std::to_string(key_chars.size()) + " characters");
    }
    auto [it, inserted] = phrases_.insert_or_assign(key, std::move(readings));
    if (!inserted) {
      ++stats_.duplicate_overrides;
      stats_.warnings.push_back("duplicate entry for '" + key + "' at " +
                                where + " overrides earlier reading");
    } else {
      ++stats_.phrase_entries;
    }
    max_phrase_chars_ = std::max(max_phrase_chars_, key_chars.size());
  }
}

void Lexicon::add_entry(const std::string& key, const std::string& readings) {
  auto key_chars = split_utf8(key);
  if (key.empty() || key_chars.empty()) {
    throw Error(ErrorCode::kParseError, "empty lexicon key");
  }
  std::vector<Syllable> parsed;
  std::string item;
  std::stringstream ss(readings);
  while (std::getline(ss, item, ',')) {
    std::string normalized = normalize_reading(item);
    try {
      parsed.push_back(parse_syllable(normalized));
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvariantViolation,
                  "entry '" + key + "': bad reading '" + item +
                      "' (" + e.what() + ")");
    }
  }
  if (parsed.empty()) {
    throw Error(ErrorCode::kInvariantViolation,
                "entry '" + key + "' has no readings");
  }
  add_normalized(key, key_chars, std::move(parsed), "<memory>");
}

void Lexicon::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open lexicon " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::string where = path.filename().string() + ":" +
                              std::to_string(line_no);
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw Error(ErrorCode::kParseError,
                  where + ": expected <key>\\t<readings>");
    }
    std::string key = line.substr(0, tab);
    std::string readings = line.substr(tab + 1);
    auto key_chars = split_utf8(key);
    std::vector<Syllable> parsed;
    std::string item;
    std::stringstream ss(readings);
    while (std::getline(ss, item, ',')) {
      std::string normalized = normalize_reading(item);
      try {
        parsed.push_back(parse_syllable(normalized));
      } catch (const Error& e) {
        throw Error(ErrorCode::kInvariantViolation,
                    where + ": entry '" + key + "' has bad reading '" + item +
                        "' (" + e.what() + ")");
      }
    }
    if (parsed.empty()) {
      throw Error(ErrorCode::kParseError, where + ": no readings");
    }
    add_normalized(key, key_chars, std::move(parsed), where);
  }
}

void Lexicon::validate() const {
  for (const auto& [phrase, readings] : phrases_) {
    for (const auto& ch : split_utf8(phrase)) {
      if (!chars_.contains(ch)) {
        throw Error(ErrorCode::kInvariantViolation,
                    "phrase '" + phrase + "' uses character '" + ch +
                        "' that has no single-character reading");
      }
    }
  }
}

const std::vector<Syllable>* Lexicon::char_readings(
    const std::string& ch) const {
  auto it = chars_.find(ch);
  return it == chars_.end() ? nullptr : &it->second;
}

const std::vector<Syllable>* Lexicon::phrase_readings(
    const std::string& phrase) const {
  auto it = phrases_.find(phrase);
  return it == phrases_.end() ? nullptr : &it->second;
}

Lexicon load_lexicon(const std::vector<std::filesystem::path>& paths) {
  Lexicon lex;
  for (const auto& p : paths) lex.load_file(p);
  lex.validate();
  return lex;
}

std::string TranslitResult::rendered() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i].rendered();
  }
  return out;
}

TranslitResult transliterate(std::string_view text, const Lexicon& lex,
                             const TranslitOptions& options) {
  TranslitResult result;
  auto chars = split_utf8(text);
  result.tokens.reserve(chars.size());

  std::size_t i = 0;
  while (i < chars.size()) {
    if (options.mode == TranslitMode::kContextual &&
        lex.max_phrase_chars() >= 2 && is_han(decode_codepoint(chars[i]))) {
      std::size_t longest =
          std::min(lex.max_phrase_chars(), chars.size() - i);
      bool matched = false;
      for (std::size_t len = longest; len >= 2; --len) {
        std::string candidate;
        for (std::size_t k = 0; k < len; ++k) candidate += chars[i + k];
        if (const auto* readings = lex.phrase_readings(candidate)) {
          for (std::size_t k = 0; k < len; ++k) {
            result.tokens.push_back(
                PinyinToken::make_syllable((*readings)[k], chars[i + k]));
          }
          i += len;
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }

    const std::string& ch = chars[i];
    if (is_han(decode_codepoint(ch))) {
      if (const auto* readings = lex.char_readings(ch)) {
        result.tokens.push_back(
            PinyinToken::make_syllable(readings->front(), ch));
      } else if (options.strict) {
        throw Error(ErrorCode::kUnknownCharacter,
                    "no reading for '" + ch + "'");
      } else {
        result.tokens.push_back(PinyinToken::make_literal(ch));
        ++result.unknown_han;
      }
    } else {
      result.tokens.push_back(PinyinToken::make_literal(ch));
    }
    ++i;
  }
  return result;
}

}  // namespace hyposcore::pinyin
