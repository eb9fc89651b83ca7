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

#ifndef HYPOSCORE_PINYIN_HPP_
#define HYPOSCORE_PINYIN_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyposcore::pinyin {

// Initial inventory. y and w are treated as initials, following the system
// this toolkit implements.
inline constexpr std::array<std::string_view, 23> kInitials = {
    "b", "c", "ch", "d", "f", "g", "h", "j", "k", "l", "m", "n",
    "p", "q", "r",  "s", "sh", "t", "w", "x", "y", "z", "zh"};

// Final inventory, compound surface forms included. u after j/q/x/y is kept
// as written, never rewritten to ü.
inline constexpr std::array<std::string_view, 34> kFinals = {
    "a",  "ai",  "an",  "ang",  "ao", "e",  "ei", "en", "eng", "er", "i", "ia",
    "ian", "iang", "iao", "ie", "in", "ing", "iong", "iu", "o", "ong", "ou",
    "u",  "ua",  "uai", "uan", "uang", "ue", "ui", "un", "uo", "ü", "üe"};

// One Pinyin syllable: optional initial, a final, and a tone digit 1-5
// where 5 is the neutral tone.
struct Syllable {
  std::string initial;  // empty when the syllable has no initial
  std::string final_part;
  int tone = 5;

  bool operator==(const Syllable&) const = default;

  bool same_segments(const Syllable& other) const {
    return initial == other.initial && final_part == other.final_part;
  }
};

// Strict mode requires the trailing tone digit; lenient reads a missing
// digit as the neutral tone.
enum class ToneDigit { kLenient, kRequired };

// Parses a tone-numbered syllable string like "zhuo1". Longest-prefix match
// over the initial inventory (zh/ch/sh before z/c/s); the remainder before
// the tone digit must be a listed final.
Syllable parse_syllable(std::string_view text,
                        ToneDigit tone_digit = ToneDigit::kLenient);

// Inverse of parse_syllable; the neutral tone is always printed as "5".
std::string format_syllable(const Syllable& s);

// One token of transliterated text: a syllable for a Han character, or the
// original text for anything else.
struct PinyinToken {
  enum class Kind { kSyllable, kLiteral };

  Kind kind = Kind::kLiteral;
  Syllable syllable;  // valid when kind == kSyllable
  std::string text;   // source character (both kinds)

  static PinyinToken make_syllable(Syllable s, std::string source) {
    return PinyinToken{Kind::kSyllable, std::move(s), std::move(source)};
  }
  static PinyinToken make_literal(std::string source) {
    return PinyinToken{Kind::kLiteral, Syllable{}, std::move(source)};
  }

  bool is_syllable() const { return kind == Kind::kSyllable; }

  // Tone-numbered syllable string, or the literal text verbatim.
  std::string rendered() const {
    return is_syllable() ? format_syllable(syllable) : text;
  }

  bool equivalent(const PinyinToken& other, bool tone_sensitive) const {
    if (kind != other.kind) return false;
    if (!is_syllable()) return text == other.text;
    return tone_sensitive ? syllable == other.syllable
                          : syllable.same_segments(other.syllable);
  }
};

struct LexiconStats {
  std::size_t char_entries = 0;
  std::size_t phrase_entries = 0;
  std::size_t duplicate_overrides = 0;
  std::vector<std::string> warnings;
};

// Character and phrase readings. Immutable after load; all lookups are const
// and safe to share across threads.
class Lexicon {
 public:
  // TSV rows: <char-or-phrase>\t<comma-separated syllables>. '#' starts a
  // comment. Later duplicate rows override earlier ones (warning recorded).
  // Readings are normalized (v -> ü, standalone n -> en, missing tone -> 5)
  // and validated against the inventories.
  void load_file(const std::filesystem::path& path);

  // Single in-memory row, e.g. add_entry("你", "ni3") or
  // add_entry("首都", "shou3,du1"). Used by tests and the Python bindings.
  void add_entry(const std::string& key, const std::string& readings);

  // Checks that every character of every phrase has a char reading.
  void validate() const;

  const std::vector<Syllable>* char_readings(const std::string& ch) const;
  const std::vector<Syllable>* phrase_readings(const std::string& phrase) const;

  std::size_t char_count() const { return chars_.size(); }
  std::size_t phrase_count() const { return phrases_.size(); }
  std::size_t max_phrase_chars() const { return max_phrase_chars_; }
  const LexiconStats& stats() const { return stats_; }

 private:
  void add_normalized(const std::string& key,
                      const std::vector<std::string>& key_chars,
                      std::vector<Syllable> readings, const std::string& where);

  std::unordered_map<std::string, std::vector<Syllable>> chars_;
  std::unordered_map<std::string, std::vector<Syllable>> phrases_;
  std::size_t max_phrase_chars_ = 1;
  LexiconStats stats_;
};

// Convenience loader; later files override earlier ones.
Lexicon load_lexicon(const std::vector<std::filesystem::path>& paths);

enum class TranslitMode { kContextual, kPerChar };

struct TranslitOptions {
  TranslitMode mode = TranslitMode::kContextual;
  // With strict set, Han characters missing from the lexicon raise
  // UnknownCharacter instead of passing through as literals.
  bool strict = false;
};

struct TranslitResult {
  std::vector<PinyinToken> tokens;
  std::size_t unknown_han = 0;

  // Tone-numbered syllables and literals, space-separated.
  std::string rendered() const;
};

// One token per input character. Contextual mode resolves heteronyms by
// greedy longest phrase match, per-char mode always takes the default
// (first) reading.
TranslitResult transliterate(std::string_view text, const Lexicon& lex,
                             const TranslitOptions& options = {});

}  // namespace hyposcore::pinyin

#endif  // HYPOSCORE_PINYIN_HPP_
