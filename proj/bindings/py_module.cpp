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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hyposcore/dataset.hpp"
#include "hyposcore/error.hpp"
#include "hyposcore/pinyin.hpp"
#include "hyposcore/promptgen.hpp"
#include "hyposcore/scoring.hpp"
#include "hyposcore/unicode.hpp"
#include "hyposcore/version.hpp"

namespace py = pybind11;
using namespace hyposcore;

namespace {

// Keeps the conversion table opaque so pybind11 does not copy it into a dict.
struct T2sTable {
  dataset::SimpTable table;
};

dataset::NormalizationPolicy make_policy(bool to_simplified,
                                         bool strip_whitespace,
                                         bool strip_punctuation,
                                         bool width_fold) {
  dataset::NormalizationPolicy policy;
  policy.to_simplified = to_simplified;
  policy.strip_whitespace = strip_whitespace;
  policy.strip_punctuation = strip_punctuation;
  policy.width_fold = width_fold;
  return policy;
}

const dataset::SimpTable* table_ptr(const T2sTable* t2s) {
  return t2s == nullptr ? nullptr : &t2s->table;
}

pinyin::TranslitMode mode_from(const std::string& mode) {
  if (mode == "contextual") return pinyin::TranslitMode::kContextual;
  if (mode == "per_char") return pinyin::TranslitMode::kPerChar;
  throw Error(ErrorCode::kUsageError,
              "mode must be 'contextual' or 'per_char', got '" + mode + "'");
}

}  // namespace

PYBIND11_MODULE(_hyposcore, m) {
  m.doc() = "Chinese ASR hypothesis scoring, Pinyin transliteration and "
            "prompt construction";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "HyposcoreError");

  // --- pinyin ---------------------------------------------------------------
  py::class_<pinyin::Syllable>(m, "Syllable")
      .def(py::init([](std::string initial, std::string final_part, int tone) {
             return pinyin::Syllable{std::move(initial), std::move(final_part),
                                     tone};
           }),
           py::arg("initial"), py::arg("final"), py::arg("tone"))
      .def_readonly("initial", &pinyin::Syllable::initial)
      .def_property_readonly(
          "final", [](const pinyin::Syllable& s) { return s.final_part; })
      .def_readonly("tone", &pinyin::Syllable::tone)
      .def("__eq__", [](const pinyin::Syllable& a,
                        const pinyin::Syllable& b) { return a == b; })
      .def("__str__", &pinyin::format_syllable)
      .def("__repr__", [](const pinyin::Syllable& s) {
        return "Syllable('" + pinyin::format_syllable(s) + "')";
      });

  py::class_<pinyin::PinyinToken>(m, "PinyinToken")
      .def_property_readonly("is_syllable", &pinyin::PinyinToken::is_syllable)
      .def_readonly("text", &pinyin::PinyinToken::text)
      .def_property_readonly(
          "syllable",
          [](const pinyin::PinyinToken& t) -> py::object {
            if (!t.is_syllable()) return py::none();
            return py::cast(t.syllable);
          })
      .def("rendered", &pinyin::PinyinToken::rendered)
      .def("__repr__", [](const pinyin::PinyinToken& t) {
        return "PinyinToken('" + t.rendered() + "')";
      });

  py::class_<pinyin::Lexicon>(m, "Lexicon")
      .def(py::init<>())
      .def("add_entry", &pinyin::Lexicon::add_entry, py::arg("key"),
           py::arg("readings"))
      .def("load_file", &pinyin::Lexicon::load_file, py::arg("path"))
      .def("validate", &pinyin::Lexicon::validate)
      .def_property_readonly("char_count", &pinyin::Lexicon::char_count)
      .def_property_readonly("phrase_count", &pinyin::Lexicon::phrase_count);

  m.def(
      "load_lexicon",
      [](const std::vector<std::filesystem::path>& paths) {
        return pinyin::load_lexicon(paths);
      },
      py::arg("paths"), "Load and validate lexicon TSV files.");

  m.def(
      "parse_syllable",
      [](const std::string& text, bool require_tone) {
        return pinyin::parse_syllable(text,
                                      require_tone
                                          ? pinyin::ToneDigit::kRequired
                                          : pinyin::ToneDigit::kLenient);
      },
      py::arg("text"), py::arg("require_tone") = false);
  m.def("format_syllable", &pinyin::format_syllable, py::arg("syllable"));

  m.def(
      "transliterate",
      [](const std::string& text, const pinyin::Lexicon& lex,
         const std::string& mode, bool strict) {
        pinyin::TranslitOptions options;
        options.mode = mode_from(mode);
        options.strict = strict;
        return pinyin::transliterate(text, lex, options);
      },
      py::arg("text"), py::arg("lexicon"), py::arg("mode") = "contextual",
      py::arg("strict") = false);

  py::class_<pinyin::TranslitResult>(m, "TranslitResult")
      .def_readonly("tokens", &pinyin::TranslitResult::tokens)
      .def_readonly("unknown_han", &pinyin::TranslitResult::unknown_han)
      .def("rendered", &pinyin::TranslitResult::rendered);

  // --- dataset ----------------------------------------------------------------
  py::class_<dataset::NormalizationPolicy>(m, "NormalizationPolicy")
      .def(py::init(&make_policy), py::arg("to_simplified") = false,
           py::arg("strip_whitespace") = true,
           py::arg("strip_punctuation") = true, py::arg("width_fold") = true)
      .def_readwrite("to_simplified",
                     &dataset::NormalizationPolicy::to_simplified)
      .def_readwrite("strip_whitespace",
                     &dataset::NormalizationPolicy::strip_whitespace)
      .def_readwrite("strip_punctuation",
                     &dataset::NormalizationPolicy::strip_punctuation)
      .def_readwrite("width_fold", &dataset::NormalizationPolicy::width_fold);

  py::class_<T2sTable>(m, "T2sTable")
      .def_property_readonly(
          "size", [](const T2sTable& t) { return t.table.size(); });
  m.def(
      "load_t2s",
      [](const std::filesystem::path& path) {
        return T2sTable{dataset::load_t2s(path)};
      },
      py::arg("path"));

  m.def(
      "normalize",
      [](const std::string& text, const dataset::NormalizationPolicy& policy,
         const T2sTable* t2s) {
        return dataset::normalize(text, policy, table_ptr(t2s));
      },
      py::arg("text"),
      py::arg("policy") = make_policy(false, true, true, true),
      py::arg("t2s") = nullptr);

  py::class_<dataset::HypothesisSet>(m, "HypothesisSet")
      .def(py::init([](std::string id, std::string corpus,
                       std::vector<std::string> hyps, std::string ref) {
             return dataset::HypothesisSet{std::move(id), std::move(corpus),
                                           std::move(hyps), std::move(ref)};
           }),
           py::arg("id"), py::arg("corpus"), py::arg("hyps"), py::arg("ref"))
      .def_readwrite("id", &dataset::HypothesisSet::id)
      .def_readwrite("corpus", &dataset::HypothesisSet::corpus)
      .def_readwrite("hyps", &dataset::HypothesisSet::hypotheses)
      .def_readwrite("ref", &dataset::HypothesisSet::transcription);

  m.def(
      "load_corpus",
      [](const std::filesystem::path& path,
         const dataset::NormalizationPolicy& policy, const T2sTable* t2s) {
        return dataset::load_corpus(path, policy, table_ptr(t2s)).records;
      },
      py::arg("path"),
      py::arg("policy") = make_policy(false, true, true, true),
      py::arg("t2s") = nullptr);
  m.def("write_corpus", &dataset::write_corpus, py::arg("records"),
        py::arg("path"));
  m.def("dedup", &dataset::dedup, py::arg("hyps"));
  m.def("sample_records", &dataset::sample, py::arg("records"), py::arg("n"),
        py::arg("seed"));
  m.def(
      "filter_by_length",
      [](const std::vector<dataset::HypothesisSet>& records,
         std::size_t max_chars) {
        auto result = dataset::filter_by_length(records, max_chars);
        return py::make_tuple(result.kept, result.dropped);
      },
      py::arg("records"), py::arg("max_chars"));

  py::class_<dataset::StatsRow>(m, "StatsRow")
      .def_readonly("corpus", &dataset::StatsRow::corpus)
      .def_readonly("pairs", &dataset::StatsRow::pairs)
      .def_readonly("mean_hypotheses", &dataset::StatsRow::mean_hypotheses)
      .def_readonly("cer", &dataset::StatsRow::cer)
      .def_readonly("pinyin_er", &dataset::StatsRow::pinyin_er)
      .def_readonly("oracle_nbest", &dataset::StatsRow::oracle_nbest)
      .def_readonly("oracle_compositional",
                    &dataset::StatsRow::oracle_compositional);
  m.def(
      "stats",
      [](const std::vector<dataset::HypothesisSet>& records,
         const pinyin::Lexicon& lex,
         const dataset::NormalizationPolicy& policy, const T2sTable* t2s) {
        return dataset::stats(records, lex, policy, table_ptr(t2s));
      },
      py::arg("records"), py::arg("lexicon"),
      py::arg("policy") = make_policy(false, true, true, true),
      py::arg("t2s") = nullptr);

  // --- scoring ----------------------------------------------------------------
  py::class_<scoring::EditStats>(m, "EditStats")
      .def_readonly("substitutions", &scoring::EditStats::substitutions)
      .def_readonly("insertions", &scoring::EditStats::insertions)
      .def_readonly("deletions", &scoring::EditStats::deletions)
      .def_readonly("ref_len", &scoring::EditStats::ref_len)
      .def_property_readonly("distance", &scoring::EditStats::distance)
      .def_property_readonly("rate", &scoring::EditStats::rate)
      .def_property_readonly("percent", &scoring::EditStats::percent)
      .def("__repr__", [](const scoring::EditStats& s) {
        return "EditStats(distance=" + std::to_string(s.distance()) +
               ", ref_len=" + std::to_string(s.ref_len) + ")";
      });

  m.def(
      "cer",
      [](const std::string& hyp, const std::string& ref,
         const dataset::NormalizationPolicy& policy, const T2sTable* t2s) {
        return scoring::cer(hyp, ref, policy, table_ptr(t2s));
      },
      py::arg("hyp"), py::arg("ref"),
      py::arg("policy") = make_policy(false, true, true, true),
      py::arg("t2s") = nullptr);
  m.def(
      "pinyin_er",
      [](const std::string& hyp, const std::string& ref,
         const pinyin::Lexicon& lex, const std::string& mode,
         bool tone_sensitive, const dataset::NormalizationPolicy& policy,
         const T2sTable* t2s) {
        return scoring::pinyin_er(hyp, ref, lex, mode_from(mode),
                                  tone_sensitive, policy, table_ptr(t2s));
      },
      py::arg("hyp"), py::arg("ref"), py::arg("lexicon"),
      py::arg("mode") = "per_char", py::arg("tone_sensitive") = true,
      py::arg("policy") = make_policy(false, true, true, true),
      py::arg("t2s") = nullptr);
  m.def("cerr", &scoring::cerr, py::arg("baseline_cer"), py::arg("method_cer"));
  m.def(
      "oracle_nbest",
      [](const dataset::HypothesisSet& h,
         const dataset::NormalizationPolicy& policy, const T2sTable* t2s) {
        auto [index, stats] = scoring::oracle_nbest(h, policy, table_ptr(t2s));
        return py::make_tuple(index, stats);
      },
      py::arg("record"),
      py::arg("policy") = make_policy(false, true, true, true),
      py::arg("t2s") = nullptr);
  m.def(
      "oracle_compositional",
      [](const dataset::HypothesisSet& h,
         const dataset::NormalizationPolicy& policy, const T2sTable* t2s) {
        return scoring::oracle_compositional(h, policy, table_ptr(t2s));
      },
      py::arg("record"),
      py::arg("policy") = make_policy(false, true, true, true),
      py::arg("t2s") = nullptr);

  // --- promptgen ----------------------------------------------------------------
  py::class_<promptgen::LineCount>(m, "LineCount")
      .def(py::init([](unsigned count, bool repeat_first) {
             return promptgen::LineCount{count, repeat_first};
           }),
           py::arg("count"), py::arg("repeat_first") = false)
      .def_readonly("count", &promptgen::LineCount::count)
      .def_readonly("repeat_first", &promptgen::LineCount::repeat_first);

  py::class_<promptgen::PromptSpec>(m, "PromptSpec")
      .def_readonly("text", &promptgen::PromptSpec::text)
      .def_readonly("pinyin_transcribed",
                    &promptgen::PromptSpec::pinyin_transcribed)
      .def_readonly("pinyin_ground_truth",
                    &promptgen::PromptSpec::pinyin_ground_truth)
      .def_readonly("passthrough", &promptgen::PromptSpec::passthrough)
      .def_property_readonly("analysis_only",
                             &promptgen::PromptSpec::analysis_only)
      .def_property_readonly("style", [](const promptgen::PromptSpec& s) {
        return s.style == promptgen::PromptStyle::kDirect ? "direct"
                                                          : "finetune";
      });

  m.def("table3_specs", &promptgen::table3_specs);
  m.def("table4_specs", &promptgen::table4_specs);
  m.def("spec_by_name", &promptgen::spec_by_name, py::arg("name"));

  m.def(
      "build_direct_prompt",
      [](const dataset::HypothesisSet& h, const promptgen::PromptSpec& spec,
         const pinyin::Lexicon& lex) {
        return promptgen::build_direct_prompt(h, spec, lex);
      },
      py::arg("record"), py::arg("spec"), py::arg("lexicon"));
  m.def(
      "build_finetune_pair",
      [](const dataset::HypothesisSet& h, const promptgen::PromptSpec& spec,
         const pinyin::Lexicon& lex,
         const dataset::NormalizationPolicy& policy, const T2sTable* t2s) {
        auto [prompt, response] = promptgen::build_finetune_pair(
            h, spec, lex, promptgen::Templates::builtin(), policy,
            table_ptr(t2s));
        return py::make_tuple(prompt, response);
      },
      py::arg("record"), py::arg("spec"), py::arg("lexicon"),
      py::arg("policy") = make_policy(false, true, true, true),
      py::arg("t2s") = nullptr);

  py::class_<promptgen::CorrectionRecord>(m, "CorrectionRecord")
      .def_readonly("id", &promptgen::CorrectionRecord::id)
      .def_readonly("raw_response", &promptgen::CorrectionRecord::raw_response)
      .def_property_readonly(
          "correction",
          [](const promptgen::CorrectionRecord& r) -> py::object {
            if (!r.correction) return py::none();
            return py::cast(*r.correction);
          })
      .def_readonly("fallback_used",
                    &promptgen::CorrectionRecord::fallback_used)
      .def_property_readonly(
          "failure_reason", [](const promptgen::CorrectionRecord& r) {
            return std::string(
                promptgen::failure_reason_name(r.failure_reason));
          });

  m.def(
      "parse_response",
      [](const std::string& raw, const dataset::HypothesisSet& h,
         std::size_t max_chars, const dataset::NormalizationPolicy& policy,
         const T2sTable* t2s) {
        return promptgen::parse_response(raw, h, max_chars, policy,
                                         table_ptr(t2s));
      },
      py::arg("raw"), py::arg("record"), py::arg("max_chars") = 100,
      py::arg("policy") = make_policy(false, true, true, true),
      py::arg("t2s") = nullptr);
}
