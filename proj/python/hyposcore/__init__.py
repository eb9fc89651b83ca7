# Copyright 2026 The Hyposcore Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Chinese ASR hypothesis scoring, Pinyin transliteration and prompt
construction. Thin wrapper over the native module."""

import os
from pathlib import Path

from ._hyposcore import (  # noqa: F401
    CorrectionRecord,
    EditStats,
    HyposcoreError,
    HypothesisSet,
    Lexicon,
    LineCount,
    NormalizationPolicy,
    PinyinToken,
    PromptSpec,
    StatsRow,
    Syllable,
    T2sTable,
    TranslitResult,
    __version__,
    build_direct_prompt,
    build_finetune_pair,
    cer,
    cerr,
    dedup,
    filter_by_length,
    format_syllable,
    load_corpus,
    load_lexicon,
    load_t2s,
    normalize,
    oracle_compositional,
    oracle_nbest,
    parse_syllable,
    parse_response,
    pinyin_er,
    sample_records,
    spec_by_name,
    stats,
    table3_specs,
    table4_specs,
    transliterate,
    write_corpus,
)


def data_dir():
    """Path of the bundled data files, or None when not available.

    Wheels carry the data inside the package; source checkouts can point
    HYPOSCORE_ROOT at the repository instead.
    """
    packaged = Path(__file__).parent / "data"
    if packaged.is_dir():
        return packaged
    root = os.environ.get("HYPOSCORE_ROOT")
    if root and (Path(root) / "data").is_dir():
        return Path(root) / "data"
    return None


def bundled_lexicon():
    """The shipped character + phrase lexicon, loaded and validated."""
    base = data_dir()
    if base is None:
        raise FileNotFoundError(
            "bundled data not found; set HYPOSCORE_ROOT to the repo root"
        )
    return load_lexicon(
        [
            str(base / "lexicon" / "pinyin_chars.tsv"),
            str(base / "lexicon" / "pinyin_phrases.tsv"),
        ]
    )
