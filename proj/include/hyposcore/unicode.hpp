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

#ifndef HYPOSCORE_UNICODE_HPP_
#define HYPOSCORE_UNICODE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyposcore {

// Splits UTF-8 text into one string per code point. Malformed bytes are
// passed through one byte at a time so callers stay total on arbitrary input.
std::vector<std::string> split_utf8(std::string_view text);

// Code point of a single UTF-8 encoded character; 0xFFFD on malformed input.
char32_t decode_codepoint(std::string_view ch);

// UTF-8 encoding of one code point.
std::string encode_codepoint(char32_t cp);

// Number of code points in the text.
std::size_t utf8_length(std::string_view text);

// CJK unified ideograph (incl. extensions, compatibility block and 〇).
bool is_han(char32_t cp);

}  // namespace hyposcore

#endif  // HYPOSCORE_UNICODE_HPP_
