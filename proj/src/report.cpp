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

#include "hyposcore/report.hpp"

#include <algorithm>
#include <cstdio>

#include "hyposcore/unicode.hpp"

namespace hyposcore::report {

std::string fmt2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  // values that round to zero print without a sign
  return std::string(buf) == "-0.00" ? "0.00" : buf;
}

std::string Table::tsv() const {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out.push_back('\t');
      out += row[i];
    }
    out.push_back('\n');
  };
  append_row(header);
  for (const auto& row : rows) append_row(row);
  return out;
}

std::string Table::pretty() const {
  // Display width: CJK code points take two columns.
  auto display_width = [](const std::string& s) {
    std::size_t w = 0;
    for (const auto& ch : split_utf8(s)) {
      w += decode_codepoint(ch) >= 0x1100 ? 2 : 1;
    }
    return w;
  };

  std::vector<std::size_t> widths(header.size(), 0);
  auto grow = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i) {
      widths[i] = std::max(widths[i], display_width(row[i]));
    }
  };
  grow(header);
  for (const auto& row : rows) grow(row);

  std::string out;
  auto append_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += "  ";
      out += row[i];
      if (i + 1 < row.size()) {
        for (std::size_t p = display_width(row[i]); p < widths[i]; ++p) {
          out.push_back(' ');
        }
      }
    }
    out.push_back('\n');
  };
  append_row(header);
  std::size_t total = 0;
  for (std::size_t w : widths) total += w + 2;
  out.append(total > 2 ? total - 2 : 0, '-');
  out.push_back('\n');
  for (const auto& row : rows) append_row(row);
  return out;
}

}  // namespace hyposcore::report
