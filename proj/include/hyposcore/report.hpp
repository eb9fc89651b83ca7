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

#ifndef HYPOSCORE_REPORT_HPP_
#define HYPOSCORE_REPORT_HPP_

#include <string>
#include <vector>

namespace hyposcore::report {

// Rates are kept exact (distance, ref_len) internally; this is the single
// formatting point, two decimals, matching the precision used everywhere.
std::string fmt2(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string tsv() const;
  std::string pretty() const;
};

}  // namespace hyposcore::report

#endif  // HYPOSCORE_REPORT_HPP_
