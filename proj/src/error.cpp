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

#include "hyposcore/error.hpp"

namespace hyposcore {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kRemainderNotAFinal: return "RemainderNotAFinal";
    case ErrorCode::kEmptyFinal: return "EmptyFinal";
    case ErrorCode::kBadToneDigit: return "BadToneDigit";
    case ErrorCode::kUnknownCharacter: return "UnknownCharacter";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kSampleTooLarge: return "SampleTooLarge";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kZeroBaseline: return "ZeroBaseline";
    case ErrorCode::kEmptyHypothesisList: return "EmptyHypothesisList";
    case ErrorCode::kNotEnoughHypotheses: return "NotEnoughHypotheses";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kTransportExhausted: return "TransportExhausted";
    case ErrorCode::kAuthMissing: return "AuthMissing";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUsageError: return "UsageError";
  }
  return "Error";
}

}  // namespace hyposcore
