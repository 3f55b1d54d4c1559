// Copyright 2026 The finecite Authors
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

#include "finecite/error.hpp"

namespace finecite {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kStructure: return "structure";
    case ErrorCode::kAlignment: return "alignment";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kMissingPassage: return "missing_passage";
    case ErrorCode::kOracleUnavailable: return "oracle_unavailable";
    case ErrorCode::kFixtureMiss: return "fixture_miss";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace finecite
