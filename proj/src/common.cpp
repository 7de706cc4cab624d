// Copyright 2026 The wfl Authors.
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

#include "wfl/common.hpp"

namespace wfl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kInvalidWeights: return "InvalidWeights";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kGmaxAuditFailed: return "GmaxAuditFailed";
    case ErrorCode::kInvalidProfile: return "InvalidProfile";
    case ErrorCode::kDegenerateDesign: return "DegenerateDesign";
    case ErrorCode::kCorruptPayload: return "CorruptPayload";
    case ErrorCode::kDegenerateRate: return "DegenerateRate";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kBadInit: return "BadInit";
    case ErrorCode::kRoundingInfeasible: return "RoundingInfeasible";
    case ErrorCode::kNotIdx: return "NotIdx";
    case ErrorCode::kCorruptIdx: return "CorruptIdx";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kPartitionArityMismatch: return "PartitionArityMismatch";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace wfl
