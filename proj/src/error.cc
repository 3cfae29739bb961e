// Copyright 2026 The qtwin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtwin/error.h"

namespace qtwin {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingColumn:
            return "MissingColumn";
        case ErrorCode::MalformedCell:
            return "MalformedCell";
        case ErrorCode::EmptyTable:
            return "EmptyTable";
        case ErrorCode::NoPath:
            return "NoPath";
        case ErrorCode::BadProbability:
            return "BadProbability";
        case ErrorCode::NotCPTP:
            return "NotCPTP";
        case ErrorCode::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::InconsistentInputs:
            return "InconsistentInputs";
        case ErrorCode::MissingCalibration:
            return "MissingCalibration";
        case ErrorCode::UnknownGate:
            return "UnknownGate";
        case ErrorCode::TooLarge:
            return "TooLarge";
        case ErrorCode::Unroutable:
            return "Unroutable";
        case ErrorCode::NoDecomposition:
            return "NoDecomposition";
        case ErrorCode::InvariantViolation:
            return "InvariantViolation";
        case ErrorCode::SchemaMismatch:
            return "SchemaMismatch";
        case ErrorCode::CountSumMismatch:
            return "CountSumMismatch";
        case ErrorCode::Io:
            return "Io";
        case ErrorCode::Usage:
            return "Usage";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

}  // namespace qtwin
