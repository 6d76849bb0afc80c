// Copyright 2026 The noc3d Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace noc3d {

enum class ErrorCode {
  UnknownComponent,
  NegativeBandwidth,
  NoFeasibleLayer,
  MalformedTable,
  InvalidParams,
  InstanceTooLarge,
  SolverFailure,
  IncompleteSolution,
  TooManyArrays,
  NoCandidates,
  InsufficientCandidates,
  Unreachable,
  Io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::NegativeBandwidth: return "NegativeBandwidth";
    case ErrorCode::NoFeasibleLayer: return "NoFeasibleLayer";
    case ErrorCode::MalformedTable: return "MalformedTable";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::IncompleteSolution: return "IncompleteSolution";
    case ErrorCode::TooManyArrays: return "TooManyArrays";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::InsufficientCandidates: return "InsufficientCandidates";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

// Process exit code for the CLI: 2 bad input, 3 infeasible, 4 limits exceeded.
inline int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoFeasibleLayer:
    case ErrorCode::SolverFailure:
    case ErrorCode::IncompleteSolution:
    case ErrorCode::NoCandidates:
    case ErrorCode::InsufficientCandidates:
    case ErrorCode::Unreachable:
      return 3;
    case ErrorCode::InstanceTooLarge:
    case ErrorCode::TooManyArrays:
      return 4;
    default:
      return 2;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int step = 0)
      : std::runtime_error(format(code, message, step)),
        code_(code),
        step_(step),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  // Pipeline step (1..5) that raised the error, 0 when raised outside the pipeline.
  int step() const { return step_; }
  const std::string& detail() const { return detail_; }

  Error at_step(int step) const { return Error(code_, detail_, step); }

 private:
  static std::string format(ErrorCode code, const std::string& message, int step) {
    std::string out;
    if (step > 0) out += "step " + std::to_string(step) + ": ";
    out += std::string(to_string(code)) + ": " + message;
    return out;
  }

  ErrorCode code_;
  int step_;
  std::string detail_;
};

struct Violation {
  ErrorCode code;
  std::string message;
};

// Raised by validate_instance; carries every violation found, the code of the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(violations.empty() ? ErrorCode::MalformedTable : violations.front().code,
              summarize(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& violations) {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += std::string(to_string(v.code)) + ": " + v.message;
    }
    return out;
  }

  std::vector<Violation> violations_;
};

}  // namespace noc3d
