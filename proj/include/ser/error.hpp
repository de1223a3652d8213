// ser/error.hpp

// Copyright 2026  SER Toolkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SER_ERROR_HPP_
#define SER_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ser {

// Every failure mode the toolkit reports. The CLI prints the enum name so
// callers can match on it; library users switch on code().
enum class ErrorCode {
  // audio
  FileNotFound,
  UnsupportedFormat,
  CorruptHeader,
  EmptySignal,
  // dsp
  SignalTooShort,
  FrameTooShort,
  BadNfft,
  LagOutOfRange,
  // features
  EmptyFrame,
  EmptyTrack,
  BadPitchBand,
  BadBand,
  DegenerateFrame,
  NumericalBreakdown,
  NoAnalyzableFrames,
  // svm
  DimensionMismatch,
  SingleClassInput,
  NonFiniteFeature,
  IterationLimitExceeded,
  // classifier
  EmptyTrainingSet,
  MixedDimensions,
  MissingClass,
  MissingClassInGender,
  MissingGender,
  WrongStrategy,
  UnknownGenderBank,
  // persistence
  Io,
  BadMagic,
  VersionUnsupported,
  ChecksumMismatch,
  TruncatedModel,
  // dataset
  UnparseableName,
  UnknownEmotionToken,
  BadHeader,
  RowErrors,
  DuplicatePath,
  EmptyStratum,
  // report
  MissingGenderForGd,
  MissingGroup,
  // generic precondition violations (bad flag values and the like)
  BadArgument,
};

const char* errorName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorName(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  const char* name() const { return errorName(code_); }
  // Message without the "Name: " prefix, for rethrowing with added context.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

// Thrown by the SMO solver when the iteration budget runs out; carries the
// state of the best solution reached so a caller can decide what to do.
class IterationLimitError : public Error {
 public:
  IterationLimitError(std::int64_t iterations, double max_kkt_violation,
                      double dual_objective, const std::string& context = "")
      : Error(ErrorCode::IterationLimitExceeded,
              (context.empty() ? "" : context + ": ") + "stopped after " +
                  std::to_string(iterations) +
                  " pair updates; max KKT violation " +
                  std::to_string(max_kkt_violation) + ", dual objective " +
                  std::to_string(dual_objective)),
        iterations(iterations),
        max_kkt_violation(max_kkt_violation),
        dual_objective(dual_objective) {}

  std::int64_t iterations;
  double max_kkt_violation;
  double dual_objective;
};

// Manifest loading aggregates every bad row instead of stopping at the first.
struct RowIssue {
  int line;  // 1-based line number in the manifest file
  std::string reason;
};

class ManifestError : public Error {
 public:
  explicit ManifestError(std::vector<RowIssue> issues)
      : Error(ErrorCode::RowErrors, describe(issues)), issues(std::move(issues)) {}

  std::vector<RowIssue> issues;

 private:
  static std::string describe(const std::vector<RowIssue>& issues) {
    std::string s = std::to_string(issues.size()) + " bad row(s)";
    for (const auto& issue : issues) {
      s += "; line " + std::to_string(issue.line) + ": " + issue.reason;
    }
    return s;
  }
};

}  // namespace ser

#endif  // SER_ERROR_HPP_
