// ser/error.cpp

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

#include "ser/error.hpp"

namespace ser {

const char* errorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptHeader: return "CorruptHeader";
    case ErrorCode::EmptySignal: return "EmptySignal";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::FrameTooShort: return "FrameTooShort";
    case ErrorCode::BadNfft: return "BadNfft";
    case ErrorCode::LagOutOfRange: return "LagOutOfRange";
    case ErrorCode::EmptyFrame: return "EmptyFrame";
    case ErrorCode::EmptyTrack: return "EmptyTrack";
    case ErrorCode::BadPitchBand: return "BadPitchBand";
    case ErrorCode::BadBand: return "BadBand";
    case ErrorCode::DegenerateFrame: return "DegenerateFrame";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::NoAnalyzableFrames: return "NoAnalyzableFrames";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClassInput: return "SingleClassInput";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::IterationLimitExceeded: return "IterationLimitExceeded";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::MixedDimensions: return "MixedDimensions";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::MissingClassInGender: return "MissingClassInGender";
    case ErrorCode::MissingGender: return "MissingGender";
    case ErrorCode::WrongStrategy: return "WrongStrategy";
    case ErrorCode::UnknownGenderBank: return "UnknownGenderBank";
    case ErrorCode::Io: return "Io";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::TruncatedModel: return "TruncatedModel";
    case ErrorCode::UnparseableName: return "UnparseableName";
    case ErrorCode::UnknownEmotionToken: return "UnknownEmotionToken";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::RowErrors: return "RowErrors";
    case ErrorCode::DuplicatePath: return "DuplicatePath";
    case ErrorCode::EmptyStratum: return "EmptyStratum";
    case ErrorCode::MissingGenderForGd: return "MissingGenderForGd";
    case ErrorCode::MissingGroup: return "MissingGroup";
    case ErrorCode::BadArgument: return "BadArgument";
  }
  return "UnknownError";
}

}  // namespace ser
