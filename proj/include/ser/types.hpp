// ser/types.hpp

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

#ifndef SER_TYPES_HPP_
#define SER_TYPES_HPP_

#include <array>
#include <cstddef>
#include <string>

#include "ser/error.hpp"

namespace ser {

// Canonical label order. Every bank, confusion matrix and report row follows
// it, and it is the tie-break order for equal classifier scores.
enum class EmotionLabel { Happy = 0, Sad = 1, Angry = 2, Fear = 3 };

inline constexpr std::array<EmotionLabel, 4> kAllEmotions = {
    EmotionLabel::Happy, EmotionLabel::Sad, EmotionLabel::Angry,
    EmotionLabel::Fear};

inline constexpr std::size_t kNumEmotions = kAllEmotions.size();

enum class Gender { M = 0, F = 1 };

inline constexpr std::array<Gender, 2> kAllGenders = {Gender::M, Gender::F};

enum class FeatureMode { MFCC = 0, LPCC = 1 };

inline const char* labelName(EmotionLabel label) {
  switch (label) {
    case EmotionLabel::Happy: return "Happy";
    case EmotionLabel::Sad: return "Sad";
    case EmotionLabel::Angry: return "Angry";
    case EmotionLabel::Fear: return "Fear";
  }
  return "?";
}

inline const char* genderName(Gender g) {
  return g == Gender::M ? "M" : "F";
}

inline const char* modeName(FeatureMode mode) {
  return mode == FeatureMode::MFCC ? "MFCC" : "LPCC";
}

// Case-insensitive; accept the canonical names only and throw BadArgument
// otherwise. Token vocabularies for corpus filenames live in the dataset
// module.
EmotionLabel labelFromName(const std::string& name);
Gender genderFromName(const std::string& name);
FeatureMode modeFromName(const std::string& name);

}  // namespace ser

#endif  // SER_TYPES_HPP_
