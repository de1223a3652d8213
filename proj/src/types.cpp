// ser/types.cpp

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

#include "ser/types.hpp"

#include <algorithm>
#include <cctype>

namespace ser {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

EmotionLabel labelFromName(const std::string& name) {
  const std::string n = lower(name);
  if (n == "happy") return EmotionLabel::Happy;
  if (n == "sad") return EmotionLabel::Sad;
  if (n == "angry") return EmotionLabel::Angry;
  if (n == "fear") return EmotionLabel::Fear;
  throw Error(ErrorCode::BadArgument, "unknown emotion \"" + name + "\"");
}

Gender genderFromName(const std::string& name) {
  const std::string n = lower(name);
  if (n == "m") return Gender::M;
  if (n == "f") return Gender::F;
  throw Error(ErrorCode::BadArgument, "unknown gender \"" + name + "\"");
}

FeatureMode modeFromName(const std::string& name) {
  const std::string n = lower(name);
  if (n == "mfcc") return FeatureMode::MFCC;
  if (n == "lpcc") return FeatureMode::LPCC;
  throw Error(ErrorCode::BadArgument, "unknown feature mode \"" + name + "\"");
}

}  // namespace ser
