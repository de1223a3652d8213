// ser/classifier.hpp

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

#ifndef SER_CLASSIFIER_HPP_
#define SER_CLASSIFIER_HPP_

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ser/error.hpp"
#include "ser/features.hpp"
#include "ser/svm.hpp"
#include "ser/types.hpp"

namespace ser {
namespace classifier {

// Per-dimension standardization. Dimensions whose population std falls below
// 1e-12 keep std 1, so constant features transform to 0.
struct Scaler {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;
};

enum class Strategy { OAA, GenderDependent };

inline const char* strategyName(Strategy s) {
  return s == Strategy::OAA ? "OAA" : "GD";
}

// A scaler plus one binary model per emotion, in canonical label order.
struct ModelBank {
  Scaler scaler;
  std::array<svm::BinarySvmModel, kNumEmotions> models;
};

// OAA keeps a single pooled bank; the gender-dependent strategy keeps one
// bank per gender and routes at prediction time. Gender always arrives as
// metadata with the sample; it is never inferred from the audio.
struct EmotionModel {
  Strategy strategy = Strategy::OAA;
  FeatureMode mode = FeatureMode::MFCC;
  std::string fingerprint;
  ModelBank pooled;
  std::map<Gender, ModelBank> by_gender;

  Eigen::Index dim() const {
    if (strategy == Strategy::OAA) return pooled.models[0].dim();
    return by_gender.empty() ? 0 : by_gender.begin()->second.models[0].dim();
  }
};

struct TrainingSample {
  features::FeatureVector features;
  EmotionLabel label = EmotionLabel::Happy;
  Gender gender = Gender::M;
};

// scores[i] is the decision value of the binary model for emotion i in
// canonical order; label is the argmax, earliest label on exact ties.
struct Prediction {
  EmotionLabel label = EmotionLabel::Happy;
  std::array<double, kNumEmotions> scores{};
};

// Stable hex digest of the extraction and solver settings a model was built
// with, stored in the model file so a loaded model can be matched against
// the configuration of later runs.
std::string configFingerprint(const features::FeatureConfig& cfg,
                              const svm::SvmParams& params);

// Per-dimension mean and population std. Throws EmptyTrainingSet or
// MixedDimensions.
Scaler fitScaler(const std::vector<features::FeatureVector>& vectors);

// (v - mean) / std elementwise; mode preserved. Throws DimensionMismatch.
features::FeatureVector transform(const Scaler& scaler,
                                  const features::FeatureVector& v);

// One scaler over the pooled training set, then one binary model per label
// (+1 = that label, -1 = the rest). Gender fields are ignored. Throws
// EmptyTrainingSet, MixedDimensions, MissingClass; solver errors are
// rethrown tagged with the label being trained.
EmotionModel trainOaa(const std::vector<TrainingSample>& train,
                      const svm::SvmParams& params,
                      const features::FeatureConfig& cfg = {});

Prediction predictOaa(const EmotionModel& model,
                      const features::FeatureVector& v);

// Partitions by gender (preserving sample order) and trains an independent
// scaler and bank per gender, so each bank equals an OAA model trained on
// just that gender's samples. Throws MissingGender or MissingClassInGender.
EmotionModel trainGenderDependent(const std::vector<TrainingSample>& train,
                                  const svm::SvmParams& params,
                                  const features::FeatureConfig& cfg = {});

Prediction predictGenderDependent(const EmotionModel& model,
                                  const features::FeatureVector& v, Gender g);

// Line-oriented text format, magic "SERSVM v1", reals with 17 significant
// digits (an exact double round trip), trailing 64-bit FNV-1a checksum line.
// load throws Io, BadMagic, VersionUnsupported, ChecksumMismatch, or
// TruncatedModel and never returns a partial model.
void saveModel(const EmotionModel& model, const std::string& path);
EmotionModel loadModel(const std::string& path);

}  // namespace classifier
}  // namespace ser

#endif  // SER_CLASSIFIER_HPP_
