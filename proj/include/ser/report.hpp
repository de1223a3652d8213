// ser/report.hpp

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

#ifndef SER_REPORT_HPP_
#define SER_REPORT_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ser/classifier.hpp"
#include "ser/error.hpp"
#include "ser/features.hpp"
#include "ser/types.hpp"

namespace ser {
namespace report {

// Gender may be absent; it is only consulted for gender-dependent models.
struct TestSample {
  features::FeatureVector features;
  EmotionLabel label = EmotionLabel::Happy;
  std::optional<Gender> gender;
};

// confusion(i, j) counts samples of true label i predicted as j, labels in
// canonical order. A row with no test samples has an undefined recall, and
// overall_macro averages the defined recalls only.
struct EvaluationReport {
  Eigen::Matrix<int, kNumEmotions, kNumEmotions> confusion =
      Eigen::Matrix<int, kNumEmotions, kNumEmotions>::Zero();
  std::array<std::optional<double>, kNumEmotions> per_emotion_accuracy{};
  double overall_macro = 0.0;
  double overall_micro = 0.0;
  int n_test = 0;
  classifier::Strategy strategy = classifier::Strategy::OAA;
  FeatureMode mode = FeatureMode::MFCC;
  std::string dataset_tag;
};

// Comparison axis the table columns group by: classification strategy,
// dataset tag crossed with strategy, or feature mode.
enum class TableLayout { ByStrategy, ByDataset, ByMode };

// Plain-text table and a CSV (`layout,group,emotion,accuracy_pct`) carrying
// identical numeric strings.
struct RenderedTables {
  std::string text;
  std::string csv;
};

// Predicts every test sample with the model and tallies the confusion
// matrix, per-emotion recall, and macro plus micro overall accuracy. Throws
// BadArgument on an empty test set and MissingGenderForGd when a
// gender-dependent model meets a sample without gender metadata.
EvaluationReport evaluateModel(const classifier::EmotionModel& model,
                               const std::vector<TestSample>& test,
                               const std::string& dataset_tag = "");

// Renders emotions as rows (plus an Overall row of macro accuracy) against
// one column per group of the chosen layout, percentages to two decimals.
// Throws MissingGroup when a required group has no report.
RenderedTables renderTables(const std::vector<EvaluationReport>& reports,
                            TableLayout layout);

}  // namespace report
}  // namespace ser

#endif  // SER_REPORT_HPP_
