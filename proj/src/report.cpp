// ser/report.cpp

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

#include "ser/report.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>

namespace ser {
namespace report {

namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

const char* layoutName(TableLayout layout) {
  switch (layout) {
    case TableLayout::ByStrategy: return "ByStrategy";
    case TableLayout::ByDataset: return "ByDataset";
    case TableLayout::ByMode: return "ByMode";
  }
  return "ByStrategy";
}

struct Column {
  std::string group;
  const EvaluationReport* report;
};

const EvaluationReport* findReport(
    const std::vector<EvaluationReport>& reports,
    const std::function<bool(const EvaluationReport&)>& pred) {
  for (const auto& r : reports) {
    if (pred(r)) return &r;
  }
  return nullptr;
}

std::vector<Column> buildColumns(const std::vector<EvaluationReport>& reports,
                                 TableLayout layout) {
  std::vector<Column> columns;
  const auto require = [&](const std::string& group,
                           const EvaluationReport* r) {
    if (r == nullptr) {
      throw Error(ErrorCode::MissingGroup, "no report for group " + group);
    }
    columns.push_back({group, r});
  };

  switch (layout) {
    case TableLayout::ByStrategy:
      for (const auto strategy :
           {classifier::Strategy::OAA, classifier::Strategy::GenderDependent}) {
        const std::string group = classifier::strategyName(strategy);
        require(group, findReport(reports, [&](const EvaluationReport& r) {
                  return r.strategy == strategy;
                }));
      }
      break;
    case TableLayout::ByDataset: {
      std::vector<std::string> tags;
      for (const auto& r : reports) {
        if (std::find(tags.begin(), tags.end(), r.dataset_tag) == tags.end()) {
          tags.push_back(r.dataset_tag);
        }
      }
      if (tags.empty()) {
        throw Error(ErrorCode::MissingGroup, "no reports to lay out");
      }
      for (const auto& tag : tags) {
        for (const auto strategy : {classifier::Strategy::OAA,
                                    classifier::Strategy::GenderDependent}) {
          const std::string group =
              tag + "/" + classifier::strategyName(strategy);
          require(group, findReport(reports, [&](const EvaluationReport& r) {
                    return r.dataset_tag == tag && r.strategy == strategy;
                  }));
        }
      }
      break;
    }
    case TableLayout::ByMode:
      for (const auto mode : {FeatureMode::MFCC, FeatureMode::LPCC}) {
        const std::string group = modeName(mode);
        require(group, findReport(reports, [&](const EvaluationReport& r) {
                  return r.mode == mode;
                }));
      }
      break;
  }
  return columns;
}

}  // namespace

EvaluationReport evaluateModel(const classifier::EmotionModel& model,
                               const std::vector<TestSample>& test,
                               const std::string& dataset_tag) {
  if (test.empty()) {
    throw Error(ErrorCode::BadArgument, "nothing to evaluate");
  }

  EvaluationReport out;
  out.strategy = model.strategy;
  out.mode = model.mode;
  out.dataset_tag = dataset_tag;
  out.n_test = static_cast<int>(test.size());
  for (const auto& sample : test) {
    classifier::Prediction pred;
    if (model.strategy == classifier::Strategy::OAA) {
      pred = classifier::predictOaa(model, sample.features);
    } else {
      if (!sample.gender) {
        throw Error(ErrorCode::MissingGenderForGd,
                    "a gender-dependent model needs gender metadata for "
                    "every test sample");
      }
      pred = classifier::predictGenderDependent(model, sample.features,
                                                *sample.gender);
    }
    ++out.confusion(static_cast<int>(sample.label),
                    static_cast<int>(pred.label));
  }

  double recall_sum = 0.0;
  int defined = 0;
  int correct = 0;
  for (int i = 0; i < static_cast<int>(kNumEmotions); ++i) {
    const int row_sum = out.confusion.row(i).sum();
    correct += out.confusion(i, i);
    if (row_sum > 0) {
      const double recall =
          static_cast<double>(out.confusion(i, i)) / row_sum;
      out.per_emotion_accuracy[static_cast<size_t>(i)] = recall;
      recall_sum += recall;
      ++defined;
    }
  }
  out.overall_macro = defined > 0 ? recall_sum / defined : 0.0;
  out.overall_micro = static_cast<double>(correct) / out.n_test;
  return out;
}

RenderedTables renderTables(const std::vector<EvaluationReport>& reports,
                            TableLayout layout) {
  const std::vector<Column> columns = buildColumns(reports, layout);

  // Row-major cell strings: one row per emotion plus the Overall row.
  std::vector<std::string> row_names;
  for (const EmotionLabel e : kAllEmotions) row_names.push_back(labelName(e));
  row_names.push_back("Overall");

  std::vector<std::vector<std::string>> cells(
      row_names.size(), std::vector<std::string>(columns.size()));
  bool any_undefined = false;
  for (size_t c = 0; c < columns.size(); ++c) {
    const EvaluationReport& r = *columns[c].report;
    for (size_t e = 0; e < kNumEmotions; ++e) {
      if (r.per_emotion_accuracy[e]) {
        cells[e][c] = percent(*r.per_emotion_accuracy[e]);
      } else {
        cells[e][c] = "n/a";
        any_undefined = true;
      }
    }
    cells[kNumEmotions][c] = percent(r.overall_macro);
  }

  RenderedTables out;
  std::vector<size_t> widths(columns.size());
  size_t name_width = std::string("Emotion").size();
  for (const auto& name : row_names) name_width = std::max(name_width, name.size());
  for (size_t c = 0; c < columns.size(); ++c) {
    widths[c] = columns[c].group.size() + 4;  // room for the " (%)" suffix
    for (size_t r = 0; r < row_names.size(); ++r) {
      widths[c] = std::max(widths[c], cells[r][c].size());
    }
  }

  std::ostringstream text;
  text << std::left << std::setw(static_cast<int>(name_width)) << "Emotion";
  for (size_t c = 0; c < columns.size(); ++c) {
    text << "  " << std::right << std::setw(static_cast<int>(widths[c]))
         << columns[c].group + " (%)";
  }
  text << "\n";
  for (size_t r = 0; r < row_names.size(); ++r) {
    text << std::left << std::setw(static_cast<int>(name_width))
         << row_names[r];
    for (size_t c = 0; c < columns.size(); ++c) {
      text << "  " << std::right << std::setw(static_cast<int>(widths[c]))
           << cells[r][c];
    }
    text << "\n";
  }
  if (any_undefined) {
    text << "(n/a: no test samples with that label; Overall averages the "
            "defined rows)\n";
  }
  out.text = text.str();

  std::string csv = "layout,group,emotion,accuracy_pct\n";
  for (size_t c = 0; c < columns.size(); ++c) {
    for (size_t r = 0; r < row_names.size(); ++r) {
      if (cells[r][c] == "n/a") continue;
      csv += std::string(layoutName(layout)) + "," + columns[c].group + "," +
             row_names[r] + "," + cells[r][c] + "\n";
    }
  }
  out.csv = csv;
  return out;
}

}  // namespace report
}  // namespace ser
