// ser/cli.cpp

// Copyright 2026 SER Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ser/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <utility>
#include <vector>

#include "ser/audio.hpp"
#include "ser/classifier.hpp"
#include "ser/dataset.hpp"
#include "ser/error.hpp"
#include "ser/features.hpp"
#include "ser/report.hpp"
#include "ser/svm.hpp"
#include "ser/types.hpp"

namespace ser {
namespace cli {
namespace {

// Every flag of every subcommand. Fields reused across subcommands share a
// default; --split differs between train and evaluate, so it is two fields.
struct Options {
  std::string manifest;
  std::string model_path;
  std::string out;
  std::string wav;
  std::string gender;
  std::string train_split = "train";
  std::string eval_split = "test";
  std::string strategy = "oaa";
  std::string mode = "mfcc";
  std::string axis = "strategy";
  std::string profile = "default";
  std::string genders;
  std::string tag;
  double frame_ms = 60.0;
  double hop_ms = 30.0;
  double box_c = 10.0;
  double gamma = 0.0;
  double kkt_tol = 1e-3;
  std::int64_t max_iter = 100000;
  std::uint64_t seed = 7;
  double train_fraction = 0.7;
  int per_class = 25;
  double duration_s = 2.0;
  int rate = 16000;
  double noise = 0.01;
  int jobs = 1;
};

std::string formatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string formatPercent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

// Removes the output files it still owns, so a failed subcommand leaves
// nothing half-written behind.
struct OutputGuard {
  std::vector<std::string> paths;
  bool armed = true;

  void track(const std::string& p) { paths.push_back(p); }
  ~OutputGuard() {
    if (!armed) return;
    for (const auto& p : paths) {
      std::error_code ignored;
      std::filesystem::remove(p, ignored);
    }
  }
};

void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content) || !out.flush()) {
    throw Error(ErrorCode::Io, "cannot write " + path);
  }
}

// Usage errors discovered after flag parsing (invalid flag combinations).
int usageError(const std::string& message) {
  std::cerr << "error: " << message
            << "\nRun with --help for more information.\n";
  return 2;
}

features::FeatureConfig featureConfig(const Options& o, FeatureMode mode) {
  features::FeatureConfig cfg;
  cfg.frame_ms = o.frame_ms;
  cfg.hop_ms = o.hop_ms;
  cfg.mode = mode;
  return cfg;
}

svm::SvmParams svmParams(const Options& o) {
  svm::SvmParams params;
  params.box_c = o.box_c;
  params.gamma = o.gamma;
  params.kkt_tolerance = o.kkt_tol;
  params.max_iterations = o.max_iter;
  return params;
}

// Reads and extracts every sample on a worker pool. Results land in input
// order, so the output is independent of thread scheduling; the error
// reported is always the one for the lowest-index failing file.
std::vector<features::FeatureVector> extractAll(
    const std::vector<dataset::SampleMeta>& samples,
    const features::FeatureConfig& cfg, int jobs) {
  std::vector<features::FeatureVector> out(samples.size());
  std::vector<std::exception_ptr> failed(samples.size());
  std::atomic<std::size_t> next{0};
  const int n_threads =
      std::max(1, std::min(jobs, static_cast<int>(samples.size())));
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= samples.size()) return;
      try {
        out[i] =
            features::extractFeatures(audio::readWav(samples[i].path), cfg);
      } catch (...) {
        failed[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!failed[i]) continue;
    try {
      std::rethrow_exception(failed[i]);
    } catch (const Error& e) {
      throw Error(e.code(), samples[i].path + ": " + e.message());
    }
  }
  return out;
}

std::vector<classifier::TrainingSample> toTraining(
    const dataset::Dataset& ds, std::vector<features::FeatureVector> feats) {
  std::vector<classifier::TrainingSample> out(ds.samples.size());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    out[i].features = std::move(feats[i]);
    out[i].label = ds.samples[i].emotion;
    out[i].gender = ds.samples[i].gender;
  }
  return out;
}

std::vector<report::TestSample> toTest(
    const dataset::Dataset& ds, std::vector<features::FeatureVector> feats) {
  std::vector<report::TestSample> out(ds.samples.size());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    out[i].features = std::move(feats[i]);
    out[i].label = ds.samples[i].emotion;
    out[i].gender = ds.samples[i].gender;
  }
  return out;
}

dataset::Dataset selectSplit(const dataset::Dataset& ds,
                             const std::string& split, double fraction,
                             std::uint64_t seed) {
  if (split == "all") return ds;
  auto parts = dataset::splitTrainTest(ds, fraction, seed);
  return split == "train" ? std::move(parts.first) : std::move(parts.second);
}

std::string firstTag(const dataset::Dataset& ds) {
  return ds.samples.empty() ? std::string() : ds.samples.front().dataset_tag;
}

std::string renderEvaluationText(const report::EvaluationReport& rep) {
  std::ostringstream out;
  out << "strategy " << classifier::strategyName(rep.strategy) << ", mode "
      << modeName(rep.mode);
  if (!rep.dataset_tag.empty()) out << ", dataset " << rep.dataset_tag;
  out << ", n=" << rep.n_test << "\n\n";
  out << "confusion (rows true, columns predicted):\n";
  out << std::setw(8) << " ";
  for (const EmotionLabel e : kAllEmotions) out << std::setw(7) << labelName(e);
  out << "\n";
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    out << std::setw(8) << labelName(kAllEmotions[i]);
    for (std::size_t j = 0; j < kNumEmotions; ++j) {
      out << std::setw(7)
          << rep.confusion(static_cast<int>(i), static_cast<int>(j));
    }
    out << "\n";
  }
  out << "\nper-emotion accuracy (%):\n";
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    out << std::setw(8) << labelName(kAllEmotions[i]) << "  ";
    if (rep.per_emotion_accuracy[i]) {
      out << formatPercent(*rep.per_emotion_accuracy[i]);
    } else {
      out << "n/a (no test samples)";
    }
    out << "\n";
  }
  out << "\noverall: macro " << formatPercent(rep.overall_macro) << "%, micro "
      << formatPercent(rep.overall_micro) << "%\n";
  return out.str();
}

// Same column set as the comparison tables so evaluation CSVs concatenate
// with them; the Overall row carries the macro accuracy.
std::string evaluationCsv(const report::EvaluationReport& rep) {
  const std::string group =
      std::string(classifier::strategyName(rep.strategy)) + "/" +
      modeName(rep.mode);
  std::string csv = "layout,group,emotion,accuracy_pct\n";
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    if (!rep.per_emotion_accuracy[i]) continue;
    csv += "Evaluation," + group + "," + labelName(kAllEmotions[i]) + "," +
           formatPercent(*rep.per_emotion_accuracy[i]) + "\n";
  }
  csv += "Evaluation," + group + ",Overall," +
         formatPercent(rep.overall_macro) + "\n";
  return csv;
}

int runExtract(const Options& o) {
  const auto ds = dataset::loadManifest(o.manifest);
  const auto cfg = featureConfig(o, modeFromName(o.mode));
  const auto feats = extractAll(ds.samples, cfg, o.jobs);
  std::string csv = "path";
  for (const auto& name : features::featureLayout(cfg)) csv += "," + name;
  csv += "\n";
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    csv += ds.samples[i].path;
    const auto& v = feats[i].values;
    for (Eigen::Index k = 0; k < v.size(); ++k) csv += "," + formatReal(v[k]);
    csv += "\n";
  }
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    OutputGuard guard;
    guard.track(o.out);
    writeTextFile(o.out, csv);
    guard.armed = false;
    std::cout << "wrote features for " << ds.samples.size() << " files to "
              << o.out << "\n";
  }
  return 0;
}

int runTrain(const Options& o) {
  const auto ds = dataset::loadManifest(o.manifest);
  const auto part = selectSplit(ds, o.train_split, o.train_fraction, o.seed);
  const auto cfg = featureConfig(o, modeFromName(o.mode));
  auto feats = extractAll(part.samples, cfg, o.jobs);
  const auto train = toTraining(part, std::move(feats));
  const auto params = svmParams(o);
  const auto model = o.strategy == "gd"
                         ? classifier::trainGenderDependent(train, params, cfg)
                         : classifier::trainOaa(train, params, cfg);
  OutputGuard guard;
  guard.track(o.model_path);
  classifier::saveModel(model, o.model_path);
  guard.armed = false;
  std::cout << "trained " << classifier::strategyName(model.strategy) << "/"
            << modeName(model.mode) << " model on " << train.size()
            << " samples (dim " << model.dim() << ") -> " << o.model_path
            << "\n";
  return 0;
}

int runPredict(const Options& o) {
  const auto model = classifier::loadModel(o.model_path);
  std::optional<Gender> gender;
  if (!o.gender.empty()) gender = genderFromName(o.gender);
  if (model.strategy == classifier::Strategy::GenderDependent && !gender) {
    return usageError("--gender is required for a gender-dependent model");
  }
  const auto cfg = featureConfig(o, model.mode);
  const auto fv = features::extractFeatures(audio::readWav(o.wav), cfg);
  const auto pred =
      model.strategy == classifier::Strategy::OAA
          ? classifier::predictOaa(model, fv)
          : classifier::predictGenderDependent(model, fv, *gender);
  std::cout << labelName(pred.label) << "\n";
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    std::cout << labelName(kAllEmotions[i]) << " " << formatReal(pred.scores[i])
              << "\n";
  }
  return 0;
}

int runEvaluate(const Options& o) {
  const auto model = classifier::loadModel(o.model_path);
  const auto ds = dataset::loadManifest(o.manifest);
  const auto part = selectSplit(ds, o.eval_split, o.train_fraction, o.seed);
  const auto cfg = featureConfig(o, model.mode);
  auto feats = extractAll(part.samples, cfg, o.jobs);
  const auto test = toTest(part, std::move(feats));
  const auto rep = report::evaluateModel(model, test, firstTag(part));
  std::cout << renderEvaluationText(rep);
  if (!o.out.empty()) {
    OutputGuard guard;
    guard.track(o.out);
    writeTextFile(o.out, evaluationCsv(rep));
    guard.armed = false;
    std::cout << "wrote " << o.out << "\n";
  }
  return 0;
}

int runCompare(const Options& o) {
  const auto ds = dataset::loadManifest(o.manifest);
  const auto parts = dataset::splitTrainTest(ds, o.train_fraction, o.seed);
  const auto params = svmParams(o);
  const auto tag = firstTag(parts.second);
  std::vector<report::EvaluationReport> reports;
  if (o.axis == "strategy") {
    const auto cfg = featureConfig(o, modeFromName(o.mode));
    auto train_feats = extractAll(parts.first.samples, cfg, o.jobs);
    auto test_feats = extractAll(parts.second.samples, cfg, o.jobs);
    const auto train = toTraining(parts.first, std::move(train_feats));
    const auto test = toTest(parts.second, std::move(test_feats));
    reports.push_back(report::evaluateModel(
        classifier::trainOaa(train, params, cfg), test, tag));
    reports.push_back(report::evaluateModel(
        classifier::trainGenderDependent(train, params, cfg), test, tag));
  } else {
    for (const FeatureMode mode : {FeatureMode::MFCC, FeatureMode::LPCC}) {
      const auto cfg = featureConfig(o, mode);
      auto train_feats = extractAll(parts.first.samples, cfg, o.jobs);
      auto test_feats = extractAll(parts.second.samples, cfg, o.jobs);
      const auto train = toTraining(parts.first, std::move(train_feats));
      const auto test = toTest(parts.second, std::move(test_feats));
      const auto model =
          o.strategy == "gd" ? classifier::trainGenderDependent(train, params, cfg)
                             : classifier::trainOaa(train, params, cfg);
      reports.push_back(report::evaluateModel(model, test, tag));
    }
  }
  const auto layout = o.axis == "strategy" ? report::TableLayout::ByStrategy
                                           : report::TableLayout::ByMode;
  const auto tables = report::renderTables(reports, layout);
  std::cout << tables.text;
  if (!o.out.empty()) {
    OutputGuard guard;
    guard.track(o.out);
    writeTextFile(o.out, tables.csv);
    guard.armed = false;
    std::cout << "wrote " << o.out << "\n";
  }
  return 0;
}

int runSynth(const Options& o) {
  dataset::SynthSpec spec = o.profile == "confounded"
                                ? dataset::SynthSpec::confounded()
                                : dataset::SynthSpec::defaults();
  if (!o.genders.empty()) {
    if (o.genders == "m") {
      spec.genders = {Gender::M};
    } else if (o.genders == "f") {
      spec.genders = {Gender::F};
    } else {
      spec.genders = {Gender::M, Gender::F};
    }
  }
  spec.samples_per_class = o.per_class;
  spec.seed = o.seed;
  spec.duration_s = o.duration_s;
  spec.sample_rate_hz = o.rate;
  spec.noise_amplitude = o.noise;
  if (!o.tag.empty()) spec.tag = o.tag;
  const auto ds = dataset::synthCorpus(spec, o.out);
  std::cout << "wrote " << ds.samples.size()
            << " wav files and manifest.csv to " << o.out << "\n";
  return 0;
}

}  // namespace

int runCli(int argc, const char* const* argv) {
  Options o;
  o.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  CLI::App app{
      "Speech emotion recognition from WAV files: prosodic and cepstral "
      "features feeding per-emotion RBF support vector machines."};
  app.require_subcommand(1);

  const CLI::Validator open_unit{
      [](std::string& s) -> std::string {
        try {
          const double v = std::stod(s);
          if (v > 0.0 && v < 1.0) return {};
        } catch (...) {
        }
        return "must be strictly between 0 and 1";
      },
      "FLOAT in (0,1)"};

  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", o.mode, "Feature mode (mfcc or lpcc)")
        ->transform(CLI::IsMember({"mfcc", "lpcc"}, CLI::ignore_case))
        ->capture_default_str();
  };
  auto add_framing = [&](CLI::App* sub) {
    sub->add_option("--frame-ms", o.frame_ms, "Frame length in milliseconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--hop-ms", o.hop_ms, "Hop length in milliseconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--c", o.box_c, "Soft-margin box constraint")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--gamma", o.gamma,
                    "RBF kernel width; 0 selects 1/dimension")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--kkt-tol", o.kkt_tol, "Solver KKT tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-iter", o.max_iter, "Solver pair-update budget")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  auto add_split_params = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Split shuffle seed")
        ->capture_default_str();
    sub->add_option("--train-fraction", o.train_fraction,
                    "Fraction of each stratum assigned to the train split")
        ->check(open_unit)
        ->capture_default_str();
  };
  auto add_jobs = [&](CLI::App* sub) {
    sub->add_option("--jobs", o.jobs,
                    "Worker threads for feature extraction")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  CLI::App* extract = app.add_subcommand(
      "extract", "Extract features for every manifest entry into a CSV");
  extract->add_option("--manifest", o.manifest, "Dataset manifest CSV")
      ->required();
  extract->add_option("--out", o.out, "Output CSV path (default: stdout)");
  add_mode(extract);
  add_framing(extract);
  add_jobs(extract);

  CLI::App* train =
      app.add_subcommand("train", "Train an emotion model from a manifest");
  train->add_option("--manifest", o.manifest, "Dataset manifest CSV")
      ->required();
  train->add_option("--model", o.model_path, "Output model path")->required();
  train
      ->add_option("--strategy", o.strategy,
                   "Classification strategy (oaa or gd)")
      ->transform(CLI::IsMember({"oaa", "gd"}, CLI::ignore_case))
      ->capture_default_str();
  train
      ->add_option("--split", o.train_split,
                   "Subset to train on (train, test or all)")
      ->transform(CLI::IsMember({"train", "test", "all"}, CLI::ignore_case))
      ->capture_default_str();
  add_mode(train);
  add_framing(train);
  add_solver(train);
  add_split_params(train);
  add_jobs(train);

  CLI::App* predict = app.add_subcommand(
      "predict", "Classify one WAV file with a trained model");
  predict->add_option("--model", o.model_path, "Trained model path")
      ->required();
  predict->add_option("--wav", o.wav, "Input WAV file")->required();
  predict
      ->add_option("--gender", o.gender,
                   "Speaker gender (m or f); required for gender-dependent "
                   "models")
      ->transform(CLI::IsMember({"m", "f"}, CLI::ignore_case));
  add_framing(predict);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Evaluate a trained model on a manifest split");
  evaluate->add_option("--model", o.model_path, "Trained model path")
      ->required();
  evaluate->add_option("--manifest", o.manifest, "Dataset manifest CSV")
      ->required();
  evaluate
      ->add_option("--split", o.eval_split,
                   "Subset to evaluate on (train, test or all)")
      ->transform(CLI::IsMember({"train", "test", "all"}, CLI::ignore_case))
      ->capture_default_str();
  evaluate->add_option("--out", o.out, "Also write the report CSV here");
  add_framing(evaluate);
  add_split_params(evaluate);
  add_jobs(evaluate);

  CLI::App* compare = app.add_subcommand(
      "compare",
      "Train and evaluate both strategies or both feature modes on one "
      "split");
  compare->add_option("--manifest", o.manifest, "Dataset manifest CSV")
      ->required();
  compare
      ->add_option("--axis", o.axis,
                   "Comparison axis: strategy (OAA vs GD) or mode (MFCC vs "
                   "LPCC)")
      ->transform(CLI::IsMember({"strategy", "mode"}, CLI::ignore_case))
      ->capture_default_str();
  compare
      ->add_option("--strategy", o.strategy,
                   "Strategy used for the mode axis (oaa or gd)")
      ->transform(CLI::IsMember({"oaa", "gd"}, CLI::ignore_case))
      ->capture_default_str();
  compare->add_option("--out", o.out, "Also write the comparison CSV here");
  add_mode(compare);
  add_framing(compare);
  add_solver(compare);
  add_split_params(compare);
  add_jobs(compare);

  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a labeled synthetic corpus of WAV files plus "
               "manifest");
  synth->add_option("--out", o.out, "Output directory")->required();
  synth
      ->add_option("--profile", o.profile,
                   "Corpus recipe (default or confounded)")
      ->transform(CLI::IsMember({"default", "confounded"}, CLI::ignore_case))
      ->capture_default_str();
  synth
      ->add_option("--per-class", o.per_class,
                   "Files per emotion and gender pair")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--seed", o.seed, "Corpus seed")->capture_default_str();
  synth
      ->add_option("--genders", o.genders,
                   "Genders to generate: m, f or mf (default: the profile's)")
      ->transform(CLI::IsMember({"m", "f", "mf", "fm"}, CLI::ignore_case));
  synth->add_option("--duration", o.duration_s, "Seconds per file")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--rate", o.rate, "Sample rate in Hz")
      ->check(CLI::Range(8000, 192000))
      ->capture_default_str();
  synth->add_option("--noise", o.noise, "Additive noise amplitude")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth->add_option("--tag", o.tag, "Dataset tag for the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*extract) return runExtract(o);
    if (*train) return runTrain(o);
    if (*predict) return runPredict(o);
    if (*evaluate) return runEvaluate(o);
    if (*compare) return runCompare(o);
    if (*synth) return runSynth(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cli
}  // namespace ser
