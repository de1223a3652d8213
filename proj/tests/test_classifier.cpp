// ser/test_classifier.cpp

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

#include "ser/classifier.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "test_util.hpp"

using ser::EmotionLabel;
using ser::ErrorCode;
using ser::FeatureMode;
using ser::Gender;
using ser::kAllEmotions;
namespace cls = ser::classifier;
namespace ft = ser::features;
namespace tst = ser::testing;

namespace {

ft::FeatureVector vec(std::initializer_list<double> values,
                      FeatureMode mode = FeatureMode::MFCC) {
  ft::FeatureVector v;
  v.mode = mode;
  v.values.resize(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v.values[i++] = x;
  return v;
}

// Four well-separated 3-D clusters, one per label, per_class points each.
// Centers are shifted by `offset` so two genders can live in disjoint
// regions of the space.
std::vector<cls::TrainingSample> clusterData(int per_class, std::uint64_t seed,
                                             double offset, Gender gender) {
  const double centers[4][3] = {
      {2.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 2.0}, {2.0, 2.0, 2.0}};
  tst::SplitMixRef rng(seed);
  std::vector<cls::TrainingSample> out;
  for (const EmotionLabel label : kAllEmotions) {
    for (int i = 0; i < per_class; ++i) {
      cls::TrainingSample s;
      s.label = label;
      s.gender = gender;
      s.features.mode = FeatureMode::MFCC;
      s.features.values.resize(3);
      for (int d = 0; d < 3; ++d) {
        const double u =
            static_cast<double>(rng.next() >> 11) * 0x1.0p-53 * 0.5 - 0.25;
        s.features.values[d] =
            centers[static_cast<size_t>(label)][d] + offset + u;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

ser::svm::SvmParams fastParams() {
  ser::svm::SvmParams p;
  p.box_c = 10.0;
  p.gamma = 0.5;
  return p;
}

void checkBanksIdentical(const cls::ModelBank& a, const cls::ModelBank& b) {
  CHECK((a.scaler.means - b.scaler.means).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.scaler.stds - b.scaler.stds).cwiseAbs().maxCoeff() == 0.0);
  for (size_t i = 0; i < ser::kNumEmotions; ++i) {
    CHECK(a.models[i].bias == b.models[i].bias);
    CHECK(a.models[i].gamma == b.models[i].gamma);
    REQUIRE(a.models[i].numSupportVectors() ==
            b.models[i].numSupportVectors());
    CHECK((a.models[i].coefficients - b.models[i].coefficients)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((a.models[i].support_vectors - b.models[i].support_vectors)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

std::uint64_t fnv(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("name lookups are case-insensitive and strict") {
  CHECK(ser::labelFromName("happy") == EmotionLabel::Happy);
  CHECK(ser::labelFromName("SAD") == EmotionLabel::Sad);
  CHECK(ser::labelFromName("Angry") == EmotionLabel::Angry);
  CHECK(ser::labelFromName("fEAr") == EmotionLabel::Fear);
  CHECK(ser::genderFromName("m") == Gender::M);
  CHECK(ser::genderFromName("F") == Gender::F);
  CHECK(ser::modeFromName("mfcc") == FeatureMode::MFCC);
  CHECK(ser::modeFromName("LPCC") == FeatureMode::LPCC);
  CHECK(tst::codeOf([] { ser::labelFromName("bored"); }) ==
        ErrorCode::BadArgument);
  CHECK(tst::codeOf([] { ser::genderFromName("x"); }) ==
        ErrorCode::BadArgument);
  CHECK(tst::codeOf([] { ser::modeFromName("plp"); }) ==
        ErrorCode::BadArgument);
  CHECK(std::string(ser::labelName(EmotionLabel::Happy)) == "Happy");
  CHECK(std::string(cls::strategyName(cls::Strategy::OAA)) == "OAA");
  CHECK(std::string(cls::strategyName(cls::Strategy::GenderDependent)) ==
        "GD");
}

TEST_CASE("scaler standardizes each dimension") {
  const std::vector<ft::FeatureVector> data = {vec({1.0, 2.0, 7.0}),
                                               vec({3.0, 6.0, 7.0})};
  const cls::Scaler s = cls::fitScaler(data);
  CHECK(s.means[0] == 2.0);
  CHECK(s.means[1] == 4.0);
  CHECK(s.means[2] == 7.0);
  CHECK(s.stds[0] == 1.0);
  CHECK(s.stds[1] == 2.0);
  CHECK(s.stds[2] == 1.0);  // constant dimension keeps std 1

  const ft::FeatureVector t = cls::transform(s, data[0]);
  CHECK(t.values[0] == -1.0);
  CHECK(t.values[1] == -1.0);
  CHECK(t.values[2] == 0.0);  // constant dimension maps to zero
  CHECK(t.mode == data[0].mode);

  // Standardized training data has mean zero and unit std per dimension.
  Eigen::MatrixXd scaled(3, 2);
  scaled.col(0) = cls::transform(s, data[0]).values;
  scaled.col(1) = cls::transform(s, data[1]).values;
  CHECK(scaled.rowwise().mean().cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("scaler and transform validate shapes") {
  CHECK(tst::codeOf([] { cls::fitScaler({}); }) == ErrorCode::EmptyTrainingSet);
  CHECK(tst::codeOf([] {
          cls::fitScaler({vec({1.0, 2.0}), vec({1.0, 2.0, 3.0})});
        }) == ErrorCode::MixedDimensions);
  const cls::Scaler s = cls::fitScaler({vec({1.0, 2.0}), vec({2.0, 3.0})});
  CHECK(tst::codeOf([&] { cls::transform(s, vec({1.0, 2.0, 3.0})); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("fingerprint is a stable 16-hex digest sensitive to every knob") {
  const ft::FeatureConfig cfg;
  const ser::svm::SvmParams params;
  const std::string base = cls::configFingerprint(cfg, params);
  CHECK(base.size() == 16);
  CHECK(base.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(cls::configFingerprint(cfg, params) == base);

  ft::FeatureConfig cfg2 = cfg;
  cfg2.frame_ms = 50.0;
  CHECK(cls::configFingerprint(cfg2, params) != base);
  cfg2 = cfg;
  cfg2.mode = FeatureMode::LPCC;
  CHECK(cls::configFingerprint(cfg2, params) != base);
  ser::svm::SvmParams p2 = params;
  p2.box_c = 20.0;
  CHECK(cls::configFingerprint(cfg, p2) != base);
  p2 = params;
  p2.gamma = 0.25;
  CHECK(cls::configFingerprint(cfg, p2) != base);
}

TEST_CASE("one-against-all training separates clustered classes") {
  const std::vector<cls::TrainingSample> train =
      clusterData(5, 3, 0.0, Gender::M);
  const cls::EmotionModel model = cls::trainOaa(train, fastParams());
  CHECK(model.strategy == cls::Strategy::OAA);
  CHECK(model.mode == FeatureMode::MFCC);
  CHECK(model.dim() == 3);
  CHECK(model.fingerprint ==
        cls::configFingerprint(ft::FeatureConfig{}, fastParams()));

  for (const auto& s : train) {
    const cls::Prediction p = cls::predictOaa(model, s.features);
    CHECK(p.label == s.label);
    // The winning score is the argmax of the per-label decision values.
    const double top = p.scores[static_cast<size_t>(p.label)];
    for (const double score : p.scores) CHECK(top >= score);
  }
}

TEST_CASE("prediction breaks exact score ties toward the earliest label") {
  cls::EmotionModel model;
  model.strategy = cls::Strategy::OAA;
  model.pooled.scaler.means = Eigen::VectorXd::Zero(2);
  model.pooled.scaler.stds = Eigen::VectorXd::Ones(2);
  const double biases[4] = {0.1, 0.9, 0.9, 0.3};
  for (size_t i = 0; i < 4; ++i) {
    auto& m = model.pooled.models[i];
    m.support_vectors = Eigen::MatrixXd::Zero(2, 1);
    m.coefficients = Eigen::VectorXd::Zero(1);
    m.gamma = 1.0;
    m.box_c = 1.0;
    m.bias = biases[i];  // decision value is exactly the bias
  }

  const cls::Prediction p = cls::predictOaa(model, vec({0.3, -0.2}));
  CHECK(p.label == EmotionLabel::Sad);  // ties with Angry, earlier wins
  CHECK(p.scores[1] == 0.9);
  CHECK(p.scores[2] == 0.9);

  for (auto& m : model.pooled.models) m.bias = 0.5;
  CHECK(cls::predictOaa(model, vec({0.0, 0.0})).label == EmotionLabel::Happy);
}

TEST_CASE("gender-dependent banks equal per-gender one-against-all models") {
  std::vector<cls::TrainingSample> males = clusterData(5, 41, 0.0, Gender::M);
  std::vector<cls::TrainingSample> females =
      clusterData(5, 42, 10.0, Gender::F);
  std::vector<cls::TrainingSample> both = males;
  both.insert(both.end(), females.begin(), females.end());

  const cls::EmotionModel gd = cls::trainGenderDependent(both, fastParams());
  CHECK(gd.strategy == cls::Strategy::GenderDependent);
  REQUIRE(gd.by_gender.count(Gender::M) == 1);
  REQUIRE(gd.by_gender.count(Gender::F) == 1);

  // Each bank must be byte-for-byte the OAA bank of that gender's subset:
  // same subset, same order, same arithmetic.
  const cls::EmotionModel m_only = cls::trainOaa(males, fastParams());
  const cls::EmotionModel f_only = cls::trainOaa(females, fastParams());
  checkBanksIdentical(gd.by_gender.at(Gender::M), m_only.pooled);
  checkBanksIdentical(gd.by_gender.at(Gender::F), f_only.pooled);

  // Routing: every sample classified by its own gender's bank.
  for (const auto& s : both) {
    const cls::Prediction p =
        cls::predictGenderDependent(gd, s.features, s.gender);
    CHECK(p.label == s.label);
  }
}

TEST_CASE("training surfaces structural problems by name") {
  CHECK(tst::codeOf([] { cls::trainOaa({}, fastParams()); }) ==
        ErrorCode::EmptyTrainingSet);

  // Drop every Fear sample.
  std::vector<cls::TrainingSample> train = clusterData(3, 5, 0.0, Gender::M);
  std::erase_if(train, [](const cls::TrainingSample& s) {
    return s.label == EmotionLabel::Fear;
  });
  try {
    cls::trainOaa(train, fastParams());
    FAIL("expected MissingClass");
  } catch (const ser::Error& e) {
    CHECK(e.code() == ErrorCode::MissingClass);
    CHECK(e.message().find("Fear") != std::string::npos);
  }

  // Mixed feature modes.
  train = clusterData(3, 5, 0.0, Gender::M);
  train[2].features.mode = FeatureMode::LPCC;
  CHECK(tst::codeOf([&] { cls::trainOaa(train, fastParams()); }) ==
        ErrorCode::BadArgument);

  // All-male input cannot train a gender-dependent model.
  train = clusterData(3, 5, 0.0, Gender::M);
  CHECK(tst::codeOf([&] { cls::trainGenderDependent(train, fastParams()); }) ==
        ErrorCode::MissingGender);

  // Both genders present but one lacks a class.
  std::vector<cls::TrainingSample> both = clusterData(3, 6, 0.0, Gender::M);
  std::vector<cls::TrainingSample> females =
      clusterData(3, 7, 10.0, Gender::F);
  std::erase_if(females, [](const cls::TrainingSample& s) {
    return s.label == EmotionLabel::Sad;
  });
  both.insert(both.end(), females.begin(), females.end());
  try {
    cls::trainGenderDependent(both, fastParams());
    FAIL("expected MissingClassInGender");
  } catch (const ser::Error& e) {
    CHECK(e.code() == ErrorCode::MissingClassInGender);
    CHECK(e.message().find("F") != std::string::npos);
    CHECK(e.message().find("Sad") != std::string::npos);
  }
}

TEST_CASE("solver failures carry the label being trained") {
  std::vector<cls::TrainingSample> train = clusterData(5, 9, 0.0, Gender::M);
  ser::svm::SvmParams params = fastParams();
  params.max_iterations = 1;
  try {
    cls::trainOaa(train, params);
    FAIL("expected the iteration limit to fire");
  } catch (const ser::IterationLimitError& e) {
    CHECK(e.message().find("Happy model") != std::string::npos);
  }
}

TEST_CASE("prediction rejects the wrong strategy and unknown banks") {
  const std::vector<cls::TrainingSample> train =
      clusterData(3, 11, 0.0, Gender::M);
  const cls::EmotionModel oaa = cls::trainOaa(train, fastParams());
  CHECK(tst::codeOf([&] {
          cls::predictGenderDependent(oaa, train[0].features, Gender::M);
        }) == ErrorCode::WrongStrategy);

  cls::EmotionModel half;
  half.strategy = cls::Strategy::GenderDependent;
  half.by_gender[Gender::M] = oaa.pooled;
  CHECK(tst::codeOf([&] { cls::predictOaa(half, train[0].features); }) ==
        ErrorCode::WrongStrategy);
  CHECK(tst::codeOf([&] {
          cls::predictGenderDependent(half, train[0].features, Gender::F);
        }) == ErrorCode::UnknownGenderBank);
}

TEST_CASE("model files round trip exactly") {
  tst::TempDir dir("ser_model");
  const std::vector<cls::TrainingSample> males =
      clusterData(4, 21, 0.0, Gender::M);
  std::vector<cls::TrainingSample> both = males;
  for (auto s : clusterData(4, 22, 8.0, Gender::F)) both.push_back(s);

  // Serialization is the subject here, so the solver gets slack.
  ser::svm::SvmParams params = fastParams();
  params.kkt_tolerance = 1e-2;

  const cls::EmotionModel oaa = cls::trainOaa(males, params);
  const std::string oaa_path = dir.file("oaa.svm");
  cls::saveModel(oaa, oaa_path);

  // Shape of the text: magic, header, trailing checksum.
  const std::string bytes = slurp(oaa_path);
  CHECK(bytes.rfind("SERSVM v1\n", 0) == 0);
  CHECK(bytes.find("strategy OAA mode MFCC dim 3 fingerprint " +
                   oaa.fingerprint + "\n") != std::string::npos);
  CHECK(bytes.find("bank ALL\n") != std::string::npos);
  const size_t checksum_at = bytes.rfind("\nchecksum ");
  REQUIRE(checksum_at != std::string::npos);
  CHECK(bytes.substr(checksum_at + 10) ==
        hex(fnv(bytes.substr(0, checksum_at + 1))) + "\n");

  const cls::EmotionModel loaded = cls::loadModel(oaa_path);
  CHECK(loaded.strategy == cls::Strategy::OAA);
  CHECK(loaded.mode == oaa.mode);
  CHECK(loaded.fingerprint == oaa.fingerprint);
  checkBanksIdentical(loaded.pooled, oaa.pooled);

  // Gender-dependent models round trip the same way.
  const cls::EmotionModel gd = cls::trainGenderDependent(both, params);
  const std::string gd_path = dir.file("gd.svm");
  cls::saveModel(gd, gd_path);
  const cls::EmotionModel gd_loaded = cls::loadModel(gd_path);
  CHECK(gd_loaded.strategy == cls::Strategy::GenderDependent);
  REQUIRE(gd_loaded.by_gender.size() == 2);
  checkBanksIdentical(gd_loaded.by_gender.at(Gender::M),
                      gd.by_gender.at(Gender::M));
  checkBanksIdentical(gd_loaded.by_gender.at(Gender::F),
                      gd.by_gender.at(Gender::F));

  // Saving twice produces identical bytes; training is deterministic too.
  const cls::EmotionModel again = cls::trainOaa(males, params);
  const std::string again_path = dir.file("again.svm");
  cls::saveModel(again, again_path);
  CHECK(slurp(again_path) == bytes);
}

TEST_CASE("loading rejects damaged files with precise codes") {
  tst::TempDir dir("ser_model");
  const cls::EmotionModel model =
      cls::trainOaa(clusterData(3, 31, 0.0, Gender::M), fastParams());
  const std::string good_path = dir.file("good.svm");
  cls::saveModel(model, good_path);
  const std::string good = slurp(good_path);

  CHECK(tst::codeOf([&] { cls::loadModel(dir.file("absent.svm")); }) ==
        ErrorCode::Io);

  tst::writeBytes(dir.file("junk.svm"), "this is not a model\nat all\n");
  CHECK(tst::codeOf([&] { cls::loadModel(dir.file("junk.svm")); }) ==
        ErrorCode::BadMagic);

  std::string future = good;
  future.replace(0, 9, "SERSVM v9");
  tst::writeBytes(dir.file("future.svm"), future);
  CHECK(tst::codeOf([&] { cls::loadModel(dir.file("future.svm")); }) ==
        ErrorCode::VersionUnsupported);

  // Flip one digit inside the body: checksum no longer matches.
  std::string corrupt = good;
  const size_t bias_at = corrupt.find(" bias ");
  REQUIRE(bias_at != std::string::npos);
  corrupt[bias_at + 6] = corrupt[bias_at + 6] == '1' ? '2' : '1';
  tst::writeBytes(dir.file("corrupt.svm"), corrupt);
  CHECK(tst::codeOf([&] { cls::loadModel(dir.file("corrupt.svm")); }) ==
        ErrorCode::ChecksumMismatch);

  // No checksum line at all.
  const std::string headless = good.substr(0, good.rfind("\nchecksum ") + 1);
  tst::writeBytes(dir.file("nochecksum.svm"), headless);
  CHECK(tst::codeOf([&] { cls::loadModel(dir.file("nochecksum.svm")); }) ==
        ErrorCode::TruncatedModel);

  // Structurally truncated but with a valid checksum over what remains.
  std::string stub = "SERSVM v1\nstrategy OAA mode MFCC dim 3 fingerprint 0\n";
  stub += "checksum " + hex(fnv(stub)) + "\n";
  tst::writeBytes(dir.file("stub.svm"), stub);
  CHECK(tst::codeOf([&] { cls::loadModel(dir.file("stub.svm")); }) ==
        ErrorCode::TruncatedModel);

  // The good file still loads after all this.
  CHECK(tst::codeOf([&] { cls::loadModel(good_path); }) == std::nullopt);
}
