// ser/classifier.cpp

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

#include "ser/classifier.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <utility>

namespace ser {
namespace classifier {

namespace {

constexpr char kMagic[] = "SERSVM v1";

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

// 17 significant digits reproduce the exact double on read-back.
std::string formatReal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ModelBank trainBank(const std::vector<TrainingSample>& subset,
                    const svm::SvmParams& params,
                    const std::string& bank_tag) {
  std::vector<features::FeatureVector> vectors;
  vectors.reserve(subset.size());
  for (const auto& s : subset) vectors.push_back(s.features);

  ModelBank bank;
  bank.scaler = fitScaler(vectors);

  const Eigen::Index n = static_cast<Eigen::Index>(subset.size());
  const Eigen::Index d = bank.scaler.means.size();
  Eigen::MatrixXd scaled(d, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    scaled.col(i) = transform(bank.scaler, subset[i].features).values;
  }

  for (const EmotionLabel target : kAllEmotions) {
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = subset[i].label == target ? 1.0 : -1.0;
    }
    const std::string context =
        bank_tag + labelName(target) + " model";
    try {
      bank.models[static_cast<size_t>(target)] =
          svm::smoTrain(scaled, y, params);
    } catch (const IterationLimitError& e) {
      throw IterationLimitError(e.iterations, e.max_kkt_violation,
                                e.dual_objective, context);
    } catch (const Error& e) {
      throw Error(e.code(), context + ": " + e.message());
    }
  }
  return bank;
}

FeatureMode uniformMode(const std::vector<TrainingSample>& train) {
  if (train.empty()) {
    throw Error(ErrorCode::EmptyTrainingSet, "no training samples");
  }
  const FeatureMode mode = train.front().features.mode;
  for (const auto& s : train) {
    if (s.features.mode != mode) {
      throw Error(ErrorCode::BadArgument,
                  "training set mixes feature modes");
    }
  }
  return mode;
}

Prediction predictBank(const ModelBank& bank,
                       const features::FeatureVector& v) {
  const features::FeatureVector scaled = transform(bank.scaler, v);
  Prediction out;
  double best = -std::numeric_limits<double>::infinity();
  for (const EmotionLabel label : kAllEmotions) {
    const auto i = static_cast<size_t>(label);
    out.scores[i] = svm::decisionValue(bank.models[i], scaled.values);
    if (out.scores[i] > best) {
      best = out.scores[i];
      out.label = label;
    }
  }
  return out;
}

}  // namespace

std::string configFingerprint(const features::FeatureConfig& cfg,
                              const svm::SvmParams& params) {
  std::ostringstream ss;
  ss << "frame_ms=" << formatReal(cfg.frame_ms)
     << ";hop_ms=" << formatReal(cfg.hop_ms)
     << ";alpha=" << formatReal(cfg.pre_emphasis_alpha)
     << ";nfft=" << cfg.nfft << ";mel=" << cfg.n_mel_filters
     << ";mfcc=" << cfg.n_mfcc << ";lpc=" << cfg.lpc_order
     << ";lpcc=" << cfg.n_lpcc << ";fmin=" << formatReal(cfg.pitch_f_min_hz)
     << ";fmax=" << formatReal(cfg.pitch_f_max_hz)
     << ";voice=" << formatReal(cfg.voicing_threshold)
     << ";floor=" << formatReal(cfg.energy_floor)
     << ";mode=" << modeName(cfg.mode) << ";C=" << formatReal(params.box_c)
     << ";gamma=" << formatReal(params.gamma)
     << ";tol=" << formatReal(params.kkt_tolerance)
     << ";passes=" << params.max_passes
     << ";iters=" << params.max_iterations;
  return hex64(fnv1a64(ss.str()));
}

Scaler fitScaler(const std::vector<features::FeatureVector>& vectors) {
  if (vectors.empty()) {
    throw Error(ErrorCode::EmptyTrainingSet, "cannot fit a scaler on nothing");
  }
  const Eigen::Index d = vectors.front().values.size();
  for (const auto& v : vectors) {
    if (v.values.size() != d) {
      throw Error(ErrorCode::MixedDimensions,
                  "feature vectors have different lengths");
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXd data(d, n);
  for (Eigen::Index i = 0; i < n; ++i) data.col(i) = vectors[i].values;

  Scaler s;
  s.means = data.rowwise().mean();
  const Eigen::VectorXd var =
      (data.colwise() - s.means).array().square().rowwise().mean();
  s.stds = var.array().sqrt();
  s.stds = (s.stds.array() < 1e-12).select(1.0, s.stds);
  return s;
}

features::FeatureVector transform(const Scaler& scaler,
                                  const features::FeatureVector& v) {
  if (v.values.size() != scaler.means.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length does not match the scaler");
  }
  features::FeatureVector out;
  out.mode = v.mode;
  out.values =
      ((v.values - scaler.means).array() / scaler.stds.array()).matrix();
  return out;
}

EmotionModel trainOaa(const std::vector<TrainingSample>& train,
                      const svm::SvmParams& params,
                      const features::FeatureConfig& cfg) {
  const FeatureMode mode = uniformMode(train);
  for (const EmotionLabel label : kAllEmotions) {
    const bool present = std::any_of(
        train.begin(), train.end(),
        [label](const TrainingSample& s) { return s.label == label; });
    if (!present) {
      throw Error(ErrorCode::MissingClass,
                  std::string("training set lacks label ") + labelName(label));
    }
  }

  EmotionModel model;
  model.strategy = Strategy::OAA;
  model.mode = mode;
  model.fingerprint = configFingerprint(cfg, params);
  model.pooled = trainBank(train, params, "");
  return model;
}

Prediction predictOaa(const EmotionModel& model,
                      const features::FeatureVector& v) {
  if (model.strategy != Strategy::OAA) {
    throw Error(ErrorCode::WrongStrategy, "model is not an OAA model");
  }
  return predictBank(model.pooled, v);
}

EmotionModel trainGenderDependent(const std::vector<TrainingSample>& train,
                                  const svm::SvmParams& params,
                                  const features::FeatureConfig& cfg) {
  const FeatureMode mode = uniformMode(train);

  EmotionModel model;
  model.strategy = Strategy::GenderDependent;
  model.mode = mode;
  model.fingerprint = configFingerprint(cfg, params);
  for (const Gender g : kAllGenders) {
    std::vector<TrainingSample> subset;
    for (const auto& s : train) {
      if (s.gender == g) subset.push_back(s);
    }
    if (subset.empty()) {
      throw Error(ErrorCode::MissingGender,
                  std::string("no samples with gender ") + genderName(g));
    }
    for (const EmotionLabel label : kAllEmotions) {
      const bool present = std::any_of(
          subset.begin(), subset.end(),
          [label](const TrainingSample& s) { return s.label == label; });
      if (!present) {
        throw Error(ErrorCode::MissingClassInGender,
                    std::string("gender ") + genderName(g) +
                        " lacks label " + labelName(label));
      }
    }
    model.by_gender[g] =
        trainBank(subset, params, std::string(genderName(g)) + " bank, ");
  }
  return model;
}

Prediction predictGenderDependent(const EmotionModel& model,
                                  const features::FeatureVector& v,
                                  Gender g) {
  if (model.strategy != Strategy::GenderDependent) {
    throw Error(ErrorCode::WrongStrategy,
                "model is not a gender-dependent model");
  }
  const auto it = model.by_gender.find(g);
  if (it == model.by_gender.end()) {
    throw Error(ErrorCode::UnknownGenderBank,
                std::string("model has no bank for gender ") + genderName(g));
  }
  return predictBank(it->second, v);
}

namespace {

void appendBank(std::string& body, const std::string& name,
                const ModelBank& bank) {
  body += "bank " + name + "\n";
  body += "scaler";
  for (Eigen::Index i = 0; i < bank.scaler.means.size(); ++i) {
    body += " " + formatReal(bank.scaler.means[i]);
  }
  for (Eigen::Index i = 0; i < bank.scaler.stds.size(); ++i) {
    body += " " + formatReal(bank.scaler.stds[i]);
  }
  body += "\n";
  for (const EmotionLabel label : kAllEmotions) {
    const auto& m = bank.models[static_cast<size_t>(label)];
    body += std::string("model ") + labelName(label) + " gamma " +
            formatReal(m.gamma) + " C " + formatReal(m.box_c) + " bias " +
            formatReal(m.bias) + " nsv " +
            std::to_string(m.numSupportVectors()) + "\n";
    for (Eigen::Index i = 0; i < m.numSupportVectors(); ++i) {
      body += formatReal(m.coefficients[i]);
      for (Eigen::Index j = 0; j < m.dim(); ++j) {
        body += " " + formatReal(m.support_vectors(j, i));
      }
      body += "\n";
    }
  }
}

// Line cursor over the decoded body; any structural surprise is a
// TruncatedModel, so a caller never sees a partially filled model.
struct Reader {
  std::vector<std::string> lines;
  size_t next = 0;

  std::istringstream take(const std::string& expect_head) {
    if (next >= lines.size()) {
      throw Error(ErrorCode::TruncatedModel,
                  "file ends before a " + expect_head + " line");
    }
    std::istringstream ss(lines[next++]);
    std::string head;
    if (!(ss >> head) || head != expect_head) {
      throw Error(ErrorCode::TruncatedModel,
                  "expected a " + expect_head + " line");
    }
    return ss;
  }
};

double takeReal(std::istringstream& ss, const std::string& what) {
  double value = 0.0;
  if (!(ss >> value)) {
    throw Error(ErrorCode::TruncatedModel, "missing " + what);
  }
  return value;
}

std::string takeWord(std::istringstream& ss, const std::string& what) {
  std::string word;
  if (!(ss >> word)) {
    throw Error(ErrorCode::TruncatedModel, "missing " + what);
  }
  return word;
}

void expectKeyword(std::istringstream& ss, const std::string& keyword) {
  if (takeWord(ss, "keyword " + keyword) != keyword) {
    throw Error(ErrorCode::TruncatedModel, "expected keyword " + keyword);
  }
}

ModelBank readBank(Reader& reader, Eigen::Index dim) {
  ModelBank bank;
  std::istringstream scaler_line = reader.take("scaler");
  bank.scaler.means.resize(dim);
  bank.scaler.stds.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    bank.scaler.means[i] = takeReal(scaler_line, "scaler mean");
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    bank.scaler.stds[i] = takeReal(scaler_line, "scaler std");
  }
  for (const EmotionLabel label : kAllEmotions) {
    std::istringstream head = reader.take("model");
    if (takeWord(head, "model label") != labelName(label)) {
      throw Error(ErrorCode::TruncatedModel,
                  "model blocks out of canonical label order");
    }
    auto& m = bank.models[static_cast<size_t>(label)];
    expectKeyword(head, "gamma");
    m.gamma = takeReal(head, "gamma value");
    expectKeyword(head, "C");
    m.box_c = takeReal(head, "C value");
    expectKeyword(head, "bias");
    m.bias = takeReal(head, "bias value");
    expectKeyword(head, "nsv");
    const double nsv_raw = takeReal(head, "support vector count");
    const auto nsv = static_cast<Eigen::Index>(nsv_raw);
    if (nsv < 0 || static_cast<double>(nsv) != nsv_raw) {
      throw Error(ErrorCode::TruncatedModel, "bad support vector count");
    }
    m.support_vectors.resize(dim, nsv);
    m.coefficients.resize(nsv);
    for (Eigen::Index i = 0; i < nsv; ++i) {
      if (reader.next >= reader.lines.size()) {
        throw Error(ErrorCode::TruncatedModel,
                    "file ends inside a support vector block");
      }
      std::istringstream row(reader.lines[reader.next++]);
      m.coefficients[i] = takeReal(row, "support vector coefficient");
      for (Eigen::Index j = 0; j < dim; ++j) {
        m.support_vectors(j, i) = takeReal(row, "support vector component");
      }
    }
  }
  return bank;
}

}  // namespace

void saveModel(const EmotionModel& model, const std::string& path) {
  std::string body = std::string(kMagic) + "\n";
  const bool oaa = model.strategy == Strategy::OAA;
  body += std::string("strategy ") + (oaa ? "OAA" : "GD") + " mode " +
          modeName(model.mode) + " dim " + std::to_string(model.dim()) +
          " fingerprint " +
          (model.fingerprint.empty() ? "0" : model.fingerprint) + "\n";
  if (oaa) {
    appendBank(body, "ALL", model.pooled);
  } else {
    for (const auto& [gender, bank] : model.by_gender) {
      appendBank(body, genderName(gender), bank);
    }
  }
  body += "checksum " + hex64(fnv1a64(body)) + "\n";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << body) || !out.flush()) {
    throw Error(ErrorCode::Io, "cannot write " + path);
  }
}

EmotionModel loadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();

  const size_t first_eol = bytes.find('\n');
  const std::string magic =
      first_eol == std::string::npos ? bytes : bytes.substr(0, first_eol);
  if (magic != kMagic) {
    if (magic.rfind("SERSVM v", 0) == 0) {
      throw Error(ErrorCode::VersionUnsupported,
                  "unknown model version \"" + magic + "\"");
    }
    throw Error(ErrorCode::BadMagic, "not a model file");
  }

  const size_t tail_pos = bytes.rfind("\nchecksum ");
  if (tail_pos == std::string::npos) {
    throw Error(ErrorCode::TruncatedModel, "no checksum line");
  }
  const std::string body = bytes.substr(0, tail_pos + 1);
  std::istringstream tail(bytes.substr(tail_pos + 1));
  expectKeyword(tail, "checksum");
  const std::string stored = takeWord(tail, "checksum value");
  if (stored != hex64(fnv1a64(body))) {
    throw Error(ErrorCode::ChecksumMismatch,
                "model content does not match its checksum");
  }

  Reader reader;
  std::istringstream body_stream(body);
  std::string line;
  while (std::getline(body_stream, line)) reader.lines.push_back(line);
  reader.next = 1;  // the magic line is already validated

  std::istringstream header = reader.take("strategy");
  const std::string strategy = takeWord(header, "strategy value");
  if (strategy != "OAA" && strategy != "GD") {
    throw Error(ErrorCode::TruncatedModel, "unknown strategy " + strategy);
  }
  expectKeyword(header, "mode");
  const std::string mode_word = takeWord(header, "mode value");
  expectKeyword(header, "dim");
  const double dim_raw = takeReal(header, "dimension");
  const auto dim = static_cast<Eigen::Index>(dim_raw);
  if (dim < 1 || static_cast<double>(dim) != dim_raw) {
    throw Error(ErrorCode::TruncatedModel, "bad dimension");
  }
  expectKeyword(header, "fingerprint");

  EmotionModel model;
  try {
    model.mode = modeFromName(mode_word);
  } catch (const Error&) {
    throw Error(ErrorCode::TruncatedModel, "unknown mode " + mode_word);
  }
  model.fingerprint = takeWord(header, "fingerprint value");

  if (strategy == "OAA") {
    model.strategy = Strategy::OAA;
    std::istringstream bank_line = reader.take("bank");
    if (takeWord(bank_line, "bank name") != "ALL") {
      throw Error(ErrorCode::TruncatedModel, "OAA model needs the ALL bank");
    }
    model.pooled = readBank(reader, dim);
  } else {
    model.strategy = Strategy::GenderDependent;
    for (const Gender g : kAllGenders) {
      std::istringstream bank_line = reader.take("bank");
      if (takeWord(bank_line, "bank name") != genderName(g)) {
        throw Error(ErrorCode::TruncatedModel,
                    "gender banks out of canonical order");
      }
      model.by_gender[g] = readBank(reader, dim);
    }
  }
  if (reader.next != reader.lines.size()) {
    throw Error(ErrorCode::TruncatedModel, "unexpected trailing lines");
  }
  return model;
}

}  // namespace classifier
}  // namespace ser
