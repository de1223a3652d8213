// ser/dataset.cpp

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

#include "ser/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ser/audio.hpp"
#include "ser/features.hpp"

namespace ser {
namespace dataset {

namespace {

namespace fs = std::filesystem;

// Deterministic 64-bit generator; the standard distributions are not pinned
// across implementations, so byte-identical corpora need a fixed mapping.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, EmotionLabel>& builtinTokens() {
  static const std::map<std::string, EmotionLabel> table = {
      {"hotanger", EmotionLabel::Angry}, {"anger", EmotionLabel::Angry},
      {"angry", EmotionLabel::Angry},    {"happy", EmotionLabel::Happy},
      {"sadness", EmotionLabel::Sad},    {"sad", EmotionLabel::Sad},
      {"fear", EmotionLabel::Fear},      {"panic", EmotionLabel::Fear},
  };
  return table;
}

EmotionLabel emotionFromToken(
    const std::string& token,
    const std::map<std::string, EmotionLabel>& extra_tokens) {
  const std::string key = lower(token);
  if (const auto it = extra_tokens.find(key); it != extra_tokens.end()) {
    return it->second;
  }
  if (const auto it = builtinTokens().find(key); it != builtinTokens().end()) {
    return it->second;
  }
  throw Error(ErrorCode::UnknownEmotionToken,
              "no emotion matches token \"" + token + "\"");
}

// The token the synth generator writes for each emotion; parseSampleName
// must map it straight back.
const char* synthToken(EmotionLabel label) {
  switch (label) {
    case EmotionLabel::Happy: return "happy";
    case EmotionLabel::Sad: return "sadness";
    case EmotionLabel::Angry: return "hotAnger";
    case EmotionLabel::Fear: return "fear";
  }
  return "happy";
}

}  // namespace

Dataset Dataset::fromSamples(std::vector<SampleMeta> samples) {
  Dataset ds;
  ds.samples = std::move(samples);
  for (const auto& s : ds.samples) {
    ++ds.counts[static_cast<size_t>(s.emotion)][static_cast<size_t>(s.gender)];
  }
  return ds;
}

SampleMeta parseSampleName(
    const std::string& filename,
    const std::map<std::string, EmotionLabel>& extra_tokens) {
  const size_t open = filename.find('(');
  const size_t close = filename.find(')');
  if (open == std::string::npos || close == std::string::npos ||
      close != open + 2 || open == 0) {
    throw Error(ErrorCode::UnparseableName,
                "\"" + filename + "\" lacks the (m|f) gender marker");
  }
  const char g = static_cast<char>(
      std::tolower(static_cast<unsigned char>(filename[open + 1])));
  if (g != 'm' && g != 'f') {
    throw Error(ErrorCode::UnparseableName,
                "\"" + filename + "\" has gender letter '" +
                    filename[open + 1] + "'");
  }
  if (close + 1 >= filename.size() || filename[close + 1] != '_') {
    throw Error(ErrorCode::UnparseableName,
                "\"" + filename + "\" has no tokens after the gender marker");
  }

  SampleMeta meta;
  meta.path = filename;
  meta.speaker_id = filename.substr(0, open);
  meta.gender = g == 'm' ? Gender::M : Gender::F;

  // First recognized token after the gender marker wins.
  const std::string tail = filename.substr(close + 2);
  std::string token;
  std::istringstream tokens(tail);
  bool found = false;
  while (std::getline(tokens, token, '_')) {
    try {
      meta.emotion = emotionFromToken(token, extra_tokens);
      found = true;
      break;
    } catch (const Error&) {
    }
  }
  if (!found) {
    throw Error(ErrorCode::UnknownEmotionToken,
                "no emotion token recognized in \"" + tail + "\"");
  }
  return meta;
}

Dataset loadManifest(const std::string& path,
                     const std::map<std::string, EmotionLabel>& extra_tokens) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open manifest " + path);
  }
  const fs::path base = fs::path(path).parent_path();

  std::string line;
  if (!std::getline(in, line) || trim(line) != "path,emotion,gender,speaker,tag") {
    throw Error(ErrorCode::BadHeader,
                "manifest must start with \"path,emotion,gender,speaker,tag\"");
  }

  std::vector<SampleMeta> samples;
  std::vector<RowIssue> issues;
  std::vector<RowIssue> duplicates;
  std::set<std::string> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    std::vector<std::string> cols;
    std::string col;
    std::istringstream row(line);
    while (std::getline(row, col, ',')) cols.push_back(trim(col));
    // A trailing comma means an empty final column the splitter drops.
    if (!line.empty() && line.back() == ',') cols.push_back("");
    if (cols.size() != 5) {
      issues.push_back({line_no, "expected 5 columns, got " +
                                     std::to_string(cols.size())});
      continue;
    }
    if (cols[0].empty()) {
      issues.push_back({line_no, "empty path"});
      continue;
    }

    SampleMeta meta;
    const fs::path p(cols[0]);
    meta.path = p.is_absolute() ? p.string() : (base / p).string();
    meta.dataset_tag = cols[4];

    const bool need_emotion = cols[1].empty();
    const bool need_gender = cols[2].empty();
    const bool need_speaker = cols[3].empty();
    SampleMeta parsed;
    bool have_parsed = false;
    if (need_emotion || need_gender || need_speaker) {
      try {
        parsed = parseSampleName(p.filename().string(), extra_tokens);
        have_parsed = true;
      } catch (const Error& e) {
        if (need_emotion || need_gender) {
          issues.push_back({line_no, e.what()});
          continue;
        }
        // Only the speaker is missing; it may stay empty.
      }
    }
    try {
      meta.emotion = need_emotion ? parsed.emotion
                                  : [&] {
                                      try {
                                        return labelFromName(cols[1]);
                                      } catch (const Error&) {
                                        return emotionFromToken(cols[1],
                                                                extra_tokens);
                                      }
                                    }();
      meta.gender = need_gender ? parsed.gender : genderFromName(cols[2]);
    } catch (const Error& e) {
      issues.push_back({line_no, e.what()});
      continue;
    }
    meta.speaker_id =
        need_speaker ? (have_parsed ? parsed.speaker_id : "") : cols[3];

    if (!seen.insert(meta.path).second) {
      duplicates.push_back({line_no, "duplicate path " + meta.path});
      continue;
    }
    samples.push_back(std::move(meta));
  }

  if (!issues.empty()) {
    throw ManifestError(std::move(issues));
  }
  if (!duplicates.empty()) {
    throw Error(ErrorCode::DuplicatePath,
                "line " + std::to_string(duplicates.front().line) + ": " +
                    duplicates.front().reason);
  }
  return Dataset::fromSamples(std::move(samples));
}

std::pair<Dataset, Dataset> splitTrainTest(const Dataset& ds,
                                           double train_fraction,
                                           std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw Error(ErrorCode::BadArgument,
                "train fraction must lie strictly between 0 and 1");
  }

  std::array<bool, 2> gender_present{};
  for (const auto& s : ds.samples) {
    gender_present[static_cast<size_t>(s.gender)] = true;
  }

  std::vector<bool> in_train(ds.samples.size(), false);
  SplitMix64 rng(seed);
  for (const EmotionLabel e : kAllEmotions) {
    for (const Gender g : kAllGenders) {
      if (!gender_present[static_cast<size_t>(g)]) continue;

      std::vector<size_t> members;
      for (size_t i = 0; i < ds.samples.size(); ++i) {
        if (ds.samples[i].emotion == e && ds.samples[i].gender == g) {
          members.push_back(i);
        }
      }
      if (members.empty()) {
        throw Error(ErrorCode::EmptyStratum,
                    std::string("no samples for ") + labelName(e) +
                        " with gender " + genderName(g));
      }
      for (size_t i = members.size() - 1; i > 0; --i) {
        const size_t j = static_cast<size_t>(rng.next() % (i + 1));
        std::swap(members[i], members[j]);
      }
      const auto n_train = static_cast<size_t>(
          std::llround(train_fraction * static_cast<double>(members.size())));
      for (size_t i = 0; i < n_train && i < members.size(); ++i) {
        in_train[members[i]] = true;
      }
    }
  }

  std::vector<SampleMeta> train;
  std::vector<SampleMeta> test;
  for (size_t i = 0; i < ds.samples.size(); ++i) {
    (in_train[i] ? train : test).push_back(ds.samples[i]);
  }
  return {Dataset::fromSamples(std::move(train)),
          Dataset::fromSamples(std::move(test))};
}

SynthSpec SynthSpec::defaults() {
  SynthSpec spec;
  spec.profiles[static_cast<size_t>(EmotionLabel::Happy)] =
      {220.0, 3.0, 0.5, 0.55, 1.0};
  spec.profiles[static_cast<size_t>(EmotionLabel::Sad)] =
      {125.0, 1.2, 0.2, 0.35, 1.5};
  spec.profiles[static_cast<size_t>(EmotionLabel::Angry)] =
      {180.0, 4.0, 0.75, 0.8, 0.7};
  spec.profiles[static_cast<size_t>(EmotionLabel::Fear)] =
      {280.0, 5.0, 0.4, 0.45, 1.0};
  spec.gender_pitch_offset_hz = {-40.0, 40.0};
  spec.genders = {Gender::M};
  return spec;
}

SynthSpec SynthSpec::confounded() {
  SynthSpec spec;
  // Emotion spacing equals the gender offset, so each pooled class shares a
  // pitch cluster with its neighbour from the other gender.
  const std::array<double, kNumEmotions> pitches = {110.0, 140.0, 170.0, 200.0};
  for (size_t i = 0; i < kNumEmotions; ++i) {
    spec.profiles[i] = {pitches[i], 2.5, 0.5, 0.5, 1.0};
  }
  spec.gender_pitch_offset_hz = {0.0, 30.0};
  spec.genders = {Gender::M, Gender::F};
  return spec;
}

Dataset synthCorpus(const SynthSpec& spec, const std::string& out_dir) {
  if (spec.samples_per_class < 1) {
    throw Error(ErrorCode::BadArgument, "need at least one sample per class");
  }
  if (spec.genders.empty()) {
    throw Error(ErrorCode::BadArgument, "need at least one gender");
  }
  if (spec.duration_s <= 0.0 || spec.sample_rate_hz < 8000) {
    throw Error(ErrorCode::BadArgument, "bad duration or sample rate");
  }
  const features::FeatureConfig band;
  for (const Gender g : spec.genders) {
    const double offset = spec.gender_pitch_offset_hz[static_cast<size_t>(g)];
    for (const auto& p : spec.profiles) {
      const double min_pitch = p.base_pitch_hz + offset - spec.pitch_jitter_hz;
      const double max_pitch = p.base_pitch_hz + offset + spec.pitch_jitter_hz;
      if (min_pitch < band.pitch_f_min_hz || max_pitch > band.pitch_f_max_hz) {
        throw Error(ErrorCode::BadArgument,
                    "profile pitch leaves the analyzable band");
      }
      if (p.amplitude * (1.0 + spec.amplitude_jitter) + spec.noise_amplitude >=
          1.0) {
        throw Error(ErrorCode::BadArgument,
                    "profile amplitude would clip after jitter and noise");
      }
      if (p.burst_rate_hz <= 0.0 || p.spectral_tilt <= 0.0 ||
          p.spectral_tilt > 1.0 || p.envelope_exponent <= 0.0) {
        throw Error(ErrorCode::BadArgument, "malformed emotion profile");
      }
    }
  }

  std::error_code fs_error;
  fs::create_directories(out_dir, fs_error);
  if (fs_error) {
    throw Error(ErrorCode::Io, "cannot create " + out_dir);
  }

  const double pi = std::acos(-1.0);
  const auto n_samples =
      static_cast<Eigen::Index>(std::llround(spec.duration_s *
                                             spec.sample_rate_hz));
  std::vector<SampleMeta> samples;
  std::vector<std::string> written;
  // Never leave a half-written corpus behind: on any failure below, every
  // file created so far is removed before the error propagates.
  struct Cleanup {
    const std::vector<std::string>& paths;
    bool armed = true;
    ~Cleanup() {
      if (!armed) return;
      for (const auto& p : paths) {
        std::error_code ignored;
        fs::remove(p, ignored);
      }
    }
  } cleanup{written};
  std::string manifest = "path,emotion,gender,speaker,tag\n";
  std::uint64_t file_index = 0;
  for (const EmotionLabel e : kAllEmotions) {
    const auto& profile = spec.profiles[static_cast<size_t>(e)];
    for (const Gender g : spec.genders) {
      const std::string speaker = g == Gender::M ? "sm_001" : "sf_001";
      const double offset =
          spec.gender_pitch_offset_hz[static_cast<size_t>(g)];
      for (int i = 1; i <= spec.samples_per_class; ++i, ++file_index) {
        SplitMix64 rng(spec.seed ^ file_index);
        const double pitch = profile.base_pitch_hz + offset +
                             spec.pitch_jitter_hz * rng.symmetric();
        const double amplitude =
            profile.amplitude *
            (1.0 + spec.amplitude_jitter * rng.symmetric());

        // Harmonic stack with geometric rolloff, weights normalized so the
        // tone stays within [-1, 1] before the envelope.
        const int max_harmonics = std::max(
            1, static_cast<int>(0.45 * spec.sample_rate_hz / pitch));
        const int n_harm = std::min(8, max_harmonics);
        std::vector<double> weight(static_cast<size_t>(n_harm));
        std::vector<double> phase(static_cast<size_t>(n_harm));
        double weight_sum = 0.0;
        for (int h = 0; h < n_harm; ++h) {
          weight[h] = std::pow(profile.spectral_tilt, h);
          weight_sum += weight[h];
          phase[h] = 2.0 * pi * rng.uniform();
        }
        for (double& w : weight) w /= weight_sum;

        const double burst_period = 1.0 / profile.burst_rate_hz;
        audio::AudioSignal signal;
        signal.sample_rate_hz = spec.sample_rate_hz;
        signal.samples.resize(n_samples);
        for (Eigen::Index t = 0; t < n_samples; ++t) {
          const double time = static_cast<double>(t) / spec.sample_rate_hz;
          const double in_period = std::fmod(time, burst_period);
          const double u = in_period / (0.5 * burst_period);
          const double envelope =
              u < 1.0 ? std::pow(std::sin(pi * u), profile.envelope_exponent)
                      : 0.0;
          double tone = 0.0;
          for (int h = 0; h < n_harm; ++h) {
            tone += weight[h] *
                    std::sin(2.0 * pi * (h + 1) * pitch * time + phase[h]);
          }
          signal.samples[t] = amplitude * envelope * tone +
                              spec.noise_amplitude * rng.symmetric();
        }

        const std::string name = speaker + "(" +
                                 (g == Gender::M ? "m" : "f") + ")_" +
                                 synthToken(e) + "_" + std::to_string(i) +
                                 ".wav";
        const std::string full = (fs::path(out_dir) / name).string();
        audio::writeWav(full, signal);
        written.push_back(full);

        SampleMeta meta;
        meta.path = full;
        meta.speaker_id = speaker;
        meta.gender = g;
        meta.emotion = e;
        meta.dataset_tag = spec.tag;
        samples.push_back(meta);
        manifest += name + "," + labelName(e) + "," + genderName(g) + "," +
                    speaker + "," + spec.tag + "\n";
      }
    }
  }

  const std::string manifest_path =
      (fs::path(out_dir) / "manifest.csv").string();
  written.push_back(manifest_path);
  std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << manifest) || !out.flush()) {
    throw Error(ErrorCode::Io, "cannot write " + manifest_path);
  }
  cleanup.armed = false;
  return Dataset::fromSamples(std::move(samples));
}

}  // namespace dataset
}  // namespace ser
