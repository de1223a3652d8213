// ser/dataset.hpp

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

#ifndef SER_DATASET_HPP_
#define SER_DATASET_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ser/error.hpp"
#include "ser/types.hpp"

namespace ser {
namespace dataset {

// One utterance's metadata. dataset_tag and speaker_id may be empty; emotion
// and gender are always populated (from a manifest column or the filename).
struct SampleMeta {
  std::string path;
  std::string speaker_id;
  Gender gender = Gender::M;
  EmotionLabel emotion = EmotionLabel::Happy;
  std::string dataset_tag;
};

struct Dataset {
  std::vector<SampleMeta> samples;
  std::array<std::array<int, 2>, kNumEmotions> counts{};

  int countOf(EmotionLabel e, Gender g) const {
    return counts[static_cast<size_t>(e)][static_cast<size_t>(g)];
  }
  // Rebuilds counts from the sample list, keeping the two consistent.
  static Dataset fromSamples(std::vector<SampleMeta> samples);
};

// Acoustic recipe for one synthetic emotion class.
struct EmotionProfile {
  double base_pitch_hz = 0.0;
  double burst_rate_hz = 0.0;      // energy bursts per second
  double spectral_tilt = 0.5;      // per-harmonic amplitude ratio, (0, 1]
  double amplitude = 0.5;          // envelope peak, (0, 1)
  double envelope_exponent = 1.0;  // sharpness of each burst's pulse
};

// Generator settings for a labeled stand-in corpus. Start from defaults()
// or confounded(); a value-initialized SynthSpec has no usable profiles.
// samples_per_class counts files per (emotion, gender) pair.
struct SynthSpec {
  std::array<EmotionProfile, kNumEmotions> profiles{};
  std::array<double, 2> gender_pitch_offset_hz{};
  std::vector<Gender> genders;
  int samples_per_class = 25;
  double duration_s = 2.0;
  int sample_rate_hz = 16000;
  double noise_amplitude = 0.01;
  double pitch_jitter_hz = 3.0;
  double amplitude_jitter = 0.1;
  std::uint64_t seed = 7;
  std::string tag = "SYN";

  // Four well-separated classes (pitch, burst rate, tilt, and loudness all
  // differ), one gender, 25 files per class.
  static SynthSpec defaults();
  // Pitch is the only discriminating cue and the per-gender offset equals
  // the emotion spacing, so pooled classes overlap across genders while
  // per-gender classes stay cleanly separated.
  static SynthSpec confounded();
};

// Parses `<speaker>(<m|f>)_<token>...` basenames; the emotion comes from the
// first recognized token after the gender. Built-in tokens (case-insensitive):
// hotAnger/anger/angry, happy, sadness/sad, fear/panic; extra_tokens (keys
// lowercase) extend the table. Throws UnparseableName or UnknownEmotionToken.
SampleMeta parseSampleName(
    const std::string& filename,
    const std::map<std::string, EmotionLabel>& extra_tokens = {});

// CSV with header `path,emotion,gender,speaker,tag`. Empty emotion, gender,
// or speaker cells fall back to parseSampleName on the path's basename.
// Relative paths are resolved against the manifest's directory. Audio files
// are not opened. Bad rows are aggregated into one ManifestError; duplicate
// paths (on otherwise clean input) raise DuplicatePath.
Dataset loadManifest(
    const std::string& path,
    const std::map<std::string, EmotionLabel>& extra_tokens = {});

// Deterministic stratified split by (emotion, gender). Within each stratum a
// seeded shuffle picks round(train_fraction * n) train members; both halves
// keep the original sample order. A gender with no samples at all is skipped;
// an emotion missing within a present gender raises EmptyStratum.
std::pair<Dataset, Dataset> splitTrainTest(const Dataset& ds,
                                           double train_fraction,
                                           std::uint64_t seed);

// Writes amplitude-modulated harmonic tones with seeded noise as PCM-16 WAV
// files named in the `<speaker>(<g>)_<token>_<i>.wav` convention, plus a
// manifest.csv, into out_dir. Fully deterministic given spec.seed (per-file
// seed = seed xor running file index). Returns the generated Dataset.
Dataset synthCorpus(const SynthSpec& spec, const std::string& out_dir);

}  // namespace dataset
}  // namespace ser

#endif  // SER_DATASET_HPP_
