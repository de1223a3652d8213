// ser/audio.hpp

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

#ifndef SER_AUDIO_HPP_
#define SER_AUDIO_HPP_

#include <Eigen/Core>
#include <string>

#include "ser/error.hpp"

namespace ser {
namespace audio {

// A decoded mono utterance. Decoder output always satisfies
// |samples[n]| <= 1, sample_rate_hz >= 8000 and samples.size() > 0.
// preEmphasize() output is unclamped and may leave the unit range.
struct AudioSignal {
  Eigen::VectorXd samples;
  int sample_rate_hz = 0;
  std::string source_path;

  double durationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Reads a RIFF/WAVE file holding 16-bit integer PCM, mono or stereo, at any
// rate >= 8000 Hz. Samples are scaled by 1/32768; stereo is downmixed by the
// per-sample mean of the two channels. Unknown chunks are skipped by size.
// Throws FileNotFound, UnsupportedFormat or CorruptHeader.
AudioSignal readWav(const std::string& path);

// Writes mono 16-bit PCM. Samples are clamped to [-1, 1] and scaled by 32767.
// Throws Io.
void writeWav(const std::string& path, const AudioSignal& signal);

// y[0] = x[0], y[n] = x[n] - alpha * x[n-1]. Requires alpha in [0, 1).
AudioSignal preEmphasize(const AudioSignal& signal, double alpha);

}  // namespace audio
}  // namespace ser

#endif  // SER_AUDIO_HPP_
