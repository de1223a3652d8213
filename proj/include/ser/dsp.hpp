// ser/dsp.hpp

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

#ifndef SER_DSP_HPP_
#define SER_DSP_HPP_

#include <Eigen/Core>

#include "ser/audio.hpp"
#include "ser/error.hpp"

namespace ser {
namespace dsp {

// Frames stored one per column; frame i starts at sample i * hop_len of the
// source signal, trailing partial frames discarded. source_len is the sample
// count of the signal that was framed (used for utterance durations).
struct FrameSequence {
  Eigen::MatrixXd frames;  // frame_len x n_frames
  Eigen::Index hop_len = 0;
  int sample_rate_hz = 0;
  Eigen::Index source_len = 0;

  Eigen::Index frameLen() const { return frames.rows(); }
  Eigen::Index numFrames() const { return frames.cols(); }
  double durationSeconds() const {
    return static_cast<double>(source_len) / sample_rate_hz;
  }
};

// One-sided magnitude spectrum: bins[k] = |X[k]| for k = 0..nfft/2.
struct MagnitudeSpectrum {
  Eigen::VectorXd bins;
  Eigen::Index nfft = 0;
  int sample_rate_hz = 0;
};

// frame_len = round(frame_ms * rate / 1000), hop likewise; requires
// hop_ms <= frame_ms and at least one full frame. Throws SignalTooShort.
FrameSequence frameSignal(const audio::AudioSignal& signal, double frame_ms,
                          double hop_ms);

// y[n] = x[n] * (0.54 - 0.46 cos(2 pi n / (N-1))), N >= 2.
Eigen::VectorXd hammingWindow(const Eigen::Ref<const Eigen::VectorXd>& frame);

// Zero-pads to nfft and runs an in-place radix-2 transform; nfft must be a
// power of two >= frame.size(). Throws BadNfft.
MagnitudeSpectrum fftMagnitude(const Eigen::Ref<const Eigen::VectorXd>& frame,
                               Eigen::Index nfft, int sample_rate_hz);

// Biased, unnormalized autocorrelation:
// r[tau] = sum_{n=0}^{N-1-tau} x[n] x[n+tau], tau = 0..max_lag < N.
Eigen::VectorXd autocorrelation(const Eigen::Ref<const Eigen::VectorXd>& frame,
                                Eigen::Index max_lag);

inline bool isPowerOfTwo(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

// Smallest power of two >= n.
Eigen::Index nextPowerOfTwo(Eigen::Index n);

}  // namespace dsp
}  // namespace ser

#endif  // SER_DSP_HPP_
