// ser/dsp.cpp

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

#include "ser/dsp.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace ser {
namespace dsp {

FrameSequence frameSignal(const audio::AudioSignal& signal, double frame_ms,
                          double hop_ms) {
  if (!(frame_ms > 0.0) || !(hop_ms > 0.0) || hop_ms > frame_ms) {
    throw Error(ErrorCode::BadArgument,
                "need 0 < hop_ms <= frame_ms, got hop " + std::to_string(hop_ms) +
                    " frame " + std::to_string(frame_ms));
  }
  const int rate = signal.sample_rate_hz;
  const auto frame_len =
      static_cast<Eigen::Index>(std::llround(frame_ms * rate / 1000.0));
  const auto hop_len =
      static_cast<Eigen::Index>(std::llround(hop_ms * rate / 1000.0));
  const Eigen::Index n = signal.samples.size();
  if (n < frame_len) {
    throw Error(ErrorCode::SignalTooShort,
                std::to_string(n) + " samples, need " + std::to_string(frame_len) +
                    " for one frame");
  }
  const Eigen::Index n_frames = (n - frame_len) / hop_len + 1;

  FrameSequence out;
  out.hop_len = hop_len;
  out.sample_rate_hz = rate;
  out.source_len = n;
  out.frames.resize(frame_len, n_frames);
  for (Eigen::Index i = 0; i < n_frames; ++i) {
    out.frames.col(i) = signal.samples.segment(i * hop_len, frame_len);
  }
  return out;
}

Eigen::VectorXd hammingWindow(const Eigen::Ref<const Eigen::VectorXd>& frame) {
  const Eigen::Index n = frame.size();
  if (n < 2) {
    throw Error(ErrorCode::FrameTooShort, "Hamming window needs >= 2 samples");
  }
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n - 1);
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = frame[i] * (0.54 - 0.46 * std::cos(step * static_cast<double>(i)));
  }
  return out;
}

namespace {

// Iterative in-place radix-2 decimation-in-time transform.
void fftInPlace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

MagnitudeSpectrum fftMagnitude(const Eigen::Ref<const Eigen::VectorXd>& frame,
                               Eigen::Index nfft, int sample_rate_hz) {
  if (!isPowerOfTwo(nfft) || nfft < frame.size()) {
    throw Error(ErrorCode::BadNfft,
                "nfft " + std::to_string(nfft) + " not a power of two >= frame size " +
                    std::to_string(frame.size()));
  }
  std::vector<std::complex<double>> a(static_cast<std::size_t>(nfft));
  for (Eigen::Index i = 0; i < frame.size(); ++i) {
    a[static_cast<std::size_t>(i)] = frame[i];
  }
  fftInPlace(a);

  MagnitudeSpectrum out;
  out.nfft = nfft;
  out.sample_rate_hz = sample_rate_hz;
  out.bins.resize(nfft / 2 + 1);
  for (Eigen::Index k = 0; k <= nfft / 2; ++k) {
    out.bins[k] = std::abs(a[static_cast<std::size_t>(k)]);
  }
  return out;
}

Eigen::VectorXd autocorrelation(const Eigen::Ref<const Eigen::VectorXd>& frame,
                                Eigen::Index max_lag) {
  const Eigen::Index n = frame.size();
  if (max_lag < 0 || max_lag >= n) {
    throw Error(ErrorCode::LagOutOfRange,
                "max_lag " + std::to_string(max_lag) + " out of range for frame of " +
                    std::to_string(n));
  }
  Eigen::VectorXd r(max_lag + 1);
  for (Eigen::Index tau = 0; tau <= max_lag; ++tau) {
    r[tau] = frame.head(n - tau).dot(frame.tail(n - tau));
  }
  return r;
}

Eigen::Index nextPowerOfTwo(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace dsp
}  // namespace ser
