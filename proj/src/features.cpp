// ser/features.cpp

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

#include "ser/features.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ser {
namespace features {

namespace {

double melFromHz(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double hzFromMel(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Orthonormal DCT-II matrix, n_ceps x n_in.
Eigen::MatrixXd dctMatrix(int n_ceps, int n_in) {
  Eigen::MatrixXd dct(n_ceps, n_in);
  const double pi = std::acos(-1.0);
  for (int k = 0; k < n_ceps; ++k) {
    const double scale =
        k == 0 ? std::sqrt(1.0 / n_in) : std::sqrt(2.0 / n_in);
    for (int m = 0; m < n_in; ++m) {
      dct(k, m) = scale * std::cos(pi * k * (2 * m + 1) / (2.0 * n_in));
    }
  }
  return dct;
}

}  // namespace

std::vector<std::string> featureLayout(const FeatureConfig& cfg) {
  std::vector<std::string> names = {
      "energy_mean", "energy_max", "energy_min", "energy_range", "energy_std",
      "pitch_mean",  "pitch_max",  "pitch_min",  "pitch_range",  "pitch_std",
      "speech_rate"};
  const bool mfcc = cfg.mode == FeatureMode::MFCC;
  const int n_ceps = mfcc ? cfg.n_mfcc : cfg.n_lpcc;
  const char* stem = mfcc ? "mfcc" : "lpcc";
  // MFCC indexing starts at c0, LPCC at c1.
  const int base = mfcc ? 0 : 1;
  for (int i = 0; i < n_ceps; ++i) {
    names.push_back(std::string(stem) + std::to_string(base + i) + "_mean");
  }
  for (int i = 0; i < n_ceps; ++i) {
    names.push_back(std::string(stem) + std::to_string(base + i) + "_std");
  }
  return names;
}

double frameEnergy(const Eigen::Ref<const Eigen::VectorXd>& frame) {
  if (frame.size() == 0) {
    throw Error(ErrorCode::EmptyFrame, "cannot take the energy of an empty frame");
  }
  return frame.squaredNorm();
}

TrackStats trackStats(const Eigen::Ref<const Eigen::VectorXd>& track) {
  if (track.size() == 0) {
    throw Error(ErrorCode::EmptyTrack, "cannot summarize an empty track");
  }
  TrackStats s;
  s.mean = track.mean();
  s.max = track.maxCoeff();
  s.min = track.minCoeff();
  s.range = s.max - s.min;
  s.std = std::sqrt((track.array() - s.mean).square().mean());
  return s;
}

PitchTrack pitchTrack(const dsp::FrameSequence& frames,
                      const FeatureConfig& cfg) {
  if (cfg.pitch_f_min_hz <= 0.0 || cfg.pitch_f_max_hz <= cfg.pitch_f_min_hz) {
    throw Error(ErrorCode::BadPitchBand, "pitch band must satisfy 0 < f_min < f_max");
  }
  const double rate = frames.sample_rate_hz;
  const Eigen::Index n = frames.frameLen();
  const auto lag_min = static_cast<Eigen::Index>(
      std::ceil(rate / cfg.pitch_f_max_hz));
  const Eigen::Index lag_max = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(std::floor(rate / cfg.pitch_f_min_hz)), n - 1);
  if (lag_min > lag_max) {
    throw Error(ErrorCode::BadPitchBand,
                "frames are too short for the requested pitch band");
  }

  PitchTrack out;
  out.pitch_hz = Eigen::VectorXd::Zero(frames.numFrames());
  Eigen::Index n_voiced = 0;
  for (Eigen::Index i = 0; i < frames.numFrames(); ++i) {
    const Eigen::VectorXd r = dsp::autocorrelation(frames.frames.col(i), lag_max);
    if (r[0] <= cfg.energy_floor) continue;
    Eigen::Index best = lag_min;
    for (Eigen::Index tau = lag_min + 1; tau <= lag_max; ++tau) {
      if (r[tau] > r[best]) best = tau;
    }
    if (r[best] / r[0] < cfg.voicing_threshold) continue;
    out.pitch_hz[i] = rate / static_cast<double>(best);
    ++n_voiced;
  }
  if (frames.numFrames() > 0) {
    out.voiced_fraction =
        static_cast<double>(n_voiced) / static_cast<double>(frames.numFrames());
  }
  return out;
}

TrackStats pitchStats(const PitchTrack& track) {
  std::vector<double> voiced;
  voiced.reserve(static_cast<size_t>(track.pitch_hz.size()));
  for (Eigen::Index i = 0; i < track.pitch_hz.size(); ++i) {
    if (track.pitch_hz[i] > 0.0) voiced.push_back(track.pitch_hz[i]);
  }
  if (voiced.empty()) return TrackStats{};
  const Eigen::Map<const Eigen::VectorXd> v(voiced.data(),
                                            static_cast<Eigen::Index>(voiced.size()));
  return trackStats(v);
}

double speechRate(const dsp::FrameSequence& frames, const FeatureConfig& cfg) {
  const Eigen::Index m = frames.numFrames();
  if (m == 0 || frames.source_len == 0) return 0.0;

  Eigen::VectorXd energy(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    energy[i] = frameEnergy(frames.frames.col(i));
  }

  Eigen::VectorXd smooth(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - 2);
    const Eigen::Index hi = std::min<Eigen::Index>(m - 1, i + 2);
    smooth[i] = energy.segment(lo, hi - lo + 1).mean();
  }

  const double peak = smooth.maxCoeff();
  if (peak <= cfg.energy_floor) return 0.0;

  const double threshold = 0.3 * peak;
  int bursts = 0;
  bool inside = false;
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool active = smooth[i] >= threshold;
    if (active && !inside) ++bursts;
    inside = active;
  }

  const double duration =
      static_cast<double>(frames.source_len) / frames.sample_rate_hz;
  return bursts / duration;
}

Eigen::MatrixXd melFilterbank(Eigen::Index nfft, int sample_rate_hz,
                              int n_filters, double f_low_hz,
                              double f_high_hz) {
  if (nfft < 2 || !dsp::isPowerOfTwo(nfft)) {
    throw Error(ErrorCode::BadNfft, "nfft must be a power of two >= 2");
  }
  if (n_filters < 1) {
    throw Error(ErrorCode::BadBand, "need at least one mel filter");
  }
  if (f_low_hz < 0.0 || f_high_hz <= f_low_hz ||
      f_high_hz > sample_rate_hz / 2.0) {
    throw Error(ErrorCode::BadBand,
                "mel band must satisfy 0 <= f_low < f_high <= rate/2");
  }

  // n_filters + 2 grid points equally spaced in mel; filter m rises over
  // [f_{m-1}, f_m] and falls over [f_m, f_{m+1}], linear in Hz, peak 1.
  const double mel_low = melFromHz(f_low_hz);
  const double mel_high = melFromHz(f_high_hz);
  Eigen::VectorXd edges(n_filters + 2);
  for (int i = 0; i < n_filters + 2; ++i) {
    edges[i] = hzFromMel(mel_low + (mel_high - mel_low) * i / (n_filters + 1));
  }

  const Eigen::Index n_bins = nfft / 2 + 1;
  Eigen::MatrixXd bank = Eigen::MatrixXd::Zero(n_filters, n_bins);
  for (int f = 0; f < n_filters; ++f) {
    const double left = edges[f];
    const double center = edges[f + 1];
    const double right = edges[f + 2];
    for (Eigen::Index k = 0; k < n_bins; ++k) {
      const double hz = static_cast<double>(k) * sample_rate_hz /
                        static_cast<double>(nfft);
      if (hz <= left || hz >= right) continue;
      bank(f, k) = hz <= center ? (hz - left) / (center - left)
                                : (right - hz) / (right - center);
    }
  }
  return bank;
}

Eigen::VectorXd mfccFrame(const dsp::MagnitudeSpectrum& spectrum,
                          const Eigen::MatrixXd& filterbank, int n_ceps,
                          double energy_floor) {
  if (filterbank.cols() != spectrum.bins.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "filterbank was built for a different nfft");
  }
  if (n_ceps < 1 || n_ceps > filterbank.rows()) {
    throw Error(ErrorCode::BadArgument,
                "n_ceps must lie in [1, n_filters]");
  }
  Eigen::VectorXd fb_energy =
      filterbank * spectrum.bins.array().square().matrix();
  Eigen::VectorXd log_energy =
      fb_energy.array().max(energy_floor).log().matrix();
  const Eigen::MatrixXd dct =
      dctMatrix(n_ceps, static_cast<int>(filterbank.rows()));
  return dct * log_energy;
}

std::pair<Eigen::VectorXd, double> lpcLevinson(
    const Eigen::Ref<const Eigen::VectorXd>& frame, int order,
    double energy_floor) {
  if (order < 1) {
    throw Error(ErrorCode::BadArgument, "LPC order must be positive");
  }
  if (frame.size() <= order) {
    throw Error(ErrorCode::FrameTooShort,
                "frame must be longer than the LPC order");
  }
  const Eigen::VectorXd r = dsp::autocorrelation(frame, order);
  if (r[0] <= energy_floor) {
    throw Error(ErrorCode::DegenerateFrame,
                "frame energy too low for LPC analysis");
  }

  // Levinson-Durbin with the positive predictor convention
  // xhat[n] = sum_k a[k] x[n-k]: the classical recursion yields coefficients
  // of 1 - sum a[k] z^-k, so reflection updates carry a sign flip here.
  Eigen::VectorXd a = Eigen::VectorXd::Zero(order);
  double err = r[0];
  for (int i = 0; i < order; ++i) {
    double acc = r[i + 1];
    for (int j = 0; j < i; ++j) acc -= a[j] * r[i - j];
    const double k = acc / err;
    if (!(std::abs(k) < 1.0)) {
      throw Error(ErrorCode::NumericalBreakdown,
                  "reflection coefficient left the unit interval");
    }
    Eigen::VectorXd prev = a.head(i).eval();
    for (int j = 0; j < i; ++j) a[j] = prev[j] - k * prev[i - 1 - j];
    a[i] = k;
    err *= 1.0 - k * k;
    if (err <= 0.0) {
      throw Error(ErrorCode::NumericalBreakdown,
                  "prediction error collapsed to zero");
    }
  }
  return {a, err};
}

Eigen::VectorXd lpccFromLpc(const Eigen::Ref<const Eigen::VectorXd>& lpc,
                            int n_ceps) {
  if (n_ceps < 1) {
    throw Error(ErrorCode::BadArgument, "need at least one cepstral coefficient");
  }
  const Eigen::Index order = lpc.size();
  Eigen::VectorXd c(n_ceps);
  for (int n = 1; n <= n_ceps; ++n) {
    double acc = n <= order ? lpc[n - 1] : 0.0;
    for (int k = 1; k < n; ++k) {
      if (n - k <= order) {
        acc += (static_cast<double>(k) / n) * c[k - 1] * lpc[n - k - 1];
      }
    }
    c[n - 1] = acc;
  }
  return c;
}

FeatureVector extractFeatures(const audio::AudioSignal& signal,
                              const FeatureConfig& cfg) {
  const audio::AudioSignal emphasized =
      audio::preEmphasize(signal, cfg.pre_emphasis_alpha);
  const dsp::FrameSequence frames =
      dsp::frameSignal(emphasized, cfg.frame_ms, cfg.hop_ms);
  const Eigen::Index m = frames.numFrames();

  // Prosodic block on raw (unwindowed) frames.
  Eigen::VectorXd energy(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    energy[i] = frameEnergy(frames.frames.col(i));
  }
  const TrackStats e_stats = trackStats(energy);
  const TrackStats p_stats = pitchStats(pitchTrack(frames, cfg));
  const double rate_feature = speechRate(frames, cfg);

  // Cepstral block on Hamming-windowed frames. Windowing a ones vector
  // yields the window coefficients themselves.
  const Eigen::VectorXd window =
      dsp::hammingWindow(Eigen::VectorXd::Ones(frames.frameLen()));
  const bool mfcc = cfg.mode == FeatureMode::MFCC;
  const int n_ceps = mfcc ? cfg.n_mfcc : cfg.n_lpcc;
  Eigen::Index nfft = cfg.nfft;
  Eigen::MatrixXd bank;
  if (mfcc) {
    if (nfft == 0) nfft = dsp::nextPowerOfTwo(frames.frameLen());
    bank = melFilterbank(nfft, frames.sample_rate_hz, cfg.n_mel_filters, 0.0,
                         frames.sample_rate_hz / 2.0);
  }

  Eigen::MatrixXd ceps(n_ceps, m);
  Eigen::Index n_ok = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::VectorXd windowed =
        frames.frames.col(i).cwiseProduct(window);
    if (mfcc) {
      const dsp::MagnitudeSpectrum spec =
          dsp::fftMagnitude(windowed, nfft, frames.sample_rate_hz);
      ceps.col(n_ok++) = mfccFrame(spec, bank, n_ceps, cfg.energy_floor);
    } else {
      try {
        const auto [lpc, gain] =
            lpcLevinson(windowed, cfg.lpc_order, cfg.energy_floor);
        (void)gain;
        ceps.col(n_ok++) = lpccFromLpc(lpc, n_ceps);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateFrame &&
            e.code() != ErrorCode::NumericalBreakdown) {
          throw;
        }
      }
    }
  }
  if (n_ok == 0) {
    throw Error(ErrorCode::NoAnalyzableFrames,
                "no frame survived cepstral analysis");
  }

  FeatureVector out;
  out.mode = cfg.mode;
  out.values.resize(cfg.dimension());
  out.values.segment(0, 5) << e_stats.mean, e_stats.max, e_stats.min,
      e_stats.range, e_stats.std;
  out.values.segment(5, 5) << p_stats.mean, p_stats.max, p_stats.min,
      p_stats.range, p_stats.std;
  out.values[10] = rate_feature;
  for (int k = 0; k < n_ceps; ++k) {
    const TrackStats cs = trackStats(ceps.row(k).head(n_ok).transpose());
    out.values[11 + k] = cs.mean;
    out.values[11 + n_ceps + k] = cs.std;
  }
  return out;
}

}  // namespace features
}  // namespace ser
