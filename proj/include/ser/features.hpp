// ser/features.hpp

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

#ifndef SER_FEATURES_HPP_
#define SER_FEATURES_HPP_

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "ser/audio.hpp"
#include "ser/dsp.hpp"
#include "ser/error.hpp"
#include "ser/types.hpp"

namespace ser {
namespace features {

// Population statistics of a track. range = max - min.
struct TrackStats {
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
  double range = 0.0;
  double std = 0.0;
};

// Per-frame fundamental frequency in Hz; 0.0 marks an unvoiced frame.
struct PitchTrack {
  Eigen::VectorXd pitch_hz;
  double voiced_fraction = 0.0;
};

// All knobs of the extraction pipeline. nfft = 0 means "smallest power of
// two >= frame length". The mel filterbank spans [0, rate/2].
struct FeatureConfig {
  double frame_ms = 60.0;
  double hop_ms = 30.0;
  double pre_emphasis_alpha = 0.97;
  Eigen::Index nfft = 0;
  int n_mel_filters = 26;
  int n_mfcc = 13;
  int lpc_order = 12;
  int n_lpcc = 12;
  double pitch_f_min_hz = 50.0;
  double pitch_f_max_hz = 400.0;
  double voicing_threshold = 0.3;
  double energy_floor = 1e-10;
  FeatureMode mode = FeatureMode::MFCC;

  // Prosodic block (5 energy stats + 5 pitch stats + speech rate) plus mean
  // and std of each cepstral coefficient: 37 for MFCC, 35 for LPCC at defaults.
  Eigen::Index dimension() const {
    const int n_ceps = mode == FeatureMode::MFCC ? n_mfcc : n_lpcc;
    return 11 + 2 * static_cast<Eigen::Index>(n_ceps);
  }
};

// One utterance-level vector. Component order is fixed and published by
// featureLayout(): energy mean/max/min/range/std, pitch mean/max/min/range/std,
// speech rate, cepstral means c0..c{n-1} (c1..cn for LPCC), cepstral stds.
struct FeatureVector {
  Eigen::VectorXd values;
  FeatureMode mode = FeatureMode::MFCC;
};

std::vector<std::string> featureLayout(const FeatureConfig& cfg);

// E = sum x[n]^2 over the frame. Throws EmptyFrame.
double frameEnergy(const Eigen::Ref<const Eigen::VectorXd>& frame);

TrackStats trackStats(const Eigen::Ref<const Eigen::VectorXd>& track);

// Autocorrelation peak picking over integer lags in
// [rate/f_max, rate/f_min]; a frame is voiced iff r[tau*]/r[0] >=
// voicing_threshold and r[0] > energy_floor, and its pitch is rate/tau*.
PitchTrack pitchTrack(const dsp::FrameSequence& frames, const FeatureConfig& cfg);

// Stats over voiced entries only; an all-unvoiced track yields all zeros.
TrackStats pitchStats(const PitchTrack& track);

// Energy bursts per second. Per-frame energies are smoothed with a centered
// five-frame moving average (edges use the neighbors that exist); a burst is
// a maximal run of frames at or above 0.3x the smoothed maximum; the count is
// divided by the source duration. All-silent input yields 0.
double speechRate(const dsp::FrameSequence& frames, const FeatureConfig& cfg);

// Unit-peak triangular filters with edges equally spaced on the mel scale
// m(f) = 2595 log10(1 + f/700) between f_low and f_high, evaluated at the
// nfft/2+1 bin frequencies. Returns n_filters x (nfft/2 + 1).
Eigen::MatrixXd melFilterbank(Eigen::Index nfft, int sample_rate_hz,
                              int n_filters, double f_low_hz, double f_high_hz);

// Log mel-filterbank power decorrelated by an orthonormal DCT-II; c0 kept.
Eigen::VectorXd mfccFrame(const dsp::MagnitudeSpectrum& spectrum,
                          const Eigen::MatrixXd& filterbank, int n_ceps,
                          double energy_floor);

// Levinson-Durbin on the frame's autocorrelation, positive predictor
// convention xhat[n] = sum_k a[k] x[n-k]. Returns (a[1..order], final
// prediction-error energy). Throws DegenerateFrame or NumericalBreakdown.
std::pair<Eigen::VectorXd, double> lpcLevinson(
    const Eigen::Ref<const Eigen::VectorXd>& frame, int order,
    double energy_floor = 1e-10);

// c[n] = a[n] + sum_{k=1}^{n-1} (k/n) c[k] a[n-k], a[n] = 0 past the order.
Eigen::VectorXd lpccFromLpc(const Eigen::Ref<const Eigen::VectorXd>& lpc,
                            int n_ceps);

// Full pipeline: pre-emphasis, framing, then prosodic stats on raw frames and
// cepstra (MFCC or LPCC per cfg.mode) on Hamming-windowed frames, aggregated
// as per-coefficient mean and population std. LPCC frames that fail analysis
// are skipped; throws NoAnalyzableFrames if none survive.
FeatureVector extractFeatures(const audio::AudioSignal& signal,
                              const FeatureConfig& cfg);

}  // namespace features
}  // namespace ser

#endif  // SER_FEATURES_HPP_
