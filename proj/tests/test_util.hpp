// ser/test_util.hpp

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

// Independent reference implementations ("oracles") and small fixtures shared
// by the test binaries. Everything here is written the slow, obvious way on
// purpose: the production code must agree with these, never the reverse.

#ifndef SER_TEST_UTIL_HPP_
#define SER_TEST_UTIL_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ser/audio.hpp"

namespace ser {
namespace testing {

// Runs fn and reports which ErrorCode it threw, if any; empty means it
// returned normally. Lets assertions compare codes instead of types.
template <typename Fn>
std::optional<ser::ErrorCode> codeOf(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const ser::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// O(n^2) DFT, one-sided magnitudes |X[k]| for k = 0..nfft/2, frame
// zero-padded to nfft.
inline Eigen::VectorXd directDftMagnitude(
    const Eigen::Ref<const Eigen::VectorXd>& frame, Eigen::Index nfft) {
  const double pi = std::acos(-1.0);
  Eigen::VectorXd out(nfft / 2 + 1);
  for (Eigen::Index k = 0; k <= nfft / 2; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index n = 0; n < frame.size(); ++n) {
      const double angle = -2.0 * pi * static_cast<double>(k) *
                           static_cast<double>(n) / static_cast<double>(nfft);
      acc += frame[n] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = std::abs(acc);
  }
  return out;
}

// r[tau] = sum_{n} x[n] x[n+tau], the biased estimator, by direct summation.
inline Eigen::VectorXd naiveAutocorrelation(
    const Eigen::Ref<const Eigen::VectorXd>& frame, Eigen::Index max_lag) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(max_lag + 1);
  for (Eigen::Index tau = 0; tau <= max_lag; ++tau) {
    for (Eigen::Index n = 0; n + tau < frame.size(); ++n) {
      r[tau] += frame[n] * frame[n + tau];
    }
  }
  return r;
}

// Dense solve of the normal equations R a = r[1..p] with R_ij = r[|i-j|],
// plus the final prediction error E = r[0] - a . r[1..p].
inline std::pair<Eigen::VectorXd, double> toeplitzSolve(
    const Eigen::Ref<const Eigen::VectorXd>& r, int order) {
  Eigen::MatrixXd big(order, order);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      big(i, j) = r[std::abs(i - j)];
    }
  }
  const Eigen::VectorXd rhs = r.segment(1, order);
  const Eigen::VectorXd a = big.fullPivLu().solve(rhs);
  return {a, r[0] - a.dot(rhs)};
}

struct SimpleStats {
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
  double range = 0.0;
  double std = 0.0;
};

// Two-pass mean and population standard deviation.
inline SimpleStats twoPassStats(const Eigen::Ref<const Eigen::VectorXd>& x) {
  SimpleStats s;
  const auto n = static_cast<double>(x.size());
  s.mean = x.sum() / n;
  s.max = x.maxCoeff();
  s.min = x.minCoeff();
  s.range = s.max - s.min;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    acc += (x[i] - s.mean) * (x[i] - s.mean);
  }
  s.std = std::sqrt(acc / n);
  return s;
}

// Exhaustive active-set maximization of the SVM dual
//   W(alpha) = sum alpha - 1/2 alpha^T Q alpha, Q_ij = y_i y_j K_ij,
//   0 <= alpha <= C, sum y_i alpha_i = 0
// for up to ~8 points: every assignment of each variable to {0, C, free} is
// tried, the free block solved exactly through the KKT system, infeasible
// solutions discarded. The optimum satisfies KKT for some assignment, so the
// best feasible candidate is the exact maximum (up to solve roundoff).
inline double dualOracle(const Eigen::MatrixXd& samples,
                         const Eigen::VectorXd& labels, double box_c,
                         double gamma) {
  const Eigen::Index n = samples.cols();
  Eigen::MatrixXd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      q(i, j) = labels[i] * labels[j] *
                std::exp(-gamma *
                         (samples.col(i) - samples.col(j)).squaredNorm());
    }
  }
  const auto objective = [&](const Eigen::VectorXd& a) {
    return a.sum() - 0.5 * a.dot(q * a);
  };

  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0, 1=C, 2=free
  const double slack = 1e-7;
  for (;;) {
    std::vector<Eigen::Index> free_set;
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (state[static_cast<std::size_t>(i)] == 1) alpha[i] = box_c;
      if (state[static_cast<std::size_t>(i)] == 2) free_set.push_back(i);
    }
    const auto f = static_cast<Eigen::Index>(free_set.size());
    bool feasible = true;
    if (f == 0) {
      feasible = std::abs(labels.dot(alpha)) <= slack;
    } else {
      // Stationarity over the free block with multiplier beta for the
      // equality constraint: Q_FF a_F + beta y_F = 1 - Q_FB a_B,
      // y_F . a_F = -y_B . a_B.
      Eigen::MatrixXd sys(f + 1, f + 1);
      Eigen::VectorXd rhs(f + 1);
      for (Eigen::Index a = 0; a < f; ++a) {
        for (Eigen::Index b = 0; b < f; ++b) {
          sys(a, b) = q(free_set[a], free_set[b]);
        }
        sys(a, f) = labels[free_set[a]];
        sys(f, a) = labels[free_set[a]];
        double fixed = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (state[static_cast<std::size_t>(j)] == 1) {
            fixed += q(free_set[a], j) * box_c;
          }
        }
        rhs[a] = 1.0 - fixed;
      }
      sys(f, f) = 0.0;
      double bound_sum = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (state[static_cast<std::size_t>(j)] == 1) {
          bound_sum += labels[j] * box_c;
        }
      }
      rhs[f] = -bound_sum;
      const Eigen::VectorXd sol = sys.fullPivLu().solve(rhs);
      if ((sys * sol - rhs).norm() > 1e-6) {
        feasible = false;  // singular system, no stationary point here
      } else {
        for (Eigen::Index a = 0; a < f && feasible; ++a) {
          const double v = sol[a];
          if (v < -slack || v > box_c + slack) feasible = false;
          alpha[free_set[a]] = std::clamp(v, 0.0, box_c);
        }
      }
    }
    if (feasible && std::abs(labels.dot(alpha)) <= 1e-6) {
      best = std::max(best, objective(alpha));
    }

    Eigen::Index pos = 0;
    while (pos < n && state[static_cast<std::size_t>(pos)] == 2) {
      state[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n) break;
    ++state[static_cast<std::size_t>(pos)];
  }
  return best;
}

// Mirror of the corpus generator's random stream, kept separate so dataset
// tests notice if the production constants drift.
class SplitMixRef {
 public:
  explicit SplitMixRef(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Little-endian byte assembly for handmade WAV fixtures.
inline void putU16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void putU32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

// A RIFF/WAVE file around the given fmt fields and raw data bytes; pass
// extra chunks to splice in front of the data chunk.
inline std::string wavBytes(std::uint16_t format_tag, std::uint16_t channels,
                            std::uint32_t rate, std::uint16_t bits,
                            const std::string& data,
                            const std::string& pre_data_chunks = "") {
  std::string body;
  body += "WAVE";
  body += "fmt ";
  putU32(body, 16);
  putU16(body, format_tag);
  putU16(body, channels);
  putU32(body, rate);
  putU32(body, rate * channels * bits / 8);
  putU16(body, static_cast<std::uint16_t>(channels * bits / 8));
  putU16(body, bits);
  body += pre_data_chunks;
  body += "data";
  putU32(body, static_cast<std::uint32_t>(data.size()));
  body += data;
  if (data.size() % 2 == 1) body.push_back('\0');
  std::string file = "RIFF";
  putU32(file, static_cast<std::uint32_t>(body.size()));
  file += body;
  return file;
}

inline std::string pcm16Bytes(const std::vector<std::int16_t>& samples) {
  std::string s;
  for (const std::int16_t v : samples) {
    putU16(s, static_cast<std::uint16_t>(v));
  }
  return s;
}

inline void writeBytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
}

inline std::string readBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// A pure tone scaled to stay well inside [-1, 1].
inline audio::AudioSignal sineSignal(double freq_hz, int rate, double seconds,
                                     double amplitude = 0.5) {
  const double pi = std::acos(-1.0);
  audio::AudioSignal s;
  s.sample_rate_hz = rate;
  const auto n = static_cast<Eigen::Index>(seconds * rate);
  s.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.samples[i] =
        amplitude * std::sin(2.0 * pi * freq_hz * static_cast<double>(i) /
                             static_cast<double>(rate));
  }
  return s;
}

// Unique scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& stem) {
    path = std::filesystem::temp_directory_path() /
           (stem + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path, ignored);
  }

  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace testing
}  // namespace ser

#endif  // SER_TEST_UTIL_HPP_
