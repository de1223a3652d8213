// ser/svm.cpp

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

#include "ser/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ser {
namespace svm {

namespace {

// Full kernel matrix when it fits, rows on demand otherwise.
constexpr Eigen::Index kCacheLimit = 4096;

class KernelTable {
 public:
  KernelTable(const Eigen::MatrixXd& samples, double gamma)
      : samples_(samples), gamma_(gamma) {
    if (samples.cols() <= kCacheLimit) {
      const Eigen::VectorXd sq = samples.colwise().squaredNorm();
      Eigen::MatrixXd dist2 =
          (sq.replicate(1, samples.cols()) +
           sq.transpose().replicate(samples.cols(), 1) -
           2.0 * samples.transpose() * samples);
      cache_ = (-gamma * dist2.array().max(0.0)).exp();
      cached_ = true;
    }
  }

  double at(Eigen::Index i, Eigen::Index j) const {
    if (cached_) return cache_(i, j);
    return std::exp(-gamma_ * (samples_.col(i) - samples_.col(j)).squaredNorm());
  }

  Eigen::VectorXd row(Eigen::Index i) const {
    if (cached_) return cache_.col(i);
    return (-gamma_ *
            (samples_.colwise() - samples_.col(i)).colwise().squaredNorm())
        .array()
        .exp()
        .transpose();
  }

 private:
  const Eigen::MatrixXd& samples_;
  double gamma_;
  Eigen::MatrixXd cache_;
  bool cached_ = false;
};

// dual(alpha) = sum(alpha) - 1/2 sum_i alpha_i y_i G_i, G_i = sum_j alpha_j y_j K_ij.
double dualObjective(const Eigen::VectorXd& alpha, const Eigen::VectorXd& labels,
                     const Eigen::VectorXd& grad) {
  return alpha.sum() -
         0.5 * (alpha.array() * labels.array() * grad.array()).sum();
}

struct SmoState {
  const Eigen::MatrixXd& samples;
  const Eigen::VectorXd& labels;
  const KernelTable& kernel;
  double box_c;
  Eigen::VectorXd alpha;
  Eigen::VectorXd grad;  // G_i = sum_j alpha_j y_j K_ij, bias excluded
  double bias = 0.0;

  double errorOf(Eigen::Index i) const {
    return grad[i] + bias - labels[i];
  }

  // One constrained update of the pair (i, j). Returns false when the pair
  // cannot move (degenerate bounds or a vanishing step).
  bool tryStep(Eigen::Index i, Eigen::Index j) {
    if (i == j) return false;
    const double y1 = labels[i];
    const double y2 = labels[j];
    const double a1 = alpha[i];
    const double a2 = alpha[j];
    const double e1 = errorOf(i);
    const double e2 = errorOf(j);
    const double s = y1 * y2;

    double lo;
    double hi;
    if (s > 0.0) {
      lo = std::max(0.0, a1 + a2 - box_c);
      hi = std::min(box_c, a1 + a2);
    } else {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(box_c, box_c + a2 - a1);
    }
    if (lo >= hi) return false;

    const double k11 = kernel.at(i, i);
    const double k22 = kernel.at(j, j);
    const double k12 = kernel.at(i, j);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2_new;
    if (eta > 1e-15) {
      a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Flat direction: evaluate the restricted objective at both bounds.
      const double f1 = y1 * (e1 - bias) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 - bias) - s * a1 * k12 - a2 * k22;
      const double l1 = a1 + s * (a2 - lo);
      const double h1 = a1 + s * (a2 - hi);
      const double lo_obj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                            0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double hi_obj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                            0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (lo_obj < hi_obj - 1e-12) {
        a2_new = lo;
      } else if (hi_obj < lo_obj - 1e-12) {
        a2_new = hi;
      } else {
        return false;
      }
    }
    // Any nonzero step is taken: it strictly improves the dual, and a step
    // clamped onto a bound moves the point out of its selection set, so even
    // ulp-sized moves release pairs pinched against the box.
    if (a2_new == a2) return false;

    const double a1_new =
        std::clamp(a1 + s * (a2 - a2_new), 0.0, box_c);
    const double d1 = a1_new - a1;
    const double d2 = a2_new - a2;

    // The threshold is not touched here; every scan re-estimates it from the
    // multipliers, so the violation measure stays consistent with the bias.
    grad += y1 * d1 * kernel.row(i) + y2 * d2 * kernel.row(j);
    alpha[i] = a1_new;
    alpha[j] = a2_new;
    return true;
  }
};

}  // namespace

double rbfKernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& z, double gamma) {
  if (x.size() != z.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "kernel arguments have different lengths");
  }
  return std::exp(-gamma * (x - z).squaredNorm());
}

BinarySvmModel smoTrain(const Eigen::MatrixXd& samples,
                        const Eigen::VectorXd& labels,
                        const SvmParams& params) {
  const Eigen::Index n = samples.cols();
  const Eigen::Index d = samples.rows();
  if (labels.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "label count does not match sample count");
  }
  if (!samples.allFinite() || !labels.allFinite()) {
    throw Error(ErrorCode::NonFiniteFeature,
                "training data contains NaN or infinity");
  }
  if ((labels.array().abs() != 1.0).any()) {
    throw Error(ErrorCode::BadArgument, "labels must be exactly +1 or -1");
  }
  const bool has_pos = (labels.array() > 0.0).any();
  const bool has_neg = (labels.array() < 0.0).any();
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::SingleClassInput,
                "training requires at least one sample of each label");
  }
  if (params.box_c <= 0.0 || params.kkt_tolerance <= 0.0 ||
      params.max_passes <= 0 || params.max_iterations <= 0 ||
      params.gamma < 0.0) {
    throw Error(ErrorCode::BadArgument, "solver parameters must be positive");
  }
  const double gamma =
      params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(d);
  const double tol = params.kkt_tolerance;
  const double c = params.box_c;

  const KernelTable kernel(samples, gamma);
  SmoState state{samples,
                 labels,
                 kernel,
                 c,
                 Eigen::VectorXd::Zero(n),
                 Eigen::VectorXd::Zero(n),
                 0.0};

  std::int64_t iterations = 0;
  int stalled_scans = 0;
  for (;;) {
    // d_i = y_i - G_i bounds the threshold: from below over points free to
    // move up (alpha < C with y = +1, or alpha > 0 with y = -1), from above
    // over the mirror sets. The equality constraint keeps both sets nonempty
    // when both classes are present, and at the midpoint threshold the
    // maximal KKT violation is (b_up - b_dn) / 2, attained at `up` and `dn`
    // (lowest indices on ties).
    double b_up = -std::numeric_limits<double>::infinity();
    double b_dn = std::numeric_limits<double>::infinity();
    Eigen::Index up = -1;
    Eigen::Index dn = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double di = labels[i] - state.grad[i];
      const bool below_box = state.alpha[i] < c;
      const bool above_zero = state.alpha[i] > 0.0;
      if ((below_box && labels[i] > 0.0) || (above_zero && labels[i] < 0.0)) {
        if (di > b_up) {
          b_up = di;
          up = i;
        }
      }
      if ((below_box && labels[i] < 0.0) || (above_zero && labels[i] > 0.0)) {
        if (di < b_dn) {
          b_dn = di;
          dn = i;
        }
      }
    }
    if (up >= 0 && dn >= 0) {
      state.bias = 0.5 * (b_up + b_dn);
    } else {
      state.bias = up >= 0 ? b_up : b_dn;
    }
    const double worst = up >= 0 && dn >= 0
                             ? 0.5 * (b_up - b_dn)
                             : -std::numeric_limits<double>::infinity();
    if (worst <= tol) break;
    if (iterations >= params.max_iterations) {
      throw IterationLimitError(
          iterations, worst,
          dualObjective(state.alpha, labels, state.grad));
    }
    // The violator is paired with the point maximizing |E_1 - E_2| among
    // points free to move the opposite way; that maximizer is the other end
    // of the violating pair, so the pair is (up, dn). If it cannot move
    // (degenerate direction), fall back to partners in index order.
    const Eigen::Index first = std::min(up, dn);
    const Eigen::Index partner = first == up ? dn : up;
    bool stepped = state.tryStep(first, partner);
    if (!stepped) {
      for (Eigen::Index j = 0; j < n && !stepped; ++j) {
        if (j == first || j == partner) continue;
        stepped = state.tryStep(first, j);
      }
    }
    if (stepped) {
      ++iterations;
      stalled_scans = 0;
    } else if (++stalled_scans >= params.max_passes) {
      throw IterationLimitError(
          iterations, worst,
          dualObjective(state.alpha, labels, state.grad));
    }
  }

  // state.bias already holds the midpoint of the final threshold bounds, so
  // every KKT violation under it is within the tolerance.
  const double bias = state.bias;

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (state.alpha[i] > 1e-12) kept.push_back(i);
  }

  BinarySvmModel model;
  model.support_vectors.resize(d, static_cast<Eigen::Index>(kept.size()));
  model.coefficients.resize(static_cast<Eigen::Index>(kept.size()));
  for (size_t k = 0; k < kept.size(); ++k) {
    const auto idx = static_cast<Eigen::Index>(k);
    model.support_vectors.col(idx) = samples.col(kept[k]);
    model.coefficients[idx] = state.alpha[kept[k]] * labels[kept[k]];
  }
  model.bias = bias;
  model.gamma = gamma;
  model.box_c = c;
  return model;
}

double decisionValue(const BinarySvmModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != model.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "input dimension does not match the model");
  }
  const Eigen::VectorXd k =
      (-model.gamma *
       (model.support_vectors.colwise() - x).colwise().squaredNorm())
          .array()
          .exp()
          .transpose();
  return model.coefficients.dot(k) + model.bias;
}

}  // namespace svm
}  // namespace ser
