// ser/svm.hpp

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

#ifndef SER_SVM_HPP_
#define SER_SVM_HPP_

#include <Eigen/Core>

#include "ser/error.hpp"

namespace ser {
namespace svm {

// Solver knobs. gamma = 0 means "1 / feature dimension", resolved at train
// time; every value actually used must be strictly positive.
struct SvmParams {
  double box_c = 10.0;
  double gamma = 0.0;
  double kkt_tolerance = 1e-3;
  int max_passes = 10;
  std::int64_t max_iterations = 100000;
};

// Binary soft-margin model. One support vector per column; coefficients hold
// alpha_i * y_i, so |coefficient| <= box_c and the coefficients sum to zero
// within 1e-6.
struct BinarySvmModel {
  Eigen::MatrixXd support_vectors;
  Eigen::VectorXd coefficients;
  double bias = 0.0;
  double gamma = 0.0;
  double box_c = 0.0;

  Eigen::Index dim() const { return support_vectors.rows(); }
  Eigen::Index numSupportVectors() const { return support_vectors.cols(); }
};

// K(x, z) = exp(-gamma * |x - z|^2), in (0, 1]. Throws DimensionMismatch.
double rbfKernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                 const Eigen::Ref<const Eigen::VectorXd>& z, double gamma);

// Sequential minimal optimization on the dual problem
//   max sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
//   s.t. 0 <= alpha_i <= C, sum alpha_i y_i = 0.
// One sample per column of `samples`; labels are exactly +1 or -1. Working
// pairs are chosen by a deterministic first-order heuristic: the maximal KKT
// violator (lowest index on ties) paired with the point maximizing
// |E_1 - E_2| among points free to move the opposite way, which makes the
// pair the maximal violating pair; an index-order scan is the fallback when
// it cannot move. Throws SingleClassInput, DimensionMismatch,
// NonFiniteFeature, or IterationLimitError with best-so-far diagnostics.
BinarySvmModel smoTrain(const Eigen::MatrixXd& samples,
                        const Eigen::VectorXd& labels, const SvmParams& params);

// f(x) = sum_i coeff_i * K(sv_i, x) + bias. The predicted label is the sign
// of f with f = 0 mapped to +1. Throws DimensionMismatch.
double decisionValue(const BinarySvmModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace svm
}  // namespace ser

#endif  // SER_SVM_HPP_
