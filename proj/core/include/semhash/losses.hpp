// Copyright 2026 The Semhash Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMHASH_LOSSES_HPP_
#define SEMHASH_LOSSES_HPP_

#include <cstdint>
#include <optional>
#include <span>

#include "semhash/matrix.hpp"
#include "semhash/semantics.hpp"

namespace semhash {

// Raw nearest-neighbor distances below this are clamped before any log,
// and tau normalizers below it are rejected as degenerate. Keeps gradients
// bounded on collapsed batches.
inline constexpr double kNuEpsilon = 1e-12;
inline constexpr double kTauEpsilon = 1e-12;

// Weight emphasizing semantically close pairs: gamma^rho / (gamma + d)^rho.
struct PairWeightParams {
  double gamma = 0.1;
  double rho = 2.0;
};

// Coefficients of the combined objective: total = sim + lambda1 * kl +
// lambda2 * aux.
struct LossWeights {
  double lambda1 = 0.01;
  double lambda2 = 0.01;
};

// A scalar loss together with its exact (sub)gradient w.r.t. the batch
// input it was computed from.
struct LossValue {
  double value = 0.0;
  Matrix grad;
};

// Near-binary target batch: entries are 2*Beta(alpha,alpha) - 1 in [-1, 1].
struct TargetSample {
  Matrix points;
  double alpha = 0.1;
};

// Monotonically decreasing in d, w(0) = 1. Requires d >= 0.
double pair_weight(double d, const PairWeightParams& p);

// Scale-invariant similarity-matching loss over a batch: sums
// |m_bb'/tau_z - d_bb'/tau_y| * w_bb' over ordered pairs, where m is the
// Manhattan distance between embedding rows and tau_z, tau_y are the total
// pairwise masses of each side. Throws DegenerateBatchError when B < 2 or
// either tau falls below kTauEpsilon (all-identical embeddings or targets).
LossValue sim_loss(const Matrix& z, const DistanceMatrix& d,
                   const PairWeightParams& p);

// Euclidean distance from v to the nearest pool row, optionally excluding
// one row index. The result is clamped up to kNuEpsilon. Throws
// std::invalid_argument when the pool is empty after exclusion.
double nn_distance(std::span<const double> v, const Matrix& pool,
                   std::optional<std::size_t> exclude_index);

// Empirical KL divergence of the batch against a target sample:
// mean_b[ log nu(z_b; target) - log nu(z_b; z without b) ]. The target is a
// constant w.r.t. the gradient; within-batch terms propagate through both
// the query row and the winning neighbor row (ties broken to the lowest
// index). Throws DegenerateBatchError when B < 2.
LossValue kl_loss(const Matrix& z, const TargetSample& target);

// Nearest-neighbor entropy estimate with full constants (k = 1):
//   (dim/N) * sum_i ln nu_i + ln(N-1) + ln V_dim + euler_gamma,
// where nu_i is the self-excluded Euclidean NN distance and V_dim the unit
// ball volume. Throws std::invalid_argument when N < 2.
double entropy_estimate(const Matrix& points);

// I.i.d. draws of 2*Beta(alpha, alpha) - 1. Deterministic per seed.
TargetSample sample_target(std::size_t count, std::size_t dim, double alpha,
                           std::uint64_t seed);

// Mean softmax cross-entropy; grad is w.r.t. the logits: (softmax - onehot)/B.
LossValue cross_entropy_loss(const Matrix& logits, std::span<const int> labels);

// Mean squared error over all B*dim entries; grad = 2(z - t)/(B*dim).
LossValue regression_loss(const Matrix& z, const Matrix& targets);

// Weighted sum sim + lambda1*kl + lambda2*aux, in value and gradient.
// Absent terms contribute nothing; at least one must be present and all
// present gradients must share a shape.
LossValue combine_losses(const LossValue* sim, const LossValue* kl,
                         const LossValue* aux, const LossWeights& w);

}  // namespace semhash

#endif  // SEMHASH_LOSSES_HPP_
