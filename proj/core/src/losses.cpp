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

#include "semhash/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "semhash/errors.hpp"
#include "semhash/rng.hpp"

namespace semhash {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Index and raw (unclamped) distance of the nearest pool row; ties go to
// the lowest index.
struct Nearest {
  std::size_t index;
  double distance;
};

Nearest nearest_row(std::span<const double> v, const Matrix& pool,
                    std::optional<std::size_t> exclude) {
  Nearest best{pool.rows, -1.0};
  for (std::size_t i = 0; i < pool.rows; ++i) {
    if (exclude && *exclude == i) continue;
    const double d = l2_distance(v, pool.row(i));
    if (best.distance < 0.0 || d < best.distance) best = {i, d};
  }
  if (best.distance < 0.0) {
    throw std::invalid_argument("nn_distance: empty pool after exclusion");
  }
  return best;
}

}  // namespace

double pair_weight(double d, const PairWeightParams& p) {
  if (d < 0.0) throw std::invalid_argument("pair_weight: negative distance");
  if (p.gamma <= 0.0 || p.rho <= 0.0) {
    throw std::invalid_argument("pair_weight: gamma and rho must be positive");
  }
  return std::pow(p.gamma, p.rho) / std::pow(p.gamma + d, p.rho);
}

LossValue sim_loss(const Matrix& z, const DistanceMatrix& d,
                   const PairWeightParams& p) {
  const std::size_t b = z.rows;
  if (b < 2) throw DegenerateBatchError("sim_loss: batch size must be >= 2");
  if (d.rows != b || d.cols != b) {
    throw std::invalid_argument("sim_loss: distance matrix shape mismatch");
  }

  Matrix m(b, b, 0.0);
  double tau_z = 0.0;
  double tau_y = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      if (i != j) m(i, j) = l1_distance(z.row(i), z.row(j));
      tau_z += m(i, j);
      tau_y += d(i, j);
    }
  }
  if (tau_z < kTauEpsilon) {
    throw DegenerateBatchError("sim_loss: all embeddings identical (tau_z ~ 0)");
  }
  if (tau_y < kTauEpsilon) {
    throw DegenerateBatchError("sim_loss: all target distances zero (tau_y ~ 0)");
  }

  // value = sum w_ij |u_ij|, u_ij = m_ij/tau_z - d_ij/tau_y.
  // d value / d m_q = w_q s_q / tau_z - S / tau_z^2 with S = sum w s m,
  // because tau_z depends on every ordered pair.
  double value = 0.0;
  double s_total = 0.0;
  Matrix coef(b, b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const double w = pair_weight(d(i, j), p);
      const double u = m(i, j) / tau_z - d(i, j) / tau_y;
      value += w * std::abs(u);
      coef(i, j) = w * sgn(u);
      s_total += coef(i, j) * m(i, j);
    }
  }
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      coef(i, j) = coef(i, j) / tau_z - s_total / (tau_z * tau_z);
    }
  }

  LossValue out;
  out.value = value;
  out.grad = Matrix(b, z.cols, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = i + 1; j < b; ++j) {
      // Ordered pairs (i,j) and (j,i) carry equal coefficients.
      const double c2 = 2.0 * coef(i, j);
      for (std::size_t k = 0; k < z.cols; ++k) {
        const double s = sgn(z(i, k) - z(j, k));
        out.grad(i, k) += c2 * s;
        out.grad(j, k) -= c2 * s;
      }
    }
  }
  return out;
}

double nn_distance(std::span<const double> v, const Matrix& pool,
                   std::optional<std::size_t> exclude_index) {
  const Nearest n = nearest_row(v, pool, exclude_index);
  return n.distance < kNuEpsilon ? kNuEpsilon : n.distance;
}

LossValue kl_loss(const Matrix& z, const TargetSample& target) {
  const std::size_t b = z.rows;
  if (b < 2) throw DegenerateBatchError("kl_loss: batch size must be >= 2");
  if (target.points.rows == 0 || target.points.cols != z.cols) {
    throw std::invalid_argument("kl_loss: target sample shape mismatch");
  }

  LossValue out;
  out.grad = Matrix(b, z.cols, 0.0);
  const double inv_b = 1.0 / static_cast<double>(b);
  double value = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    const auto zi = z.row(i);

    const Nearest cross = nearest_row(zi, target.points, std::nullopt);
    const double nu_c = cross.distance < kNuEpsilon ? kNuEpsilon : cross.distance;
    value += std::log(nu_c);
    if (cross.distance > kNuEpsilon) {
      const auto t = target.points.row(cross.index);
      const double c = inv_b / (nu_c * nu_c);
      for (std::size_t k = 0; k < z.cols; ++k) {
        out.grad(i, k) += c * (zi[k] - t[k]);
      }
    }

    const Nearest within = nearest_row(zi, z, i);
    const double nu_w = within.distance < kNuEpsilon ? kNuEpsilon : within.distance;
    value -= std::log(nu_w);
    if (within.distance > kNuEpsilon) {
      const auto zj = z.row(within.index);
      const double c = inv_b / (nu_w * nu_w);
      for (std::size_t k = 0; k < z.cols; ++k) {
        const double diff = zi[k] - zj[k];
        out.grad(i, k) -= c * diff;
        out.grad(within.index, k) += c * diff;
      }
    }
  }
  out.value = value * inv_b;
  return out;
}

double entropy_estimate(const Matrix& points) {
  const std::size_t n = points.rows;
  if (n < 2) throw std::invalid_argument("entropy_estimate: need at least 2 points");
  const double dim = static_cast<double>(points.cols);

  double log_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    log_sum += std::log(nn_distance(points.row(i), points, i));
  }
  const double log_unit_ball =
      dim / 2.0 * std::log(3.14159265358979323846) - std::lgamma(dim / 2.0 + 1.0);
  return dim / static_cast<double>(n) * log_sum +
         std::log(static_cast<double>(n - 1)) + log_unit_ball + kEulerGamma;
}

TargetSample sample_target(std::size_t count, std::size_t dim, double alpha,
                           std::uint64_t seed) {
  if (count == 0 || dim == 0) {
    throw std::invalid_argument("sample_target: count and dim must be positive");
  }
  if (alpha <= 0.0) throw std::invalid_argument("sample_target: alpha must be positive");
  TargetSample t;
  t.alpha = alpha;
  t.points = Matrix(count, dim, 0.0);
  Rng rng(seed);
  for (double& v : t.points.data) v = 2.0 * rng.beta_symmetric(alpha) - 1.0;
  return t;
}

LossValue cross_entropy_loss(const Matrix& logits, std::span<const int> labels) {
  const std::size_t b = logits.rows;
  const std::size_t c = logits.cols;
  if (labels.size() != b) {
    throw std::invalid_argument("cross_entropy_loss: label count mismatch");
  }
  LossValue out;
  out.grad = Matrix(b, c, 0.0);
  const double inv_b = 1.0 / static_cast<double>(b);
  double value = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= c) {
      throw std::invalid_argument("cross_entropy_loss: label out of range");
    }
    double max_logit = logits(i, 0);
    for (std::size_t j = 1; j < c; ++j) max_logit = std::max(max_logit, logits(i, j));
    double sum_exp = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum_exp += std::exp(logits(i, j) - max_logit);
    const double lse = max_logit + std::log(sum_exp);
    value += lse - logits(i, static_cast<std::size_t>(y));
    for (std::size_t j = 0; j < c; ++j) {
      const double softmax = std::exp(logits(i, j) - lse);
      out.grad(i, j) = (softmax - (static_cast<std::size_t>(y) == j ? 1.0 : 0.0)) * inv_b;
    }
  }
  out.value = value * inv_b;
  return out;
}

LossValue regression_loss(const Matrix& z, const Matrix& targets) {
  if (!z.same_shape(targets)) {
    throw std::invalid_argument("regression_loss: shape mismatch");
  }
  if (z.rows == 0 || z.cols == 0) {
    throw std::invalid_argument("regression_loss: empty batch");
  }
  LossValue out;
  out.grad = Matrix(z.rows, z.cols, 0.0);
  const double inv_n = 1.0 / static_cast<double>(z.rows * z.cols);
  double value = 0.0;
  for (std::size_t i = 0; i < z.data.size(); ++i) {
    const double diff = z.data[i] - targets.data[i];
    value += diff * diff;
    out.grad.data[i] = 2.0 * diff * inv_n;
  }
  out.value = value * inv_n;
  return out;
}

LossValue combine_losses(const LossValue* sim, const LossValue* kl,
                         const LossValue* aux, const LossWeights& w) {
  if (w.lambda1 < 0.0 || w.lambda2 < 0.0) {
    throw std::invalid_argument("combine_losses: lambdas must be nonnegative");
  }
  const LossValue* shape_source = sim ? sim : (kl ? kl : aux);
  if (!shape_source) {
    throw std::invalid_argument("combine_losses: at least one term required");
  }
  LossValue out;
  out.grad = Matrix(shape_source->grad.rows, shape_source->grad.cols, 0.0);
  auto accumulate = [&out](const LossValue* term, double weight) {
    if (!term) return;
    if (!term->grad.same_shape(out.grad)) {
      throw std::invalid_argument("combine_losses: gradient shape mismatch");
    }
    out.value += weight * term->value;
    for (std::size_t i = 0; i < out.grad.data.size(); ++i) {
      out.grad.data[i] += weight * term->grad.data[i];
    }
  };
  accumulate(sim, 1.0);
  accumulate(kl, w.lambda1);
  accumulate(aux, w.lambda2);
  return out;
}

}  // namespace semhash
