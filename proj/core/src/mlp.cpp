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

#include "semhash/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "semhash/rng.hpp"

namespace semhash {

Mlp Mlp::init(std::vector<std::size_t> layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("Mlp::init: need at least input and output sizes");
  }
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw std::invalid_argument("Mlp::init: zero layer size");
  }
  Mlp m;
  m.sizes = std::move(layer_sizes);
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < m.sizes.size(); ++l) {
    const std::size_t fan_in = m.sizes[l];
    const std::size_t fan_out = m.sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_out, fan_in, 0.0);
    for (double& x : w.data) x = (2.0 * rng.uniform() - 1.0) * limit;
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(fan_out, 0.0);
  }
  return m;
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    n += weights[l].data.size() + biases[l].size();
  }
  return n;
}

std::vector<double> Mlp::flatten() const {
  std::vector<double> flat;
  flat.reserve(param_count());
  for (std::size_t l = 0; l < weights.size(); ++l) {
    flat.insert(flat.end(), weights[l].data.begin(), weights[l].data.end());
    flat.insert(flat.end(), biases[l].begin(), biases[l].end());
  }
  return flat;
}

void Mlp::assign(std::span<const double> flat) {
  if (flat.size() != param_count()) {
    throw std::invalid_argument("Mlp::assign: parameter count mismatch");
  }
  std::size_t p = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (double& x : weights[l].data) x = flat[p++];
    for (double& x : biases[l]) x = flat[p++];
  }
}

Matrix mlp_forward(const Mlp& m, const Matrix& x, ForwardCache* cache) {
  if (x.cols != m.input_dim()) {
    throw std::invalid_argument("mlp_forward: input dimension mismatch");
  }
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(x);
  }
  Matrix a = x;
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    const Matrix& w = m.weights[l];
    const std::vector<double>& bias = m.biases[l];
    Matrix next(a.rows, w.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
      for (std::size_t o = 0; o < w.rows; ++o) {
        double s = bias[o];
        const auto wr = w.row(o);
        const auto ar = a.row(i);
        for (std::size_t k = 0; k < w.cols; ++k) s += wr[k] * ar[k];
        next(i, o) = s;
      }
    }
    const bool hidden = l + 1 < m.num_layers();
    if (hidden) {
      for (double& v : next.data) v = std::tanh(v);
    }
    if (cache) cache->activations.push_back(next);
    a = std::move(next);
  }
  return a;
}

MlpGrads MlpGrads::zeros_like(const Mlp& m) {
  MlpGrads g;
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    g.weights.emplace_back(m.weights[l].rows, m.weights[l].cols, 0.0);
    g.biases.emplace_back(m.biases[l].size(), 0.0);
  }
  return g;
}

std::vector<double> MlpGrads::flatten() const {
  std::vector<double> flat;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    flat.insert(flat.end(), weights[l].data.begin(), weights[l].data.end());
    flat.insert(flat.end(), biases[l].begin(), biases[l].end());
  }
  return flat;
}

MlpGrads mlp_backward(const Mlp& m, const ForwardCache& cache,
                      const Matrix& grad_output, Matrix* grad_input) {
  const std::size_t layers = m.num_layers();
  if (cache.activations.size() != layers + 1) {
    throw std::invalid_argument("mlp_backward: cache does not match network");
  }
  if (!grad_output.same_shape(cache.activations.back())) {
    throw std::invalid_argument("mlp_backward: gradient shape mismatch");
  }

  MlpGrads grads = MlpGrads::zeros_like(m);
  Matrix delta = grad_output;  // d(loss)/d(post-activation of current layer)
  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& a_prev = cache.activations[l];
    const Matrix& a_cur = cache.activations[l + 1];
    const bool hidden = l + 1 < layers;
    if (hidden) {
      // tanh'(z) = 1 - a^2 in terms of the cached post-activation.
      for (std::size_t i = 0; i < delta.data.size(); ++i) {
        delta.data[i] *= 1.0 - a_cur.data[i] * a_cur.data[i];
      }
    }
    Matrix& gw = grads.weights[l];
    std::vector<double>& gb = grads.biases[l];
    for (std::size_t i = 0; i < delta.rows; ++i) {
      for (std::size_t o = 0; o < gw.rows; ++o) {
        const double dv = delta(i, o);
        gb[o] += dv;
        const auto ar = a_prev.row(i);
        auto gr = gw.row(o);
        for (std::size_t k = 0; k < gw.cols; ++k) gr[k] += dv * ar[k];
      }
    }
    if (l > 0 || grad_input) {
      const Matrix& w = m.weights[l];
      Matrix prev_delta(delta.rows, w.cols, 0.0);
      for (std::size_t i = 0; i < delta.rows; ++i) {
        for (std::size_t o = 0; o < w.rows; ++o) {
          const double dv = delta(i, o);
          const auto wr = w.row(o);
          auto pr = prev_delta.row(i);
          for (std::size_t k = 0; k < w.cols; ++k) pr[k] += dv * wr[k];
        }
      }
      delta = std::move(prev_delta);
    }
  }
  if (grad_input) *grad_input = std::move(delta);
  return grads;
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, double learning_rate, double weight_decay,
               long t, const AdamConfig& cfg) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw std::invalid_argument("adam_step: size mismatch");
  }
  if (t < 1) throw std::invalid_argument("adam_step: step counter must be >= 1");
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= learning_rate * (m_hat / (std::sqrt(v_hat) + cfg.epsilon) +
                                  weight_decay * params[i]);
  }
}

}  // namespace semhash
