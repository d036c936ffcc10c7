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

#ifndef SEMHASH_MLP_HPP_
#define SEMHASH_MLP_HPP_

#include <cstdint>
#include <vector>

#include "semhash/matrix.hpp"

namespace semhash {

// Feed-forward encoder: affine + tanh on hidden layers, linear output.
// Parameters flatten in declaration order (per layer: weight row-major,
// then bias), which is also the checkpoint order.
struct Mlp {
  std::vector<std::size_t> sizes;   // [in, h1, ..., out]
  std::vector<Matrix> weights;      // weights[l]: sizes[l+1] x sizes[l]
  std::vector<std::vector<double>> biases;

  // Xavier-uniform weights, zero biases; deterministic per seed.
  static Mlp init(std::vector<std::size_t> layer_sizes, std::uint64_t seed);

  std::size_t input_dim() const { return sizes.front(); }
  std::size_t output_dim() const { return sizes.back(); }
  std::size_t num_layers() const { return weights.size(); }
  std::size_t param_count() const;

  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
};

// Post-activation values per layer; activations[0] is the input batch.
struct ForwardCache {
  std::vector<Matrix> activations;
};

// Runs the batch through the network; fills `cache` when provided.
Matrix mlp_forward(const Mlp& m, const Matrix& x, ForwardCache* cache = nullptr);

// Parameter gradients, same shapes as the Mlp they came from.
struct MlpGrads {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  static MlpGrads zeros_like(const Mlp& m);
  std::vector<double> flatten() const;
};

// Exact reverse-mode gradients of mlp_forward for the given upstream
// gradient w.r.t. the output batch. When `grad_input` is non-null it
// receives d(loss)/d(input batch) for chaining through upstream layers.
MlpGrads mlp_backward(const Mlp& m, const ForwardCache& cache,
                      const Matrix& grad_output, Matrix* grad_input = nullptr);

// Adam moment buffers over a flat parameter vector.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One bias-corrected Adam step with decoupled weight decay. `t` is the
// 1-based step counter.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, double learning_rate, double weight_decay,
               long t, const AdamConfig& cfg = {});

}  // namespace semhash

#endif  // SEMHASH_MLP_HPP_
