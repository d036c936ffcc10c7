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

#ifndef SEMHASH_TRAIN_HPP_
#define SEMHASH_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semhash/hash_code.hpp"
#include "semhash/losses.hpp"
#include "semhash/mlp.hpp"

namespace semhash {

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 512;
  double learning_rate = 5e-4;
  double weight_decay = 1e-4;
  bool use_sim = true;
  bool use_kl = true;
  bool use_class = false;
  bool use_reg = false;
  LossWeights weights;       // lambda1 = lambda2 = 0.01
  PairWeightParams pair;     // gamma = 0.1, rho = 2
  double alpha = 0.1;        // target distribution shape
  std::size_t target_batch_size = 0;  // 0 = match the batch size
  std::uint64_t seed = 1;
  bool verbose = false;
};

// Builds the target-distance matrix for a batch of record indices.
using DistanceProvider = std::function<DistanceMatrix(std::span<const std::size_t>)>;

struct TrainDataset {
  Matrix features;                    // N x input_dim
  std::vector<int> class_ids;         // per record; required when use_class
  std::optional<Matrix> reg_targets;  // N x code_dim; required when use_reg
};

struct EpochStats {
  std::size_t epoch = 0;
  double total = 0.0;
  double sim = 0.0;
  double kl = 0.0;
  double aux = 0.0;
  std::size_t skipped_batches = 0;
};

struct TrainResult {
  Mlp model;
  std::optional<Mlp> class_head;  // present when use_class
  std::vector<EpochStats> trace;
  std::size_t skipped_batches = 0;
};

// Minibatch training with Adam. Batches come from a seeded per-epoch
// shuffle; each KL step draws a fresh target sample of the batch size.
// Degenerate batches are skipped and counted. Throws NumericError if a
// loss or gradient ever goes non-finite.
TrainResult train(Mlp model, const TrainDataset& data, const TrainConfig& cfg,
                  const DistanceProvider& distances);

// bit i = 1 iff z_i >= 0 (exact zero rounds up).
HashCode binarize(std::span<const double> z, std::uint64_t id);
HashCodeSet binarize_batch(const Matrix& z, std::span<const std::uint64_t> ids);

struct EncodedDataset {
  HashCodeSet codes;
  Matrix embeddings;  // continuous outputs, N x code_dim
};

// Full-dataset inference pass followed by thresholding.
EncodedDataset encode_dataset(const Mlp& m, const Matrix& features,
                              std::span<const std::uint64_t> ids);

// Serializes the loss trace as CSV (header + one row per epoch).
void write_trace_csv(std::ostream& out, std::span<const EpochStats> trace);

}  // namespace semhash

#endif  // SEMHASH_TRAIN_HPP_
