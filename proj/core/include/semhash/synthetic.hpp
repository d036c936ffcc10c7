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

#ifndef SEMHASH_SYNTHETIC_HPP_
#define SEMHASH_SYNTHETIC_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semhash/matrix.hpp"
#include "semhash/taxonomy.hpp"

namespace semhash {

// Two-level synthetic hierarchy: superclass centers sit on a scaled
// simplex (separation * e_i), leaf centers jitter around their superclass
// center, and records are Gaussian around their leaf center. Separations
// default so that feature geometry tracks tree distance: points within a
// leaf are closer than points across superclasses.
struct SyntheticSpec {
  std::size_t num_superclasses = 3;
  std::size_t leaves_per_superclass = 4;
  std::size_t points_per_leaf = 200;
  std::size_t feature_dim = 16;
  double superclass_separation = 4.0;
  double leaf_jitter = 1.0;
  double intra_leaf_stddev = 0.9;
  bool with_embeddings = false;
  double embedding_noise = 0.05;
  std::uint64_t seed = 1;
};

struct SyntheticDataset {
  Matrix features;                   // N x feature_dim
  std::vector<std::string> labels;   // leaf label per record
  std::vector<std::uint64_t> ids;    // 0..N-1
  Taxonomy taxonomy;                 // root -> superclasses -> leaves
  std::optional<Matrix> embeddings;  // leaf mean + noise, when requested
};

// Deterministic per seed, byte-for-byte.
SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace semhash

#endif  // SEMHASH_SYNTHETIC_HPP_
