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

#ifndef SEMHASH_SEMANTICS_HPP_
#define SEMHASH_SEMANTICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "semhash/matrix.hpp"
#include "semhash/taxonomy.hpp"

namespace semhash {

// Precomputed per-record embedding vectors (e.g. pooled sentence encodings)
// used as an alternative semantic signal to label taxonomies. Row i belongs
// to record id i.
struct EmbeddingTable {
  Matrix vectors;  // N x E

  std::size_t size() const { return vectors.rows; }
  std::size_t dim() const { return vectors.cols; }
};

// Symmetric nonnegative target distances d[i][j] for a batch. Returned
// matrices always have a zero diagonal.
using DistanceMatrix = Matrix;

// d[i][j] = 1 - wup_similarity(labels[i], labels[j]).
DistanceMatrix label_distance_matrix(const Taxonomy& taxonomy,
                                     std::span<const std::string> labels);

// 0 iff equal labels, 1 otherwise.
DistanceMatrix binary_distance_matrix(std::span<const std::string> labels);

// Manhattan distances between the selected embedding rows.
DistanceMatrix embedding_distance_matrix(const EmbeddingTable& table,
                                         std::span<const std::size_t> rows);

}  // namespace semhash

#endif  // SEMHASH_SEMANTICS_HPP_
