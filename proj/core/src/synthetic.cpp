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

#include "semhash/synthetic.hpp"

#include <sstream>

#include "semhash/errors.hpp"
#include "semhash/rng.hpp"

namespace semhash {

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.num_superclasses == 0 || spec.leaves_per_superclass == 0 ||
      spec.points_per_leaf == 0 || spec.feature_dim == 0) {
    throw DataError("generate_synthetic: counts must be positive");
  }
  if (spec.num_superclasses > spec.feature_dim) {
    throw DataError(
        "generate_synthetic: need feature_dim >= num_superclasses for the "
        "simplex of superclass centers");
  }
  if (spec.superclass_separation <= 0.0 || spec.intra_leaf_stddev < 0.0 ||
      spec.leaf_jitter < 0.0) {
    throw DataError("generate_synthetic: separations must be positive");
  }

  const std::size_t leaves = spec.num_superclasses * spec.leaves_per_superclass;
  const std::size_t n = leaves * spec.points_per_leaf;

  std::ostringstream taxonomy_text;
  taxonomy_text << "root\t-\n";
  for (std::size_t s = 0; s < spec.num_superclasses; ++s) {
    taxonomy_text << "s" << s << "\troot\n";
  }
  std::vector<std::string> leaf_names;
  leaf_names.reserve(leaves);
  for (std::size_t s = 0; s < spec.num_superclasses; ++s) {
    for (std::size_t l = 0; l < spec.leaves_per_superclass; ++l) {
      std::ostringstream name;
      name << "s" << s << "_l" << l;
      leaf_names.push_back(name.str());
      taxonomy_text << name.str() << "\ts" << s << "\n";
    }
  }

  SyntheticDataset data;
  {
    std::istringstream in(taxonomy_text.str());
    data.taxonomy = Taxonomy::load(in);
  }

  Rng rng(spec.seed);

  // Superclass centers: separation * e_s. Leaf centers jitter around them.
  Matrix leaf_centers(leaves, spec.feature_dim, 0.0);
  for (std::size_t s = 0; s < spec.num_superclasses; ++s) {
    for (std::size_t l = 0; l < spec.leaves_per_superclass; ++l) {
      const std::size_t leaf = s * spec.leaves_per_superclass + l;
      leaf_centers(leaf, s) = spec.superclass_separation;
      for (std::size_t d = 0; d < spec.feature_dim; ++d) {
        leaf_centers(leaf, d) += spec.leaf_jitter * rng.normal();
      }
    }
  }

  data.features = Matrix(n, spec.feature_dim, 0.0);
  data.labels.reserve(n);
  data.ids.reserve(n);
  for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
    for (std::size_t p = 0; p < spec.points_per_leaf; ++p) {
      const std::size_t row = leaf * spec.points_per_leaf + p;
      data.ids.push_back(row);
      data.labels.push_back(leaf_names[leaf]);
      for (std::size_t d = 0; d < spec.feature_dim; ++d) {
        data.features(row, d) =
            leaf_centers(leaf, d) + spec.intra_leaf_stddev * rng.normal();
      }
    }
  }

  if (spec.with_embeddings) {
    Matrix emb(n, spec.feature_dim, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
      const std::size_t leaf = row / spec.points_per_leaf;
      for (std::size_t d = 0; d < spec.feature_dim; ++d) {
        emb(row, d) = leaf_centers(leaf, d) + spec.embedding_noise * rng.normal();
      }
    }
    data.embeddings = std::move(emb);
  }
  return data;
}

}  // namespace semhash
