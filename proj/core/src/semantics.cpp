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

#include "semhash/semantics.hpp"

#include <unordered_map>

#include "semhash/errors.hpp"

namespace semhash {

DistanceMatrix label_distance_matrix(const Taxonomy& taxonomy,
                                     std::span<const std::string> labels) {
  const std::size_t b = labels.size();
  std::vector<int> ids(b);
  for (std::size_t i = 0; i < b; ++i) ids[i] = taxonomy.intern(labels[i]);

  // Batches repeat few distinct labels, so cache per distinct id pair.
  std::unordered_map<std::uint64_t, double> cache;
  DistanceMatrix d(b, b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = i + 1; j < b; ++j) {
      const int lo = ids[i] < ids[j] ? ids[i] : ids[j];
      const int hi = ids[i] < ids[j] ? ids[j] : ids[i];
      const std::uint64_t key =
          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lo)) << 32) |
          static_cast<std::uint32_t>(hi);
      auto it = cache.find(key);
      double dist;
      if (it != cache.end()) {
        dist = it->second;
      } else {
        dist = 1.0 - taxonomy.wup_similarity_by_id(ids[i], ids[j]);
        cache.emplace(key, dist);
      }
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

DistanceMatrix binary_distance_matrix(std::span<const std::string> labels) {
  const std::size_t b = labels.size();
  DistanceMatrix d(b, b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = i + 1; j < b; ++j) {
      const double dist = labels[i] == labels[j] ? 0.0 : 1.0;
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

DistanceMatrix embedding_distance_matrix(const EmbeddingTable& table,
                                         std::span<const std::size_t> rows) {
  const std::size_t b = rows.size();
  for (std::size_t r : rows) {
    if (r >= table.size()) {
      throw DataError("embedding row index " + std::to_string(r) +
                      " out of range (table has " + std::to_string(table.size()) +
                      " rows)");
    }
  }
  DistanceMatrix d(b, b, 0.0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = i + 1; j < b; ++j) {
      const double dist =
          l1_distance(table.vectors.row(rows[i]), table.vectors.row(rows[j]));
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

}  // namespace semhash
