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

#ifndef SEMHASH_INDEX_HPP_
#define SEMHASH_INDEX_HPP_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "semhash/hash_code.hpp"

namespace semhash {

// One retrieval result. Orderings are always (distance, id) ascending so
// rankings are deterministic.
struct SearchHit {
  std::uint64_t id = 0;
  int distance = 0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

// Exact Hamming-space search via multi-index hashing: the code is split
// into m nearly equal substrings, each indexed in its own table. A code
// within distance r of the query must match one substring within
// floor(r/m), so probing every table at that radius finds all candidates;
// candidates are then verified with exact distances. When enumerating the
// probe ball would cost more than scanning, queries fall back to a linear
// scan internally (results are identical either way).
class MihIndex {
 public:
  // Substring widths must fit a 64-bit table key, so m must be at least
  // ceil(code_dim/64); m > code_dim is an error.
  static MihIndex build(const HashCodeSet& set, std::size_t m);

  // All ids with hamming(code, q) <= r, sorted by (distance, id).
  std::vector<SearchHit> query_radius(std::span<const std::uint64_t> q, int r) const;
  std::vector<SearchHit> query_radius(const HashCode& q, int r) const;

  // The k nearest codes by (distance, id); fewer when k exceeds the set.
  std::vector<SearchHit> query_knn(std::span<const std::uint64_t> q,
                                   std::size_t k) const;
  std::vector<SearchHit> query_knn(const HashCode& q, std::size_t k) const;

  std::size_t num_substrings() const { return chunks_.size(); }
  std::size_t size() const { return set_.size(); }
  std::size_t code_dim() const { return set_.code_dim; }
  const HashCodeSet& codes() const { return set_; }

 private:
  struct Chunk {
    std::size_t offset = 0;
    std::size_t width = 0;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> table;
  };

  std::uint64_t extract(std::span<const std::uint64_t> code, const Chunk& c) const;
  void collect_chunk(const Chunk& c, std::uint64_t value, int flips,
                     std::vector<std::uint32_t>& out) const;

  HashCodeSet set_;  // owned copy; queries never touch the caller's set
  std::vector<Chunk> chunks_;
};

// floor-balanced substring count used when the caller does not pick one:
// round(code_dim / log2(max(n, 2))), clamped to a valid range.
std::size_t default_num_substrings(std::size_t code_dim, std::size_t n);

// Brute-force oracles; same (distance, id) contract as the index.
std::vector<SearchHit> linear_scan_knn(const HashCodeSet& set,
                                       std::span<const std::uint64_t> q,
                                       std::size_t k);
std::vector<SearchHit> linear_scan_radius(const HashCodeSet& set,
                                          std::span<const std::uint64_t> q, int r);

}  // namespace semhash

#endif  // SEMHASH_INDEX_HPP_
