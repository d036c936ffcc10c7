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

#include "semhash/index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "semhash/errors.hpp"

namespace semhash {
namespace {

bool hit_less(const SearchHit& a, const SearchHit& b) {
  return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
}

// Number of substring values within Hamming radius r of a w-bit value,
// saturating at `cap` to keep the cost estimate cheap.
double probe_ball_size(std::size_t w, int r, double cap) {
  double total = 0.0;
  double c = 1.0;  // C(w, i)
  for (int i = 0; i <= r && static_cast<std::size_t>(i) <= w; ++i) {
    total += c;
    if (total > cap) return cap + 1.0;
    c = c * static_cast<double>(w - static_cast<std::size_t>(i)) /
        static_cast<double>(i + 1);
  }
  return total;
}

}  // namespace

std::size_t default_num_substrings(std::size_t code_dim, std::size_t n) {
  const double bits = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  auto m = static_cast<std::size_t>(std::llround(static_cast<double>(code_dim) / bits));
  const std::size_t min_m = (code_dim + 63) / 64;  // keys must fit 64 bits
  m = std::max(m, std::max<std::size_t>(min_m, 1));
  return std::min(m, code_dim);
}

MihIndex MihIndex::build(const HashCodeSet& set, std::size_t m) {
  if (set.code_dim == 0) throw std::invalid_argument("build_mih: empty code_dim");
  if (m == 0 || m > set.code_dim) {
    throw std::invalid_argument("build_mih: m must be in [1, code_dim]");
  }
  if ((set.code_dim + m - 1) / m > 64) {
    throw std::invalid_argument(
        "build_mih: substring width exceeds 64 bits; increase m");
  }
  MihIndex idx;
  idx.set_ = set;

  // Widths differ by at most one and sum to code_dim.
  const std::size_t base = set.code_dim / m;
  const std::size_t extra = set.code_dim % m;
  std::size_t offset = 0;
  for (std::size_t j = 0; j < m; ++j) {
    Chunk c;
    c.offset = offset;
    c.width = base + (j < extra ? 1 : 0);
    offset += c.width;
    idx.chunks_.push_back(std::move(c));
  }

  for (std::size_t i = 0; i < idx.set_.size(); ++i) {
    const auto code = idx.set_.code(i);
    for (Chunk& c : idx.chunks_) {
      c.table[idx.extract(code, c)].push_back(static_cast<std::uint32_t>(i));
    }
  }
  return idx;
}

std::uint64_t MihIndex::extract(std::span<const std::uint64_t> code,
                                const Chunk& c) const {
  std::uint64_t value = 0;
  for (std::size_t b = 0; b < c.width; ++b) {
    const std::size_t bit = c.offset + b;
    if ((code[bit / 64] >> (bit % 64)) & 1u) value |= std::uint64_t{1} << b;
  }
  return value;
}

void MihIndex::collect_chunk(const Chunk& c, std::uint64_t value, int flips,
                             std::vector<std::uint32_t>& out) const {
  if (flips == 0) {
    auto it = c.table.find(value);
    if (it != c.table.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    return;
  }
  // Enumerate masks of exactly `flips` set bits over c.width positions.
  std::vector<std::size_t> pos(static_cast<std::size_t>(flips));
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
  for (;;) {
    std::uint64_t mask = 0;
    for (std::size_t p : pos) mask |= std::uint64_t{1} << p;
    auto it = c.table.find(value ^ mask);
    if (it != c.table.end()) out.insert(out.end(), it->second.begin(), it->second.end());

    // Next combination.
    std::size_t i = pos.size();
    while (i-- > 0) {
      if (pos[i] + (pos.size() - i) < c.width) {
        ++pos[i];
        for (std::size_t j = i + 1; j < pos.size(); ++j) pos[j] = pos[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

std::vector<SearchHit> MihIndex::query_radius(std::span<const std::uint64_t> q,
                                              int r) const {
  if (r < 0) throw std::invalid_argument("query_radius: negative radius");
  const std::size_t n = set_.size();
  std::vector<SearchHit> hits;
  if (n == 0) return hits;

  const int sub_r = r / static_cast<int>(chunks_.size());
  double cost = 0.0;
  for (const Chunk& c : chunks_) {
    cost += probe_ball_size(c.width, sub_r, static_cast<double>(n));
  }
  if (cost > static_cast<double>(n)) {
    return linear_scan_radius(set_, q, r);
  }

  std::vector<std::uint32_t> candidates;
  for (const Chunk& c : chunks_) {
    const std::uint64_t value = extract(q, c);
    for (int f = 0; f <= sub_r && static_cast<std::size_t>(f) <= c.width; ++f) {
      collect_chunk(c, value, f, candidates);
    }
  }

  std::vector<std::uint8_t> seen(n, 0);
  for (std::uint32_t i : candidates) {
    if (seen[i]) continue;
    seen[i] = 1;
    const int d = hamming(set_.code(i), q);
    if (d <= r) hits.push_back({set_.ids[i], d});
  }
  std::sort(hits.begin(), hits.end(), hit_less);
  return hits;
}

std::vector<SearchHit> MihIndex::query_knn(std::span<const std::uint64_t> q,
                                           std::size_t k) const {
  const std::size_t n = set_.size();
  std::vector<SearchHit> hits;
  if (n == 0 || k == 0) return hits;
  const std::size_t want = std::min(k, n);
  const int m = static_cast<int>(chunks_.size());

  std::vector<std::uint8_t> seen(n, 0);
  std::vector<SearchHit> found;
  std::vector<std::uint32_t> ring;
  double cost = 0.0;

  std::size_t max_width = 0;
  for (const Chunk& c : chunks_) max_width = std::max(max_width, c.width);

  for (int s = 0; static_cast<std::size_t>(s) <= max_width; ++s) {
    for (const Chunk& c : chunks_) {
      cost += probe_ball_size(c.width, s, static_cast<double>(n)) -
              probe_ball_size(c.width, s - 1, static_cast<double>(n));
    }
    if (cost > static_cast<double>(n)) {
      return linear_scan_knn(set_, q, k);
    }

    ring.clear();
    for (const Chunk& c : chunks_) {
      if (static_cast<std::size_t>(s) <= c.width) {
        collect_chunk(c, extract(q, c), s, ring);
      }
    }
    for (std::uint32_t i : ring) {
      if (seen[i]) continue;
      seen[i] = 1;
      found.push_back({set_.ids[i], hamming(set_.code(i), q)});
    }

    // Probing every table at substring radius s guarantees completeness up
    // to total distance m*(s+1) - 1.
    const int complete_r = m * (s + 1) - 1;
    std::size_t within = 0;
    for (const SearchHit& h : found) {
      if (h.distance <= complete_r) ++within;
    }
    if (within >= want) {
      std::sort(found.begin(), found.end(), hit_less);
      found.resize(want);
      return found;
    }
  }

  // Every code has been probed (s reached the widest chunk).
  std::sort(found.begin(), found.end(), hit_less);
  if (found.size() > want) found.resize(want);
  return found;
}

std::vector<SearchHit> MihIndex::query_radius(const HashCode& q, int r) const {
  if (q.dim != set_.code_dim) throw std::invalid_argument("query: code_dim mismatch");
  return query_radius(std::span<const std::uint64_t>(q.words), r);
}

std::vector<SearchHit> MihIndex::query_knn(const HashCode& q, std::size_t k) const {
  if (q.dim != set_.code_dim) throw std::invalid_argument("query: code_dim mismatch");
  return query_knn(std::span<const std::uint64_t>(q.words), k);
}

std::vector<SearchHit> linear_scan_knn(const HashCodeSet& set,
                                       std::span<const std::uint64_t> q,
                                       std::size_t k) {
  std::vector<SearchHit> hits = linear_scan_radius(set, q, static_cast<int>(set.code_dim));
  if (hits.size() > k) hits.resize(k);
  return hits;
}

std::vector<SearchHit> linear_scan_radius(const HashCodeSet& set,
                                          std::span<const std::uint64_t> q, int r) {
  std::vector<SearchHit> hits;
  hits.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const int d = hamming(set.code(i), q);
    if (d <= r) hits.push_back({set.ids[i], d});
  }
  std::sort(hits.begin(), hits.end(), hit_less);
  return hits;
}

}  // namespace semhash
