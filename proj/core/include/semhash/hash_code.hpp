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

#ifndef SEMHASH_HASH_CODE_HPP_
#define SEMHASH_HASH_CODE_HPP_

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace semhash {

// One binary code: bit i lives in words[i / 64] at position i % 64.
struct HashCode {
  std::uint64_t id = 0;
  std::size_t dim = 0;
  std::vector<std::uint64_t> words;

  bool bit(std::size_t i) const { return (words[i / 64] >> (i % 64)) & 1u; }
};

// Packed code database. Codes are stored contiguously, words_per_code()
// words each; ids are unique.
struct HashCodeSet {
  std::size_t code_dim = 0;
  std::vector<std::uint64_t> words;
  std::vector<std::uint64_t> ids;

  std::size_t size() const { return ids.size(); }
  std::size_t words_per_code() const { return (code_dim + 63) / 64; }

  std::span<const std::uint64_t> code(std::size_t i) const {
    const std::size_t w = words_per_code();
    return {words.data() + i * w, w};
  }
  std::span<std::uint64_t> code(std::size_t i) {
    const std::size_t w = words_per_code();
    return {words.data() + i * w, w};
  }

  void append(std::uint64_t id, std::span<const std::uint64_t> code_words) {
    ids.push_back(id);
    words.insert(words.end(), code_words.begin(), code_words.end());
  }

  HashCode extract(std::size_t i) const {
    const auto c = code(i);
    return HashCode{ids[i], code_dim, {c.begin(), c.end()}};
  }
};

inline int hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::popcount(a[i] ^ b[i]);
  return d;
}

inline int hamming(const HashCode& a, const HashCode& b) {
  return hamming(std::span<const std::uint64_t>(a.words),
                 std::span<const std::uint64_t>(b.words));
}

}  // namespace semhash

#endif  // SEMHASH_HASH_CODE_HPP_
