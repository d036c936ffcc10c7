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

#ifndef SEMHASH_TAXONOMY_HPP_
#define SEMHASH_TAXONOMY_HPP_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semhash {

// Rooted label tree. Depth convention: depth(root) = 1, each child one
// deeper than its parent. Labels are opaque strings interned to dense ids.
class Taxonomy {
 public:
  // Parses "child<TAB>parent" lines; the root is declared with parent "-".
  // Lines starting with '#' and blank lines are ignored. Throws DataError
  // naming the offending line on cycles, multiple/missing roots, duplicate
  // declarations, or parents that are never declared themselves.
  static Taxonomy load(std::istream& in);
  static Taxonomy load_file(const std::string& path);

  std::size_t size() const { return names_.size(); }
  const std::string& root() const { return names_[static_cast<std::size_t>(root_)]; }

  bool contains(std::string_view label) const { return find(label) >= 0; }
  const std::vector<std::string>& labels() const { return names_; }

  // Depth of a label (root = 1). Throws DataError on unknown labels.
  int depth(std::string_view label) const;

  // Wu-Palmer similarity 2*depth(lcs) / (depth(u) + depth(v)), in (0, 1].
  double wup_similarity(std::string_view u, std::string_view v) const;

  // 1 - wup_similarity, in [0, 1).
  double wup_distance(std::string_view u, std::string_view v) const;

  // Interned-id variants used on hot paths.
  int intern(std::string_view label) const;  // throws DataError if unknown
  double wup_similarity_by_id(int u, int v) const;
  int depth_by_id(int id) const { return depths_[static_cast<std::size_t>(id)]; }
  int parent_by_id(int id) const { return parents_[static_cast<std::size_t>(id)]; }

  // Serialized back to the same line format (root line first).
  void write(std::ostream& out) const;

 private:
  int find(std::string_view label) const;

  std::vector<std::string> names_;
  std::vector<int> parents_;  // -1 for the root
  std::vector<int> depths_;
  std::unordered_map<std::string, int> index_;
  int root_ = -1;
};

}  // namespace semhash

#endif  // SEMHASH_TAXONOMY_HPP_
