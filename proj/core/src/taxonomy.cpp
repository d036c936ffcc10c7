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

#include "semhash/taxonomy.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "semhash/errors.hpp"

namespace semhash {
namespace {

std::string strip(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

Taxonomy Taxonomy::load(std::istream& in) {
  Taxonomy t;
  std::vector<std::string> parent_names;
  std::vector<std::size_t> line_numbers;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string trimmed = strip(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("taxonomy line " + std::to_string(lineno) +
                      ": expected \"child<TAB>parent\", got \"" + trimmed + "\"");
    }
    const std::string child = strip(line.substr(0, tab));
    const std::string parent = strip(line.substr(tab + 1));
    if (child.empty() || parent.empty()) {
      throw DataError("taxonomy line " + std::to_string(lineno) +
                      ": empty child or parent name");
    }
    if (t.index_.count(child)) {
      throw DataError("taxonomy line " + std::to_string(lineno) + ": node \"" +
                      child + "\" declared twice");
    }
    t.index_.emplace(child, static_cast<int>(t.names_.size()));
    t.names_.push_back(child);
    parent_names.push_back(parent);
    line_numbers.push_back(lineno);
  }
  if (t.names_.empty()) throw DataError("taxonomy: no nodes declared");

  t.parents_.assign(t.names_.size(), -1);
  for (std::size_t i = 0; i < t.names_.size(); ++i) {
    if (parent_names[i] == "-") continue;
    auto it = t.index_.find(parent_names[i]);
    if (it == t.index_.end()) {
      throw DataError("taxonomy line " + std::to_string(line_numbers[i]) +
                      ": parent \"" + parent_names[i] + "\" of \"" + t.names_[i] +
                      "\" is never declared");
    }
    t.parents_[i] = it->second;
  }

  // Depth pass doubles as the cycle check: a parent chain longer than the
  // node count cannot reach a root.
  const std::size_t n = t.names_.size();
  t.depths_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.depths_[i] != 0) continue;
    std::vector<std::size_t> chain;
    std::size_t cur = i;
    std::size_t steps = 0;
    while (t.depths_[cur] == 0 && t.parents_[cur] >= 0) {
      chain.push_back(cur);
      cur = static_cast<std::size_t>(t.parents_[cur]);
      if (++steps > n) {
        throw DataError("taxonomy: cycle detected through node \"" + t.names_[i] +
                        "\" (line " + std::to_string(line_numbers[i]) + ")");
      }
    }
    int d = t.parents_[cur] < 0 ? 1 : t.depths_[cur];
    if (t.parents_[cur] < 0) t.depths_[cur] = 1;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      t.depths_[*it] = ++d;
    }
  }

  int root_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.parents_[i] < 0) {
      t.root_ = static_cast<int>(i);
      ++root_count;
    }
  }
  if (root_count == 0) throw DataError("taxonomy: no root declared (parent \"-\")");
  if (root_count > 1) {
    throw DataError("taxonomy: multiple roots declared (" +
                    std::to_string(root_count) + ")");
  }
  return t;
}

Taxonomy Taxonomy::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open taxonomy file: " + path);
  return load(in);
}

int Taxonomy::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  return it == index_.end() ? -1 : it->second;
}

int Taxonomy::intern(std::string_view label) const {
  const int id = find(label);
  if (id < 0) throw DataError("unknown taxonomy label: \"" + std::string(label) + "\"");
  return id;
}

int Taxonomy::depth(std::string_view label) const {
  return depths_[static_cast<std::size_t>(intern(label))];
}

double Taxonomy::wup_similarity_by_id(int u, int v) const {
  if (u == v) return 1.0;
  // Walk u's ancestor chain, then climb from v; the first shared node is the
  // lowest common subsumer because paths to the root are unique.
  std::unordered_map<int, int> u_chain;  // node -> depth
  int cur = u;
  while (cur >= 0) {
    u_chain.emplace(cur, depths_[static_cast<std::size_t>(cur)]);
    cur = parents_[static_cast<std::size_t>(cur)];
  }
  cur = v;
  int lcs_depth = 1;
  while (cur >= 0) {
    auto it = u_chain.find(cur);
    if (it != u_chain.end()) {
      lcs_depth = it->second;
      break;
    }
    cur = parents_[static_cast<std::size_t>(cur)];
  }
  const double du = depths_[static_cast<std::size_t>(u)];
  const double dv = depths_[static_cast<std::size_t>(v)];
  return 2.0 * lcs_depth / (du + dv);
}

double Taxonomy::wup_similarity(std::string_view u, std::string_view v) const {
  return wup_similarity_by_id(intern(u), intern(v));
}

double Taxonomy::wup_distance(std::string_view u, std::string_view v) const {
  return 1.0 - wup_similarity(u, v);
}

void Taxonomy::write(std::ostream& out) const {
  out << names_[static_cast<std::size_t>(root_)] << "\t-\n";
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (parents_[i] < 0) continue;
    out << names_[i] << '\t' << names_[static_cast<std::size_t>(parents_[i])] << '\n';
  }
}

}  // namespace semhash
