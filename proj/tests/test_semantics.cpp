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

#include <doctest.h>

#include <sstream>

#include "semhash/errors.hpp"
#include "semhash/semantics.hpp"
#include "semhash/taxonomy.hpp"
#include "test_util.hpp"

using namespace semhash;

namespace {

// R with children A,B; a1,a2 under A.
Taxonomy five_node_tree() {
  std::istringstream in("R\t-\nA\tR\nB\tR\na1\tA\na2\tA\n");
  return Taxonomy::load(in);
}

}  // namespace

TEST_SUITE_BEGIN("semantics");

TEST_CASE("load_taxonomy accepts a minimal tree") {
  std::istringstream in("R\t-\nA\tR\nB\tR\n");
  const Taxonomy t = Taxonomy::load(in);
  CHECK(t.size() == 3);
  CHECK(t.root() == "R");
  CHECK(t.contains("A"));
  CHECK(t.contains("B"));
  CHECK(t.depth("R") == 1);
  CHECK(t.depth("A") == 2);
}

TEST_CASE("load_taxonomy skips comments and blank lines") {
  std::istringstream in("# comment\n\nR\t-\n  \nA\tR\n");
  const Taxonomy t = Taxonomy::load(in);
  CHECK(t.size() == 2);
}

TEST_CASE("load_taxonomy rejects a two-node cycle") {
  std::istringstream in("A\tB\nB\tA\n");
  CHECK_THROWS_WITH_AS(Taxonomy::load(in),
                       doctest::Contains("cycle"), DataError);
}

TEST_CASE("load_taxonomy rejects multiple roots") {
  std::istringstream in("R\t-\nS\t-\nA\tR\n");
  CHECK_THROWS_WITH_AS(Taxonomy::load(in),
                       doctest::Contains("multiple roots"), DataError);
}

TEST_CASE("load_taxonomy rejects undeclared parents naming the line") {
  std::istringstream in("R\t-\nA\tQ\n");
  CHECK_THROWS_WITH_AS(Taxonomy::load(in), doctest::Contains("line 2"), DataError);
}

TEST_CASE("load_taxonomy rejects duplicate declarations and missing tabs") {
  std::istringstream dup("R\t-\nA\tR\nA\tR\n");
  CHECK_THROWS_AS(Taxonomy::load(dup), DataError);
  std::istringstream notab("R\t-\nA R\n");
  CHECK_THROWS_AS(Taxonomy::load(notab), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(Taxonomy::load(empty), DataError);
}

TEST_CASE("five-node tree depths") {
  const Taxonomy t = five_node_tree();
  CHECK(t.depth("R") == 1);
  CHECK(t.depth("A") == 2);
  CHECK(t.depth("a1") == 3);
}

TEST_CASE("wup_similarity matches hand-evaluated values") {
  const Taxonomy t = five_node_tree();
  CHECK(t.wup_similarity("a1", "a1") == doctest::Approx(1.0).epsilon(1e-12));
  // lcs(a1,a2) = A at depth 2: 2*2/(3+3).
  CHECK(std::abs(t.wup_similarity("a1", "a2") - 2.0 / 3.0) < 1e-12);
  // lcs(a1,B) = R: 2*1/(3+2).
  CHECK(std::abs(t.wup_similarity("a1", "B") - 0.4) < 1e-12);
}

TEST_CASE("wup_distance is 1 - similarity") {
  const Taxonomy t = five_node_tree();
  CHECK(t.wup_distance("a1", "a1") == 0.0);
  CHECK(std::abs(t.wup_distance("a1", "a2") - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(t.wup_distance("a1", "B") - 0.6) < 1e-12);
}

TEST_CASE("wup_similarity rejects unknown labels") {
  const Taxonomy t = five_node_tree();
  CHECK_THROWS_AS(t.wup_similarity("a1", "nope"), DataError);
  CHECK_THROWS_AS(t.depth("nope"), DataError);
}

TEST_CASE("wup_similarity is symmetric and 1 only on identical labels") {
  const Taxonomy t = five_node_tree();
  const std::vector<std::string> all = {"R", "A", "B", "a1", "a2"};
  for (const auto& u : all) {
    for (const auto& v : all) {
      CHECK(t.wup_similarity(u, v) == t.wup_similarity(v, u));
      if (u != v) CHECK(t.wup_similarity(u, v) < 1.0);
      CHECK(t.wup_similarity(u, v) > 0.0);
    }
  }
}

TEST_CASE("label_distance_matrix hand cases") {
  const Taxonomy t = five_node_tree();
  const std::vector<std::string> same = {"a1", "a1"};
  const DistanceMatrix d0 = label_distance_matrix(t, same);
  for (double v : d0.data) CHECK(v == 0.0);

  const std::vector<std::string> two = {"a1", "a2"};
  const DistanceMatrix d1 = label_distance_matrix(t, two);
  CHECK(std::abs(d1(0, 1) - 1.0 / 3.0) < 1e-12);
  CHECK(d1(0, 0) == 0.0);

  const std::vector<std::string> three = {"a1", "a2", "B"};
  const DistanceMatrix d2 = label_distance_matrix(t, three);
  CHECK(std::abs(d2(0, 1) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(d2(0, 2) - 0.6) < 1e-12);
  CHECK(std::abs(d2(1, 2) - 0.6) < 1e-12);
}

TEST_CASE("binary_distance_matrix is 0 iff labels match") {
  const std::vector<std::string> pair = {"a", "a"};
  for (double v : binary_distance_matrix(pair).data) CHECK(v == 0.0);

  const std::vector<std::string> diff = {"a", "b"};
  const DistanceMatrix d = binary_distance_matrix(diff);
  CHECK(d(0, 1) == 1.0);
  CHECK(d(1, 0) == 1.0);

  // Zero at both diagonal cells of the duplicate pair plus the full
  // diagonal: 5 zeros in total for [a,a,b].
  const std::vector<std::string> triple = {"a", "a", "b"};
  const DistanceMatrix d3 = binary_distance_matrix(triple);
  int zeros = 0;
  for (double v : d3.data) zeros += v == 0.0 ? 1 : 0;
  CHECK(zeros == 5);
}

TEST_CASE("embedding_distance_matrix hand cases") {
  EmbeddingTable table;
  table.vectors = Matrix(2, 1, 0.0);
  table.vectors(1, 0) = 3.0;
  const std::vector<std::size_t> rows = {0, 1};
  const DistanceMatrix d = embedding_distance_matrix(table, rows);
  CHECK(d(0, 1) == doctest::Approx(3.0));

  EmbeddingTable t2;
  t2.vectors = Matrix(2, 2, 0.0);
  t2.vectors(0, 0) = 1.0;
  t2.vectors(0, 1) = 1.0;
  t2.vectors(1, 0) = 2.0;
  t2.vectors(1, 1) = 3.0;
  const DistanceMatrix d2 = embedding_distance_matrix(t2, rows);
  CHECK(d2(0, 1) == doctest::Approx(3.0));

  const std::vector<std::size_t> dup = {0, 0, 0};
  for (double v : embedding_distance_matrix(t2, dup).data) CHECK(v == 0.0);

  const std::vector<std::size_t> bad = {0, 5};
  CHECK_THROWS_AS(embedding_distance_matrix(t2, bad), DataError);
}

TEST_CASE("distance matrices satisfy symmetry, zero diagonal, nonnegativity") {
  const Taxonomy t = five_node_tree();
  Rng rng(99);
  const std::vector<std::string> pool = {"R", "A", "B", "a1", "a2"};
  EmbeddingTable table;
  table.vectors = testing::random_matrix(rng, 8, 5, 2.0);

  for (int iter = 0; iter < 20; ++iter) {
    std::vector<std::string> labels;
    std::vector<std::size_t> rows;
    const std::size_t b = 2 + rng.below(6);
    for (std::size_t i = 0; i < b; ++i) {
      labels.push_back(pool[rng.below(pool.size())]);
      rows.push_back(rng.below(table.vectors.rows));
    }
    for (const DistanceMatrix& d :
         {label_distance_matrix(t, labels), binary_distance_matrix(labels),
          embedding_distance_matrix(table, rows)}) {
      REQUIRE(d.rows == b);
      for (std::size_t i = 0; i < b; ++i) {
        CHECK(d(i, i) == 0.0);
        for (std::size_t j = 0; j < b; ++j) {
          CHECK(d(i, j) == d(j, i));
          CHECK(d(i, j) >= 0.0);
          CHECK(std::isfinite(d(i, j)));
        }
      }
    }
  }
}

TEST_CASE("embedding distances satisfy the triangle inequality") {
  Rng rng(123);
  EmbeddingTable table;
  table.vectors = testing::random_matrix(rng, 12, 4, 3.0);
  std::vector<std::size_t> rows(table.vectors.rows);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const DistanceMatrix d = embedding_distance_matrix(table, rows);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < rows.size(); ++b) {
      for (std::size_t c = 0; c < rows.size(); ++c) {
        CHECK(d(a, c) <= d(a, b) + d(b, c) + 1e-12);
      }
    }
  }
}

TEST_CASE("taxonomy round-trips through its line format") {
  const Taxonomy t = five_node_tree();
  std::ostringstream out;
  t.write(out);
  std::istringstream in(out.str());
  const Taxonomy again = Taxonomy::load(in);
  CHECK(again.size() == t.size());
  CHECK(again.root() == t.root());
  CHECK(again.wup_similarity("a1", "B") == t.wup_similarity("a1", "B"));
}

TEST_SUITE_END();
