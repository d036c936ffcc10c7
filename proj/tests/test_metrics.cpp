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
#include "semhash/losses.hpp"
#include "semhash/metrics.hpp"
#include "semhash/rng.hpp"
#include "test_util.hpp"

using namespace semhash;

namespace {

Taxonomy five_node_tree() {
  std::istringstream in("R\t-\nA\tR\nB\tR\na1\tA\na2\tA\n");
  return Taxonomy::load(in);
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("ap_at_k hand values") {
  const std::vector<std::uint64_t> ranking = {1, 2, 3, 4};
  CHECK(ap_at_k(ranking, {1, 2, 3, 4}, 4) == doctest::Approx(1.0));
  CHECK(ap_at_k(ranking, {9, 10}, 4) == 0.0);
  // Relevant items {1, 3} found at ranks 1 and 3: (1/2)(1/1 + 2/3).
  CHECK(std::abs(ap_at_k(ranking, {1, 3}, 4) - 5.0 / 6.0) < 1e-12);
  CHECK(ap_at_k(ranking, {}, 4) == 0.0);
  CHECK_THROWS_AS(ap_at_k(ranking, {1}, 0), std::invalid_argument);
}

TEST_CASE("hp_at_k hand values") {
  // Ideal [1.0, 1.0], achieved [1.0, 0.5] -> 1.5/2.0.
  const std::unordered_map<std::uint64_t, double> sims = {
      {1, 1.0}, {2, 1.0}, {3, 0.5}};
  const std::vector<std::uint64_t> ranking = {1, 3};
  CHECK(hp_at_k(ranking, sims, 2) == doctest::Approx(0.75));

  const std::vector<std::uint64_t> perfect = {1, 2};
  CHECK(hp_at_k(perfect, sims, 2) == doctest::Approx(1.0));

  // k=1 with the single best item on top.
  CHECK(hp_at_k(ranking, sims, 1) == doctest::Approx(1.0));

  const std::vector<std::uint64_t> unknown = {99};
  CHECK_THROWS_AS(hp_at_k(unknown, sims, 1), DataError);
}

TEST_CASE("hp_at_k is 1 whenever the ranking argsort-agrees with the sims") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng.below(20);
    std::unordered_map<std::uint64_t, double> sims;
    std::vector<std::pair<double, std::uint64_t>> order;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = 0.01 + rng.uniform();
      sims.emplace(i, s);
      order.emplace_back(-s, i);
    }
    std::sort(order.begin(), order.end());
    std::vector<std::uint64_t> ranking;
    for (const auto& [neg, id] : order) ranking.push_back(id);
    const std::size_t k = 1 + rng.below(n);
    CHECK(hp_at_k(ranking, sims, k) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mahp averages hp over cutoffs and queries") {
  // Two records of label a1, one of B; query 0 retrieves [1, 2].
  const Taxonomy t = five_node_tree();
  EvalDatabase db;
  db.ids = {0, 1, 2};
  db.labels = {"a1", "a1", "B"};
  db.taxonomy = &t;

  RetrievalRun run;
  run.query_ids = {0};
  run.rankings = {{1, 2}};
  // sims from query 0: id1 -> 1.0, id2 -> 0.4. Ideal = [1.0, 0.4].
  // hp@1 = 1, hp@2 = 1 -> mahp@2 = 1.
  CHECK(mahp_at_k(run, db, 2) == doctest::Approx(1.0));

  RetrievalRun reversed;
  reversed.query_ids = {0};
  reversed.rankings = {{2, 1}};
  // achieved prefixes: [0.4, 1.4]; ideal [1.0, 1.4].
  const double expected = 0.5 * (0.4 / 1.0 + 1.4 / 1.4);
  CHECK(mahp_at_k(reversed, db, 2) == doctest::Approx(expected).epsilon(1e-12));

  const std::vector<double> curve = hp_curve(reversed, db, 2);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0] == doctest::Approx(0.4));
  CHECK(curve[1] == doctest::Approx(1.0));
}

TEST_CASE("map and mahp are invariant under id relabeling") {
  const Taxonomy t = five_node_tree();
  Rng rng(17);

  EvalDatabase db;
  db.ids = {0, 1, 2, 3, 4, 5};
  db.labels = {"a1", "a1", "a2", "a2", "B", "B"};
  db.taxonomy = &t;
  RetrievalRun run;
  for (std::uint64_t q = 0; q < 6; ++q) {
    run.query_ids.push_back(q);
    std::vector<std::uint64_t> rest;
    for (std::uint64_t r = 0; r < 6; ++r) {
      if (r != q) rest.push_back(r);
    }
    rng.shuffle(rest);
    run.rankings.push_back(rest);
  }
  const double map_base = map_at_k(run, db, 3);
  const double mahp_base = mahp_at_k(run, db, 3);

  // Relabel ids by an affine map.
  auto relabel = [](std::uint64_t id) { return 1000 + 7 * id; };
  EvalDatabase db2 = db;
  for (auto& id : db2.ids) id = relabel(id);
  RetrievalRun run2 = run;
  for (auto& id : run2.query_ids) id = relabel(id);
  for (auto& r : run2.rankings) {
    for (auto& id : r) id = relabel(id);
  }
  CHECK(map_at_k(run2, db2, 3) == doctest::Approx(map_base).epsilon(1e-12));
  CHECK(mahp_at_k(run2, db2, 3) == doctest::Approx(mahp_base).epsilon(1e-12));
}

TEST_CASE("kendall_tau_distance hand values and symmetry") {
  const std::vector<std::uint64_t> r1 = {1, 2, 3};
  CHECK(kendall_tau_distance(r1, r1) == 0.0);
  const std::vector<std::uint64_t> rev = {3, 2, 1};
  CHECK(kendall_tau_distance(r1, rev) == doctest::Approx(1.0));
  const std::vector<std::uint64_t> swap = {1, 3, 2};
  CHECK(std::abs(kendall_tau_distance(r1, swap) - 1.0 / 3.0) < 1e-12);
  CHECK(kendall_tau_distance(swap, r1) == kendall_tau_distance(r1, swap));

  const std::vector<std::uint64_t> other = {4, 5, 6};
  CHECK_THROWS_AS(kendall_tau_distance(r1, other), DataError);
  const std::vector<std::uint64_t> dup = {1, 1, 2};
  CHECK_THROWS_AS(kendall_tau_distance(dup, r1), DataError);
}

TEST_CASE("kendall distance is zero only for identical rankings") {
  Rng rng(23);
  std::vector<std::uint64_t> base(12);
  for (std::size_t i = 0; i < base.size(); ++i) base[i] = 100 + i;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint64_t> shuffled = base;
    rng.shuffle(shuffled);
    const double d = kendall_tau_distance(base, shuffled);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK((d == 0.0) == (shuffled == base));
  }
}

TEST_CASE("flat_hit_at_k hand cases") {
  const Taxonomy t = five_node_tree();
  EvalDatabase db;
  db.ids = {0, 1, 2, 3};
  db.labels = {"a1", "a2", "a2", "a1"};
  db.taxonomy = &t;

  // True label a1 planted at rank 3 of query 0's ranking.
  RetrievalRun run;
  run.query_ids = {0};
  run.rankings = {{1, 2, 3}};
  CHECK(flat_hit_at_k(run, db, 5) == doctest::Approx(100.0));
  CHECK(flat_hit_at_k(run, db, 2) == doctest::Approx(0.0));

  RetrievalRun top;
  top.query_ids = {0};
  top.rankings = {{3, 1, 2}};
  for (std::size_t k : {1, 2, 5, 10, 20}) {
    CHECK(flat_hit_at_k(top, db, k) == doctest::Approx(100.0));
  }

  RetrievalRun miss;
  miss.query_ids = {0};
  miss.rankings = {{1, 2}};
  CHECK(flat_hit_at_k(miss, db, 20) == doctest::Approx(0.0));
}

TEST_CASE("binary_entropy matches entropy_estimate on +-1 reals") {
  Rng rng(31);
  HashCodeSet set;
  set.code_dim = 12;
  std::vector<std::uint64_t> code(1);
  for (std::size_t i = 0; i < 60; ++i) {
    code[0] = rng.next_u64() & 0xfff;
    set.append(i, code);
  }
  Matrix pm(60, 12, 0.0);
  for (std::size_t i = 0; i < 60; ++i) {
    for (std::size_t b = 0; b < 12; ++b) {
      pm(i, b) = ((set.code(i)[0] >> b) & 1u) ? 1.0 : -1.0;
    }
  }
  CHECK(binary_entropy(set, 0, 1) ==
        doctest::Approx(entropy_estimate(pm)).epsilon(1e-12));
}

TEST_CASE("binary_entropy of repeated codes is far below uniform codes") {
  Rng rng(37);
  HashCodeSet distinct;
  distinct.code_dim = 64;
  std::vector<std::uint64_t> code(1);
  for (std::size_t i = 0; i < 2000; ++i) {
    code[0] = rng.next_u64();
    distinct.append(i, code);
  }
  HashCodeSet repeated;
  repeated.code_dim = 64;
  for (std::size_t i = 0; i < 2000; ++i) {
    // 100 unique values, each repeated 20 times.
    code[0] = 0x9e3779b97f4a7c15ULL * (i % 100);
    repeated.append(i, code);
  }
  const double h_uniform = binary_entropy(distinct, 0, 5);
  const double h_repeated = binary_entropy(repeated, 0, 5);
  CHECK(h_repeated < h_uniform);
  CHECK(h_repeated < 0.0);  // epsilon-floored duplicates dominate

  // Subsampling is seeded and deterministic.
  CHECK(binary_entropy(distinct, 500, 9) == binary_entropy(distinct, 500, 9));
  CHECK(binary_entropy(distinct, 500, 9) != binary_entropy(distinct, 500, 10));
}

TEST_CASE("build_run excludes the query and agrees across paths") {
  Rng rng(41);
  HashCodeSet set;
  set.code_dim = 32;
  std::vector<std::uint64_t> code(1);
  for (std::size_t i = 0; i < 300; ++i) {
    code[0] = rng.next_u64() & 0xffffffffu;
    set.append(i, code);
  }
  const MihIndex idx = MihIndex::build(set, default_num_substrings(32, 300));
  const RetrievalRun mih_run = build_run(idx, set, 10);
  const RetrievalRun lin_run = build_run_linear(set, set, 10);
  REQUIRE(mih_run.query_ids == lin_run.query_ids);
  for (std::size_t q = 0; q < mih_run.rankings.size(); ++q) {
    CHECK(mih_run.rankings[q] == lin_run.rankings[q]);
    CHECK(mih_run.rankings[q].size() == 10);
    for (std::uint64_t id : mih_run.rankings[q]) {
      CHECK(id != mih_run.query_ids[q]);
    }
  }
}

TEST_CASE("build_run_float ranks by Manhattan distance with id tiebreak") {
  Matrix emb(4, 2, 0.0);
  emb(1, 0) = 1.0;   // distance 1 from query 0
  emb(2, 0) = 3.0;   // distance 3
  emb(3, 1) = 1.0;   // distance 1, higher id than 1
  const std::vector<std::uint64_t> ids = {10, 11, 12, 13};
  const RetrievalRun run = build_run_float(emb, ids, 3);
  CHECK(run.rankings[0] == std::vector<std::uint64_t>{11, 13, 12});
}

TEST_CASE("metric report CSV round-trips") {
  MetricReport r;
  r.add("map", 50, 0.87616143524962109);
  r.add("binary_entropy", 0, -432.3506619134219);
  std::ostringstream out;
  r.write_csv(out);
  std::istringstream in(out.str());
  const MetricReport back = MetricReport::read_csv(in);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].name == "map");
  CHECK(back.rows[0].k == 50);
  CHECK(back.rows[0].value == r.rows[0].value);
  CHECK(back.rows[1].value == r.rows[1].value);
  CHECK(back.find("map", 50) != nullptr);
  CHECK(back.find("map", 51) == nullptr);

  std::istringstream bad("name,k,value\nmap,x,1.0\n");
  CHECK_THROWS_AS(MetricReport::read_csv(bad), DataError);
}

TEST_SUITE_END();
