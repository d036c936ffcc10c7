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

#ifndef SEMHASH_METRICS_HPP_
#define SEMHASH_METRICS_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semhash/hash_code.hpp"
#include "semhash/index.hpp"
#include "semhash/matrix.hpp"
#include "semhash/taxonomy.hpp"

namespace semhash {

// The retrieval database rankings are evaluated against. Exactly one
// semantic side is required: labels + taxonomy (similarity = Wu-Palmer) or
// reference embeddings (similarity = 1 / (1 + Manhattan)). Row i of every
// field describes the record with ids[i].
struct EvalDatabase {
  std::vector<std::uint64_t> ids;
  std::vector<std::string> labels;       // empty when embeddings drive sims
  const Taxonomy* taxonomy = nullptr;
  const Matrix* embeddings = nullptr;    // N x E reference vectors

  bool has_labels() const { return taxonomy != nullptr && !labels.empty(); }
  bool has_embeddings() const { return embeddings != nullptr; }

  // Throws DataError on unknown ids. Builds its id lookup on first use, so
  // populate the database fully before the first call.
  std::size_t row_of(std::uint64_t id) const;

  // Semantic similarity between two rows, in (0, 1]: Wu-Palmer on labels,
  // else 1 / (1 + Manhattan) on embeddings. Label similarities are cached
  // per distinct label pair on first use.
  double similarity(std::size_t query_row, std::size_t other_row) const;

 private:
  void ensure_label_cache() const;

  mutable std::unordered_map<std::uint64_t, std::size_t> row_index_;
  mutable std::vector<std::size_t> label_index_;  // row -> distinct label slot
  mutable std::vector<double> label_sims_;        // distinct x distinct
  mutable std::size_t distinct_labels_ = 0;
};

// Ranked retrieval results; rankings[i] are the ids retrieved for
// query_ids[i], best first, never containing the query itself.
struct RetrievalRun {
  std::vector<std::uint64_t> query_ids;
  std::vector<std::vector<std::uint64_t>> rankings;
};

// Semantic similarity between two database rows, in (0, 1].
double row_similarity(const EvalDatabase& db, std::size_t query_row,
                      std::size_t other_row);

// Average precision over the top k: mean of precision@i at relevant hit
// positions, normalized by min(k, |relevant|). 0 when relevant is empty.
double ap_at_k(std::span<const std::uint64_t> ranking,
               const std::unordered_set<std::uint64_t>& relevant, std::size_t k);

// Mean ap_at_k over queries; an item is relevant iff it shares the query's
// label. Requires labels.
double map_at_k(const RetrievalRun& run, const EvalDatabase& db, std::size_t k);

// Hierarchical precision: achieved top-k similarity mass over the ideal
// top-k similarity mass (database reordered by descending similarity,
// query excluded). Defined as 1 when the ideal mass is zero.
double hp_at_k(std::span<const std::uint64_t> ranking,
               const std::unordered_map<std::uint64_t, double>& sims, std::size_t k);

// Mean over queries of (1/k) * sum_{j=1..k} hp_at_j.
double mahp_at_k(const RetrievalRun& run, const EvalDatabase& db, std::size_t k);

// Mean achieved/ideal similarity-mass ratio at each cutoff 1..k, averaged
// over queries; the exported precision curve.
std::vector<double> hp_curve(const RetrievalRun& run, const EvalDatabase& db,
                             std::size_t k);

// Normalized discordant-pair count between two rankings of the same id
// set, in [0, 1]. 0 iff identical, 1 for exact reversal.
double kendall_tau_distance(std::span<const std::uint64_t> r1,
                            std::span<const std::uint64_t> r2);

// Mean Kendall-tau distance between each ranking and the same ids
// reordered by ascending reference-embedding Manhattan distance to the
// query (ties by id). Requires embeddings.
double mean_kendall_tau(const RetrievalRun& run, const EvalDatabase& db);

// Percentage (0..100) of queries whose true label appears among the top-K
// retrieved items' labels. Requires labels.
double flat_hit_at_k(const RetrievalRun& run, const EvalDatabase& db, std::size_t k);

// Nearest-neighbor entropy of a seeded subsample of codes cast to +-1
// reals. sample_size >= set size means the whole set.
double binary_entropy(const HashCodeSet& set, std::size_t sample_size,
                      std::uint64_t seed);

// All-queries-vs-database runs; the query's own id is dropped from its
// ranking. The three variants must agree exactly for identical inputs.
RetrievalRun build_run(const MihIndex& index, const HashCodeSet& queries,
                       std::size_t k);
RetrievalRun build_run_linear(const HashCodeSet& database, const HashCodeSet& queries,
                              std::size_t k);
// Float-embedding variant: ranks database rows by Manhattan distance.
RetrievalRun build_run_float(const Matrix& db_embeddings,
                             std::span<const std::uint64_t> db_ids, std::size_t k);

// Flat metric table serialized as "name,k,value" CSV rows.
struct MetricRow {
  std::string name;
  std::size_t k = 0;
  double value = 0.0;
};

struct MetricReport {
  std::vector<MetricRow> rows;

  void add(std::string name, std::size_t k, double value);
  const MetricRow* find(std::string_view name, std::size_t k) const;
  void write_csv(std::ostream& out) const;
  void print(std::ostream& out) const;
  static MetricReport read_csv(std::istream& in);
};

}  // namespace semhash

#endif  // SEMHASH_METRICS_HPP_
