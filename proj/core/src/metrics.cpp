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

#include "semhash/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "semhash/errors.hpp"
#include "semhash/losses.hpp"
#include "semhash/rng.hpp"

namespace semhash {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

void require_run_shape(const RetrievalRun& run) {
  if (run.query_ids.size() != run.rankings.size()) {
    throw DataError("retrieval run: query/ranking count mismatch");
  }
}

// hp@j from prefix sums, zero-padded past the available lengths; a zero
// ideal mass makes the query vacuous (hp = 1).
double hp_from_prefixes(const std::vector<double>& achieved,
                        const std::vector<double>& ideal, std::size_t j) {
  const double a = achieved[std::min(j, achieved.size() - 1)];
  const double i = ideal[std::min(j, ideal.size() - 1)];
  return i <= 0.0 ? 1.0 : a / i;
}

std::vector<double> prefix_sums(std::span<const double> values) {
  std::vector<double> p(values.size() + 1, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) p[i + 1] = p[i] + values[i];
  return p;
}

// Per-query hp@j for j = 1..k. Shared core of hp_at_k / mahp_at_k /
// hp_curve so they cannot drift apart.
std::vector<double> query_hp_values(const RetrievalRun& run, const EvalDatabase& db,
                                    std::size_t q, std::size_t k) {
  const std::size_t query_row = db.row_of(run.query_ids[q]);

  std::vector<double> ideal;
  ideal.reserve(db.ids.size() - 1);
  for (std::size_t r = 0; r < db.ids.size(); ++r) {
    if (r == query_row) continue;
    ideal.push_back(row_similarity(db, query_row, r));
  }
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  if (ideal.size() > k) ideal.resize(k);

  std::vector<double> achieved;
  achieved.reserve(std::min(k, run.rankings[q].size()));
  for (std::uint64_t id : run.rankings[q]) {
    if (achieved.size() == k) break;
    achieved.push_back(row_similarity(db, query_row, db.row_of(id)));
  }

  const std::vector<double> ap = prefix_sums(achieved);
  const std::vector<double> ip = prefix_sums(ideal);
  std::vector<double> hp(k);
  for (std::size_t j = 1; j <= k; ++j) hp[j - 1] = hp_from_prefixes(ap, ip, j);
  return hp;
}

// Counts inversions while merge-sorting `seq`.
std::uint64_t count_inversions(std::vector<std::size_t>& seq,
                               std::vector<std::size_t>& scratch, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(seq, scratch, lo, mid) +
                      count_inversions(seq, scratch, mid, hi);
  std::size_t a = lo, b = mid, out = lo;
  while (a < mid && b < hi) {
    if (seq[a] <= seq[b]) {
      scratch[out++] = seq[a++];
    } else {
      inv += mid - a;
      scratch[out++] = seq[b++];
    }
  }
  while (a < mid) scratch[out++] = seq[a++];
  while (b < hi) scratch[out++] = seq[b++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            seq.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace

std::size_t EvalDatabase::row_of(std::uint64_t id) const {
  if (row_index_.empty() && !ids.empty()) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!row_index_.emplace(ids[i], i).second) {
        throw DataError("database ids are not unique");
      }
    }
  }
  auto it = row_index_.find(id);
  if (it == row_index_.end()) {
    throw DataError("id " + std::to_string(id) + " not present in database");
  }
  return it->second;
}

void EvalDatabase::ensure_label_cache() const {
  if (!label_index_.empty()) return;
  std::unordered_map<std::string, std::size_t> slots;
  label_index_.resize(labels.size());
  std::vector<int> interned;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    auto [it, inserted] = slots.emplace(labels[r], slots.size());
    if (inserted) interned.push_back(taxonomy->intern(labels[r]));
    label_index_[r] = it->second;
  }
  distinct_labels_ = slots.size();
  label_sims_.assign(distinct_labels_ * distinct_labels_, 1.0);
  for (std::size_t a = 0; a < distinct_labels_; ++a) {
    for (std::size_t b = a + 1; b < distinct_labels_; ++b) {
      const double s = taxonomy->wup_similarity_by_id(interned[a], interned[b]);
      label_sims_[a * distinct_labels_ + b] = s;
      label_sims_[b * distinct_labels_ + a] = s;
    }
  }
}

double EvalDatabase::similarity(std::size_t query_row, std::size_t other_row) const {
  if (has_labels()) {
    ensure_label_cache();
    return label_sims_[label_index_[query_row] * distinct_labels_ +
                       label_index_[other_row]];
  }
  if (has_embeddings()) {
    const double d =
        l1_distance(embeddings->row(query_row), embeddings->row(other_row));
    return 1.0 / (1.0 + d);
  }
  throw DataError("database has neither labels+taxonomy nor embeddings");
}

double row_similarity(const EvalDatabase& db, std::size_t query_row,
                      std::size_t other_row) {
  return db.similarity(query_row, other_row);
}

double ap_at_k(std::span<const std::uint64_t> ranking,
               const std::unordered_set<std::uint64_t>& relevant, std::size_t k) {
  if (k == 0) throw std::invalid_argument("ap_at_k: k must be positive");
  if (relevant.empty()) return 0.0;
  const std::size_t upto = std::min(k, ranking.size());
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < upto; ++i) {
    if (relevant.count(ranking[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(std::min(k, relevant.size()));
}

double map_at_k(const RetrievalRun& run, const EvalDatabase& db, std::size_t k) {
  require_run_shape(run);
  if (!db.has_labels()) throw DataError("map_at_k requires labels");
  if (run.query_ids.empty()) throw DataError("map_at_k: empty run");
  double sum = 0.0;
  for (std::size_t q = 0; q < run.query_ids.size(); ++q) {
    const std::size_t query_row = db.row_of(run.query_ids[q]);
    std::unordered_set<std::uint64_t> relevant;
    for (std::size_t r = 0; r < db.ids.size(); ++r) {
      if (r != query_row && db.labels[r] == db.labels[query_row]) {
        relevant.insert(db.ids[r]);
      }
    }
    sum += ap_at_k(run.rankings[q], relevant, k);
  }
  return sum / static_cast<double>(run.query_ids.size());
}

double hp_at_k(std::span<const std::uint64_t> ranking,
               const std::unordered_map<std::uint64_t, double>& sims, std::size_t k) {
  if (k == 0) throw std::invalid_argument("hp_at_k: k must be positive");
  std::vector<double> ideal;
  ideal.reserve(sims.size());
  for (const auto& [id, s] : sims) ideal.push_back(s);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  if (ideal.size() > k) ideal.resize(k);

  std::vector<double> achieved;
  for (std::uint64_t id : ranking) {
    if (achieved.size() == k) break;
    auto it = sims.find(id);
    if (it == sims.end()) throw DataError("hp_at_k: retrieved id missing from sims");
    achieved.push_back(it->second);
  }
  return hp_from_prefixes(prefix_sums(achieved), prefix_sums(ideal), k);
}

double mahp_at_k(const RetrievalRun& run, const EvalDatabase& db, std::size_t k) {
  require_run_shape(run);
  if (run.query_ids.empty()) throw DataError("mahp_at_k: empty run");
  if (k == 0) throw std::invalid_argument("mahp_at_k: k must be positive");
  double total = 0.0;
  for (std::size_t q = 0; q < run.query_ids.size(); ++q) {
    const std::vector<double> hp = query_hp_values(run, db, q, k);
    double ahp = 0.0;
    for (double v : hp) ahp += v;
    total += ahp / static_cast<double>(k);
  }
  return total / static_cast<double>(run.query_ids.size());
}

std::vector<double> hp_curve(const RetrievalRun& run, const EvalDatabase& db,
                             std::size_t k) {
  require_run_shape(run);
  if (run.query_ids.empty()) throw DataError("hp_curve: empty run");
  std::vector<double> curve(k, 0.0);
  for (std::size_t q = 0; q < run.query_ids.size(); ++q) {
    const std::vector<double> hp = query_hp_values(run, db, q, k);
    for (std::size_t j = 0; j < k; ++j) curve[j] += hp[j];
  }
  for (double& v : curve) v /= static_cast<double>(run.query_ids.size());
  return curve;
}

double kendall_tau_distance(std::span<const std::uint64_t> r1,
                            std::span<const std::uint64_t> r2) {
  if (r1.size() != r2.size()) {
    throw DataError("kendall_tau_distance: rankings differ in length");
  }
  const std::size_t n = r1.size();
  if (n < 2) return 0.0;
  std::unordered_map<std::uint64_t, std::size_t> pos;
  pos.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!pos.emplace(r2[i], i).second) {
      throw DataError("kendall_tau_distance: duplicate id in ranking");
    }
  }
  std::vector<std::size_t> seq(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = pos.find(r1[i]);
    if (it == pos.end()) {
      throw DataError("kendall_tau_distance: rankings are over different ids");
    }
    seq[i] = it->second;
  }
  std::vector<std::size_t> scratch(n);
  const std::uint64_t inv = count_inversions(seq, scratch, 0, n);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return static_cast<double>(inv) / pairs;
}

double mean_kendall_tau(const RetrievalRun& run, const EvalDatabase& db) {
  require_run_shape(run);
  if (!db.has_embeddings()) {
    throw DataError("kendall tau requires reference embeddings");
  }
  if (run.query_ids.empty()) throw DataError("mean_kendall_tau: empty run");
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t q = 0; q < run.query_ids.size(); ++q) {
    const auto& ranking = run.rankings[q];
    if (ranking.size() < 2) continue;
    const std::size_t query_row = db.row_of(run.query_ids[q]);
    std::vector<std::pair<double, std::uint64_t>> ref;
    ref.reserve(ranking.size());
    for (std::uint64_t id : ranking) {
      const double d = l1_distance(db.embeddings->row(query_row),
                                   db.embeddings->row(db.row_of(id)));
      ref.emplace_back(d, id);
    }
    std::sort(ref.begin(), ref.end());
    std::vector<std::uint64_t> reference(ranking.size());
    for (std::size_t i = 0; i < ref.size(); ++i) reference[i] = ref[i].second;
    total += kendall_tau_distance(ranking, reference);
    ++counted;
  }
  if (counted == 0) throw DataError("mean_kendall_tau: all rankings shorter than 2");
  return total / static_cast<double>(counted);
}

double flat_hit_at_k(const RetrievalRun& run, const EvalDatabase& db, std::size_t k) {
  require_run_shape(run);
  if (!db.has_labels()) throw DataError("flat_hit_at_k requires labels");
  if (run.query_ids.empty()) throw DataError("flat_hit_at_k: empty run");
  std::size_t hits = 0;
  for (std::size_t q = 0; q < run.query_ids.size(); ++q) {
    const std::string& truth = db.labels[db.row_of(run.query_ids[q])];
    const auto& ranking = run.rankings[q];
    const std::size_t upto = std::min(k, ranking.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (db.labels[db.row_of(ranking[i])] == truth) {
        ++hits;
        break;
      }
    }
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(run.query_ids.size());
}

double binary_entropy(const HashCodeSet& set, std::size_t sample_size,
                      std::uint64_t seed) {
  const std::size_t n = set.size();
  if (n < 2) throw std::invalid_argument("binary_entropy: need at least 2 codes");

  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  std::size_t take = n;
  if (sample_size > 0 && sample_size < n) {
    // Partial Fisher-Yates: the first `take` entries are a uniform sample
    // without replacement.
    Rng rng(seed);
    for (std::size_t i = 0; i < sample_size; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(rows[i], rows[j]);
    }
    take = sample_size;
  }
  if (take < 2) throw std::invalid_argument("binary_entropy: sample too small");

  // Codes cast to +-1 reals differ by 4 per differing bit, so the Euclidean
  // NN distance is 2*sqrt(min hamming). Working on packed words avoids
  // materializing the real matrix.
  const double dim = static_cast<double>(set.code_dim);
  double log_sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) {
    const auto ci = set.code(rows[i]);
    int best = static_cast<int>(set.code_dim) + 1;
    for (std::size_t j = 0; j < take; ++j) {
      if (j == i) continue;
      const int d = hamming(ci, set.code(rows[j]));
      if (d < best) best = d;
    }
    const double nu = 2.0 * std::sqrt(static_cast<double>(best));
    log_sum += std::log(nu < kNuEpsilon ? kNuEpsilon : nu);
  }
  const double log_unit_ball =
      dim / 2.0 * std::log(3.14159265358979323846) - std::lgamma(dim / 2.0 + 1.0);
  return dim / static_cast<double>(take) * log_sum +
         std::log(static_cast<double>(take - 1)) + log_unit_ball + kEulerGamma;
}

RetrievalRun build_run(const MihIndex& index, const HashCodeSet& queries,
                       std::size_t k) {
  RetrievalRun run;
  run.query_ids = queries.ids;
  run.rankings.resize(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto hits = index.query_knn(queries.code(q), k + 1);
    auto& ranking = run.rankings[q];
    ranking.reserve(k);
    for (const SearchHit& h : hits) {
      if (h.id == queries.ids[q]) continue;
      if (ranking.size() == k) break;
      ranking.push_back(h.id);
    }
  }
  return run;
}

RetrievalRun build_run_linear(const HashCodeSet& database, const HashCodeSet& queries,
                              std::size_t k) {
  RetrievalRun run;
  run.query_ids = queries.ids;
  run.rankings.resize(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto hits = linear_scan_knn(database, queries.code(q), k + 1);
    auto& ranking = run.rankings[q];
    ranking.reserve(k);
    for (const SearchHit& h : hits) {
      if (h.id == queries.ids[q]) continue;
      if (ranking.size() == k) break;
      ranking.push_back(h.id);
    }
  }
  return run;
}

RetrievalRun build_run_float(const Matrix& db_embeddings,
                             std::span<const std::uint64_t> db_ids, std::size_t k) {
  if (db_embeddings.rows != db_ids.size()) {
    throw DataError("build_run_float: embedding/id count mismatch");
  }
  RetrievalRun run;
  run.query_ids.assign(db_ids.begin(), db_ids.end());
  run.rankings.resize(db_ids.size());
  std::vector<std::pair<double, std::uint64_t>> dist(db_ids.size());
  for (std::size_t q = 0; q < db_ids.size(); ++q) {
    for (std::size_t r = 0; r < db_ids.size(); ++r) {
      dist[r] = {l1_distance(db_embeddings.row(q), db_embeddings.row(r)), db_ids[r]};
    }
    std::sort(dist.begin(), dist.end());
    auto& ranking = run.rankings[q];
    ranking.reserve(k);
    for (const auto& [d, id] : dist) {
      if (id == db_ids[q]) continue;
      if (ranking.size() == k) break;
      ranking.push_back(id);
    }
  }
  return run;
}

void MetricReport::add(std::string name, std::size_t k, double value) {
  rows.push_back({std::move(name), k, value});
}

const MetricRow* MetricReport::find(std::string_view name, std::size_t k) const {
  for (const MetricRow& r : rows) {
    if (r.name == name && r.k == k) return &r;
  }
  return nullptr;
}

void MetricReport::write_csv(std::ostream& out) const {
  out << "name,k,value\n";
  for (const MetricRow& r : rows) {
    out << r.name << ',' << r.k << ',' << std::setprecision(17) << r.value << '\n';
  }
}

void MetricReport::print(std::ostream& out) const {
  for (const MetricRow& r : rows) {
    std::ostringstream label;
    label << r.name;
    if (r.k > 0) label << "@" << r.k;
    out << std::left << std::setw(24) << label.str() << std::setprecision(6)
        << r.value << '\n';
  }
}

MetricReport MetricReport::read_csv(std::istream& in) {
  MetricReport report;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == "name,k,value") continue;
    }
    std::istringstream ss(line);
    MetricRow row;
    std::string k_str, value_str;
    if (!std::getline(ss, row.name, ',') || !std::getline(ss, k_str, ',') ||
        !std::getline(ss, value_str)) {
      throw DataError("metric csv line " + std::to_string(lineno) +
                      ": expected name,k,value");
    }
    try {
      row.k = static_cast<std::size_t>(std::stoull(k_str));
      row.value = std::stod(value_str);
    } catch (const std::exception&) {
      throw DataError("metric csv line " + std::to_string(lineno) +
                      ": bad numeric field");
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace semhash
