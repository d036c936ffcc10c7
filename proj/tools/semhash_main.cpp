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

// Command-line pipeline: gen-data -> train -> encode -> index/query ->
// eval / baseline-onehot / report.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semhash/config.hpp"
#include "semhash/errors.hpp"
#include "semhash/index.hpp"
#include "semhash/io.hpp"
#include "semhash/losses.hpp"
#include "semhash/metrics.hpp"
#include "semhash/semantics.hpp"
#include "semhash/synthetic.hpp"
#include "semhash/taxonomy.hpp"
#include "semhash/train.hpp"

namespace {

using namespace semhash;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

std::ofstream open_text_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  return out;
}

// ---------------------------------------------------------------------------
// gen-data

struct GenDataArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

int run_gen_data(const GenDataArgs& args) {
  SyntheticSpec spec;
  if (!args.config_path.empty()) {
    const Config cfg = Config::load_file(args.config_path);
    spec.num_superclasses = cfg.get_u64("superclasses", spec.num_superclasses);
    spec.leaves_per_superclass =
        cfg.get_u64("leaves_per_superclass", spec.leaves_per_superclass);
    spec.points_per_leaf = cfg.get_u64("points_per_leaf", spec.points_per_leaf);
    spec.feature_dim = cfg.get_u64("feature_dim", spec.feature_dim);
    spec.superclass_separation =
        cfg.get_double("separation", spec.superclass_separation);
    spec.leaf_jitter = cfg.get_double("leaf_jitter", spec.leaf_jitter);
    spec.intra_leaf_stddev = cfg.get_double("stddev", spec.intra_leaf_stddev);
    spec.with_embeddings = cfg.get_bool("embeddings", spec.with_embeddings);
    spec.embedding_noise = cfg.get_double("embedding_noise", spec.embedding_noise);
    spec.seed = cfg.get_u64("seed", spec.seed);
    cfg.check_unknown_keys();
  }
  if (args.seed) spec.seed = *args.seed;

  const SyntheticDataset data = generate_synthetic(spec);
  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path dir(args.out_dir);
  io::write_embeddings((dir / "features.semb").string(), data.features);
  io::write_labels((dir / "labels.txt").string(), data.labels);
  io::write_taxonomy((dir / "taxonomy.txt").string(), data.taxonomy);
  if (data.embeddings) {
    io::write_embeddings((dir / "embeddings.semb").string(), *data.embeddings);
  }
  std::cout << "wrote " << data.features.rows << " records ("
            << data.labels.size() << " labels, dim " << data.features.cols
            << ") to " << args.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string config_path;
  std::string features_path;
  std::string labels_path;
  std::string taxonomy_path;
  std::string embeddings_path;
  std::string checkpoint_path;
  std::string trace_path;
  std::vector<std::string> losses;   // overrides config when nonempty
  std::string distance_source;       // wup | binary | embedding
  std::optional<std::uint64_t> seed;
  std::optional<double> learning_rate;
  std::optional<std::uint64_t> epochs;
};

std::vector<int> class_ids_from_labels(const std::vector<std::string>& labels) {
  std::vector<std::string> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    index[distinct[i]] = static_cast<int>(i);
  }
  std::vector<int> ids(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) ids[i] = index[labels[i]];
  return ids;
}

void apply_loss_flags(TrainConfig& cfg, const std::vector<std::string>& losses) {
  cfg.use_sim = cfg.use_kl = cfg.use_class = cfg.use_reg = false;
  for (const std::string& l : losses) {
    if (l == "sim") {
      cfg.use_sim = true;
    } else if (l == "kl") {
      cfg.use_kl = true;
    } else if (l == "class") {
      cfg.use_class = true;
    } else if (l == "reg") {
      cfg.use_reg = true;
    } else {
      throw DataError("unknown loss flag \"" + l +
                      "\" (expected sim, kl, class, reg)");
    }
  }
}

int run_train(const TrainArgs& args) {
  TrainConfig cfg;
  std::vector<std::size_t> hidden = {64, 64};
  std::size_t code_dim = 16;
  std::vector<std::string> losses = {"sim", "kl"};

  if (!args.config_path.empty()) {
    const Config file = Config::load_file(args.config_path);
    cfg.epochs = file.get_u64("epochs", cfg.epochs);
    cfg.batch_size = file.get_u64("batch_size", cfg.batch_size);
    cfg.learning_rate = file.get_double("learning_rate", cfg.learning_rate);
    cfg.weight_decay = file.get_double("weight_decay", cfg.weight_decay);
    cfg.weights.lambda1 = file.get_double("lambda1", cfg.weights.lambda1);
    cfg.weights.lambda2 = file.get_double("lambda2", cfg.weights.lambda2);
    cfg.alpha = file.get_double("alpha", cfg.alpha);
    cfg.pair.gamma = file.get_double("gamma", cfg.pair.gamma);
    cfg.pair.rho = file.get_double("rho", cfg.pair.rho);
    cfg.target_batch_size = file.get_u64("target_batch_size", cfg.target_batch_size);
    cfg.seed = file.get_u64("seed", cfg.seed);
    code_dim = file.get_u64("code_dim", code_dim);
    losses = file.get_list("losses", losses);
    const auto hidden_strs = file.get_list("hidden", {});
    if (!hidden_strs.empty()) {
      hidden.clear();
      for (const std::string& h : hidden_strs) {
        hidden.push_back(static_cast<std::size_t>(std::stoull(h)));
      }
    }
    file.check_unknown_keys();
  }
  if (!args.losses.empty()) losses = args.losses;
  if (args.seed) cfg.seed = *args.seed;
  if (args.learning_rate) cfg.learning_rate = *args.learning_rate;
  if (args.epochs) cfg.epochs = *args.epochs;
  apply_loss_flags(cfg, losses);

  TrainDataset data;
  data.features = io::read_embeddings(args.features_path);

  std::vector<std::string> labels;
  std::optional<Taxonomy> taxonomy;
  if (!args.labels_path.empty()) {
    labels = io::read_labels(args.labels_path);
    if (labels.size() != data.features.rows) {
      throw DataError("label count does not match feature rows");
    }
  }
  if (!args.taxonomy_path.empty()) taxonomy = io::read_taxonomy(args.taxonomy_path);

  std::optional<EmbeddingTable> table;
  if (!args.embeddings_path.empty()) {
    table = EmbeddingTable{io::read_embeddings(args.embeddings_path)};
    if (table->size() != data.features.rows) {
      throw DataError("embedding count does not match feature rows");
    }
  }

  if (cfg.use_class) {
    if (labels.empty()) throw DataError("class loss requires --labels");
    data.class_ids = class_ids_from_labels(labels);
  }
  if (cfg.use_reg) {
    if (!table) throw DataError("reg loss requires --embeddings");
    if (table->dim() != code_dim) {
      throw DataError("reg loss requires embedding dim == code_dim");
    }
    data.reg_targets = table->vectors;
  }

  DistanceProvider provider;
  if (cfg.use_sim) {
    const std::string source = args.distance_source;
    if (source == "wup") {
      if (labels.empty() || !taxonomy) {
        throw DataError("wup distances require --labels and --taxonomy");
      }
      provider = [&labels, &taxonomy](std::span<const std::size_t> batch) {
        std::vector<std::string> batch_labels(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i) {
          batch_labels[i] = labels[batch[i]];
        }
        return label_distance_matrix(*taxonomy, batch_labels);
      };
    } else if (source == "binary") {
      if (labels.empty()) throw DataError("binary distances require --labels");
      provider = [&labels](std::span<const std::size_t> batch) {
        std::vector<std::string> batch_labels(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i) {
          batch_labels[i] = labels[batch[i]];
        }
        return binary_distance_matrix(batch_labels);
      };
    } else if (source == "embedding") {
      if (!table) throw DataError("embedding distances require --embeddings");
      provider = [&table](std::span<const std::size_t> batch) {
        return embedding_distance_matrix(*table, batch);
      };
    } else {
      throw DataError("unknown distance source \"" + source +
                      "\" (expected wup, binary, embedding)");
    }
  }

  std::vector<std::size_t> sizes;
  sizes.push_back(data.features.cols);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(code_dim);
  Mlp model = Mlp::init(sizes, cfg.seed);

  const TrainResult result = train(std::move(model), data, cfg, provider);

  io::write_checkpoint(args.checkpoint_path, result.model);
  if (!args.trace_path.empty()) {
    auto trace = open_text_out(args.trace_path);
    write_trace_csv(trace, result.trace);
  }
  std::cout << "trained " << cfg.epochs << " epochs; final loss "
            << (result.trace.empty() ? 0.0 : result.trace.back().total)
            << "; skipped " << result.skipped_batches << " degenerate batches\n"
            << "checkpoint written to " << args.checkpoint_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// encode

struct EncodeArgs {
  std::string checkpoint_path;
  std::string features_path;
  std::string codes_path;
  std::string embeddings_path;
};

int run_encode(const EncodeArgs& args) {
  const Mlp model = io::read_checkpoint(args.checkpoint_path);
  const Matrix features = io::read_embeddings(args.features_path);
  std::vector<std::uint64_t> ids(features.rows);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  const EncodedDataset encoded = encode_dataset(model, features, ids);
  io::write_codes(args.codes_path, encoded.codes);
  if (!args.embeddings_path.empty()) {
    io::write_embeddings(args.embeddings_path, encoded.embeddings);
  }
  std::cout << "encoded " << encoded.codes.size() << " records into "
            << encoded.codes.code_dim << "-bit codes\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// index

struct IndexArgs {
  std::string codes_path;
  std::uint64_t m = 0;  // 0 = default
};

int run_index(const IndexArgs& args) {
  const HashCodeSet set = io::read_codes(args.codes_path);
  const std::size_t m =
      args.m > 0 ? args.m : default_num_substrings(set.code_dim, set.size());
  const MihIndex index = MihIndex::build(set, m);
  std::cout << "codes: " << set.size() << " x " << set.code_dim << " bits\n"
            << "substrings: " << index.num_substrings() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// query

struct QueryArgs {
  std::string codes_path;
  std::optional<std::uint64_t> query_id;
  std::string query_vector;
  std::uint64_t k = 10;
  std::uint64_t m = 0;
  bool linear_scan = false;
};

int run_query(const QueryArgs& args) {
  const HashCodeSet set = io::read_codes(args.codes_path);
  if (args.query_id.has_value() == !args.query_vector.empty()) {
    throw DataError("provide exactly one of --query-id and --query-vector");
  }

  HashCode query;
  bool exclude_self = false;
  if (args.query_id) {
    std::size_t row = set.size();
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set.ids[i] == *args.query_id) {
        row = i;
        break;
      }
    }
    if (row == set.size()) {
      throw DataError("query id " + std::to_string(*args.query_id) +
                      " not found in codes");
    }
    query = set.extract(row);
    exclude_self = true;
  } else {
    std::vector<double> values;
    std::istringstream ss(args.query_vector);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DataError("bad query vector entry \"" + cell + "\"");
      }
    }
    if (values.size() != set.code_dim) {
      throw DataError("query vector has " + std::to_string(values.size()) +
                      " entries; codes are " + std::to_string(set.code_dim) +
                      " bits");
    }
    query = binarize(values, 0);
  }

  std::vector<SearchHit> hits;
  const std::size_t want = args.k + (exclude_self ? 1 : 0);
  if (args.linear_scan) {
    hits = linear_scan_knn(set, query.words, want);
  } else {
    const std::size_t m =
        args.m > 0 ? args.m : default_num_substrings(set.code_dim, set.size());
    hits = MihIndex::build(set, m).query_knn(query, want);
  }

  std::size_t printed = 0;
  for (const SearchHit& h : hits) {
    if (exclude_self && args.query_id && h.id == *args.query_id) continue;
    if (printed == args.k) break;
    std::cout << h.id << '\t' << h.distance << '\n';
    ++printed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string codes_path;
  std::string float_embeddings_path;
  std::string labels_path;
  std::string taxonomy_path;
  std::string ref_embeddings_path;
  std::uint64_t k = 250;
  std::vector<std::string> metrics;
  std::string out_path;
  std::string hp_curve_path;
  bool linear_scan = false;
  std::uint64_t sample_size = 10000;
  std::uint64_t seed = 1;
};

int run_eval(const EvalArgs& args) {
  if (args.codes_path.empty() == args.float_embeddings_path.empty()) {
    throw DataError("provide exactly one of --codes and --float-embeddings");
  }
  if (args.k == 0) throw DataError("--k must be positive");

  std::optional<HashCodeSet> codes;
  std::optional<Matrix> float_embeddings;
  RetrievalRun run;
  if (!args.codes_path.empty()) {
    codes = io::read_codes(args.codes_path);
    if (args.linear_scan) {
      run = build_run_linear(*codes, *codes, args.k);
    } else {
      const MihIndex index = MihIndex::build(
          *codes, default_num_substrings(codes->code_dim, codes->size()));
      run = build_run(index, *codes, args.k);
    }
  } else {
    float_embeddings = io::read_embeddings(args.float_embeddings_path);
    std::vector<std::uint64_t> ids(float_embeddings->rows);
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    run = build_run_float(*float_embeddings, ids, args.k);
  }

  EvalDatabase db;
  db.ids = run.query_ids;
  std::optional<Taxonomy> taxonomy;
  if (!args.labels_path.empty()) {
    db.labels = io::read_labels(args.labels_path);
    if (db.labels.size() != db.ids.size()) {
      throw DataError("label count does not match database size");
    }
    if (args.taxonomy_path.empty()) {
      throw DataError("--labels requires --taxonomy for WUP similarities");
    }
    taxonomy = io::read_taxonomy(args.taxonomy_path);
    db.taxonomy = &*taxonomy;
  }
  std::optional<Matrix> ref;
  if (!args.ref_embeddings_path.empty()) {
    ref = io::read_embeddings(args.ref_embeddings_path);
    if (ref->rows != db.ids.size()) {
      throw DataError("reference embedding count does not match database size");
    }
    db.embeddings = &*ref;
  }
  if (!db.has_labels() && !db.has_embeddings()) {
    throw DataError("eval needs --labels/--taxonomy or --ref-embeddings");
  }

  std::vector<std::string> wanted = args.metrics;
  if (wanted.empty()) {
    if (db.has_labels()) {
      wanted.push_back("map");
      wanted.push_back("mahp");
      wanted.push_back("flat_hit");
    } else {
      wanted.push_back("mahp");
    }
    if (db.has_embeddings()) wanted.push_back("kendall");
    if (codes) wanted.push_back("entropy");
  }

  MetricReport report;
  for (const std::string& metric : wanted) {
    if (metric == "map") {
      report.add("map", args.k, map_at_k(run, db, args.k));
    } else if (metric == "mahp") {
      report.add("mahp", args.k, mahp_at_k(run, db, args.k));
    } else if (metric == "kendall") {
      report.add("kendall_tau", 0, mean_kendall_tau(run, db));
    } else if (metric == "flat_hit") {
      for (std::size_t k : {1, 2, 5, 10, 20}) {
        if (k <= args.k) report.add("flat_hit", k, flat_hit_at_k(run, db, k));
      }
    } else if (metric == "entropy") {
      if (!codes) throw DataError("binary entropy requires --codes");
      report.add("binary_entropy", 0,
                 binary_entropy(*codes, args.sample_size, args.seed));
    } else {
      throw DataError("unknown metric \"" + metric +
                      "\" (expected map, mahp, kendall, flat_hit, entropy)");
    }
  }

  if (!args.hp_curve_path.empty()) {
    const std::vector<double> curve = hp_curve(run, db, args.k);
    auto out = open_text_out(args.hp_curve_path);
    out << "k,hp\n";
    out.precision(17);
    for (std::size_t j = 0; j < curve.size(); ++j) {
      out << (j + 1) << ',' << curve[j] << '\n';
    }
  }
  if (!args.out_path.empty()) {
    auto out = open_text_out(args.out_path);
    report.write_csv(out);
  }
  report.print(std::cout);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// baseline-onehot

struct BaselineArgs {
  std::string labels_path;
  std::string taxonomy_path;
  std::uint64_t k = 250;
  std::string out_path;
};

// Classifier-style codes: one bit per class, set for the record's own
// class. Same-class pairs collide at distance 0, every cross-class pair
// sits at distance 2.
HashCodeSet onehot_codes(const std::vector<std::string>& labels) {
  std::vector<std::string> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < distinct.size(); ++i) index[distinct[i]] = i;

  HashCodeSet set;
  set.code_dim = distinct.size();
  const std::size_t words = set.words_per_code();
  std::vector<std::uint64_t> code(words);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::fill(code.begin(), code.end(), 0);
    const std::size_t bit = index[labels[i]];
    code[bit / 64] |= std::uint64_t{1} << (bit % 64);
    set.append(i, code);
  }
  return set;
}

int run_baseline(const BaselineArgs& args) {
  const std::vector<std::string> labels = io::read_labels(args.labels_path);
  const Taxonomy taxonomy = io::read_taxonomy(args.taxonomy_path);
  const HashCodeSet codes = onehot_codes(labels);

  const MihIndex index =
      MihIndex::build(codes, default_num_substrings(codes.code_dim, codes.size()));
  const RetrievalRun run = build_run(index, codes, args.k);

  EvalDatabase db;
  db.ids = codes.ids;
  db.labels = labels;
  db.taxonomy = &taxonomy;

  MetricReport report;
  report.add("map", args.k, map_at_k(run, db, args.k));
  report.add("mahp", args.k, mahp_at_k(run, db, args.k));
  if (!args.out_path.empty()) {
    auto out = open_text_out(args.out_path);
    report.write_csv(out);
  }
  report.print(std::cout);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out_path;
};

int run_report(const ReportArgs& args) {
  if (args.inputs.empty()) throw DataError("report: no input files");

  std::vector<std::string> names;
  std::vector<MetricReport> reports;
  for (const std::string& path : args.inputs) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    reports.push_back(MetricReport::read_csv(in));
    names.push_back(std::filesystem::path(path).stem().string());
  }

  // Row keys in first-seen order across inputs.
  std::vector<std::pair<std::string, std::size_t>> keys;
  for (const MetricReport& r : reports) {
    for (const MetricRow& row : r.rows) {
      const auto key = std::make_pair(row.name, row.k);
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        keys.push_back(key);
      }
    }
  }

  std::ostringstream csv;
  csv << "metric,k";
  for (const std::string& n : names) csv << ',' << n;
  csv << '\n';
  csv.precision(17);
  for (const auto& [name, k] : keys) {
    csv << name << ',' << k;
    for (const MetricReport& r : reports) {
      const MetricRow* row = r.find(name, k);
      csv << ',';
      if (row) csv << row->value;
    }
    csv << '\n';
  }

  std::cout << std::left << std::setw(20) << "metric";
  for (const std::string& n : names) std::cout << std::setw(16) << n;
  std::cout << '\n';
  for (const auto& [name, k] : keys) {
    std::ostringstream label;
    label << name;
    if (k > 0) label << "@" << k;
    std::cout << std::left << std::setw(20) << label.str();
    for (const MetricReport& r : reports) {
      const MetricRow* row = r.find(name, k);
      std::ostringstream cell;
      if (row) cell << std::setprecision(6) << row->value;
      std::cout << std::setw(16) << cell.str();
    }
    std::cout << '\n';
  }

  if (!args.out_path.empty()) {
    auto out = open_text_out(args.out_path);
    out << csv.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semhash: semantic hash training, indexing and evaluation"};
  app.require_subcommand(1);

  GenDataArgs gen_args;
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
  gen->add_option("--config", gen_args.config_path, "key = value config file");
  gen->add_option("--out-dir", gen_args.out_dir, "output directory")->required();
  gen->add_option("--seed", gen_args.seed, "override the config seed");

  TrainArgs train_args;
  auto* tr = app.add_subcommand("train", "train an encoder");
  tr->add_option("--config", train_args.config_path, "key = value config file");
  tr->add_option("--features", train_args.features_path)->required();
  tr->add_option("--labels", train_args.labels_path);
  tr->add_option("--taxonomy", train_args.taxonomy_path);
  tr->add_option("--embeddings", train_args.embeddings_path,
                 "reference embeddings (reg targets / embedding distances)");
  tr->add_option("--out", train_args.checkpoint_path, "checkpoint path")->required();
  tr->add_option("--trace", train_args.trace_path, "loss trace CSV");
  tr->add_option("--losses", train_args.losses,
                 "loss terms: sim,kl,class,reg")->delimiter(',');
  tr->add_option("--distances", train_args.distance_source,
                 "distance source: wup | binary | embedding")
      ->default_val("wup");
  tr->add_option("--seed", train_args.seed);
  tr->add_option("--lr", train_args.learning_rate);
  tr->add_option("--epochs", train_args.epochs);

  EncodeArgs encode_args;
  auto* enc = app.add_subcommand("encode", "encode features into hash codes");
  enc->add_option("--checkpoint", encode_args.checkpoint_path)->required();
  enc->add_option("--features", encode_args.features_path)->required();
  enc->add_option("--out-codes", encode_args.codes_path)->required();
  enc->add_option("--out-embeddings", encode_args.embeddings_path,
                  "also write the continuous outputs");

  IndexArgs index_args;
  auto* idx = app.add_subcommand("index", "build an in-process index and report stats");
  idx->add_option("--codes", index_args.codes_path)->required();
  idx->add_option("--m", index_args.m, "substring count (default: auto)");

  QueryArgs query_args;
  auto* qr = app.add_subcommand("query", "k-NN query against a codes file");
  qr->add_option("--codes", query_args.codes_path)->required();
  qr->add_option("--query-id", query_args.query_id);
  qr->add_option("--query-vector", query_args.query_vector,
                 "comma-separated floats, thresholded at 0");
  qr->add_option("--k", query_args.k);
  qr->add_option("--m", query_args.m);
  qr->add_flag("--linear-scan", query_args.linear_scan);

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "retrieval metrics for codes or embeddings");
  ev->add_option("--codes", eval_args.codes_path);
  ev->add_option("--float-embeddings", eval_args.float_embeddings_path,
                 "rank by Manhattan distance on continuous outputs");
  ev->add_option("--labels", eval_args.labels_path);
  ev->add_option("--taxonomy", eval_args.taxonomy_path);
  ev->add_option("--ref-embeddings", eval_args.ref_embeddings_path,
                 "reference embeddings for similarity/Kendall");
  ev->add_option("--k", eval_args.k);
  ev->add_option("--metrics", eval_args.metrics,
                 "metrics: map,mahp,kendall,flat_hit,entropy")->delimiter(',');
  ev->add_option("--out", eval_args.out_path, "metric report CSV");
  ev->add_option("--hp-curve", eval_args.hp_curve_path, "hierarchical precision curve CSV");
  ev->add_flag("--linear-scan", eval_args.linear_scan);
  ev->add_option("--sample-size", eval_args.sample_size, "entropy subsample size");
  ev->add_option("--seed", eval_args.seed);

  BaselineArgs baseline_args;
  auto* bl = app.add_subcommand("baseline-onehot",
                                "evaluate one-hot class codes as a baseline");
  bl->add_option("--labels", baseline_args.labels_path)->required();
  bl->add_option("--taxonomy", baseline_args.taxonomy_path)->required();
  bl->add_option("--k", baseline_args.k);
  bl->add_option("--out", baseline_args.out_path);

  ReportArgs report_args;
  auto* rp = app.add_subcommand("report", "merge metric report CSVs");
  rp->add_option("inputs", report_args.inputs, "metric CSV files");
  rp->add_option("--out", report_args.out_path, "merged CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return run_gen_data(gen_args);
    if (tr->parsed()) return run_train(train_args);
    if (enc->parsed()) return run_encode(encode_args);
    if (idx->parsed()) return run_index(index_args);
    if (qr->parsed()) return run_query(query_args);
    if (ev->parsed()) return run_eval(eval_args);
    if (bl->parsed()) return run_baseline(baseline_args);
    if (rp->parsed()) return run_report(report_args);
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
