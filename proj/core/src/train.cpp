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

#include "semhash/train.hpp"

#include <cmath>
#include <iostream>
#include <ostream>

#include "semhash/errors.hpp"
#include "semhash/rng.hpp"

namespace semhash {
namespace {

Matrix gather_rows(const Matrix& src, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), src.cols, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = src.row(rows[i]);
    std::copy(r.begin(), r.end(), out.row(i).begin());
  }
  return out;
}

void check_finite(const LossValue& loss, const char* term) {
  if (!std::isfinite(loss.value) || !loss.grad.all_finite()) {
    throw NumericError(std::string("non-finite ") + term + " loss");
  }
}

}  // namespace

TrainResult train(Mlp model, const TrainDataset& data, const TrainConfig& cfg,
                  const DistanceProvider& distances) {
  const std::size_t n = data.features.rows;
  if (n < 2) throw DataError("train: need at least 2 records");
  if (cfg.epochs == 0 || cfg.batch_size == 0 || cfg.learning_rate < 0.0) {
    throw DataError("train: epochs and batch_size must be positive");
  }
  if (data.features.cols != model.input_dim()) {
    throw DataError("train: feature dimension does not match model input");
  }
  if (cfg.use_sim && !distances) {
    throw DataError("train: sim loss requires a distance provider");
  }
  if (cfg.use_class && data.class_ids.size() != n) {
    throw DataError("train: class loss requires one class id per record");
  }
  if (cfg.use_reg) {
    if (!data.reg_targets || data.reg_targets->rows != n ||
        data.reg_targets->cols != model.output_dim()) {
      throw DataError("train: regression loss requires N x code_dim targets");
    }
  }
  if (!cfg.use_sim && !cfg.use_kl && !cfg.use_class && !cfg.use_reg) {
    throw DataError("train: no loss terms enabled");
  }

  const std::size_t code_dim = model.output_dim();
  std::optional<Mlp> head;
  if (cfg.use_class) {
    int max_class = 0;
    for (int c : data.class_ids) {
      if (c < 0) throw DataError("train: negative class id");
      max_class = std::max(max_class, c);
    }
    head = Mlp::init({code_dim, static_cast<std::size_t>(max_class) + 1},
                     derive_seed(cfg.seed, 0x48454144));
  }

  // Trunk and head parameters share one flat Adam state.
  std::vector<double> params = model.flatten();
  const std::size_t trunk_count = params.size();
  if (head) {
    const auto head_flat = head->flatten();
    params.insert(params.end(), head_flat.begin(), head_flat.end());
  }
  AdamState adam(params.size());
  long step = 0;

  Rng shuffle_rng(derive_seed(cfg.seed, 0x53485546));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  TrainResult result;
  result.trace.reserve(cfg.epochs);
  std::size_t warned = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    EpochStats stats;
    stats.epoch = epoch;
    std::size_t counted_batches = 0;

    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t b = std::min(cfg.batch_size, n - start);
      std::span<const std::size_t> batch(order.data() + start, b);

      try {
        const Matrix x = gather_rows(data.features, batch);
        ForwardCache cache;
        const Matrix z = mlp_forward(model, x, &cache);

        std::optional<LossValue> sim;
        if (cfg.use_sim) {
          sim = sim_loss(z, distances(batch), cfg.pair);
          check_finite(*sim, "sim");
        }
        std::optional<LossValue> kl;
        if (cfg.use_kl) {
          const std::size_t bt = cfg.target_batch_size > 0 ? cfg.target_batch_size : b;
          const TargetSample target =
              sample_target(bt, code_dim, cfg.alpha,
                            derive_seed(cfg.seed, epoch + 1, start + 1));
          kl = kl_loss(z, target);
          check_finite(*kl, "kl");
        }

        // Auxiliary terms share lambda2. Cross-entropy backpropagates
        // through the head into the trunk output.
        std::optional<LossValue> aux;
        MlpGrads head_grads;
        ForwardCache head_cache;
        if (cfg.use_class) {
          std::vector<int> batch_labels(b);
          for (std::size_t i = 0; i < b; ++i) batch_labels[i] = data.class_ids[batch[i]];
          const Matrix logits = mlp_forward(*head, z, &head_cache);
          const LossValue ce = cross_entropy_loss(logits, batch_labels);
          check_finite(ce, "class");
          Matrix grad_z;
          head_grads = mlp_backward(*head, head_cache, ce.grad, &grad_z);
          aux = LossValue{ce.value, std::move(grad_z)};
        }
        if (cfg.use_reg) {
          const Matrix targets = gather_rows(*data.reg_targets, batch);
          LossValue reg = regression_loss(z, targets);
          check_finite(reg, "reg");
          if (aux) {
            aux->value += reg.value;
            for (std::size_t i = 0; i < aux->grad.data.size(); ++i) {
              aux->grad.data[i] += reg.grad.data[i];
            }
          } else {
            aux = std::move(reg);
          }
        }

        const LossValue total =
            combine_losses(sim ? &*sim : nullptr, kl ? &*kl : nullptr,
                           aux ? &*aux : nullptr, cfg.weights);
        check_finite(total, "total");

        const MlpGrads trunk_grads = mlp_backward(model, cache, total.grad);
        std::vector<double> flat_grads = trunk_grads.flatten();
        if (head) {
          // Head gradients enter the combined objective with weight lambda2.
          for (Matrix& g : head_grads.weights) {
            for (double& v : g.data) v *= cfg.weights.lambda2;
          }
          for (auto& g : head_grads.biases) {
            for (double& v : g) v *= cfg.weights.lambda2;
          }
          const auto head_flat = head_grads.flatten();
          flat_grads.insert(flat_grads.end(), head_flat.begin(), head_flat.end());
        }
        for (double g : flat_grads) {
          if (!std::isfinite(g)) throw NumericError("non-finite parameter gradient");
        }

        adam_step(params, flat_grads, adam, cfg.learning_rate, cfg.weight_decay,
                  ++step);
        model.assign(std::span<const double>(params.data(), trunk_count));
        if (head) {
          head->assign(std::span<const double>(params.data() + trunk_count,
                                               params.size() - trunk_count));
        }

        stats.total += total.value;
        if (sim) stats.sim += sim->value;
        if (kl) stats.kl += kl->value;
        if (aux) stats.aux += aux->value;
        ++counted_batches;
      } catch (const DegenerateBatchError& e) {
        ++stats.skipped_batches;
        ++result.skipped_batches;
        if (warned < 5) {
          std::cerr << "warning: skipping degenerate batch (epoch " << epoch
                    << "): " << e.what() << "\n";
          ++warned;
        }
      }
    }

    if (counted_batches > 0) {
      const double inv = 1.0 / static_cast<double>(counted_batches);
      stats.total *= inv;
      stats.sim *= inv;
      stats.kl *= inv;
      stats.aux *= inv;
    }
    if (cfg.verbose) {
      std::cerr << "epoch " << epoch << " loss " << stats.total << "\n";
    }
    result.trace.push_back(stats);
  }

  result.model = std::move(model);
  result.class_head = std::move(head);
  return result;
}

HashCode binarize(std::span<const double> z, std::uint64_t id) {
  HashCode code;
  code.id = id;
  code.dim = z.size();
  code.words.assign((z.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] >= 0.0) code.words[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return code;
}

HashCodeSet binarize_batch(const Matrix& z, std::span<const std::uint64_t> ids) {
  if (ids.size() != z.rows) {
    throw DataError("binarize_batch: id count does not match rows");
  }
  HashCodeSet set;
  set.code_dim = z.cols;
  set.words.reserve(z.rows * set.words_per_code());
  set.ids.reserve(z.rows);
  for (std::size_t i = 0; i < z.rows; ++i) {
    const HashCode c = binarize(z.row(i), ids[i]);
    set.append(c.id, c.words);
  }
  return set;
}

EncodedDataset encode_dataset(const Mlp& m, const Matrix& features,
                              std::span<const std::uint64_t> ids) {
  if (ids.size() != features.rows) {
    throw DataError("encode_dataset: id count does not match rows");
  }
  EncodedDataset out;
  out.embeddings = mlp_forward(m, features);
  out.codes = binarize_batch(out.embeddings, ids);
  return out;
}

void write_trace_csv(std::ostream& out, std::span<const EpochStats> trace) {
  out << "epoch,total,sim,kl,aux,skipped_batches\n";
  for (const EpochStats& s : trace) {
    out << s.epoch << ',' << s.total << ',' << s.sim << ',' << s.kl << ',' << s.aux
        << ',' << s.skipped_batches << '\n';
  }
}

}  // namespace semhash
