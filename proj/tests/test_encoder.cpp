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

#include <cmath>

#include "semhash/errors.hpp"
#include "semhash/semantics.hpp"
#include "semhash/synthetic.hpp"
#include "semhash/train.hpp"
#include "test_util.hpp"

using namespace semhash;
using semhash::testing::finite_diff;
using semhash::testing::max_grad_err;
using semhash::testing::random_matrix;

namespace {

// Straight-line affine+tanh chain, independent of mlp_forward.
Matrix forward_reference(const Mlp& m, const Matrix& x) {
  Matrix a = x;
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    Matrix next(a.rows, m.weights[l].rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
      for (std::size_t o = 0; o < m.weights[l].rows; ++o) {
        double s = m.biases[l][o];
        for (std::size_t k = 0; k < m.weights[l].cols; ++k) {
          s += m.weights[l](o, k) * a(i, k);
        }
        next(i, o) = l + 1 < m.num_layers() ? std::tanh(s) : s;
      }
    }
    a = std::move(next);
  }
  return a;
}

DistanceProvider binary_provider(const std::vector<std::string>& labels) {
  return [&labels](std::span<const std::size_t> batch) {
    std::vector<std::string> batch_labels(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) batch_labels[i] = labels[batch[i]];
    return binary_distance_matrix(batch_labels);
  };
}

}  // namespace

TEST_SUITE_BEGIN("encoder");

TEST_CASE("forward with zero weights yields zero output") {
  Mlp m = Mlp::init({3, 4, 2}, 1);
  for (Matrix& w : m.weights) {
    for (double& v : w.data) v = 0.0;
  }
  Rng rng(5);
  const Matrix out = mlp_forward(m, random_matrix(rng, 6, 3, 2.0));
  for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("single-layer identity net reproduces its input") {
  Mlp m = Mlp::init({3, 3}, 1);
  for (double& v : m.weights[0].data) v = 0.0;
  for (std::size_t i = 0; i < 3; ++i) m.weights[0](i, i) = 1.0;
  Rng rng(6);
  const Matrix x = random_matrix(rng, 4, 3, 2.0);
  const Matrix out = mlp_forward(m, x);
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    CHECK(out.data[i] == doctest::Approx(x.data[i]).epsilon(1e-15));
  }
}

TEST_CASE("forward matches the straight-line oracle") {
  Rng rng(7);
  const Mlp m = Mlp::init({4, 8, 5, 3}, 17);
  const Matrix x = random_matrix(rng, 5, 4, 1.5);
  const Matrix got = mlp_forward(m, x);
  const Matrix want = forward_reference(m, x);
  for (std::size_t i = 0; i < got.data.size(); ++i) {
    CHECK(std::abs(got.data[i] - want.data[i]) < 1e-10);
  }
  CHECK_THROWS_AS(mlp_forward(m, Matrix(2, 7, 0.0)), std::invalid_argument);
}

TEST_CASE("backward with zero upstream gradient is zero") {
  const Mlp m = Mlp::init({4, 8, 4}, 3);
  Rng rng(8);
  ForwardCache cache;
  mlp_forward(m, random_matrix(rng, 5, 4, 1.0), &cache);
  const MlpGrads grads = mlp_backward(m, cache, Matrix(5, 4, 0.0));
  for (double v : grads.flatten()) CHECK(v == 0.0);
}

TEST_CASE("backward is linear in the upstream gradient") {
  const Mlp m = Mlp::init({4, 6, 3}, 9);
  Rng rng(10);
  ForwardCache cache;
  mlp_forward(m, random_matrix(rng, 4, 4, 1.0), &cache);
  const Matrix g = random_matrix(rng, 4, 3, 1.0);
  Matrix g2 = g;
  for (double& v : g2.data) v *= 2.0;
  const auto flat1 = mlp_backward(m, cache, g).flatten();
  const auto flat2 = mlp_backward(m, cache, g2).flatten();
  for (std::size_t i = 0; i < flat1.size(); ++i) {
    CHECK(flat2[i] == doctest::Approx(2.0 * flat1[i]).epsilon(1e-12));
  }
}

TEST_CASE("backward matches finite differences on every 4-8-4 parameter") {
  Mlp m = Mlp::init({4, 8, 4}, 11);
  Rng rng(12);
  const Matrix x = random_matrix(rng, 6, 4, 1.0);
  const Matrix target = random_matrix(rng, 6, 4, 1.0);

  // Scalar head: mean squared error against a fixed target.
  auto loss_of = [&](const Mlp& net) {
    const Matrix z = mlp_forward(net, x);
    return regression_loss(z, target).value;
  };

  ForwardCache cache;
  const Matrix z = mlp_forward(m, x, &cache);
  const LossValue reg = regression_loss(z, target);
  const MlpGrads analytic = mlp_backward(m, cache, reg.grad);
  const std::vector<double> analytic_flat = analytic.flatten();

  std::vector<double> params = m.flatten();
  const double h = 1e-5;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double orig = params[i];
    params[i] = orig + h;
    m.assign(params);
    const double hi = loss_of(m);
    params[i] = orig - h;
    m.assign(params);
    const double lo = loss_of(m);
    params[i] = orig;
    m.assign(params);
    const double numeric = (hi - lo) / (2.0 * h);
    const double diff = std::abs(analytic_flat[i] - numeric);
    CHECK(diff <= std::max({1e-8, 1e-4 * std::abs(numeric),
                            1e-4 * std::abs(analytic_flat[i])}));
  }
}

TEST_CASE("adam_step leaves parameters alone for zero gradients") {
  std::vector<double> params = {1.0, -2.0, 0.5};
  const std::vector<double> grads(3, 0.0);
  AdamState state(3);
  adam_step(params, grads, state, 0.01, 0.0, 1);
  CHECK(params == std::vector<double>{1.0, -2.0, 0.5});
}

TEST_CASE("adam_step single hand-computed scalar step") {
  // g=1, t=1: m_hat = v_hat = 1, so the update is -lr / (1 + eps).
  std::vector<double> params = {1.0};
  const std::vector<double> grads = {1.0};
  AdamState state(1);
  adam_step(params, grads, state, 0.01, 0.0, 1);
  CHECK(std::abs(params[0] - (1.0 - 0.01 / (1.0 + 1e-8))) < 1e-15);
}

TEST_CASE("adam_step is deterministic and applies decoupled decay") {
  std::vector<double> a = {1.0, 2.0};
  std::vector<double> b = {1.0, 2.0};
  const std::vector<double> g = {0.3, -0.7};
  AdamState sa(2), sb(2);
  adam_step(a, g, sa, 0.01, 0.1, 1);
  adam_step(b, g, sb, 0.01, 0.1, 1);
  CHECK(a == b);
  // Decay-only direction check: zero grads shrink params toward zero.
  std::vector<double> c = {1.0, -1.0};
  const std::vector<double> zero_g = {0.0, 0.0};
  AdamState sc(2);
  adam_step(c, zero_g, sc, 0.01, 0.1, 1);
  CHECK(c[0] == doctest::Approx(1.0 - 0.01 * 0.1 * 1.0));
  CHECK(c[1] == doctest::Approx(-1.0 + 0.01 * 0.1 * 1.0));
}

TEST_CASE("binarize sign convention including the zero tie") {
  const std::vector<double> z = {0.3, -0.2, 0.0};
  const HashCode code = binarize(z, 7);
  CHECK(code.id == 7);
  CHECK(code.dim == 3);
  CHECK(code.bit(0));
  CHECK_FALSE(code.bit(1));
  CHECK(code.bit(2));  // 0 rounds up

  const std::vector<double> neg = {-1.0, -0.5, -2.0, -0.1};
  const HashCode all_zero = binarize(neg, 0);
  for (std::size_t i = 0; i < 4; ++i) CHECK_FALSE(all_zero.bit(i));
}

TEST_CASE("binarize is scale invariant and idempotent through +-1 floats") {
  Rng rng(13);
  for (int iter = 0; iter < 20; ++iter) {
    const Matrix z = random_matrix(rng, 1, 32, 3.0);
    const HashCode a = binarize(z.row(0), 1);
    Matrix scaled = z;
    for (double& v : scaled.data) v *= 5.0;
    CHECK(binarize(scaled.row(0), 1).words == a.words);

    std::vector<double> pm(32);
    for (std::size_t i = 0; i < 32; ++i) pm[i] = a.bit(i) ? 1.0 : -1.0;
    CHECK(binarize(pm, 1).words == a.words);
  }
}

TEST_CASE("encode_dataset codes agree with binarized embeddings") {
  const Mlp m = Mlp::init({4, 8, 6}, 21);
  Rng rng(22);
  const Matrix x = random_matrix(rng, 9, 4, 1.0);
  std::vector<std::uint64_t> ids(9);
  for (std::size_t i = 0; i < 9; ++i) ids[i] = 100 + i;
  const EncodedDataset enc = encode_dataset(m, x, ids);
  CHECK(enc.codes.size() == 9);
  CHECK(enc.codes.code_dim == 6);
  CHECK(enc.embeddings.rows == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(enc.codes.ids[i] == ids[i]);
    const HashCode direct = binarize(enc.embeddings.row(i), ids[i]);
    CHECK(std::equal(direct.words.begin(), direct.words.end(),
                     enc.codes.code(i).begin()));
  }
}

TEST_CASE("train with lr=0 never moves the parameters") {
  SyntheticSpec spec;
  spec.num_superclasses = 1;
  spec.leaves_per_superclass = 3;
  spec.points_per_leaf = 20;
  spec.feature_dim = 8;
  spec.seed = 3;
  const SyntheticDataset data = generate_synthetic(spec);

  TrainDataset ds;
  ds.features = data.features;
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.0;
  cfg.weight_decay = 0.0;
  cfg.seed = 5;

  const Mlp init = Mlp::init({8, 16, 4}, cfg.seed);
  const TrainResult result = train(init, ds, cfg, binary_provider(data.labels));
  CHECK(result.model.flatten() == init.flatten());
}

TEST_CASE("train is deterministic for a fixed seed") {
  SyntheticSpec spec;
  spec.num_superclasses = 1;
  spec.leaves_per_superclass = 3;
  spec.points_per_leaf = 20;
  spec.feature_dim = 8;
  spec.seed = 3;
  const SyntheticDataset data = generate_synthetic(spec);

  TrainDataset ds;
  ds.features = data.features;
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 16;
  cfg.seed = 5;

  const Mlp init = Mlp::init({8, 16, 4}, cfg.seed);
  const TrainResult a = train(init, ds, cfg, binary_provider(data.labels));
  const TrainResult b = train(init, ds, cfg, binary_provider(data.labels));
  CHECK(a.model.flatten() == b.model.flatten());
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t e = 0; e < a.trace.size(); ++e) {
    CHECK(a.trace[e].total == b.trace[e].total);
    CHECK(a.trace[e].sim == b.trace[e].sim);
    CHECK(a.trace[e].kl == b.trace[e].kl);
  }
}

TEST_CASE("sim-kl training reduces the loss by half on the 3-leaf dataset") {
  SyntheticSpec spec;
  spec.num_superclasses = 1;
  spec.leaves_per_superclass = 3;
  spec.points_per_leaf = 50;
  spec.feature_dim = 8;
  spec.intra_leaf_stddev = 0.4;
  spec.seed = 3;
  const SyntheticDataset data = generate_synthetic(spec);

  TrainDataset ds;
  ds.features = data.features;
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 64;
  cfg.seed = 5;

  const Taxonomy& taxonomy = data.taxonomy;
  const std::vector<std::string>& labels = data.labels;
  DistanceProvider wup = [&](std::span<const std::size_t> batch) {
    std::vector<std::string> batch_labels(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) batch_labels[i] = labels[batch[i]];
    return label_distance_matrix(taxonomy, batch_labels);
  };

  const Mlp init = Mlp::init({8, 32, 8}, cfg.seed);
  const TrainResult result = train(init, ds, cfg, wup);
  REQUIRE(result.trace.size() == 200);
  const double first = result.trace.front().total;
  const double last = result.trace.back().total;
  CHECK(last <= 0.5 * first);
  for (const EpochStats& s : result.trace) {
    CHECK(std::isfinite(s.total));
  }
  CHECK(result.skipped_batches == 0);
}

TEST_CASE("train skips degenerate all-same-label batches and counts them") {
  SyntheticSpec spec;
  spec.num_superclasses = 1;
  spec.leaves_per_superclass = 1;
  spec.points_per_leaf = 40;
  spec.feature_dim = 4;
  spec.seed = 3;
  const SyntheticDataset data = generate_synthetic(spec);

  TrainDataset ds;
  ds.features = data.features;
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 20;
  cfg.use_kl = false;  // sim only: every batch is degenerate (tau_y = 0)
  cfg.seed = 5;

  const Mlp init = Mlp::init({4, 8, 4}, cfg.seed);
  const TrainResult result = train(init, ds, cfg, binary_provider(data.labels));
  CHECK(result.skipped_batches == 4);  // 2 epochs x 2 batches
  CHECK(result.model.flatten() == init.flatten());
}

TEST_CASE("train validates its configuration") {
  TrainDataset ds;
  ds.features = Matrix(10, 4, 0.1);
  TrainConfig cfg;
  cfg.use_class = true;
  const Mlp init = Mlp::init({4, 8, 4}, 1);
  CHECK_THROWS_AS(train(init, ds, cfg, nullptr), DataError);

  TrainConfig reg_cfg;
  reg_cfg.use_sim = reg_cfg.use_kl = false;
  reg_cfg.use_reg = true;
  CHECK_THROWS_AS(train(init, ds, reg_cfg, nullptr), DataError);

  TrainConfig none;
  none.use_sim = none.use_kl = false;
  CHECK_THROWS_AS(train(init, ds, none, nullptr), DataError);
}

TEST_CASE("end-to-end combined gradient matches finite differences") {
  // 4-8-4 trunk plus a 3-class head, all three loss terms on.
  Rng rng(77);
  Mlp trunk = Mlp::init({4, 8, 4}, 31);
  Mlp head = Mlp::init({4, 3}, 32);
  const std::size_t b = 6;
  Matrix x;
  Matrix d;
  TargetSample target;
  std::vector<int> labels(b);

  // Rejection-sample an instance clear of every kink.
  for (;;) {
    x = random_matrix(rng, b, 4, 1.2);
    d = Matrix(b, b, 0.0);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = i + 1; j < b; ++j) {
        d(i, j) = d(j, i) = 0.2 + rng.uniform();
      }
    }
    target.points = random_matrix(rng, b, 4, 1.2);
    for (auto& l : labels) l = static_cast<int>(rng.below(3));
    const Matrix z = mlp_forward(trunk, x);
    if (semhash::testing::sim_margins_ok(z, d, {}, 2e-3, 2e-4) &&
        semhash::testing::kl_margins_ok(z, target.points, 2e-3)) {
      break;
    }
  }

  const LossWeights weights;
  auto total_of = [&](const Mlp& t, const Mlp& h) {
    const Matrix z = mlp_forward(t, x);
    const LossValue sim = sim_loss(z, d, {});
    const LossValue kl = kl_loss(z, target);
    const LossValue ce = cross_entropy_loss(mlp_forward(h, z), labels);
    return sim.value + weights.lambda1 * kl.value + weights.lambda2 * ce.value;
  };

  // Analytic: combine loss grads w.r.t. z, push through the trunk; head
  // grads come from the cross-entropy path alone (scaled by lambda2).
  ForwardCache trunk_cache, head_cache;
  const Matrix z = mlp_forward(trunk, x, &trunk_cache);
  const LossValue sim = sim_loss(z, d, {});
  const LossValue kl = kl_loss(z, target);
  const LossValue ce = cross_entropy_loss(mlp_forward(head, z, &head_cache), labels);
  Matrix ce_grad_z;
  const MlpGrads head_grads = mlp_backward(head, head_cache, ce.grad, &ce_grad_z);
  LossValue aux{ce.value, ce_grad_z};
  const LossValue total = combine_losses(&sim, &kl, &aux, weights);
  const MlpGrads trunk_grads = mlp_backward(trunk, trunk_cache, total.grad);

  const double h = 1e-5;
  std::vector<double> tp = trunk.flatten();
  const std::vector<double> tg = trunk_grads.flatten();
  for (std::size_t i = 0; i < tp.size(); ++i) {
    const double orig = tp[i];
    tp[i] = orig + h;
    trunk.assign(tp);
    const double hi = total_of(trunk, head);
    tp[i] = orig - h;
    trunk.assign(tp);
    const double lo = total_of(trunk, head);
    tp[i] = orig;
    trunk.assign(tp);
    const double numeric = (hi - lo) / (2.0 * h);
    CHECK(std::abs(tg[i] - numeric) <=
          std::max({1e-8, 1e-4 * std::abs(numeric), 1e-4 * std::abs(tg[i])}));
  }

  std::vector<double> hp = head.flatten();
  for (std::size_t i = 0; i < hp.size(); ++i) {
    const double orig = hp[i];
    hp[i] = orig + h;
    head.assign(hp);
    const double hi = total_of(trunk, head);
    hp[i] = orig - h;
    head.assign(hp);
    const double lo = total_of(trunk, head);
    hp[i] = orig;
    head.assign(hp);
    const double numeric = (hi - lo) / (2.0 * h);
    const double analytic = weights.lambda2 * head_grads.flatten()[i];
    CHECK(std::abs(analytic - numeric) <=
          std::max({1e-8, 1e-4 * std::abs(numeric), 1e-4 * std::abs(analytic)}));
  }
}

TEST_SUITE_END();
