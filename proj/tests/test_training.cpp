#include "doctest.h"

#include <cmath>
#include <random>

#include "resn/mrs.hpp"
#include "resn/rng.hpp"
#include "resn/training.hpp"
#include "support/oracles.hpp"

using namespace resn;

namespace {
WindowBatch random_batch(int windows, int look_back, int input_dim, int output_dim,
                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  WindowBatch batch;
  batch.look_back = look_back;
  batch.inputs.resize(windows * look_back, input_dim);
  batch.targets.resize(windows, output_dim);
  for (Eigen::Index i = 0; i < batch.inputs.size(); ++i) batch.inputs.data()[i] = value(rng);
  for (Eigen::Index i = 0; i < batch.targets.size(); ++i) batch.targets.data()[i] = value(rng);
  return batch;
}

// Central differences at h=1e-6 carry ~1e-11 absolute noise, so components
// far below 1e-4 cannot support a 1e-4 relative comparison; the floor keeps
// the check meaningful without hiding real errors (see the absolute check).
double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-4});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

SeriesDataset triangle_dataset(int rows = 400, int period = 40) {
  Eigen::MatrixXd data(rows, 1);
  for (int t = 0; t < rows; ++t) {
    const double phase = static_cast<double>(t % period) / (period / 2.0);
    data(t, 0) = std::abs(phase - 1.0);
  }
  SeriesDataset ds = SeriesDataset::from_matrix(data, {0}, {0});
  ds.split(0.64, 0.16, 0.20);
  ds.normalize(NormMode::none);
  return ds;
}
}  // namespace

TEST_CASE("zero residuals give a zero gradient") {
  StackedRnn net(ArchGenome({3, 2}), 1, 1, Activation::linear);  // all-zero weights
  WindowBatch batch;
  batch.look_back = 3;
  batch.inputs = Eigen::MatrixXd::Constant(6, 1, 0.3);
  batch.targets = Eigen::MatrixXd::Zero(2, 1);  // equals the zero-weight prediction
  CHECK(bptt_gradient(net, batch, Loss::mse).isZero());
  // the MAE subgradient at zero residual is defined as 0
  CHECK(bptt_gradient(net, batch, Loss::mae).isZero());
}

TEST_CASE("BPTT matches central finite differences on tiny nets") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> cells(1, 4), depth(1, 3), lb_dist(2, 5), dims(1, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> entries{lb_dist(rng)};
    const int layers = depth(rng);
    for (int l = 0; l < layers; ++l) entries.push_back(cells(rng));
    const ArchGenome genome(entries);
    const int in = dims(rng), out = dims(rng);
    const Activation act = trial % 3 == 0   ? Activation::sigmoid
                           : trial % 3 == 1 ? Activation::linear
                                            : Activation::tanh;
    StackedRnn net(genome, in, out, act);
    auto weights = sample_random_weights(net.parameter_count(), rng);
    for (double& w : weights) w *= 0.5;
    net.set_weights(weights);
    const WindowBatch batch = random_batch(3, genome.look_back(), in, out, rng);

    const Eigen::VectorXd analytic_mse = bptt_gradient(net, batch, Loss::mse);
    const Eigen::VectorXd numeric_mse = oracle::finite_diff_gradient(net, batch, Loss::mse);
    CHECK(max_relative_error(analytic_mse, numeric_mse) < 1e-4);
    CHECK((analytic_mse - numeric_mse).lpNorm<Eigen::Infinity>() < 1e-8);

    const Eigen::VectorXd analytic_mae = bptt_gradient(net, batch, Loss::mae);
    const Eigen::VectorXd numeric_mae = oracle::finite_diff_gradient(net, batch, Loss::mae);
    CHECK(max_relative_error(analytic_mae, numeric_mae) < 1e-3);
    CHECK((analytic_mae - numeric_mae).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("duplicating every window leaves the mean gradient unchanged") {
  std::mt19937_64 rng(5);
  const ArchGenome genome({3, 3});
  StackedRnn net(genome, 2, 1, Activation::sigmoid);
  net.set_weights(sample_random_weights(net.parameter_count(), rng));
  const WindowBatch batch = random_batch(4, 3, 2, 1, rng);

  std::vector<int> doubled;
  for (int k = 0; k < 4; ++k) {
    doubled.push_back(k);
    doubled.push_back(k);
  }
  const WindowBatch twice = gather(batch, doubled);
  const Eigen::VectorXd g1 = bptt_gradient(net, batch, Loss::mae);
  const Eigen::VectorXd g2 = bptt_gradient(net, twice, Loss::mae);
  CHECK((g1 - g2).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("clip_or_boost rescales exactly to the band edges") {
  Eigen::VectorXd big(2);
  big << 3.0, 4.0;  // norm 5
  CHECK(clip_or_boost(big, 1.0, 0.05).norm() == doctest::Approx(1.0));

  Eigen::VectorXd small(2);
  small << 0.006, 0.008;  // norm 0.01
  const Eigen::VectorXd boosted = clip_or_boost(small, 1.0, 0.05);
  CHECK(boosted.norm() == doctest::Approx(0.05));
  // direction preserved
  CHECK(boosted[0] / boosted[1] == doctest::Approx(0.75));

  Eigen::VectorXd inside(2);
  inside << 0.3, 0.4;  // norm 0.5
  CHECK(clip_or_boost(inside, 1.0, 0.05) == inside);

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  CHECK(clip_or_boost(zero, 1.0, 0.05).isZero());
}

TEST_CASE("adam step arithmetic") {
  SUBCASE("zero gradient with zero state leaves weights unchanged") {
    std::vector<double> w{1.0, -2.0};
    AdamState state;
    adam_step(w, Eigen::VectorXd::Zero(2), state, 0.001);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == -2.0);
  }
  SUBCASE("first step with unit gradient moves by about -lr") {
    std::vector<double> w{0.0};
    AdamState state;
    Eigen::VectorXd g(1);
    g << 1.0;
    adam_step(w, g, state, 0.001);
    // bias correction makes m_hat/sqrt(v_hat) equal 1 on step one
    CHECK(w[0] == doctest::Approx(-0.001).epsilon(1e-6));
  }
  SUBCASE("constant gradient keeps moving the same direction") {
    std::vector<double> w{0.0};
    AdamState state;
    Eigen::VectorXd g(1);
    g << 1.0;
    for (int i = 0; i < 10; ++i) adam_step(w, g, state, 0.001);
    CHECK(w[0] < -0.009);
  }
}

TEST_CASE("sgd nesterov step arithmetic") {
  SUBCASE("zero momentum reduces to plain sgd") {
    std::vector<double> w{1.0};
    NesterovState state;
    Eigen::VectorXd g(1);
    g << 2.0;
    sgd_nesterov_step(w, g, state, 0.1, 0.0);
    CHECK(w[0] == doctest::Approx(0.8));
  }
  SUBCASE("momentum accumulates velocity") {
    std::vector<double> w{0.0};
    NesterovState state;
    Eigen::VectorXd g(1);
    g << 1.0;
    sgd_nesterov_step(w, g, state, 0.1, 0.9);
    // v = -0.1; w = 0.9*(-0.1) - 0.1 = -0.19
    CHECK(w[0] == doctest::Approx(-0.19));
    sgd_nesterov_step(w, g, state, 0.1, 0.9);
    // v = 0.9*(-0.1) - 0.1 = -0.19; w += 0.9*(-0.19) - 0.1
    CHECK(w[0] == doctest::Approx(-0.19 + 0.9 * -0.19 - 0.1));
  }
}

TEST_CASE("glorot init zeroes biases except the forget gate") {
  auto rng = make_rng(17);
  StackedRnn net(ArchGenome({3, 4, 2}), 2, 1, Activation::sigmoid);
  glorot_init(net, rng);
  for (const auto& layer : net.layers()) {
    const auto h = static_cast<std::size_t>(layer.hidden);
    for (std::size_t i = 0; i < 4 * h; ++i) {
      const double b = net.weights()[layer.b_off + i];
      if (i >= h && i < 2 * h) {
        CHECK(b == 1.0);
      } else {
        CHECK(b == 0.0);
      }
    }
    // kernels are bounded by the glorot limit
    const double limit = std::sqrt(6.0 / (layer.in_dim + 4.0 * layer.hidden));
    for (std::size_t i = 0; i < static_cast<std::size_t>(layer.in_dim) * 4 * h; ++i) {
      CHECK(std::abs(net.weights()[layer.w_off + i]) <= limit);
    }
  }
  CHECK(net.weights()[net.dense_b_offset()] == 0.0);
}

TEST_CASE("training on a triangle wave cuts validation loss by 90%") {
  const SeriesDataset ds = triangle_dataset();
  const ArchGenome genome({5, 12});

  // loss of the freshly initialized net, reproduced with the same seed
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.learning_rate = 0.01;
  cfg.loss = Loss::mse;
  cfg.rng_seed = 2;
  auto rng = make_rng(cfg.rng_seed);
  StackedRnn fresh(genome, 1, 1, Activation::sigmoid);
  glorot_init(fresh, rng);
  const WindowBatch val = ds.window(genome.look_back(), Partition::validation);
  const double before = batch_loss(fresh.forward_batch(val), val.targets, cfg.loss);

  const auto [net, report] = train(genome, ds, Activation::sigmoid, cfg);
  const double after = report.validation_loss.back();
  CHECK(after < 0.1 * before);
  CHECK(report.epochs_run <= 200);
  CHECK(report.train_loss.size() == report.validation_loss.size());
  CHECK(report.final_weights == net.weights());
}

TEST_CASE("training is deterministic under a fixed seed") {
  const SeriesDataset ds = triangle_dataset(200);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.dropout = 0.5;
  cfg.rng_seed = 77;
  const auto [net_a, rep_a] = train(ArchGenome({4, 6}), ds, Activation::sigmoid, cfg);
  const auto [net_b, rep_b] = train(ArchGenome({4, 6}), ds, Activation::sigmoid, cfg);
  CHECK(rep_a.train_loss == rep_b.train_loss);
  CHECK(rep_a.validation_loss == rep_b.validation_loss);
  CHECK(net_a.weights() == net_b.weights());
}

TEST_CASE("epoch accounting and stop reasons") {
  const SeriesDataset ds = triangle_dataset(200);
  SUBCASE("exactly one epoch when asked for one") {
    TrainConfig cfg;
    cfg.epochs = 1;
    const auto [net, report] = train(ArchGenome({4, 4}), ds, Activation::sigmoid, cfg);
    CHECK(report.epochs_run == 1);
    CHECK(report.stop_reason == StopReason::epochs_exhausted);
  }
  SUBCASE("early stop fires as soon as validation loss is low enough") {
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.early_stop_loss = 1e10;  // any epoch qualifies
    const auto [net, report] = train(ArchGenome({4, 4}), ds, Activation::sigmoid, cfg);
    CHECK(report.epochs_run == 1);
    CHECK(report.stop_reason == StopReason::early_stop);
  }
  SUBCASE("early_stop_loss of zero disables the check") {
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.early_stop_loss = 0.0;
    const auto [net, report] = train(ArchGenome({4, 4}), ds, Activation::sigmoid, cfg);
    CHECK(report.epochs_run == 3);
    CHECK(report.stop_reason == StopReason::epochs_exhausted);
  }
}

TEST_CASE("divergence aborts with a diagnostic") {
  const SeriesDataset ds = triangle_dataset(200);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.optimizer = OptimizerKind::sgd_nesterov;
  cfg.loss = Loss::mse;       // squaring the exploded residual overflows
  cfg.learning_rate = 1e200;  // one clipped step still explodes the dense layer
  CHECK_THROWS_AS(train(ArchGenome({4, 4}), ds, Activation::linear, cfg), TrainingFailure);
}

TEST_CASE("train config validation") {
  TrainConfig cfg;
  cfg.epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.dropout = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.boost_norm_below = 2.0;  // above the clip threshold
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
