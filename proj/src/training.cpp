#include "resn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace resn {

namespace {
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using GradMap = Eigen::Map<RowMat>;
}  // namespace

const char* to_string(OptimizerKind o) {
  return o == OptimizerKind::adam ? "adam" : "sgd_nesterov";
}

const char* to_string(Loss l) { return l == Loss::mae ? "mae" : "mse"; }

const char* to_string(StopReason r) {
  return r == StopReason::early_stop ? "early_stop" : "epochs_exhausted";
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd_nesterov") return OptimizerKind::sgd_nesterov;
  throw std::invalid_argument("unknown optimizer '" + s + "'");
}

Loss loss_from_string(const std::string& s) {
  if (s == "mae") return Loss::mae;
  if (s == "mse") return Loss::mse;
  throw std::invalid_argument("unknown loss '" + s + "'");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (!(learning_rate > 0)) throw std::invalid_argument("train: learning_rate must be > 0");
  if (dropout < 0 || dropout >= 1) throw std::invalid_argument("train: dropout must be in [0, 1)");
  if (!(boost_norm_below >= 0) || !(clip_norm_above > boost_norm_below)) {
    throw std::invalid_argument("train: need clip_norm_above > boost_norm_below >= 0");
  }
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (early_stop_loss < 0) throw std::invalid_argument("train: early_stop_loss must be >= 0");
  if (momentum < 0 || momentum >= 1) throw std::invalid_argument("train: momentum must be in [0, 1)");
}

double batch_loss(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets,
                  Loss loss) {
  if (loss == Loss::mae) return (predictions - targets).array().abs().mean();
  return (predictions - targets).array().square().mean();
}

std::pair<double, Eigen::VectorXd> loss_and_gradient(
    const StackedRnn& net, const WindowBatch& batch, Loss loss,
    const std::vector<Eigen::MatrixXd>* masks) {
  const auto trace = net.forward_trace(batch, masks);
  const Eigen::Index n = trace.window_count;
  const int lb = trace.look_back;
  const auto& layers = net.layers();
  const double* wp = net.weight_vector().data();

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.parameter_count()));
  double* gp = grad.data();

  // Loss derivative w.r.t. the network output.
  const Eigen::MatrixXd residual = trace.output - batch.targets;
  const double total = static_cast<double>(residual.size());
  double loss_value;
  Eigen::MatrixXd d_out;
  if (loss == Loss::mae) {
    loss_value = residual.array().abs().mean();
    d_out = residual.array().sign() / total;
  } else {
    loss_value = residual.array().square().mean();
    d_out = 2.0 * residual.array() / total;
  }

  // Output activation derivative, expressed through the activated output.
  switch (net.output_activation()) {
    case Activation::sigmoid:
      d_out.array() *= trace.output.array() * (1.0 - trace.output.array());
      break;
    case Activation::tanh:
      d_out.array() *= 1.0 - trace.output.array().square();
      break;
    case Activation::linear:
      break;
  }

  // Dense layer.
  const int last_h = layers.back().hidden;
  const Eigen::MatrixXd h_last = trace.layers.back().hidden.bottomRows(n);
  {
    GradMap d_wy(gp + net.dense_w_offset(), last_h, net.output_dim());
    d_wy.noalias() = h_last.transpose() * d_out;
    Eigen::Map<Eigen::VectorXd> d_by(gp + net.dense_b_offset(), net.output_dim());
    d_by = d_out.colwise().sum();
  }
  ConstMap wy(wp + net.dense_w_offset(), last_h, net.output_dim());

  // Gradient flowing into each layer's hidden sequence from above.
  Eigen::MatrixXd d_above = Eigen::MatrixXd::Zero(n * lb, last_h);
  d_above.bottomRows(n).noalias() = d_out * wy.transpose();

  Eigen::MatrixXd dz(n, 0), dh(n, 0), dc(n, 0), d_below;
  for (int li = static_cast<int>(layers.size()) - 1; li >= 0; --li) {
    const auto& layer = layers[static_cast<std::size_t>(li)];
    const auto& tl = trace.layers[static_cast<std::size_t>(li)];
    const int d = layer.in_dim;
    const int hh = layer.hidden;
    ConstMap w(wp + layer.w_off, d, 4 * hh);
    ConstMap u(wp + layer.u_off, hh, 4 * hh);
    GradMap d_w(gp + layer.w_off, d, 4 * hh);
    GradMap d_u(gp + layer.u_off, hh, 4 * hh);
    Eigen::Map<Eigen::VectorXd> d_b(gp + layer.b_off, 4 * hh);

    d_below.setZero(n * lb, d);
    dh.setZero(n, hh);
    dc.setZero(n, hh);
    dz.resize(n, 4 * hh);
    for (int t = lb - 1; t >= 0; --t) {
      const auto rows = [&](const Eigen::MatrixXd& m) { return m.middleRows(t * n, n); };
      const auto gi = rows(tl.gate_i).array();
      const auto gf = rows(tl.gate_f).array();
      const auto gg = rows(tl.gate_g).array();
      const auto go = rows(tl.gate_o).array();
      const auto tc = rows(tl.cell_tanh).array();

      dh += rows(d_above);
      const Eigen::ArrayXXd d_o = dh.array() * tc;
      dc.array() += dh.array() * go * (1.0 - tc.square());
      const Eigen::ArrayXXd d_i = dc.array() * gg;
      const Eigen::ArrayXXd d_g = dc.array() * gi;

      dz.leftCols(hh) = d_i * gi * (1.0 - gi);
      if (t > 0) {
        dz.middleCols(hh, hh) =
            dc.array() * tl.cell.middleRows((t - 1) * n, n).array() * gf * (1.0 - gf);
      } else {
        dz.middleCols(hh, hh).setZero();  // c_{-1} = 0
      }
      dz.middleCols(2 * hh, hh) = d_g * (1.0 - gg.square());
      dz.rightCols(hh) = d_o * go * (1.0 - go);

      d_w.noalias() += rows(tl.input).transpose() * dz;
      if (t > 0) d_u.noalias() += tl.hidden.middleRows((t - 1) * n, n).transpose() * dz;
      d_b += dz.colwise().sum();

      d_below.middleRows(t * n, n).noalias() = dz * w.transpose();
      dh.noalias() = dz * u.transpose();  // reaches h_{t-1}
      dc.array() *= gf;
    }
    if (tl.mask.size() != 0) {
      for (int t = 0; t < lb; ++t) {
        d_below.middleRows(t * n, n).array() *= tl.mask.array();
      }
    }
    d_above = std::move(d_below);
  }
  return {loss_value, std::move(grad)};
}

Eigen::VectorXd bptt_gradient(const StackedRnn& net, const WindowBatch& batch, Loss loss) {
  return loss_and_gradient(net, batch, loss, nullptr).second;
}

Eigen::VectorXd clip_or_boost(Eigen::VectorXd grad, double above, double below) {
  if (!(above > below) || below < 0) {
    throw std::invalid_argument("clip_or_boost: need above > below >= 0");
  }
  const double norm = grad.norm();
  if (norm > above) {
    grad *= above / norm;
  } else if (norm > 0 && norm < below) {
    grad *= below / norm;
  }
  return grad;
}

void adam_step(std::span<double> weights, const Eigen::VectorXd& grad, AdamState& state,
               double learning_rate) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  const auto p = static_cast<Eigen::Index>(weights.size());
  if (grad.size() != p) throw std::invalid_argument("adam_step: length mismatch");
  if (state.m.size() != p) {
    state.m = Eigen::VectorXd::Zero(p);
    state.v = Eigen::VectorXd::Zero(p);
    state.step = 0;
  }
  ++state.step;
  state.m = beta1 * state.m + (1.0 - beta1) * grad;
  state.v = beta2 * state.v + (1.0 - beta2) * grad.array().square().matrix();
  const double m_corr = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double v_corr = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  Eigen::Map<Eigen::VectorXd> w(weights.data(), p);
  w.array() -= learning_rate * (state.m.array() / m_corr) /
               ((state.v.array() / v_corr).sqrt() + eps);
}

void sgd_nesterov_step(std::span<double> weights, const Eigen::VectorXd& grad,
                       NesterovState& state, double learning_rate, double momentum) {
  const auto p = static_cast<Eigen::Index>(weights.size());
  if (grad.size() != p) throw std::invalid_argument("sgd_nesterov_step: length mismatch");
  if (state.velocity.size() != p) state.velocity = Eigen::VectorXd::Zero(p);
  state.velocity = momentum * state.velocity - learning_rate * grad;
  Eigen::Map<Eigen::VectorXd> w(weights.data(), p);
  w += momentum * state.velocity - learning_rate * grad;
}

void glorot_init(StackedRnn& net, std::mt19937_64& rng) {
  auto w = net.mutable_weights();
  std::fill(w.begin(), w.end(), 0.0);
  auto fill_uniform = [&](std::size_t off, std::size_t count, int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (std::size_t i = 0; i < count; ++i) w[off + i] = dist(rng);
  };
  for (const auto& layer : net.layers()) {
    const auto d = static_cast<std::size_t>(layer.in_dim);
    const auto h = static_cast<std::size_t>(layer.hidden);
    fill_uniform(layer.w_off, d * 4 * h, layer.in_dim, 4 * layer.hidden);
    fill_uniform(layer.u_off, h * 4 * h, layer.hidden, 4 * layer.hidden);
    // forget-gate bias starts at 1 (framework default)
    for (std::size_t i = 0; i < h; ++i) w[layer.b_off + h + i] = 1.0;
  }
  const auto last = static_cast<std::size_t>(net.layers().back().hidden);
  const auto out = static_cast<std::size_t>(net.output_dim());
  fill_uniform(net.dense_w_offset(), last * out, net.layers().back().hidden, net.output_dim());
}

std::pair<StackedRnn, TrainReport> train(const ArchGenome& genome,
                                         const SeriesDataset& dataset,
                                         Activation output_activation,
                                         const TrainConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  auto rng = std::mt19937_64(cfg.rng_seed);
  StackedRnn net(genome, dataset.input_dim(), dataset.output_dim(), output_activation);
  glorot_init(net, rng);

  const WindowBatch train_batch = dataset.window(genome.look_back(), Partition::train);
  const WindowBatch val_batch = dataset.window(genome.look_back(), Partition::validation);
  const int n = static_cast<int>(train_batch.windows());

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  AdamState adam;
  NesterovState nesterov;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TrainReport report;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (int pos = 0; pos < n; pos += cfg.batch_size) {
      const int len = std::min(cfg.batch_size, n - pos);
      const WindowBatch sub =
          gather(train_batch, std::span<const int>(order.data() + pos, static_cast<std::size_t>(len)));

      std::vector<Eigen::MatrixXd> masks;
      if (cfg.dropout > 0) {
        const double keep_scale = 1.0 / (1.0 - cfg.dropout);
        for (const auto& layer : net.layers()) {
          Eigen::MatrixXd mask(len, layer.in_dim);
          for (Eigen::Index r = 0; r < mask.rows(); ++r) {
            for (Eigen::Index c = 0; c < mask.cols(); ++c) {
              mask(r, c) = unit(rng) < cfg.dropout ? 0.0 : keep_scale;
            }
          }
          masks.push_back(std::move(mask));
        }
      }

      auto [loss, grad] =
          loss_and_gradient(net, sub, cfg.loss, masks.empty() ? nullptr : &masks);
      if (!std::isfinite(loss)) {
        throw TrainingFailure("non-finite training loss in epoch " + std::to_string(epoch + 1));
      }
      grad = clip_or_boost(std::move(grad), cfg.clip_norm_above, cfg.boost_norm_below);
      if (cfg.optimizer == OptimizerKind::adam) {
        adam_step(net.mutable_weights(), grad, adam, cfg.learning_rate);
      } else {
        sgd_nesterov_step(net.mutable_weights(), grad, nesterov, cfg.learning_rate, cfg.momentum);
      }
      loss_sum += loss * len;
    }
    report.train_loss.push_back(loss_sum / n);

    const double val_loss =
        batch_loss(net.forward_batch(val_batch), val_batch.targets, cfg.loss);
    if (!std::isfinite(val_loss)) {
      throw TrainingFailure("non-finite validation loss in epoch " + std::to_string(epoch + 1));
    }
    report.validation_loss.push_back(val_loss);
    if (cfg.early_stop_loss > 0 && val_loss < cfg.early_stop_loss) {
      report.stop_reason = StopReason::early_stop;
      break;
    }
  }

  report.epochs_run = static_cast<int>(report.train_loss.size());
  report.final_weights = net.weights();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(net), std::move(report)};
}

}  // namespace resn
