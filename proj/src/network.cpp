#include "resn/network.hpp"

#include <stdexcept>

namespace resn {

namespace {
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

// logistic() vectorizes for double where std::tanh falls back to scalar
// calls; tanh is routed through it (tanh x = 2 logistic(2x) - 1).
inline Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& z) {
  return z.logistic();
}

inline Eigen::ArrayXXd fast_tanh(const Eigen::ArrayXXd& z) {
  return 2.0 * (2.0 * z).logistic() - 1.0;
}
}  // namespace

const char* to_string(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::linear: return "linear";
    case Activation::tanh: return "tanh";
  }
  return "?";
}

Activation activation_from_string(const std::string& s) {
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "linear") return Activation::linear;
  if (s == "tanh") return Activation::tanh;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

StackedRnn::StackedRnn(ArchGenome genome, int input_dim, int output_dim,
                       Activation output_activation)
    : genome_(std::move(genome)),
      input_dim_(input_dim),
      output_dim_(output_dim),
      activation_(output_activation) {
  if (input_dim_ < 1 || output_dim_ < 1) {
    throw std::invalid_argument("network: dimensions must be positive");
  }
  std::size_t off = 0;
  int in = input_dim_;
  for (int l = 0; l < genome_.hidden_layers(); ++l) {
    const int h = genome_.layer_width(l);
    LayerLayout layer;
    layer.in_dim = in;
    layer.hidden = h;
    layer.w_off = off;
    off += static_cast<std::size_t>(in) * 4 * h;
    layer.u_off = off;
    off += static_cast<std::size_t>(h) * 4 * h;
    layer.b_off = off;
    off += static_cast<std::size_t>(4) * h;
    layers_.push_back(layer);
    in = h;
  }
  dense_w_off_ = off;
  off += static_cast<std::size_t>(in) * output_dim_;
  dense_b_off_ = off;
  off += static_cast<std::size_t>(output_dim_);
  weights_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(off));
}

std::size_t StackedRnn::parameter_count(const ArchGenome& genome, int input_dim,
                                        int output_dim) {
  std::size_t total = 0;
  int in = input_dim;
  for (int l = 0; l < genome.hidden_layers(); ++l) {
    const int h = genome.layer_width(l);
    total += 4u * (static_cast<std::size_t>(in) * h + static_cast<std::size_t>(h) * h + h);
    in = h;
  }
  total += static_cast<std::size_t>(in) * output_dim + output_dim;
  return total;
}

void StackedRnn::set_weights(std::span<const double> w) {
  if (w.size() != parameter_count()) {
    throw std::invalid_argument("set_weights: expected " + std::to_string(parameter_count()) +
                                " values, got " + std::to_string(w.size()));
  }
  weights_ = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

std::vector<double> StackedRnn::weights() const {
  return {weights_.data(), weights_.data() + weights_.size()};
}

void StackedRnn::check_batch(const WindowBatch& batch) const {
  if (batch.inputs.cols() != input_dim_) {
    throw std::invalid_argument("forward: window has " + std::to_string(batch.inputs.cols()) +
                                " features, network expects " + std::to_string(input_dim_));
  }
  if (batch.look_back != genome_.look_back()) {
    throw std::invalid_argument("forward: window look-back " + std::to_string(batch.look_back) +
                                " != genome look-back " + std::to_string(genome_.look_back()));
  }
  if (batch.windows() < 1) {
    throw std::invalid_argument("forward: empty window batch");
  }
}

Eigen::MatrixXd StackedRnn::forward_batch(const WindowBatch& batch) const {
  check_batch(batch);
  const Eigen::Index n = batch.windows();
  const int lb = batch.look_back;
  const double* wp = weights_.data();

  Eigen::MatrixXd current = batch.inputs;  // (n*lb) x D of the layer below
  Eigen::MatrixXd next, z_in, h, c;
  for (const auto& layer : layers_) {
    const int d = layer.in_dim;
    const int hh = layer.hidden;
    ConstMap w(wp + layer.w_off, d, 4 * hh);
    ConstMap u(wp + layer.u_off, hh, 4 * hh);
    ConstVecMap b(wp + layer.b_off, 4 * hh);

    z_in.noalias() = current * w;  // whole-sequence input transform
    next.resize(n * lb, hh);
    h = Eigen::MatrixXd::Zero(n, hh);
    c = Eigen::MatrixXd::Zero(n, hh);
    for (int t = 0; t < lb; ++t) {
      auto z = z_in.middleRows(t * n, n);  // becomes the gate block in place
      z.noalias() += h * u;
      z.rowwise() += b.transpose();
      auto zi = z.leftCols(hh).array();
      auto zf = z.middleCols(hh, hh).array();
      auto zg = z.middleCols(2 * hh, hh).array();
      auto zo = z.rightCols(hh).array();
      zi = zi.logistic();
      zf = zf.logistic();
      zg = 2.0 * (2.0 * zg).logistic() - 1.0;
      zo = zo.logistic();
      c = (zf * c.array() + zi * zg).matrix();
      h = (zo * (2.0 * (2.0 * c.array()).logistic() - 1.0)).matrix();
      next.middleRows(t * n, n) = h;
    }
    current = std::move(next);
  }

  const int last = layers_.back().hidden;
  ConstMap wy(wp + dense_w_off_, last, output_dim_);
  ConstVecMap by(wp + dense_b_off_, output_dim_);
  Eigen::MatrixXd out = current.bottomRows(n) * wy;  // h at the final timestep
  out.rowwise() += by.transpose();
  switch (activation_) {
    case Activation::sigmoid: out = sigmoid(out.array()); break;
    case Activation::tanh: out = fast_tanh(out.array()); break;
    case Activation::linear: break;
  }
  return out;
}

Eigen::VectorXd StackedRnn::forward(const Eigen::MatrixXd& window) const {
  WindowBatch batch;
  batch.look_back = static_cast<int>(window.rows());
  batch.inputs = window;
  batch.targets = Eigen::MatrixXd::Zero(1, output_dim_);
  return forward_batch(batch).row(0);
}

PredictionBatch StackedRnn::predict(const SeriesDataset& dataset, Partition part) const {
  const WindowBatch batch = dataset.window(genome_.look_back(), part);
  return PredictionBatch{forward_batch(batch), batch.targets};
}

StackedRnn::ForwardTrace StackedRnn::forward_trace(
    const WindowBatch& batch, const std::vector<Eigen::MatrixXd>* masks) const {
  check_batch(batch);
  if (masks && masks->size() != layers_.size()) {
    throw std::invalid_argument("forward_trace: one dropout mask per layer required");
  }
  const Eigen::Index n = batch.windows();
  const int lb = batch.look_back;
  const double* wp = weights_.data();

  ForwardTrace trace;
  trace.window_count = n;
  trace.look_back = lb;
  trace.layers.resize(layers_.size());

  Eigen::MatrixXd z_in, z;
  const Eigen::MatrixXd* below = &batch.inputs;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const auto& layer = layers_[li];
    const int d = layer.in_dim;
    const int hh = layer.hidden;
    ConstMap w(wp + layer.w_off, d, 4 * hh);
    ConstMap u(wp + layer.u_off, hh, 4 * hh);
    ConstVecMap b(wp + layer.b_off, 4 * hh);

    auto& tl = trace.layers[li];
    tl.input = *below;
    if (masks && (*masks)[li].size() != 0) {
      tl.mask = (*masks)[li];
      if (tl.mask.rows() != n || tl.mask.cols() != d) {
        throw std::invalid_argument("forward_trace: dropout mask shape mismatch");
      }
      for (int t = 0; t < lb; ++t) {
        tl.input.middleRows(t * n, n).array() *= tl.mask.array();
      }
    }
    tl.gate_i.resize(n * lb, hh);
    tl.gate_f.resize(n * lb, hh);
    tl.gate_g.resize(n * lb, hh);
    tl.gate_o.resize(n * lb, hh);
    tl.cell.resize(n * lb, hh);
    tl.cell_tanh.resize(n * lb, hh);
    tl.hidden.resize(n * lb, hh);

    z_in.noalias() = tl.input * w;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, hh);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, hh);
    for (int t = 0; t < lb; ++t) {
      z = z_in.middleRows(t * n, n);
      z.noalias() += h * u;
      z.rowwise() += b.transpose();
      auto rows = [&](Eigen::MatrixXd& m) { return m.middleRows(t * n, n); };
      rows(tl.gate_i) = z.leftCols(hh).array().logistic();
      rows(tl.gate_f) = z.middleCols(hh, hh).array().logistic();
      rows(tl.gate_g) = 2.0 * (2.0 * z.middleCols(2 * hh, hh).array()).logistic() - 1.0;
      rows(tl.gate_o) = z.rightCols(hh).array().logistic();
      c = (rows(tl.gate_f).array() * c.array() + rows(tl.gate_i).array() * rows(tl.gate_g).array())
              .matrix();
      rows(tl.cell) = c;
      rows(tl.cell_tanh) = 2.0 * (2.0 * c.array()).logistic() - 1.0;
      h = (rows(tl.gate_o).array() * rows(tl.cell_tanh).array()).matrix();
      rows(tl.hidden) = h;
    }
    below = &tl.hidden;
  }

  const int last = layers_.back().hidden;
  ConstMap wy(wp + dense_w_off_, last, output_dim_);
  ConstVecMap by(wp + dense_b_off_, output_dim_);
  Eigen::MatrixXd out = trace.layers.back().hidden.bottomRows(n) * wy;
  out.rowwise() += by.transpose();
  switch (activation_) {
    case Activation::sigmoid: out = sigmoid(out.array()); break;
    case Activation::tanh: out = fast_tanh(out.array()); break;
    case Activation::linear: break;
  }
  trace.output = std::move(out);
  return trace;
}

}  // namespace resn
