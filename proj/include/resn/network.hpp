#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "resn/dataset.hpp"
#include "resn/genome.hpp"
#include "resn/metrics.hpp"

namespace resn {

enum class Activation { sigmoid, linear, tanh };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// Stacked LSTM (forget gate, no peepholes) followed by a dense output
/// layer. All trainable parameters live in one flat vector with a fixed
/// layout so weight files are portable:
///
///   per hidden layer l (input size D, width H):
///     kernel    W: D x 4H, row-major, gate blocks [input|forget|cell|output]
///     recurrent U: H x 4H, row-major, same gate blocks
///     bias      b: 4H
///   then dense kernel: H_last x O row-major, dense bias: O.
///
/// Hidden and cell state start at zero for every window; windows are
/// independent. The forward pass is a pure function of (weights, window).
class StackedRnn {
 public:
  StackedRnn(ArchGenome genome, int input_dim, int output_dim,
             Activation output_activation);

  static std::size_t parameter_count(const ArchGenome& genome, int input_dim,
                                     int output_dim);
  std::size_t parameter_count() const { return static_cast<std::size_t>(weights_.size()); }

  /// Replaces the flat weight vector; throws on length mismatch.
  void set_weights(std::span<const double> w);
  /// Copy of the flat weight vector (serialization, tests).
  std::vector<double> weights() const;
  /// Aligned internal storage; keeps kernel dispatch address-independent so
  /// repeated runs are bitwise identical.
  const Eigen::VectorXd& weight_vector() const { return weights_; }
  std::span<double> mutable_weights() { return {weights_.data(), static_cast<std::size_t>(weights_.size())}; }

  const ArchGenome& genome() const { return genome_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  Activation output_activation() const { return activation_; }

  /// One window (look_back x input_dim) -> output vector.
  Eigen::VectorXd forward(const Eigen::MatrixXd& window) const;

  /// All windows of a batch at once; row k is the prediction for window k.
  Eigen::MatrixXd forward_batch(const WindowBatch& batch) const;

  /// Predictions plus targets over one partition of a dataset windowed with
  /// this network's look-back.
  PredictionBatch predict(const SeriesDataset& dataset, Partition part) const;

  struct LayerLayout {
    int in_dim = 0;
    int hidden = 0;
    std::size_t w_off = 0;  // kernel
    std::size_t u_off = 0;  // recurrent kernel
    std::size_t b_off = 0;  // bias
  };
  const std::vector<LayerLayout>& layers() const { return layers_; }
  std::size_t dense_w_offset() const { return dense_w_off_; }
  std::size_t dense_b_offset() const { return dense_b_off_; }

  /// Per-layer activations recorded during a forward pass, everything the
  /// backward pass needs. Stacked matrices hold timestep t in rows
  /// [t*N, (t+1)*N).
  struct ForwardTrace {
    struct Layer {
      Eigen::MatrixXd input;             // masked input, (N*LB) x D
      Eigen::MatrixXd gate_i, gate_f, gate_g, gate_o;  // (N*LB) x H each
      Eigen::MatrixXd cell;              // c_t
      Eigen::MatrixXd cell_tanh;         // tanh(c_t)
      Eigen::MatrixXd hidden;            // h_t
      Eigen::MatrixXd mask;              // dropout mask (N x D) or empty
    };
    std::vector<Layer> layers;
    Eigen::MatrixXd output;  // N x O, after output activation
    Eigen::Index window_count = 0;
    int look_back = 0;
  };

  /// Forward pass that records all intermediate activations. Optional
  /// per-layer dropout masks (N x D_l, already inverted-scaled) multiply the
  /// layer inputs elementwise, broadcast over timesteps.
  ForwardTrace forward_trace(const WindowBatch& batch,
                             const std::vector<Eigen::MatrixXd>* masks = nullptr) const;

 private:
  void check_batch(const WindowBatch& batch) const;

  ArchGenome genome_;
  int input_dim_ = 0;
  int output_dim_ = 0;
  Activation activation_ = Activation::sigmoid;
  std::vector<LayerLayout> layers_;
  std::size_t dense_w_off_ = 0;
  std::size_t dense_b_off_ = 0;
  Eigen::VectorXd weights_;
};

}  // namespace resn
