#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "resn/dataset.hpp"
#include "resn/genome.hpp"
#include "resn/network.hpp"

namespace resn {

enum class OptimizerKind { adam, sgd_nesterov };
enum class Loss { mae, mse };
enum class StopReason { epochs_exhausted, early_stop };

const char* to_string(OptimizerKind o);
const char* to_string(Loss l);
const char* to_string(StopReason r);
OptimizerKind optimizer_from_string(const std::string& s);
Loss loss_from_string(const std::string& s);

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::adam;
  int epochs = 100;
  double learning_rate = 1e-3;
  double momentum = 0.9;          // sgd_nesterov only
  double clip_norm_above = 1.0;
  double boost_norm_below = 0.05;
  double dropout = 0.0;           // on LSTM layer inputs (non-recurrent)
  double early_stop_loss = 0.0;   // stop when validation loss drops below; 0 disables
  int batch_size = 32;
  Loss loss = Loss::mae;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct TrainReport {
  std::vector<double> train_loss;       // one entry per completed epoch
  std::vector<double> validation_loss;  // same length
  StopReason stop_reason = StopReason::epochs_exhausted;
  int epochs_run = 0;
  double seconds = 0;
  std::vector<double> final_weights;
};

/// Thrown when training produces a non-finite loss; the caller marks the run
/// as failed.
class TrainingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double batch_loss(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets,
                  Loss loss);

/// Gradient of the mean batch loss with respect to the flat weight vector
/// (backpropagation through time, dropout disabled). The MAE subgradient at
/// zero residual is 0.
Eigen::VectorXd bptt_gradient(const StackedRnn& net, const WindowBatch& batch, Loss loss);

/// Loss and gradient in one pass, with optional per-layer dropout masks
/// (N x D_l, inverted-scaled) applied to the LSTM layer inputs.
std::pair<double, Eigen::VectorXd> loss_and_gradient(
    const StackedRnn& net, const WindowBatch& batch, Loss loss,
    const std::vector<Eigen::MatrixXd>* masks = nullptr);

/// Rescales the gradient to L2 norm `above` when it is larger, up to norm
/// `below` when it is smaller (but nonzero); zero vectors pass through.
Eigen::VectorXd clip_or_boost(Eigen::VectorXd grad, double above, double below);

struct AdamState {
  Eigen::VectorXd m, v;
  long step = 0;
};

/// Bias-corrected Adam update, beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
void adam_step(std::span<double> weights, const Eigen::VectorXd& grad, AdamState& state,
               double learning_rate);

struct NesterovState {
  Eigen::VectorXd velocity;
};

/// Nesterov-momentum SGD: v = mu v - lr g; w += mu v - lr g.
void sgd_nesterov_step(std::span<double> weights, const Eigen::VectorXd& grad,
                       NesterovState& state, double learning_rate, double momentum);

/// Glorot-uniform initialization of all kernels; biases zero except the
/// forget-gate block, which starts at 1.
void glorot_init(StackedRnn& net, std::mt19937_64& rng);

/// Trains a fresh network on the training partition with mini-batch epochs,
/// dropout on layer inputs, clip-or-boost and the configured optimizer;
/// checks validation loss once per epoch for early stopping.
std::pair<StackedRnn, TrainReport> train(const ArchGenome& genome,
                                         const SeriesDataset& dataset,
                                         Activation output_activation,
                                         const TrainConfig& cfg);

}  // namespace resn
