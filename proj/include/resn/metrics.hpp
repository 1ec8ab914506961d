#pragma once

#include <Eigen/Dense>

namespace resn {

/// Predictions and ground truth for a set of windows, same shape.
struct PredictionBatch {
  Eigen::MatrixXd predictions;  // windows x output_dim
  Eigen::MatrixXd targets;      // windows x output_dim

  void check() const;  // throws on shape mismatch or empty batch
};

/// Mean absolute error over all entries; zero iff predictions == targets.
double mae(const PredictionBatch& batch);

/// Mean squared error over all entries.
double mse(const PredictionBatch& batch);

/// Mean absolute percentage error, in percent. Throws std::invalid_argument
/// if any target is exactly zero; callers must mask such points themselves.
double mape(const PredictionBatch& batch);

struct Metrics {
  double mae = 0;
  double mse = 0;
  double mape = 0;
};

/// All three metrics at once (same error contract as mape()).
Metrics metrics(const PredictionBatch& batch);

}  // namespace resn
