#include "resn/metrics.hpp"

#include <stdexcept>

namespace resn {

void PredictionBatch::check() const {
  if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols()) {
    throw std::invalid_argument("prediction batch: shape mismatch");
  }
  if (predictions.size() == 0) {
    throw std::invalid_argument("prediction batch: empty");
  }
}

double mae(const PredictionBatch& batch) {
  batch.check();
  return (batch.predictions - batch.targets).array().abs().mean();
}

double mse(const PredictionBatch& batch) {
  batch.check();
  return (batch.predictions - batch.targets).array().square().mean();
}

double mape(const PredictionBatch& batch) {
  batch.check();
  if ((batch.targets.array() == 0.0).any()) {
    throw std::invalid_argument("mape: zero target value");
  }
  return 100.0 *
         ((batch.predictions - batch.targets).array() / batch.targets.array()).abs().mean();
}

Metrics metrics(const PredictionBatch& batch) {
  return Metrics{mae(batch), mse(batch), mape(batch)};
}

}  // namespace resn
