#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "resn/dataset.hpp"
#include "resn/genome.hpp"
#include "resn/network.hpp"

namespace resn {

struct MrsConfig {
  int max_samples = 100;
  double threshold = 0.01;
  std::uint64_t rng_seed = 0;

  void validate() const;  // max_samples >= 2, threshold > 0
};

/// Result of error random sampling for one architecture: the sampled MAE
/// values, the truncated-normal fit, and the probability of a random-weight
/// MAE below the threshold.
struct MrsReport {
  std::vector<double> mae_samples;
  double fit_mean = 0;
  double fit_sd = 0;
  double p_t = 0;
};

/// n i.i.d. standard-normal draws; every trainable parameter gets one.
std::vector<double> sample_random_weights(std::size_t n, std::mt19937_64& rng);

/// CDF of normal(mean, sd) truncated to [0, inf) evaluated at threshold;
/// the fitness used to rank architectures.
double p_truncated_normal(double mean, double sd, double threshold);

/// Draws max_samples random weight vectors for the architecture, records the
/// MAE of each over the training partition, fits the truncated normal and
/// computes p_t. Each sample uses its own seed stream derived from
/// cfg.rng_seed, so the result is independent of evaluation order and worker
/// count.
MrsReport mrs_evaluate(const ArchGenome& genome, const SeriesDataset& dataset,
                       const MrsConfig& cfg, Activation output_activation,
                       int workers = 1);

}  // namespace resn
