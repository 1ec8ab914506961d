#include "resn/mrs.hpp"

#include <stdexcept>

#include "resn/parallel.hpp"
#include "resn/rng.hpp"
#include "resn/truncated_normal.hpp"

namespace resn {

void MrsConfig::validate() const {
  if (max_samples < 2) throw std::invalid_argument("mrs: max_samples must be >= 2");
  if (!(threshold > 0)) throw std::invalid_argument("mrs: threshold must be > 0");
}

std::vector<double> sample_random_weights(std::size_t n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("sample_random_weights: n must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> weights(n);
  for (double& w : weights) w = normal(rng);
  return weights;
}

double p_truncated_normal(double mean, double sd, double threshold) {
  return truncated_normal_cdf(mean, sd, threshold);
}

MrsReport mrs_evaluate(const ArchGenome& genome, const SeriesDataset& dataset,
                       const MrsConfig& cfg, Activation output_activation,
                       int workers) {
  cfg.validate();
  const WindowBatch batch = dataset.window(genome.look_back(), Partition::train);
  const StackedRnn prototype(genome, dataset.input_dim(), dataset.output_dim(),
                             output_activation);
  const std::size_t n_weights = prototype.parameter_count();

  MrsReport report;
  report.mae_samples.assign(static_cast<std::size_t>(cfg.max_samples), 0.0);
  parallel_for(cfg.max_samples, workers, [&](int s) {
    auto rng = make_rng(derive_seed(cfg.rng_seed, seed_tag::sample, static_cast<std::uint64_t>(s)));
    StackedRnn net = prototype;
    net.set_weights(sample_random_weights(n_weights, rng));
    const Eigen::MatrixXd pred = net.forward_batch(batch);
    report.mae_samples[static_cast<std::size_t>(s)] =
        (pred - batch.targets).array().abs().mean();
  });

  const auto fit = fit_truncated_normal(report.mae_samples);
  report.fit_mean = fit.mean;
  report.fit_sd = fit.sd;
  report.p_t = p_truncated_normal(fit.mean, fit.sd, cfg.threshold);
  return report;
}

}  // namespace resn
