#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "resn/dataset.hpp"
#include "resn/evolution.hpp"
#include "resn/mrs.hpp"
#include "resn/network.hpp"
#include "resn/training.hpp"

namespace resn {

/// Bad or missing configuration; maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy { resn, gdet, random_search };
const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct DatasetSpec {
  enum class Kind { sine, csv };
  Kind kind = Kind::sine;
  SineSpec sine;
  std::string csv_path;
  std::vector<std::string> input_columns;
  std::vector<std::string> output_columns;
};

struct SplitFractions {
  double train = 0.64;
  double validation = 0.16;
  double test = 0.20;
};

/// Everything one experiment needs: dataset, pipeline configuration, search
/// strategy, repetition count and the master seed all derived streams hang
/// off. Repetition r uses seed derive(seed, repetition, r); within a
/// repetition the evolution, every (generation, individual) evaluation and
/// the final training each get their own derived stream.
struct ExperimentConfig {
  DatasetSpec dataset;
  SplitFractions split;
  NormMode normalization = NormMode::minmax;
  Activation output_activation = Activation::sigmoid;
  Strategy strategy = Strategy::resn;
  int repetitions = 1;
  std::uint64_t master_seed = 0;
  bool save_weights = false;
  std::string output_path;
  EvoConfig evolution;   // rng_seed is filled per repetition
  MrsConfig mrs;         // likewise
  TrainConfig training;  // likewise

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::string& path);

/// Builds, splits and normalizes the configured dataset. Partitions must
/// hold at least max look-back + 1 rows.
SeriesDataset build_dataset(const ExperimentConfig& cfg);

nlohmann::json dataset_summary(const SeriesDataset& dataset);

struct TestMetrics {
  double mae = 0;
  double mse = 0;
  std::optional<double> mape;  // absent when a target is exactly zero
};

struct RepetitionResult {
  int index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  EvoResult evolution;
  bool has_evolution = false;
  TrainReport training;
  bool has_training = false;
  TestMetrics normalized;  // metrics in the model's (normalized) scale
  TestMetrics original;    // metrics mapped back to original units
  double optimization_seconds = 0;
  double training_seconds = 0;
  double total_seconds = 0;
};

/// The evaluator the configured strategy uses during search: p_t for resn
/// and random_search, negated one-epoch validation MAE for gdet.
Evaluator make_evaluator(const ExperimentConfig& cfg, const SeriesDataset& dataset);

/// One full pipeline run (evolve, train the winner, test), seeded from the
/// repetition stream.
RepetitionResult run_repetition(const ExperimentConfig& cfg, const SeriesDataset& dataset,
                                int index, int workers = 1);

struct RunOutcome {
  nlohmann::json log;
  std::vector<RepetitionResult> repetitions;
  int ok_count = 0;
};

using RepetitionCallback = std::function<void(const RepetitionResult&)>;

/// Runs all repetitions (in parallel across repetitions when workers > 1 and
/// there is more than one) and assembles the run log. The callback fires
/// once per finished repetition, serialized.
RunOutcome run_experiment(const ExperimentConfig& cfg, int workers = 1,
                          const RepetitionCallback& on_repetition = nullptr);

/// Mean, median, max, min and sample standard deviation (0 for one value).
struct SummaryStats {
  double mean = 0, median = 0, max = 0, min = 0, sd = 0;
};
SummaryStats summarize(std::span<const double> values);
nlohmann::json summary_to_json(const SummaryStats& s);

nlohmann::json mrs_report_to_json(const MrsReport& report);
nlohmann::json train_report_to_json(const TrainReport& report, bool include_weights);

/// Weight-file round trip: the flat vector plus enough metadata to rebuild
/// the network.
void save_weights_file(const std::string& path, const StackedRnn& net);
StackedRnn load_weights_file(const std::string& path);

/// Removes volatile keys (timestamps, measured seconds) so two logs from
/// identical configs compare byte-identical.
nlohmann::json strip_volatile(nlohmann::json j);

/// Renders the summary block of a run log as a fixed-width table with times
/// in minutes.
std::string render_report(const nlohmann::json& runlog);

}  // namespace resn
