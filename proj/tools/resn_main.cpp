#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "resn/harness.hpp"
#include "resn/rng.hpp"

namespace {

using nlohmann::json;

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

resn::ExperimentConfig load_with_overrides(const std::string& config_path,
                                           const std::optional<std::uint64_t>& seed,
                                           const std::string& out_path) {
  auto cfg = resn::load_config_file(config_path);
  if (seed) cfg.master_seed = *seed;
  if (!out_path.empty()) cfg.output_path = out_path;
  return cfg;
}

int cmd_optimize(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_path, int workers) {
  auto cfg = load_with_overrides(config_path, seed, out_path);
  if (cfg.output_path.empty()) cfg.output_path = "runlog.json";
  std::cerr << "optimize: strategy=" << resn::to_string(cfg.strategy)
            << " repetitions=" << cfg.repetitions << " seed=" << cfg.master_seed
            << " workers=" << workers << '\n';
  const auto outcome = resn::run_experiment(cfg, workers, [&](const resn::RepetitionResult& rep) {
    std::cerr << "  repetition " << rep.index << ": "
              << (rep.ok ? "ok" : ("failed: " + rep.error));
    if (rep.ok) {
      std::cerr << " test_mae=" << rep.normalized.mae << " genome="
                << resn::ArchGenome(rep.evolution.best.genome).to_string()
                << " total=" << rep.total_seconds << "s";
    }
    std::cerr << '\n';
  });
  write_json(cfg.output_path, outcome.log);
  std::cerr << "wrote " << cfg.output_path << '\n';
  std::cout << resn::render_report(outcome.log);
  return outcome.ok_count == 0 ? 2 : 0;
}

int cmd_sample(const std::string& config_path, const std::string& genome_text,
               std::optional<std::uint64_t> seed, const std::string& out_path) {
  auto cfg = load_with_overrides(config_path, seed, out_path);
  const auto genome = resn::parse_genome(genome_text);
  const auto dataset = resn::build_dataset(cfg);
  resn::MrsConfig mrs_cfg = cfg.mrs;
  mrs_cfg.rng_seed = cfg.master_seed;
  const auto report = resn::mrs_evaluate(genome, dataset, mrs_cfg, cfg.output_activation);

  json j;
  j["schema_version"] = 1;
  j["kind"] = "mrs_sample";
  j["genome"] = genome.entries();
  j["seed"] = cfg.master_seed;
  j["mrs"] = {{"max_samples", mrs_cfg.max_samples}, {"threshold", mrs_cfg.threshold}};
  j["report"] = resn::mrs_report_to_json(report);
  std::cout << j.dump(2) << '\n';
  if (!cfg.output_path.empty()) write_json(cfg.output_path, j);
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& genome_text,
              std::optional<std::uint64_t> seed, const std::string& out_path,
              const std::string& weights_path) {
  auto cfg = load_with_overrides(config_path, seed, out_path);
  const auto genome = resn::parse_genome(genome_text);
  const auto dataset = resn::build_dataset(cfg);

  // Same derivation chain as repetition 0 of `optimize`.
  const auto rep_seed = resn::derive_seed(cfg.master_seed, resn::seed_tag::repetition, 0);
  resn::TrainConfig train_cfg = cfg.training;
  train_cfg.rng_seed = resn::derive_seed(rep_seed, resn::seed_tag::training);

  auto [net, report] = resn::train(genome, dataset, cfg.output_activation, train_cfg);
  const auto test = net.predict(dataset, resn::Partition::test);
  const auto original = resn::PredictionBatch{dataset.denormalize_outputs(test.predictions),
                                              dataset.denormalize_outputs(test.targets)};

  json j;
  j["schema_version"] = 1;
  j["kind"] = "train_run";
  j["genome"] = genome.entries();
  j["seed"] = cfg.master_seed;
  j["training"] = resn::train_report_to_json(report, false);
  json test_metrics;
  test_metrics["normalized"] = {{"mae", resn::mae(test)}, {"mse", resn::mse(test)}};
  test_metrics["original"] = {{"mae", resn::mae(original)}, {"mse", resn::mse(original)}};
  j["test_metrics"] = test_metrics;

  resn::save_weights_file(weights_path, net);
  std::cerr << "wrote weights to " << weights_path << '\n';
  std::cout << j.dump(2) << '\n';
  if (!cfg.output_path.empty()) write_json(cfg.output_path, j);
  return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& weights_path,
                 const std::string& out_path) {
  auto cfg = load_with_overrides(config_path, std::nullopt, out_path);
  const auto dataset = resn::build_dataset(cfg);
  const auto net = resn::load_weights_file(weights_path);
  if (net.input_dim() != dataset.input_dim() || net.output_dim() != dataset.output_dim()) {
    throw std::runtime_error("evaluate: weight file dimensions do not match the dataset");
  }
  const auto test = net.predict(dataset, resn::Partition::test);
  const auto original = resn::PredictionBatch{dataset.denormalize_outputs(test.predictions),
                                              dataset.denormalize_outputs(test.targets)};
  json j;
  j["schema_version"] = 1;
  j["kind"] = "evaluation";
  j["dataset"] = resn::dataset_summary(dataset);
  json metrics;
  metrics["normalized"] = {{"mae", resn::mae(test)}, {"mse", resn::mse(test)}};
  metrics["original"] = {{"mae", resn::mae(original)}, {"mse", resn::mse(original)}};
  j["metrics"] = metrics;
  std::cout << j.dump(2) << '\n';
  if (!cfg.output_path.empty()) write_json(cfg.output_path, j);
  return 0;
}

int cmd_report(const std::string& log_path) {
  std::ifstream in(log_path);
  if (!in) throw std::runtime_error("report: cannot open '" + log_path + "'");
  json j;
  in >> j;
  std::cout << resn::render_report(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Training-free LSTM architecture search with final gradient training"};
  app.require_subcommand(1);

  std::string config_path, out_path, genome_text, weights_path = "weights.json";
  std::string log_path;
  std::optional<std::uint64_t> seed;
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  auto* optimize = app.add_subcommand("optimize", "Run the full search + training pipeline");
  optimize->add_option("--config", config_path, "experiment config JSON")->required();
  optimize->add_option("--seed", seed, "override the master seed");
  optimize->add_option("--workers", workers, "max parallel workers");
  optimize->add_option("--out", out_path, "run log path (default runlog.json)");

  auto* sample = app.add_subcommand("sample", "Error random sampling of one architecture");
  sample->add_option("--config", config_path, "experiment config JSON")->required();
  sample->add_option("--genome", genome_text, "look-back,width,... e.g. 10,8")->required();
  sample->add_option("--seed", seed, "override the master seed");
  sample->add_option("--out", out_path, "also write the report JSON here");

  auto* train = app.add_subcommand("train", "Train one architecture with gradient descent");
  train->add_option("--config", config_path, "experiment config JSON")->required();
  train->add_option("--genome", genome_text, "look-back,width,... e.g. 10,8")->required();
  train->add_option("--seed", seed, "override the master seed");
  train->add_option("--out", out_path, "also write the report JSON here");
  train->add_option("--weights", weights_path, "weights output file (default weights.json)");

  auto* evaluate = app.add_subcommand("evaluate", "Test metrics of a saved weight file");
  evaluate->add_option("--config", config_path, "experiment config JSON")->required();
  evaluate->add_option("--weights", weights_path, "weights file")->required();
  evaluate->add_option("--out", out_path, "also write the metrics JSON here");

  auto* report = app.add_subcommand("report", "Render a run log summary table");
  report->add_option("--log", log_path, "run log JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad flags are config errors
  }

  try {
    if (optimize->parsed()) return cmd_optimize(config_path, seed, out_path, workers);
    if (sample->parsed()) return cmd_sample(config_path, genome_text, seed, out_path);
    if (train->parsed()) return cmd_train(config_path, genome_text, seed, out_path, weights_path);
    if (evaluate->parsed()) return cmd_evaluate(config_path, weights_path, out_path);
    if (report->parsed()) return cmd_report(log_path);
  } catch (const resn::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
