#include "resn/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "resn/parallel.hpp"
#include "resn/rng.hpp"

namespace resn {

namespace {
using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (key == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("config: unknown key '" + key + "' in " + context);
    }
  }
}

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json metrics_to_json(const TestMetrics& m) {
  json j;
  j["mae"] = m.mae;
  j["mse"] = m.mse;
  j["mape"] = m.mape ? json(*m.mape) : json(nullptr);
  return j;
}

TestMetrics compute_metrics(const PredictionBatch& batch) {
  TestMetrics m;
  m.mae = mae(batch);
  m.mse = mse(batch);
  try {
    m.mape = mape(batch);
  } catch (const std::invalid_argument&) {
    // zero targets; MAPE stays absent and the caller reports null
  }
  return m;
}

json generation_to_json(const GenerationRecord& rec) {
  json j;
  j["generation"] = rec.generation;
  j["cell_mut_p"] = rec.params.cell_mut_p;
  j["max_step"] = rec.params.max_step;
  j["layer_mut_p"] = rec.params.layer_mut_p;
  j["adapt_branch"] = std::string(1, rec.adapt_branch);
  j["evaluations"] = rec.evaluations;
  j["failed_evaluations"] = rec.failed_evaluations;
  j["best_fitness"] = rec.best_fitness;
  j["avg_fitness"] = rec.avg_fitness;
  j["min_fitness"] = rec.min_fitness;
  j["best_genome"] = rec.best_genome;
  return j;
}
}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::resn: return "resn";
    case Strategy::gdet: return "gdet";
    case Strategy::random_search: return "random_search";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "resn") return Strategy::resn;
  if (s == "gdet") return Strategy::gdet;
  if (s == "random_search") return Strategy::random_search;
  throw ConfigError("unknown strategy '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw ConfigError("config: repetitions must be >= 1");
  try {
    evolution.validate();
    mrs.validate();
    training.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (dataset.kind == DatasetSpec::Kind::csv) {
    if (dataset.csv_path.empty()) throw ConfigError("config: csv dataset needs a path");
    if (dataset.input_columns.empty() || dataset.output_columns.empty()) {
      throw ConfigError("config: csv dataset needs input and output columns");
    }
  }
}

ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig cfg;
    check_keys(j,
               {"dataset", "split", "normalization", "output_activation", "strategy",
                "repetitions", "seed", "save_weights", "output", "evolution", "mrs",
                "training"},
               "top level");

    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      check_keys(d,
                 {"kind", "amplitude", "frequency", "phase", "t_start", "t_end", "rate",
                  "path", "input_columns", "output_columns"},
                 "dataset");
      const std::string kind = d.value("kind", "sine");
      if (kind == "sine") {
        cfg.dataset.kind = DatasetSpec::Kind::sine;
        cfg.dataset.sine.amplitude = d.value("amplitude", 1.0);
        cfg.dataset.sine.frequency = d.value("frequency", 1.0);
        cfg.dataset.sine.phase = d.value("phase", 0.0);
        cfg.dataset.sine.t_start = d.value("t_start", 0.0);
        cfg.dataset.sine.t_end = d.value("t_end", 100.0);
        cfg.dataset.sine.rate = d.value("rate", 10.0);
      } else if (kind == "csv") {
        cfg.dataset.kind = DatasetSpec::Kind::csv;
        cfg.dataset.csv_path = d.value("path", "");
        cfg.dataset.input_columns = d.value("input_columns", std::vector<std::string>{});
        cfg.dataset.output_columns = d.value("output_columns", std::vector<std::string>{});
      } else {
        throw ConfigError("config: unknown dataset kind '" + kind + "'");
      }
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      check_keys(s, {"train", "validation", "test"}, "split");
      cfg.split.train = s.value("train", 0.64);
      cfg.split.validation = s.value("validation", 0.16);
      cfg.split.test = s.value("test", 0.20);
    }
    cfg.normalization = norm_mode_from_string(j.value("normalization", "minmax"));
    cfg.output_activation = activation_from_string(j.value("output_activation", "sigmoid"));
    cfg.strategy = strategy_from_string(j.value("strategy", "resn"));
    cfg.repetitions = j.value("repetitions", 1);
    cfg.master_seed = j.value("seed", std::uint64_t{0});
    cfg.save_weights = j.value("save_weights", false);
    cfg.output_path = j.value("output", "");

    if (j.contains("evolution")) {
      const auto& e = j.at("evolution");
      check_keys(e,
                 {"population_size", "offspring_size", "max_evaluations", "cell_mut_p",
                  "layer_mut_p", "max_step", "bounds"},
                 "evolution");
      cfg.evolution.population_size = e.value("population_size", 10);
      cfg.evolution.offspring_size = e.value("offspring_size", 10);
      cfg.evolution.max_evaluations = e.value("max_evaluations", 100);
      cfg.evolution.cell_mut_p = e.value("cell_mut_p", 0.2);
      cfg.evolution.layer_mut_p = e.value("layer_mut_p", 0.2);
      cfg.evolution.max_step = e.value("max_step", 5.0);
      if (e.contains("bounds")) {
        const auto& b = e.at("bounds");
        check_keys(b, {"min_lb", "max_lb", "min_npl", "max_npl", "min_hl", "max_hl"},
                   "bounds");
        cfg.evolution.bounds.min_lb = b.value("min_lb", 2);
        cfg.evolution.bounds.max_lb = b.value("max_lb", 30);
        cfg.evolution.bounds.min_npl = b.value("min_npl", 1);
        cfg.evolution.bounds.max_npl = b.value("max_npl", 100);
        cfg.evolution.bounds.min_hl = b.value("min_hl", 1);
        cfg.evolution.bounds.max_hl = b.value("max_hl", 3);
      }
    }
    if (j.contains("mrs")) {
      const auto& m = j.at("mrs");
      check_keys(m, {"max_samples", "threshold"}, "mrs");
      cfg.mrs.max_samples = m.value("max_samples", 100);
      cfg.mrs.threshold = m.value("threshold", 0.01);
    }
    if (j.contains("training")) {
      const auto& t = j.at("training");
      check_keys(t,
                 {"optimizer", "epochs", "learning_rate", "momentum", "clip_norm_above",
                  "boost_norm_below", "dropout", "early_stop_loss", "batch_size", "loss"},
                 "training");
      cfg.training.optimizer = optimizer_from_string(t.value("optimizer", "adam"));
      cfg.training.epochs = t.value("epochs", 100);
      cfg.training.learning_rate = t.value("learning_rate", 1e-3);
      cfg.training.momentum = t.value("momentum", 0.9);
      cfg.training.clip_norm_above = t.value("clip_norm_above", 1.0);
      cfg.training.boost_norm_below = t.value("boost_norm_below", 0.05);
      cfg.training.dropout = t.value("dropout", 0.0);
      // early_stop_loss of 0 disables the check
      cfg.training.early_stop_loss = t.value("early_stop_loss", 0.0);
      cfg.training.batch_size = t.value("batch_size", 32);
      cfg.training.loss = loss_from_string(t.value("loss", "mae"));
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json d;
  if (cfg.dataset.kind == DatasetSpec::Kind::sine) {
    d["kind"] = "sine";
    d["amplitude"] = cfg.dataset.sine.amplitude;
    d["frequency"] = cfg.dataset.sine.frequency;
    d["phase"] = cfg.dataset.sine.phase;
    d["t_start"] = cfg.dataset.sine.t_start;
    d["t_end"] = cfg.dataset.sine.t_end;
    d["rate"] = cfg.dataset.sine.rate;
  } else {
    d["kind"] = "csv";
    d["path"] = cfg.dataset.csv_path;
    d["input_columns"] = cfg.dataset.input_columns;
    d["output_columns"] = cfg.dataset.output_columns;
  }
  json j;
  j["dataset"] = d;
  j["split"] = {{"train", cfg.split.train},
                {"validation", cfg.split.validation},
                {"test", cfg.split.test}};
  j["normalization"] = to_string(cfg.normalization);
  j["output_activation"] = to_string(cfg.output_activation);
  j["strategy"] = to_string(cfg.strategy);
  j["repetitions"] = cfg.repetitions;
  j["seed"] = cfg.master_seed;
  j["save_weights"] = cfg.save_weights;
  j["output"] = cfg.output_path;
  j["evolution"] = {{"population_size", cfg.evolution.population_size},
                    {"offspring_size", cfg.evolution.offspring_size},
                    {"max_evaluations", cfg.evolution.max_evaluations},
                    {"cell_mut_p", cfg.evolution.cell_mut_p},
                    {"layer_mut_p", cfg.evolution.layer_mut_p},
                    {"max_step", cfg.evolution.max_step},
                    {"bounds",
                     {{"min_lb", cfg.evolution.bounds.min_lb},
                      {"max_lb", cfg.evolution.bounds.max_lb},
                      {"min_npl", cfg.evolution.bounds.min_npl},
                      {"max_npl", cfg.evolution.bounds.max_npl},
                      {"min_hl", cfg.evolution.bounds.min_hl},
                      {"max_hl", cfg.evolution.bounds.max_hl}}}};
  j["mrs"] = {{"max_samples", cfg.mrs.max_samples}, {"threshold", cfg.mrs.threshold}};
  j["training"] = {{"optimizer", to_string(cfg.training.optimizer)},
                   {"epochs", cfg.training.epochs},
                   {"learning_rate", cfg.training.learning_rate},
                   {"momentum", cfg.training.momentum},
                   {"clip_norm_above", cfg.training.clip_norm_above},
                   {"boost_norm_below", cfg.training.boost_norm_below},
                   {"dropout", cfg.training.dropout},
                   {"early_stop_loss", cfg.training.early_stop_loss},
                   {"batch_size", cfg.training.batch_size},
                   {"loss", to_string(cfg.training.loss)}};
  return j;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: parse error in '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

SeriesDataset build_dataset(const ExperimentConfig& cfg) {
  SeriesDataset ds = cfg.dataset.kind == DatasetSpec::Kind::sine
                         ? SeriesDataset::sine(cfg.dataset.sine)
                         : SeriesDataset::from_csv(cfg.dataset.csv_path,
                                                   cfg.dataset.input_columns,
                                                   cfg.dataset.output_columns);
  ds.split(cfg.split.train, cfg.split.validation, cfg.split.test,
           cfg.evolution.bounds.max_lb + 1);
  ds.normalize(cfg.normalization);
  return ds;
}

json dataset_summary(const SeriesDataset& dataset) {
  json j;
  j["rows"] = dataset.rows();
  j["columns"] = dataset.column_names();
  j["input_columns"] = dataset.input_columns();
  j["output_columns"] = dataset.output_columns();
  json parts;
  for (Partition p : {Partition::train, Partition::validation, Partition::test}) {
    const auto [begin, end] = dataset.partition_range(p);
    parts[to_string(p)] = {{"begin", begin}, {"end", end}, {"rows", end - begin}};
  }
  j["partitions"] = parts;
  const auto& norm = dataset.normalization();
  json n;
  n["mode"] = to_string(norm.mode);
  if (norm.mode != NormMode::none) {
    n["offset"] = std::vector<double>(norm.offset.data(), norm.offset.data() + norm.offset.size());
    n["scale"] = std::vector<double>(norm.scale.data(), norm.scale.data() + norm.scale.size());
  }
  j["normalization"] = n;
  return j;
}

Evaluator make_evaluator(const ExperimentConfig& cfg, const SeriesDataset& dataset) {
  if (cfg.strategy == Strategy::gdet) {
    return [&cfg, &dataset](const ArchGenome& genome, std::uint64_t seed) {
      EvalOutcome out;
      try {
        TrainConfig short_cfg = cfg.training;
        short_cfg.epochs = 1;
        short_cfg.early_stop_loss = 0;
        short_cfg.rng_seed = seed;
        auto [net, report] = train(genome, dataset, cfg.output_activation, short_cfg);
        const double error = mae(net.predict(dataset, Partition::validation));
        out.short_train_mae = error;
        out.fitness = -error;  // the loop maximizes
      } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
      }
      return out;
    };
  }
  // resn and random_search both rank by p_t
  return [&cfg, &dataset](const ArchGenome& genome, std::uint64_t seed) {
    EvalOutcome out;
    try {
      MrsConfig mrs_cfg = cfg.mrs;
      mrs_cfg.rng_seed = seed;
      out.mrs = mrs_evaluate(genome, dataset, mrs_cfg, cfg.output_activation);
      out.fitness = out.mrs->p_t;
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
    }
    return out;
  };
}

RepetitionResult run_repetition(const ExperimentConfig& cfg, const SeriesDataset& dataset,
                                int index, int workers) {
  RepetitionResult rep;
  rep.index = index;
  rep.seed = derive_seed(cfg.master_seed, seed_tag::repetition,
                         static_cast<std::uint64_t>(index));
  const auto t_start = std::chrono::steady_clock::now();
  try {
    EvoConfig evo_cfg = cfg.evolution;
    evo_cfg.rng_seed = rep.seed;
    const auto mode = cfg.strategy == Strategy::random_search ? SearchMode::random_search
                                                              : SearchMode::evolve;
    const Evaluator evaluate = make_evaluator(cfg, dataset);
    const ComplexityFn complexity = [&](const ArchGenome& g) {
      return StackedRnn::parameter_count(g, dataset.input_dim(), dataset.output_dim());
    };

    const auto t_opt = std::chrono::steady_clock::now();
    rep.evolution = run_evolution(evo_cfg, mode, evaluate, complexity, workers);
    rep.has_evolution = true;
    rep.optimization_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_opt).count();

    TrainConfig train_cfg = cfg.training;
    train_cfg.rng_seed = derive_seed(rep.seed, seed_tag::training);
    auto [net, report] = train(rep.evolution.best.genome, dataset, cfg.output_activation,
                               train_cfg);
    rep.training_seconds = report.seconds;
    if (!cfg.save_weights) report.final_weights.clear();
    rep.training = std::move(report);
    rep.has_training = true;

    const PredictionBatch test = net.predict(dataset, Partition::test);
    rep.normalized = compute_metrics(test);
    rep.original = compute_metrics(PredictionBatch{
        dataset.denormalize_outputs(test.predictions),
        dataset.denormalize_outputs(test.targets)});
    rep.ok = true;
  } catch (const std::exception& e) {
    rep.ok = false;
    rep.error = e.what();
  }
  rep.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats s;
  const auto n = sorted.size();
  double sum = 0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(n);
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  s.min = sorted.front();
  s.max = sorted.back();
  if (n > 1) {
    double sq = 0;
    for (double v : sorted) sq += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(n - 1));
  }
  return s;
}

json summary_to_json(const SummaryStats& s) {
  return json{{"mean", s.mean}, {"median", s.median}, {"max", s.max}, {"min", s.min},
              {"sd", s.sd}};
}

json mrs_report_to_json(const MrsReport& report) {
  json j;
  j["mae_samples"] = report.mae_samples;
  j["fit_mean"] = report.fit_mean;
  j["fit_sd"] = report.fit_sd;
  j["p_t"] = report.p_t;
  return j;
}

json train_report_to_json(const TrainReport& report, bool include_weights) {
  json j;
  j["epochs_run"] = report.epochs_run;
  j["stop_reason"] = to_string(report.stop_reason);
  j["train_loss"] = report.train_loss;
  j["validation_loss"] = report.validation_loss;
  j["seconds"] = report.seconds;
  if (include_weights) j["final_weights"] = report.final_weights;
  return j;
}

namespace {
json repetition_to_json(const RepetitionResult& rep, const ExperimentConfig& cfg) {
  json j;
  j["index"] = rep.index;
  j["seed"] = rep.seed;
  j["status"] = rep.ok ? "ok" : "failed";
  if (!rep.error.empty()) j["error"] = rep.error;
  if (rep.has_evolution) {
    json evo;
    evo["evaluations"] = rep.evolution.evaluations;
    evo["generations"] = rep.evolution.generations;
    evo["best_genome"] = rep.evolution.best.genome.entries();
    evo["best_fitness"] = rep.evolution.best.fitness();
    json history = json::array();
    for (const auto& rec : rep.evolution.history) history.push_back(generation_to_json(rec));
    evo["history"] = history;
    j["evolution"] = evo;
    const auto& outcome = rep.evolution.best.outcome;
    if (outcome.mrs) {
      j["best_report"] = mrs_report_to_json(*outcome.mrs);
    } else if (outcome.short_train_mae) {
      j["best_report"] = json{{"short_train_mae", *outcome.short_train_mae}};
    }
    const ArchGenome& g = rep.evolution.best.genome;
    j["genome_stats"] = {{"lstm_cells", g.total_cells()},
                         {"look_back", g.look_back()},
                         {"hidden_layers", g.hidden_layers()}};
  }
  if (rep.has_training) {
    j["training"] = train_report_to_json(rep.training, cfg.save_weights);
    j["test_metrics"] = {{"normalized", metrics_to_json(rep.normalized)},
                         {"original", metrics_to_json(rep.original)}};
  }
  j["optimization_seconds"] = rep.optimization_seconds;
  j["training_seconds"] = rep.training_seconds;
  j["total_seconds"] = rep.total_seconds;
  return j;
}
}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, int workers,
                          const RepetitionCallback& on_repetition) {
  cfg.validate();
  const SeriesDataset dataset = build_dataset(cfg);

  RunOutcome outcome;
  outcome.repetitions.resize(static_cast<std::size_t>(cfg.repetitions));
  std::mutex callback_mutex;
  auto run_one = [&](int r, int inner_workers) {
    auto rep = run_repetition(cfg, dataset, r, inner_workers);
    if (on_repetition) {
      std::lock_guard<std::mutex> lock(callback_mutex);
      on_repetition(rep);
    }
    outcome.repetitions[static_cast<std::size_t>(r)] = std::move(rep);
  };
  if (cfg.repetitions > 1) {
    parallel_for(cfg.repetitions, workers, [&](int r) { run_one(r, 1); });
  } else {
    run_one(0, workers);
  }

  json reps = json::array();
  std::vector<double> maes, mses, mapes, cells, lookbacks, layers, opt_secs, train_secs,
      total_secs;
  bool all_mape = true;
  for (const auto& rep : outcome.repetitions) {
    reps.push_back(repetition_to_json(rep, cfg));
    if (!rep.ok) continue;
    ++outcome.ok_count;
    maes.push_back(rep.normalized.mae);
    mses.push_back(rep.normalized.mse);
    if (rep.original.mape) {
      mapes.push_back(*rep.original.mape);
    } else {
      all_mape = false;
    }
    const ArchGenome& g = rep.evolution.best.genome;
    cells.push_back(g.total_cells());
    lookbacks.push_back(g.look_back());
    layers.push_back(g.hidden_layers());
    opt_secs.push_back(rep.optimization_seconds);
    train_secs.push_back(rep.training_seconds);
    total_secs.push_back(rep.total_seconds);
  }

  json log;
  log["schema_version"] = 1;
  log["kind"] = "optimize_run";
  log["created_utc"] = now_utc();
  log["config"] = config_to_json(cfg);
  log["dataset"] = dataset_summary(dataset);
  log["repetitions"] = reps;
  log["failed_repetitions"] = cfg.repetitions - outcome.ok_count;
  if (outcome.ok_count > 0) {
    json summary;
    summary["repetitions_ok"] = outcome.ok_count;
    summary["test_mae"] = summary_to_json(summarize(maes));
    summary["test_mse"] = summary_to_json(summarize(mses));
    summary["test_mape"] = (all_mape && !mapes.empty())
                               ? summary_to_json(summarize(mapes))
                               : json(nullptr);
    summary["lstm_cells"] = summary_to_json(summarize(cells));
    summary["look_back"] = summary_to_json(summarize(lookbacks));
    summary["hidden_layers"] = summary_to_json(summarize(layers));
    summary["optimization_seconds"] = summary_to_json(summarize(opt_secs));
    summary["training_seconds"] = summary_to_json(summarize(train_secs));
    summary["total_seconds"] = summary_to_json(summarize(total_secs));
    log["summary"] = summary;
  } else {
    log["summary"] = nullptr;
  }
  outcome.log = std::move(log);
  return outcome;
}

void save_weights_file(const std::string& path, const StackedRnn& net) {
  json j;
  j["schema_version"] = 1;
  j["genome"] = net.genome().entries();
  j["input_dim"] = net.input_dim();
  j["output_dim"] = net.output_dim();
  j["output_activation"] = to_string(net.output_activation());
  j["weights"] = net.weights();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("weights: cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

StackedRnn load_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("weights: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("weights: parse error in '" + path + "': " + e.what());
  }
  try {
    StackedRnn net(ArchGenome(j.at("genome").get<std::vector<int>>()),
                   j.at("input_dim").get<int>(), j.at("output_dim").get<int>(),
                   activation_from_string(j.at("output_activation").get<std::string>()));
    net.set_weights(j.at("weights").get<std::vector<double>>());
    return net;
  } catch (const json::exception& e) {
    throw std::runtime_error("weights: malformed file '" + path + "': " + e.what());
  }
}

nlohmann::json strip_volatile(nlohmann::json j) {
  if (j.is_object()) {
    json out;
    for (auto& [key, value] : j.items()) {
      if (key == "created_utc" || key == "seconds" || key.ends_with("_seconds")) continue;
      out[key] = strip_volatile(value);
    }
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (auto& item : j) out.push_back(strip_volatile(item));
    return out;
  }
  return j;
}

std::string render_report(const nlohmann::json& runlog) {
  if (!runlog.contains("summary") || runlog["summary"].is_null()) {
    return "no successful repetitions\n";
  }
  const auto& s = runlog["summary"];
  std::ostringstream out;
  out << std::left << std::setw(8) << "" << std::right << std::setw(10) << "MAE"
      << std::setw(10) << "No. LSTM" << std::setw(6) << "LB" << std::setw(8) << "No. HL"
      << std::setw(12) << "Time [min]" << '\n';
  const char* rows[] = {"mean", "median", "max", "min", "sd"};
  const char* labels[] = {"Mean", "Median", "Max", "Min", "Sd"};
  for (int i = 0; i < 5; ++i) {
    out << std::left << std::setw(8) << labels[i] << std::right << std::fixed;
    out << std::setw(10) << std::setprecision(3) << s["test_mae"][rows[i]].get<double>();
    out << std::setw(10) << std::setprecision(0) << s["lstm_cells"][rows[i]].get<double>();
    out << std::setw(6) << std::setprecision(0) << s["look_back"][rows[i]].get<double>();
    out << std::setw(8) << std::setprecision(0) << s["hidden_layers"][rows[i]].get<double>();
    out << std::setw(12) << std::setprecision(1)
        << s["total_seconds"][rows[i]].get<double>() / 60.0;
    out << '\n';
    out.unsetf(std::ios_base::fixed);
  }
  return out.str();
}

}  // namespace resn
