#include "resn/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "resn/parallel.hpp"
#include "resn/rng.hpp"

namespace resn {

void EvoConfig::validate() const {
  if (population_size < 1) throw std::invalid_argument("evolution: population_size must be >= 1");
  if (offspring_size < 1) throw std::invalid_argument("evolution: offspring_size must be >= 1");
  if (max_evaluations < population_size) {
    throw std::invalid_argument("evolution: max_evaluations must cover the initial population");
  }
  if (!(cell_mut_p > 0) || cell_mut_p > 1 || !(layer_mut_p > 0) || layer_mut_p > 1) {
    throw std::invalid_argument("evolution: mutation probabilities must be in (0, 1]");
  }
  if (max_step < 1) throw std::invalid_argument("evolution: max_step must be >= 1");
  bounds.validate();
}

int effective_step(double max_step) {
  return std::max(1, static_cast<int>(std::lround(max_step)));
}

ArchGenome random_genome(const ArchBounds& bounds, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> lb(bounds.min_lb, bounds.max_lb);
  std::uniform_int_distribution<int> layers(bounds.min_hl, bounds.max_hl);
  std::uniform_int_distribution<int> width(bounds.min_npl, bounds.max_npl);
  std::vector<int> entries;
  entries.push_back(lb(rng));
  const int h = layers(rng);
  for (int i = 0; i < h; ++i) entries.push_back(width(rng));
  return ArchGenome(std::move(entries));
}

std::vector<ArchGenome> initialize_population(int count, const ArchBounds& bounds,
                                              std::mt19937_64& rng) {
  std::vector<ArchGenome> population;
  population.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) population.push_back(random_genome(bounds, rng));
  return population;
}

std::vector<ArchGenome> binary_tournament(const std::vector<Individual>& population,
                                          int count, std::mt19937_64& rng) {
  if (population.empty()) throw std::invalid_argument("binary_tournament: empty population");
  std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<ArchGenome> selected;
  selected.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto& a = population[pick(rng)];
    const auto& b = population[pick(rng)];
    if (a.fitness() > b.fitness()) {
      selected.push_back(a.genome);
    } else if (b.fitness() > a.fitness()) {
      selected.push_back(b.genome);
    } else {
      selected.push_back(coin(rng) ? a.genome : b.genome);
    }
  }
  return selected;
}

ArchGenome cell_mutation(const ArchGenome& genome, double cell_mut_p, int max_step,
                         const ArchBounds& bounds, std::mt19937_64& rng) {
  if (max_step < 1) throw std::invalid_argument("cell_mutation: max_step must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Uniform over [-max_step, max_step] without zero.
  std::uniform_int_distribution<int> step_index(0, 2 * max_step - 1);
  std::vector<int> entries = genome.entries();
  for (std::size_t j = 0; j < entries.size(); ++j) {
    if (unit(rng) >= cell_mut_p) continue;
    const int idx = step_index(rng);
    const int step = idx < max_step ? idx - max_step : idx - max_step + 1;
    const int lo = j == 0 ? bounds.min_lb : bounds.min_npl;
    const int hi = j == 0 ? bounds.max_lb : bounds.max_npl;
    entries[j] = std::clamp(entries[j] + step, lo, hi);
  }
  return ArchGenome(std::move(entries));
}

ArchGenome layer_mutation(const ArchGenome& genome, double layer_mut_p,
                          const ArchBounds& bounds, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<int> layers(genome.entries().begin() + 1, genome.entries().end());
  std::vector<int> result;
  result.reserve(layers.size() + 1);
  int remaining = static_cast<int>(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i, --remaining) {
    const int current_total = static_cast<int>(result.size()) + remaining;
    if (unit(rng) < layer_mut_p) {
      if (coin(rng)) {  // clone, skipped at the layer-count ceiling
        if (current_total + 1 <= bounds.max_hl) {
          result.push_back(layers[i]);
          result.push_back(layers[i]);
          continue;
        }
      } else {  // remove, skipped at the floor
        if (current_total - 1 >= bounds.min_hl) {
          continue;
        }
      }
    }
    result.push_back(layers[i]);
  }
  std::vector<int> entries;
  entries.reserve(result.size() + 1);
  entries.push_back(genome.look_back());
  entries.insert(entries.end(), result.begin(), result.end());
  return ArchGenome(std::move(entries));
}

namespace {
struct RankKey {
  double fitness;
  std::size_t weights;
  double tiebreak;
};

std::vector<Individual> sort_and_trim(std::vector<Individual> pool, int mu,
                                      const ComplexityFn& complexity, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<RankKey> keys;
  keys.reserve(pool.size());
  for (const auto& ind : pool) {
    keys.push_back({ind.fitness(), complexity(ind.genome), unit(rng)});
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a].fitness != keys[b].fitness) return keys[a].fitness > keys[b].fitness;
    if (keys[a].weights != keys[b].weights) return keys[a].weights < keys[b].weights;
    return keys[a].tiebreak < keys[b].tiebreak;
  });
  std::vector<Individual> survivors;
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(mu), pool.size());
  survivors.reserve(take);
  for (std::size_t i = 0; i < take; ++i) survivors.push_back(std::move(pool[order[i]]));
  return survivors;
}
}  // namespace

std::vector<Individual> replace_best(std::vector<Individual> parents,
                                     std::vector<Individual> offspring, int mu,
                                     const ComplexityFn& complexity, std::mt19937_64& rng) {
  std::vector<Individual> pool = std::move(parents);
  pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
              std::make_move_iterator(offspring.end()));
  return sort_and_trim(std::move(pool), mu, complexity, rng);
}

AdaptiveParams self_adapt(const AdaptiveParams& params, bool improved,
                          const ArchBounds& bounds) {
  const double factor = improved ? 1.5 : 0.25;
  AdaptiveParams next;
  next.cell_mut_p = std::min(params.cell_mut_p * factor, 1.0);
  next.layer_mut_p = std::min(params.layer_mut_p * factor, 1.0);
  next.max_step =
      std::clamp(params.max_step * factor, 1.0, static_cast<double>(bounds.max_npl));
  return next;
}

namespace {
double average_fitness(const std::vector<Individual>& population) {
  double sum = 0;
  for (const auto& ind : population) sum += ind.fitness();
  return sum / static_cast<double>(population.size());
}

GenerationRecord make_record(int generation, const AdaptiveParams& params, char branch,
                             int evaluations, int failed,
                             const std::vector<Individual>& population) {
  GenerationRecord rec;
  rec.generation = generation;
  rec.params = params;
  rec.adapt_branch = branch;
  rec.evaluations = evaluations;
  rec.failed_evaluations = failed;
  rec.best_fitness = population.front().fitness();
  rec.min_fitness = population.back().fitness();
  rec.avg_fitness = average_fitness(population);
  rec.best_genome = population.front().genome.entries();
  return rec;
}

int count_failed(const std::vector<Individual>& batch) {
  int failed = 0;
  for (const auto& ind : batch) failed += ind.outcome.failed ? 1 : 0;
  return failed;
}
}  // namespace

EvoResult run_evolution(const EvoConfig& cfg, SearchMode mode, const Evaluator& evaluate,
                        const ComplexityFn& complexity, int workers) {
  cfg.validate();
  auto rng = make_rng(derive_seed(cfg.rng_seed, seed_tag::evolution));

  auto evaluate_all = [&](std::vector<ArchGenome> genomes, int generation) {
    std::vector<Individual> out(genomes.size());
    parallel_for(static_cast<int>(genomes.size()), workers, [&](int i) {
      const auto seed = derive_seed(cfg.rng_seed, seed_tag::evaluation,
                                    static_cast<std::uint64_t>(generation),
                                    static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)].genome = std::move(genomes[static_cast<std::size_t>(i)]);
      out[static_cast<std::size_t>(i)].outcome =
          evaluate(out[static_cast<std::size_t>(i)].genome, seed);
    });
    return out;
  };

  EvoResult result;
  auto population =
      evaluate_all(initialize_population(cfg.population_size, cfg.bounds, rng), 0);
  int batch_failures = count_failed(population);
  // Sorting via an empty replacement keeps one ordering rule everywhere.
  population = replace_best({}, std::move(population), cfg.population_size, complexity, rng);
  result.evaluations = cfg.population_size;

  AdaptiveParams params{cfg.cell_mut_p, cfg.max_step, cfg.layer_mut_p};
  result.history.push_back(
      make_record(0, params, '-', result.evaluations, batch_failures, population));
  double prev_avg = average_fitness(population);

  int generation = 0;
  while (result.evaluations + cfg.offspring_size <= cfg.max_evaluations) {
    ++generation;
    std::vector<ArchGenome> children;
    if (mode == SearchMode::random_search) {
      children = initialize_population(cfg.offspring_size, cfg.bounds, rng);
    } else {
      children = binary_tournament(population, cfg.offspring_size, rng);
      const int step = effective_step(params.max_step);
      for (auto& child : children) {
        child = cell_mutation(child, params.cell_mut_p, step, cfg.bounds, rng);
        child = layer_mutation(child, params.layer_mut_p, cfg.bounds, rng);
      }
    }
    auto offspring = evaluate_all(std::move(children), generation);
    batch_failures = count_failed(offspring);
    result.evaluations += cfg.offspring_size;
    population = replace_best(std::move(population), std::move(offspring),
                              cfg.population_size, complexity, rng);
    const double new_avg = average_fitness(population);
    char branch = '-';
    if (mode == SearchMode::evolve) {
      const bool improved = new_avg > prev_avg;
      params = self_adapt(params, improved, cfg.bounds);
      branch = improved ? '*' : '/';
    }
    prev_avg = new_avg;
    result.history.push_back(make_record(generation, params, branch, result.evaluations,
                                         batch_failures, population));
  }

  result.generations = generation;
  result.best = population.front();
  result.population = std::move(population);
  return result;
}

}  // namespace resn
