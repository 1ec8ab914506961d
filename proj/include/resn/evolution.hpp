#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "resn/genome.hpp"
#include "resn/mrs.hpp"

namespace resn {

struct EvoConfig {
  int population_size = 10;   // mu
  int offspring_size = 10;    // lambda
  int max_evaluations = 100;
  double cell_mut_p = 0.2;
  double layer_mut_p = 0.2;
  double max_step = 5;
  ArchBounds bounds;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

enum class SearchMode { evolve, random_search };

/// What an evaluator produced for one genome. Failures carry the worst
/// possible fitness and are recorded, not fatal.
struct EvalOutcome {
  double fitness = std::numeric_limits<double>::lowest();
  bool failed = false;
  std::string error;
  std::optional<MrsReport> mrs;           // present for the p_t evaluator
  std::optional<double> short_train_mae;  // present for the short-training evaluator
};

/// Fitness function; higher is better (minimizing evaluators negate).
/// The eval_seed names the genome's private random stream, derived from
/// (run seed, generation, index), so evaluations may run in any order.
using Evaluator = std::function<EvalOutcome(const ArchGenome&, std::uint64_t eval_seed)>;

/// Weight count used to break fitness ties in favor of smaller networks.
using ComplexityFn = std::function<std::size_t(const ArchGenome&)>;

struct Individual {
  ArchGenome genome;
  EvalOutcome outcome;

  double fitness() const { return outcome.fitness; }
};

/// The self-adapted mutation parameter triple.
struct AdaptiveParams {
  double cell_mut_p = 0.2;
  double max_step = 5;
  double layer_mut_p = 0.2;
};

/// max_step stays fractional across adaptations and is rounded to the
/// nearest integer >= 1 when a mutation uses it.
int effective_step(double max_step);

struct GenerationRecord {
  int generation = 0;  // 0 is the initial population
  AdaptiveParams params;  // in effect after this generation's self-adaptation
  char adapt_branch = '-';  // '*' grew by 1.5, '/' shrank by 4, '-' none
  int evaluations = 0;
  int failed_evaluations = 0;  // evaluator failures in this batch (worst fitness)
  double best_fitness = 0;
  double avg_fitness = 0;
  double min_fitness = 0;
  std::vector<int> best_genome;
};

struct EvoResult {
  Individual best;
  std::vector<Individual> population;
  std::vector<GenerationRecord> history;
  int evaluations = 0;
  int generations = 0;
};

/// Uniform draw over the architecture box: look-back, layer count, then
/// each width.
ArchGenome random_genome(const ArchBounds& bounds, std::mt19937_64& rng);

std::vector<ArchGenome> initialize_population(int count, const ArchBounds& bounds,
                                              std::mt19937_64& rng);

/// Selects `count` genomes, each the fitter of two uniform draws with
/// replacement; exact ties fall to a coin flip.
std::vector<ArchGenome> binary_tournament(const std::vector<Individual>& population,
                                          int count, std::mt19937_64& rng);

/// Per position (look-back included), with probability cell_mut_p adds a
/// uniform step from [-max_step, max_step] \ {0}, clamped to that
/// position's bounds.
ArchGenome cell_mutation(const ArchGenome& genome, double cell_mut_p, int max_step,
                         const ArchBounds& bounds, std::mt19937_64& rng);

/// Per hidden layer of the input genome, with probability layer_mut_p the
/// layer is cloned (duplicate inserted next to it) or removed, one or the
/// other with equal odds; operations that would leave the layer count
/// outside [min_hl, max_hl] are skipped.
ArchGenome layer_mutation(const ArchGenome& genome, double layer_mut_p,
                          const ArchBounds& bounds, std::mt19937_64& rng);

/// Elitist replacement: the mu best of parents + offspring, ordered by
/// fitness, then fewer weights, then uniformly at random.
std::vector<Individual> replace_best(std::vector<Individual> parents,
                                     std::vector<Individual> offspring, int mu,
                                     const ComplexityFn& complexity,
                                     std::mt19937_64& rng);

/// Multiplies the triple by 1.5 after an improving generation, divides by 4
/// otherwise; probabilities clamp to (0, 1], max_step to [1, max_npl].
AdaptiveParams self_adapt(const AdaptiveParams& params, bool improved,
                          const ArchBounds& bounds);

/// The full (mu + lambda) loop: initialize, then select/mutate/evaluate/
/// replace/self-adapt while another full offspring batch fits in the
/// evaluation budget. random_search draws fresh uniform genomes instead of
/// selecting and mutating, with identical budget accounting.
EvoResult run_evolution(const EvoConfig& cfg, SearchMode mode, const Evaluator& evaluate,
                        const ComplexityFn& complexity, int workers = 1);

}  // namespace resn
