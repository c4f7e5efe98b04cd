#include "grading/reactor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "grading/error.hpp"
#include "grading/util.hpp"

namespace grading {

void ReactorConfig::validate() const {
  bounds.validate();
  if (capacity < 2) throw Error("reactor capacity must be >= 2");
  if (reaction_rate < 0 || wall_rate < 0)
    throw Error("collision rates must be non-negative");
  if (max_cycles < 0) throw Error("max_cycles must be non-negative");
  if (consensus_threshold <= 0)
    throw Error("consensus_threshold must be positive");
}

double consensus_fraction(const std::vector<Molecule>& population) {
  if (population.empty()) throw Error("empty population");
  std::map<std::string, int> counts;
  int modal = 0;
  for (const auto& m : population)
    modal = std::max(modal, ++counts[m.structure_key()]);
  return static_cast<double>(modal) / static_cast<double>(population.size());
}

void filter_population(std::vector<Molecule>& population, int capacity) {
  for (const auto& m : population)
    if (!m.molecular_weight)
      throw Error("filter_population requires evaluated molecules");
  if (static_cast<int>(population.size()) <= capacity) return;

  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) {
                     const Molecule& a = population[i];
                     const Molecule& b = population[j];
                     if (*a.molecular_weight != *b.molecular_weight)
                       return *a.molecular_weight > *b.molecular_weight;
                     if (a.total_neurons() != b.total_neurons())
                       return a.total_neurons() < b.total_neurons();
                     return i < j;
                   });

  std::vector<Molecule> kept;
  kept.reserve(capacity);
  for (int k = 0; k < capacity; ++k)
    kept.push_back(std::move(population[order[k]]));
  population = std::move(kept);
}

std::uint64_t molecule_eval_seed(std::uint64_t rng_seed, int cycle, int index) {
  return derive_seed(rng_seed, static_cast<std::uint64_t>(cycle) + 1,
                     static_cast<std::uint64_t>(index) + 1);
}

namespace {

// Evaluates a batch in parallel; results land by index, so thread timing
// cannot change the outcome.
void evaluate_batch(std::vector<Molecule>& batch, int cycle,
                    const ReactorConfig& config, const FitnessFn& fitness) {
  std::vector<std::uint64_t> seeds(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i)
    seeds[i] = molecule_eval_seed(config.rng_seed, cycle, static_cast<int>(i));
  parallel_for(batch.size(), config.threads, [&](std::size_t i) {
    batch[i].molecular_weight = fitness(batch[i], seeds[i]);
  });
}

struct BestTracker {
  Molecule molecule;
  std::uint64_t eval_seed = 0;
  bool set = false;

  void offer(const Molecule& m, std::uint64_t seed) {
    if (!set || *m.molecular_weight > *molecule.molecular_weight) {
      molecule = m;
      eval_seed = seed;
      set = true;
    }
  }
};

}  // namespace

SearchResult run_search(const ReactorConfig& config, const FitnessFn& fitness) {
  config.validate();
  Rng rng(derive_seed(config.rng_seed, 0x7ea7c0));

  std::vector<Molecule> population;
  population.reserve(config.capacity);
  for (int i = 0; i < config.capacity; ++i)
    population.push_back(random_molecule(config.bounds, rng));
  evaluate_batch(population, 0, config, fitness);

  BestTracker best;
  for (std::size_t i = 0; i < population.size(); ++i)
    best.offer(population[i],
               molecule_eval_seed(config.rng_seed, 0, static_cast<int>(i)));

  SearchResult result;
  auto log_cycle = [&](int cycle) {
    CycleStat stat;
    stat.cycle = cycle;
    stat.best_weight = *best.molecule.molecular_weight;
    double sum = 0;
    for (const auto& m : population) sum += *m.molecular_weight;
    stat.mean_weight = sum / static_cast<double>(population.size());
    stat.consensus = consensus_fraction(population);
    result.log.push_back(stat);
    return stat.consensus;
  };

  double consensus = log_cycle(0);
  int cycle = 0;
  while (cycle < config.max_cycles &&
         consensus < config.consensus_threshold) {
    ++cycle;
    const int n = static_cast<int>(population.size());
    const int pairs =
        static_cast<int>(std::lround(config.reaction_rate * n)) / 2;
    const int walls = static_cast<int>(std::lround(config.wall_rate * n));

    std::vector<Molecule> created;
    created.reserve(2 * pairs + walls);
    for (int p = 0; p < pairs; ++p) {
      const int i = rng.uniform_int(0, n - 1);
      int j = rng.uniform_int(0, n - 2);
      if (j >= i) ++j;  // distinct partner
      auto [o1, o2] = react(population[i], population[j], rng);
      created.push_back(clamp_to_bounds(std::move(o1), config.bounds));
      created.push_back(clamp_to_bounds(std::move(o2), config.bounds));
    }
    for (int wUnused = 0; wUnused < walls; ++wUnused) {
      const int k = rng.uniform_int(0, n - 1);
      created.push_back(wall_collision(population[k], config.bounds, rng));
    }

    evaluate_batch(created, cycle, config, fitness);
    for (std::size_t i = 0; i < created.size(); ++i)
      best.offer(created[i],
                 molecule_eval_seed(config.rng_seed, cycle, static_cast<int>(i)));

    population.insert(population.end(),
                      std::make_move_iterator(created.begin()),
                      std::make_move_iterator(created.end()));
    filter_population(population, config.capacity);
    consensus = log_cycle(cycle);
  }

  result.best = best.molecule;
  result.best_eval_seed = best.eval_seed;
  result.cycles_run = cycle;
  result.stopped_by_consensus = consensus >= config.consensus_threshold;
  return result;
}

double evaluate_molecule(const Molecule& m, const EvalData& data,
                         const EvalSettings& settings, std::uint64_t eval_seed,
                         Network* trained) {
  const NetworkStructure structure =
      decode_structure(m, data.input_size, data.output_size);

  TrainingParams params;
  params.learning_rate = m.learning_rate;
  params.momentum = m.momentum;
  params.max_epochs = settings.max_epochs;
  params.patience = settings.patience;
  params.shuffle_seed = derive_seed(eval_seed, 2);

  Network net = init_network(structure, derive_seed(eval_seed, 1));
  try {
    TrainResult fit = train(net, data.train, data.test, params);
    long correct = 0;
    for (const auto& s : data.validation) {
      const int predicted =
          classify_output(data.task, forward(fit.network, s.input));
      const int truth = classify_output(data.task, s.target);
      if (predicted == truth) ++correct;
    }
    if (trained) *trained = std::move(fit.network);
    return static_cast<double>(correct) /
           static_cast<double>(data.validation.size());
  } catch (const TrainingDiverged&) {
    // Worst fitness; the search continues. Hand back the initial weights so
    // callers persisting a model still get a loadable one.
    if (trained) *trained = std::move(net);
    return 0.0;
  }
}

FitnessFn make_ann_fitness(const EvalData& data, const EvalSettings& settings) {
  return [&data, settings](const Molecule& m, std::uint64_t seed) {
    return evaluate_molecule(m, data, settings, seed);
  };
}

}  // namespace grading
