#ifndef GRADING_REACTOR_HPP_
#define GRADING_REACTOR_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "grading/molecule.hpp"
#include "grading/train.hpp"

namespace grading {

struct ReactorConfig {
  SearchBounds bounds;
  int capacity = 50;
  double reaction_rate = 0.5;  // fraction of the population colliding pairwise
  double wall_rate = 0.2;      // fraction hitting the tank wall
  int max_cycles = 10000;
  double consensus_threshold = 0.80;
  std::uint64_t rng_seed = 0;
  int threads = 0;  // evaluation workers; 0 = hardware concurrency

  void validate() const;
};

// Fitness of a molecule under a derived seed; must be thread-safe. The seed
// is fixed per (rng_seed, cycle, molecule index) before evaluation starts,
// so concurrent and sequential execution produce identical results.
using FitnessFn =
    std::function<double(const Molecule& molecule, std::uint64_t eval_seed)>;

// Fraction of the population sharing the modal structure tuple (learning
// rate and momentum excluded).
double consensus_fraction(const std::vector<Molecule>& population);

// Truncates to capacity by descending molecular weight; ties prefer fewer
// total neurons, then earlier insertion. Requires every weight to be set.
void filter_population(std::vector<Molecule>& population, int capacity);

struct CycleStat {
  int cycle = 0;
  double best_weight = 0;  // best ever seen up to this cycle
  double mean_weight = 0;  // over the current population
  double consensus = 0;
};

struct SearchResult {
  Molecule best;                // highest weight ever seen
  std::uint64_t best_eval_seed = 0;  // seed that produced it (for replay)
  std::vector<CycleStat> log;   // cycle 0 = initial population
  int cycles_run = 0;
  bool stopped_by_consensus = false;
};

// Reactor simulation: every cycle draws random pairs for reactions and
// random singles for wall collisions, evaluates the newly created molecules
// and filters the merged population back to capacity. Stops when the
// population reaches structural consensus or after max_cycles.
SearchResult run_search(const ReactorConfig& config, const FitnessFn& fitness);

// Settings for evaluating a molecule on the grading task.
struct EvalSettings {
  int max_epochs = 200;
  int patience = 100;
};

struct EvalData {
  SampleSet train;
  SampleSet test;
  SampleSet validation;
  int input_size = 0;
  int output_size = 0;
  Task task = Task::egg;
};

// Decodes, initializes and trains the encoded network with the molecule's
// learning rate and momentum, then returns the fraction of the validation
// set it classifies correctly. A diverged training scores 0. Also hands back
// the trained network when `trained` is non-null.
double evaluate_molecule(const Molecule& m, const EvalData& data,
                         const EvalSettings& settings, std::uint64_t eval_seed,
                         Network* trained = nullptr);

// Fitness closure over evaluate_molecule; `data` must outlive the search.
FitnessFn make_ann_fitness(const EvalData& data, const EvalSettings& settings);

// The seed evaluate_molecule receives for a molecule created at `cycle`
// with batch index `index` (cycle 0 = initial population).
std::uint64_t molecule_eval_seed(std::uint64_t rng_seed, int cycle, int index);

}  // namespace grading

#endif  // GRADING_REACTOR_HPP_
