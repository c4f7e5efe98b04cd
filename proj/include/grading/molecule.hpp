#ifndef GRADING_MOLECULE_HPP_
#define GRADING_MOLECULE_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grading/network.hpp"
#include "grading/rng.hpp"

namespace grading {

struct SearchBounds {
  int min_layers = 1;
  int max_layers = 4;
  int min_width = 16;
  int max_width = 1024;
  double min_learning_rate = 1e-4;
  double max_learning_rate = 1.0;
  double min_momentum = 0.0;
  double max_momentum = 0.95;

  void validate() const;  // throws Error
};

// A search individual. Six encoded factors: hidden layer count, the width
// genome, the jump flag, the activation kind, the learning rate and the
// momentum. The width genome always has max_layers entries so factor-wise
// recombination stays well-formed; only the first layer_count entries are
// active. molecular_weight is the validation classification rate, unset
// until the molecule has been evaluated.
struct Molecule {
  int layer_count = 1;
  std::vector<int> widths;
  bool jump = false;
  ActivationKind activation = ActivationKind::sigmoid;
  double learning_rate = 0.1;
  double momentum = 0.0;
  std::optional<double> molecular_weight;

  std::vector<int> active_widths() const {
    return {widths.begin(), widths.begin() + layer_count};
  }
  long total_neurons() const {
    long n = 0;
    for (int l = 0; l < layer_count; ++l) n += widths[l];
    return n;
  }
  // Structural identity for consensus: the four structure factors only;
  // learning rate and momentum are excluded.
  std::string structure_key() const;

  bool within(const SearchBounds& bounds) const;
};

// Decodes the molecule into a trainable topology for the task's sizes.
NetworkStructure decode_structure(const Molecule& m, int input_size,
                                  int output_size);

// Every factor sampled independently and uniformly; the learning rate is
// log-uniform. The inactive width tail is sampled too (it is genome).
Molecule random_molecule(const SearchBounds& bounds, Rng& rng);

// Two-molecule collision: uniform factor-wise recombination. Each factor
// goes to the first offspring from one parent (p = 0.5), the second takes
// the complement; each numeric factor is then blended to the parents' mean
// with probability 0.2 (widths element-wise, integers rounded). Offspring
// weights are unset.
std::pair<Molecule, Molecule> react(const Molecule& a, const Molecule& b,
                                    Rng& rng);

// Wall collision: mutates exactly one uniformly chosen factor — integer
// steps +-1 (one active width for the width factor), reals scaled by
// exp(N(0, 0.2)), flag toggled, activation resampled — then clamps to
// bounds. Weight is unset.
Molecule wall_collision(const Molecule& m, const SearchBounds& bounds,
                        Rng& rng);

Molecule clamp_to_bounds(Molecule m, const SearchBounds& bounds);

}  // namespace grading

#endif  // GRADING_MOLECULE_HPP_
