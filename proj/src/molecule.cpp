#include "grading/molecule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "grading/error.hpp"

namespace grading {

namespace {

constexpr double kBlendProbability = 0.2;
constexpr double kScaleSigma = 0.2;

int round_mean(int a, int b) {
  return static_cast<int>(std::lround((a + b) / 2.0));
}

}  // namespace

void SearchBounds::validate() const {
  if (min_layers < 1 || min_layers > max_layers)
    throw Error("bad layer bounds");
  if (min_width < 1 || min_width > max_width) throw Error("bad width bounds");
  if (!(min_learning_rate > 0) || min_learning_rate > max_learning_rate)
    throw Error("bad learning-rate bounds");
  if (min_momentum < 0 || min_momentum > max_momentum || max_momentum >= 1)
    throw Error("bad momentum bounds");
}

std::string Molecule::structure_key() const {
  std::ostringstream key;
  key << layer_count << ":";
  for (int l = 0; l < layer_count; ++l) key << widths[l] << ",";
  key << (jump ? "J" : "-") << ":" << activation_name(activation);
  return key.str();
}

bool Molecule::within(const SearchBounds& bounds) const {
  if (layer_count < bounds.min_layers || layer_count > bounds.max_layers)
    return false;
  if (static_cast<int>(widths.size()) != bounds.max_layers) return false;
  for (const int w : widths)
    if (w < bounds.min_width || w > bounds.max_width) return false;
  return learning_rate >= bounds.min_learning_rate &&
         learning_rate <= bounds.max_learning_rate &&
         momentum >= bounds.min_momentum && momentum <= bounds.max_momentum;
}

NetworkStructure decode_structure(const Molecule& m, int input_size,
                                  int output_size) {
  NetworkStructure s;
  s.input_size = input_size;
  s.hidden_layers = m.active_widths();
  s.output_size = output_size;
  s.jump_connections = m.jump;
  s.activation = m.activation;
  s.output_activation = ActivationKind::sigmoid;
  s.validate();
  return s;
}

Molecule random_molecule(const SearchBounds& bounds, Rng& rng) {
  bounds.validate();
  Molecule m;
  m.layer_count = rng.uniform_int(bounds.min_layers, bounds.max_layers);
  m.widths.resize(bounds.max_layers);
  for (int& w : m.widths) w = rng.uniform_int(bounds.min_width, bounds.max_width);
  m.jump = rng.bernoulli(0.5);
  m.activation = static_cast<ActivationKind>(rng.uniform_int(0, 2));
  m.learning_rate =
      rng.log_uniform(bounds.min_learning_rate, bounds.max_learning_rate);
  m.momentum = rng.uniform(bounds.min_momentum, bounds.max_momentum);
  return m;
}

Molecule clamp_to_bounds(Molecule m, const SearchBounds& bounds) {
  m.layer_count = std::clamp(m.layer_count, bounds.min_layers, bounds.max_layers);
  m.widths.resize(bounds.max_layers, bounds.min_width);
  for (int& w : m.widths) w = std::clamp(w, bounds.min_width, bounds.max_width);
  m.learning_rate = std::clamp(m.learning_rate, bounds.min_learning_rate,
                               bounds.max_learning_rate);
  m.momentum = std::clamp(m.momentum, bounds.min_momentum, bounds.max_momentum);
  return m;
}

std::pair<Molecule, Molecule> react(const Molecule& a, const Molecule& b,
                                    Rng& rng) {
  if (a.widths.size() != b.widths.size())
    throw Error("reacting molecules have different genome lengths");

  Molecule o1, o2;
  o1.widths.resize(a.widths.size());
  o2.widths.resize(a.widths.size());

  // Factor order: layers, widths, jump, activation, learning rate, momentum.
  bool from_a[6];
  for (bool& f : from_a) f = rng.bernoulli(0.5);

  o1.layer_count = from_a[0] ? a.layer_count : b.layer_count;
  o2.layer_count = from_a[0] ? b.layer_count : a.layer_count;
  o1.widths = from_a[1] ? a.widths : b.widths;
  o2.widths = from_a[1] ? b.widths : a.widths;
  o1.jump = from_a[2] ? a.jump : b.jump;
  o2.jump = from_a[2] ? b.jump : a.jump;
  o1.activation = from_a[3] ? a.activation : b.activation;
  o2.activation = from_a[3] ? b.activation : a.activation;
  o1.learning_rate = from_a[4] ? a.learning_rate : b.learning_rate;
  o2.learning_rate = from_a[4] ? b.learning_rate : a.learning_rate;
  o1.momentum = from_a[5] ? a.momentum : b.momentum;
  o2.momentum = from_a[5] ? b.momentum : a.momentum;

  if (rng.bernoulli(kBlendProbability)) {
    const int mean = round_mean(a.layer_count, b.layer_count);
    o1.layer_count = o2.layer_count = mean;
  }
  if (rng.bernoulli(kBlendProbability)) {
    for (std::size_t i = 0; i < o1.widths.size(); ++i)
      o1.widths[i] = o2.widths[i] = round_mean(a.widths[i], b.widths[i]);
  }
  if (rng.bernoulli(kBlendProbability)) {
    const double mean = (a.learning_rate + b.learning_rate) / 2.0;
    o1.learning_rate = o2.learning_rate = mean;
  }
  if (rng.bernoulli(kBlendProbability)) {
    const double mean = (a.momentum + b.momentum) / 2.0;
    o1.momentum = o2.momentum = mean;
  }
  return {std::move(o1), std::move(o2)};
}

Molecule wall_collision(const Molecule& m, const SearchBounds& bounds,
                        Rng& rng) {
  Molecule out = m;
  out.molecular_weight.reset();

  switch (rng.uniform_int(0, 5)) {
    case 0:
      out.layer_count += rng.bernoulli(0.5) ? 1 : -1;
      break;
    case 1: {
      const int pos = rng.uniform_int(0, m.layer_count - 1);
      out.widths[pos] += rng.bernoulli(0.5) ? 1 : -1;
      break;
    }
    case 2:
      out.jump = !out.jump;
      break;
    case 3:
      out.activation = static_cast<ActivationKind>(rng.uniform_int(0, 2));
      break;
    case 4:
      out.learning_rate *= std::exp(rng.normal() * kScaleSigma);
      break;
    case 5:
      out.momentum *= std::exp(rng.normal() * kScaleSigma);
      break;
  }
  return clamp_to_bounds(std::move(out), bounds);
}

}  // namespace grading
