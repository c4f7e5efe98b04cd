#ifndef GRADING_NETWORK_HPP_
#define GRADING_NETWORK_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "grading/dataset.hpp"
#include "grading/spectral.hpp"

namespace grading {

enum class ActivationKind { sigmoid, tanh, linear };

const std::string& activation_name(ActivationKind kind);
ActivationKind activation_from_name(const std::string& name);

double apply_activation(ActivationKind kind, double x);
// Derivative expressed through the activation value a = f(x).
double activation_derivative(ActivationKind kind, double a);

// The four structural factors (depth, widths, jump flag, activation) plus
// the fixed input/output sizes and the output unit's activation.
struct NetworkStructure {
  int input_size = 0;
  std::vector<int> hidden_layers;
  int output_size = 0;
  bool jump_connections = false;
  ActivationKind activation = ActivationKind::sigmoid;
  ActivationKind output_activation = ActivationKind::sigmoid;

  void validate() const;  // throws Error
  // Layer sizes including input and output: input, hidden..., output.
  std::vector<int> layer_sizes() const;
  std::size_t weight_count() const;  // weights + biases (+ jump block)

  friend bool operator==(const NetworkStructure&,
                         const NetworkStructure&) = default;
};

// A concrete weighted instance. weights[l] maps layer l activations to
// layer l+1 pre-activations (rows = destination neurons); biases[l] matches.
// The jump block, when enabled, feeds the input layer straight into the
// output layer's pre-activation.
struct Network {
  NetworkStructure structure;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  Eigen::MatrixXd jump;  // output_size x input_size, or 0x0

  bool all_finite() const;
};

// Weights uniform in [-r, r] with r = 1/sqrt(fan-in of the destination
// neuron); jump inputs count toward the output layer's fan-in. Deterministic
// for a given (structure, seed): blocks are filled layer by layer, each
// neuron's incoming weights then its bias, jump block last.
Network init_network(const NetworkStructure& structure, std::uint64_t seed);

// Layer-by-layer affine + activation pass. Throws Error on length mismatch.
Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& input);

// Decision rules on raw output activations: tomato takes the argmax over the
// six stage outputs (lowest index wins ties); egg accepts iff the single
// output is >= 0.5.
int classify_output(Task task, const Eigen::VectorXd& outputs);
int classify(const Network& net, const SpectralPattern& pattern, Task task);

Eigen::VectorXd pattern_to_input(const SpectralPattern& pattern);
// One-hot for tomato, scalar 0/1 for egg (Accept = 1).
Eigen::VectorXd encode_target(Task task, int label);

}  // namespace grading

#endif  // GRADING_NETWORK_HPP_
