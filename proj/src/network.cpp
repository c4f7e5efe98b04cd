#include "grading/network.hpp"

#include <cmath>

#include "grading/error.hpp"
#include "grading/rng.hpp"

namespace grading {

namespace {
const std::string kActivationNames[3] = {"sigmoid", "tanh", "linear"};
}

const std::string& activation_name(ActivationKind kind) {
  return kActivationNames[static_cast<int>(kind)];
}

ActivationKind activation_from_name(const std::string& name) {
  for (int i = 0; i < 3; ++i)
    if (kActivationNames[i] == name) return static_cast<ActivationKind>(i);
  throw DecodeError("unknown activation '" + name + "'");
}

double apply_activation(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::tanh:
      return std::tanh(x);
    case ActivationKind::linear:
      return x;
  }
  return x;
}

double activation_derivative(ActivationKind kind, double a) {
  switch (kind) {
    case ActivationKind::sigmoid:
      return a * (1.0 - a);
    case ActivationKind::tanh:
      return 1.0 - a * a;
    case ActivationKind::linear:
      return 1.0;
  }
  return 1.0;
}

void NetworkStructure::validate() const {
  if (input_size < 1) throw Error("input_size must be >= 1");
  if (output_size < 1) throw Error("output_size must be >= 1");
  for (const int w : hidden_layers)
    if (w < 1) throw Error("hidden layer width must be >= 1");
}

std::vector<int> NetworkStructure::layer_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(hidden_layers.size() + 2);
  sizes.push_back(input_size);
  sizes.insert(sizes.end(), hidden_layers.begin(), hidden_layers.end());
  sizes.push_back(output_size);
  return sizes;
}

std::size_t NetworkStructure::weight_count() const {
  const std::vector<int> sizes = layer_sizes();
  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    count += static_cast<std::size_t>(sizes[l + 1]) * sizes[l] + sizes[l + 1];
  if (jump_connections)
    count += static_cast<std::size_t>(output_size) * input_size;
  return count;
}

bool Network::all_finite() const {
  for (const auto& w : weights)
    if (!w.allFinite()) return false;
  for (const auto& b : biases)
    if (!b.allFinite()) return false;
  return jump.size() == 0 || jump.allFinite();
}

Network init_network(const NetworkStructure& structure, std::uint64_t seed) {
  structure.validate();
  Rng rng(seed);

  Network net;
  net.structure = structure;
  const std::vector<int> sizes = structure.layer_sizes();
  const std::size_t layers = sizes.size() - 1;
  net.weights.reserve(layers);
  net.biases.reserve(layers);

  for (std::size_t l = 0; l < layers; ++l) {
    const int rows = sizes[l + 1], cols = sizes[l];
    int fan_in = cols;
    if (structure.jump_connections && l == layers - 1)
      fan_in += structure.input_size;
    const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));

    Eigen::MatrixXd w(rows, cols);
    Eigen::VectorXd b(rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) w(i, j) = rng.uniform(-r, r);
      b(i) = rng.uniform(-r, r);
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }

  if (structure.jump_connections) {
    const int fan_in = sizes[layers - 1] + structure.input_size;
    const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
    net.jump.resize(structure.output_size, structure.input_size);
    for (int i = 0; i < structure.output_size; ++i)
      for (int j = 0; j < structure.input_size; ++j)
        net.jump(i, j) = rng.uniform(-r, r);
  } else {
    net.jump.resize(0, 0);
  }
  return net;
}

Eigen::VectorXd forward(const Network& net, const Eigen::VectorXd& input) {
  if (input.size() != net.structure.input_size)
    throw Error("input length " + std::to_string(input.size()) +
                " does not match input_size " +
                std::to_string(net.structure.input_size));

  const std::size_t layers = net.weights.size();
  Eigen::VectorXd a = input;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::VectorXd z = net.weights[l] * a + net.biases[l];
    const bool is_output = l == layers - 1;
    if (is_output && net.structure.jump_connections) z += net.jump * input;
    const ActivationKind kind =
        is_output ? net.structure.output_activation : net.structure.activation;
    a.resize(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
      a(i) = apply_activation(kind, z(i));
  }
  return a;
}

int classify_output(Task task, const Eigen::VectorXd& outputs) {
  const Eigen::Index expected = task == Task::egg ? 1 : class_count(task);
  if (outputs.size() != expected)
    throw Error("output size " + std::to_string(outputs.size()) +
                " does not fit task " + task_name(task));

  if (task == Task::egg)
    return outputs(0) >= 0.5 ? static_cast<int>(EggGrade::accept)
                             : static_cast<int>(EggGrade::reject);

  int best = 0;
  for (Eigen::Index i = 1; i < outputs.size(); ++i)
    if (outputs(i) > outputs(best)) best = static_cast<int>(i);
  return best;
}

int classify(const Network& net, const SpectralPattern& pattern, Task task) {
  const int expected = task == Task::egg ? 1 : class_count(task);
  if (net.structure.output_size != expected)
    throw Error("network output size " +
                std::to_string(net.structure.output_size) +
                " does not fit task " + task_name(task));
  return classify_output(task, forward(net, pattern_to_input(pattern)));
}

Eigen::VectorXd pattern_to_input(const SpectralPattern& pattern) {
  return Eigen::Map<const Eigen::VectorXd>(pattern.values.data(),
                                           SpectralPattern::kSize);
}

Eigen::VectorXd encode_target(Task task, int label) {
  if (label < 0 || label >= class_count(task))
    throw Error("label " + std::to_string(label) + " out of range for " +
                task_name(task));
  if (task == Task::egg) {
    Eigen::VectorXd t(1);
    t(0) = label == static_cast<int>(EggGrade::accept) ? 1.0 : 0.0;
    return t;
  }
  Eigen::VectorXd t = Eigen::VectorXd::Zero(kTomatoClasses);
  t(label) = 1.0;
  return t;
}

}  // namespace grading
