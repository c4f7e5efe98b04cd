#include "grading/train.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "grading/error.hpp"
#include "grading/feature_io.hpp"
#include "grading/rng.hpp"

namespace grading {

void TrainingParams::validate() const {
  if (!(learning_rate > 0)) throw Error("learning_rate must be positive");
  if (momentum < 0 || momentum >= 1) throw Error("momentum must be in [0, 1)");
  if (max_epochs < 0) throw Error("max_epochs must be non-negative");
  if (patience < 1) throw Error("patience must be >= 1");
}

Velocity Velocity::zeros(const Network& net) {
  Velocity v;
  v.weights.reserve(net.weights.size());
  v.biases.reserve(net.biases.size());
  for (const auto& w : net.weights)
    v.weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  for (const auto& b : net.biases)
    v.biases.push_back(Eigen::VectorXd::Zero(b.size()));
  v.jump = Eigen::MatrixXd::Zero(net.jump.rows(), net.jump.cols());
  return v;
}

double sample_error(const Eigen::VectorXd& output,
                    const Eigen::VectorXd& target) {
  return 0.5 * (output - target).squaredNorm();
}

double mean_error(const Network& net, const SampleSet& set) {
  double sum = 0;
  for (const auto& s : set) sum += sample_error(forward(net, s.input), s.target);
  return sum / static_cast<double>(set.size());
}

double backprop_step(Network& net, const Eigen::VectorXd& input,
                     const Eigen::VectorXd& target,
                     const TrainingParams& params, Velocity& velocity) {
  const std::size_t layers = net.weights.size();

  // Forward pass, keeping every layer's activations.
  std::vector<Eigen::VectorXd> acts(layers + 1);
  acts[0] = input;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::VectorXd z = net.weights[l] * acts[l] + net.biases[l];
    const bool is_output = l == layers - 1;
    if (is_output && net.structure.jump_connections) z += net.jump * input;
    const ActivationKind kind =
        is_output ? net.structure.output_activation : net.structure.activation;
    acts[l + 1].resize(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
      acts[l + 1](i) = apply_activation(kind, z(i));
  }

  const double error = sample_error(acts[layers], target);
  if (!std::isfinite(error))
    throw TrainingDiverged("non-finite sample error");

  // Backward pass: deltas for every layer before any weight moves.
  std::vector<Eigen::VectorXd> deltas(layers);
  {
    const Eigen::VectorXd& out = acts[layers];
    Eigen::VectorXd d = out - target;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      d(i) *= activation_derivative(net.structure.output_activation, out(i));
    deltas[layers - 1] = std::move(d);
  }
  for (std::size_t l = layers - 1; l > 0; --l) {
    Eigen::VectorXd d = net.weights[l].transpose() * deltas[l];
    const Eigen::VectorXd& a = acts[l];
    for (Eigen::Index i = 0; i < d.size(); ++i)
      d(i) *= activation_derivative(net.structure.activation, a(i));
    deltas[l - 1] = std::move(d);
  }

  // update = lr * gradient + momentum * previous update
  const double lr = params.learning_rate, mu = params.momentum;
  for (std::size_t l = 0; l < layers; ++l) {
    velocity.weights[l] =
        lr * (deltas[l] * acts[l].transpose()) + mu * velocity.weights[l];
    velocity.biases[l] = lr * deltas[l] + mu * velocity.biases[l];
    net.weights[l] -= velocity.weights[l];
    net.biases[l] -= velocity.biases[l];
  }
  if (net.structure.jump_connections) {
    velocity.jump =
        lr * (deltas[layers - 1] * input.transpose()) + mu * velocity.jump;
    net.jump -= velocity.jump;
  }
  return error;
}

namespace {

void check_disjoint(const SampleSet& train_set, const SampleSet& test_set) {
  std::set<std::string> train_ids;
  for (const auto& s : train_set)
    if (!s.id.empty()) train_ids.insert(s.id);
  if (train_ids.empty()) return;
  for (const auto& s : test_set)
    if (!s.id.empty() && train_ids.count(s.id))
      throw Error("train and test sets share id '" + s.id + "'");
}

}  // namespace

TrainResult train(const Network& initial, const SampleSet& train_set,
                  const SampleSet& test_set, const TrainingParams& params) {
  params.validate();
  if (train_set.empty()) throw Error("empty training set");
  if (test_set.empty()) throw Error("empty test set");
  check_disjoint(train_set, test_set);

  Network net = initial;
  Velocity velocity = Velocity::zeros(net);
  Rng shuffle_rng(params.shuffle_seed);

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result;
  result.network = net;
  EarlyStopping stopper(params.patience);
  StopReason reason = StopReason::max_epochs;

  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1],
                order[shuffle_rng.uniform_int(0, static_cast<int>(i) - 1)]);

    double train_sum = 0;
    for (const std::size_t idx : order)
      train_sum += backprop_step(net, train_set[idx].input,
                                 train_set[idx].target, params, velocity);
    if (!net.all_finite())
      throw TrainingDiverged("non-finite weights after epoch " +
                             std::to_string(epoch));

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_error = train_sum / static_cast<double>(train_set.size());
    rec.test_error = mean_error(net, test_set);
    result.history.epochs.push_back(rec);

    if (stopper.observe(epoch, rec.test_error)) {
      result.network = net;  // snapshot at the new best
    }
    if (stopper.should_stop()) {
      reason = StopReason::patience;
      break;
    }
  }

  result.history.best_epoch = stopper.best_epoch();
  result.history.stopped_reason = reason;
  if (result.history.best_epoch == 0 && params.max_epochs > 0)
    result.network = net;  // unreachable in practice; keep last weights
  return result;
}

SampleSet make_samples(Task task, const std::vector<FeatureRecord>& records) {
  SampleSet set;
  set.reserve(records.size());
  for (const auto& rec : records) {
    Sample s;
    s.id = rec.id;
    s.input = pattern_to_input(rec.pattern);
    s.target = encode_target(task, rec.label);
    set.push_back(std::move(s));
  }
  return set;
}

}  // namespace grading
