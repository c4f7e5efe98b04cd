#ifndef GRADING_TRAIN_HPP_
#define GRADING_TRAIN_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "grading/network.hpp"

namespace grading {

struct TrainingParams {
  double learning_rate = 0.1;
  double momentum = 0.0;    // in [0, 1)
  int max_epochs = 1000;
  int patience = 100;       // early-stop window, in epochs
  std::uint64_t shuffle_seed = 0;

  void validate() const;
};

struct Sample {
  std::string id;  // empty when unknown
  Eigen::VectorXd input;
  Eigen::VectorXd target;
};

using SampleSet = std::vector<Sample>;

// Accumulated previous update, one block per weight block.
struct Velocity {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  Eigen::MatrixXd jump;

  static Velocity zeros(const Network& net);
};

// One online update: descends the gradient of 0.5*|output - target|^2 with
// update = lr * gradient + momentum * previous update. Returns the sample
// error at the pre-update weights. Throws TrainingDiverged on non-finite
// values.
double backprop_step(Network& net, const Eigen::VectorXd& input,
                     const Eigen::VectorXd& target,
                     const TrainingParams& params, Velocity& velocity);

double sample_error(const Eigen::VectorXd& output,
                    const Eigen::VectorXd& target);
// Mean one-half squared error over a set (the "network error" used for
// early stopping).
double mean_error(const Network& net, const SampleSet& set);

// Improvement bookkeeping for test-set early stopping. Epochs are 1-based;
// an improvement is a strictly lower error than the best seen so far.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  // Returns true when this epoch improved on the best error.
  bool observe(int epoch, double error) {
    if (error < best_error_) {
      best_error_ = error;
      best_epoch_ = epoch;
      stall_ = 0;
      return true;
    }
    ++stall_;
    return false;
  }

  bool should_stop() const { return stall_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_error() const { return best_error_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  int stall_ = 0;
  double best_error_ = std::numeric_limits<double>::infinity();
};

enum class StopReason { patience, max_epochs };

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_error = 0;
  double test_error = 0;
};

struct TrainingHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  StopReason stopped_reason = StopReason::max_epochs;
};

struct TrainResult {
  Network network;  // weights snapshot from the best epoch
  TrainingHistory history;
};

// Online backprop with per-epoch shuffling (deterministic in shuffle_seed).
// After each epoch the mean test error is recorded; training halts when it
// has not improved for `patience` consecutive epochs or at max_epochs, and
// the returned network is the snapshot taken at the best epoch.
// When both sets carry ids, they must be disjoint.
TrainResult train(const Network& initial, const SampleSet& train_set,
                  const SampleSet& test_set, const TrainingParams& params);

// Builds training samples from feature records for a task.
SampleSet make_samples(Task task, const std::vector<struct FeatureRecord>& records);

}  // namespace grading

#endif  // GRADING_TRAIN_HPP_
