#include "grading/metrics.hpp"

#include <cmath>

#include "grading/error.hpp"

namespace grading {

namespace {

void check_lengths(std::size_t preds, std::size_t truth) {
  if (preds != truth)
    throw Error("prediction count " + std::to_string(preds) +
                " does not match truth count " + std::to_string(truth));
  if (preds == 0) throw Error("no samples to tally");
}

std::optional<double> ratio(long num, long den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

long StageConfusion::total() const {
  long sum = 0;
  for (const auto& row : counts)
    for (const long c : row) sum += c;
  return sum;
}

long StageConfusion::diagonal() const {
  long sum = 0;
  for (int i = 0; i < kTomatoClasses; ++i) sum += counts[i][i];
  return sum;
}

BinaryConfusion confusion_egg(const std::vector<int>& predicted,
                              const std::vector<int>& truth) {
  check_lengths(predicted.size(), truth.size());
  constexpr int kAccept = static_cast<int>(EggGrade::accept);
  BinaryConfusion cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pred_pos = predicted[i] == kAccept;
    const bool true_pos = truth[i] == kAccept;
    if (pred_pos && true_pos)
      ++cm.tp;
    else if (pred_pos && !true_pos)
      ++cm.fp;
    else if (!pred_pos && true_pos)
      ++cm.fn;
    else
      ++cm.tn;
  }
  return cm;
}

StageConfusion confusion_tomato(const std::vector<int>& predicted,
                                const std::vector<int>& truth) {
  check_lengths(predicted.size(), truth.size());
  StageConfusion cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= kTomatoClasses || predicted[i] < 0 ||
        predicted[i] >= kTomatoClasses)
      throw Error("stage label out of range at sample " + std::to_string(i));
    ++cm.counts[truth[i]][predicted[i]];
  }
  return cm;
}

MetricsReport metrics(const BinaryConfusion& cm) {
  MetricsReport r;
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  r.sensitivity = ratio(cm.tp, cm.tp + cm.fn);
  r.specificity = ratio(cm.tn, cm.tn + cm.fp);
  r.false_positive_rate = ratio(cm.fp, cm.fp + cm.tn);
  r.false_negative_rate = ratio(cm.fn, cm.tp + cm.fn);
  r.positive_predictive_value = ratio(cm.tp, cm.tp + cm.fp);
  r.negative_predictive_value = ratio(cm.tn, cm.tn + cm.fn);
  return r;
}

OrdinalErrors ordinal_errors(const StageConfusion& cm) {
  OrdinalErrors oe;
  for (int i = 0; i < kTomatoClasses; ++i)
    for (int j = 0; j < kTomatoClasses; ++j) {
      oe.by_distance[std::abs(i - j)] += cm.counts[i][j];
      oe.total += cm.counts[i][j];
    }
  return oe;
}

double OrdinalErrors::accuracy() const {
  return total == 0 ? 0.0
                    : static_cast<double>(by_distance[0]) /
                          static_cast<double>(total);
}

int OrdinalErrors::max_distance() const {
  for (int d = kTomatoClasses - 1; d >= 0; --d)
    if (by_distance[d] > 0) return d;
  return 0;
}

RevenueGain revenue_gain(double daily_volume, double accuracy_delta,
                         double unit_price) {
  if (daily_volume < 0 || accuracy_delta < 0 || unit_price < 0)
    throw Error("revenue inputs must be non-negative");
  RevenueGain gain;
  gain.extra_items_per_day = std::lround(daily_volume * accuracy_delta);
  gain.extra_revenue_per_day =
      static_cast<double>(gain.extra_items_per_day) * unit_price;
  return gain;
}

std::string format_percent(double fraction) {
  const long pct = static_cast<long>(std::floor(fraction * 100.0 + 0.5));
  return std::to_string(pct) + "%";
}

std::string format_percent(const std::optional<double>& fraction) {
  return fraction ? format_percent(*fraction) : "undefined";
}

}  // namespace grading
