#ifndef GRADING_METRICS_HPP_
#define GRADING_METRICS_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "grading/dataset.hpp"

namespace grading {

// Binary tallies for egg grading; Accept is the positive class, so a false
// positive is a reject graded as accepted.
struct BinaryConfusion {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  long total() const { return tp + fp + fn + tn; }
};

// 6x6 tallies for tomato staging: rows = true stage, columns = predicted.
struct StageConfusion {
  std::array<std::array<long, kTomatoClasses>, kTomatoClasses> counts{};

  long total() const;
  long diagonal() const;
};

BinaryConfusion confusion_egg(const std::vector<int>& predicted,
                              const std::vector<int>& truth);
StageConfusion confusion_tomato(const std::vector<int>& predicted,
                                const std::vector<int>& truth);

// Metrics with a zero denominator are reported as absent, never coerced.
struct MetricsReport {
  std::optional<double> accuracy;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> false_positive_rate;
  std::optional<double> false_negative_rate;
  std::optional<double> positive_predictive_value;
  std::optional<double> negative_predictive_value;
};

MetricsReport metrics(const BinaryConfusion& cm);

// Distribution of |true stage - predicted stage|.
struct OrdinalErrors {
  std::array<long, kTomatoClasses> by_distance{};
  long total = 0;

  double accuracy() const;   // distance-0 mass / total
  int max_distance() const;  // largest distance with nonzero count
};

OrdinalErrors ordinal_errors(const StageConfusion& cm);

struct RevenueGain {
  long extra_items_per_day = 0;
  double extra_revenue_per_day = 0;
};

// items = volume * accuracy_delta rounded to nearest; revenue = items * price.
RevenueGain revenue_gain(double daily_volume, double accuracy_delta,
                         double unit_price);

// Display rounding: round-half-up to whole percent ("86%"). Raw fractions
// stay available on the report structs.
std::string format_percent(double fraction);
std::string format_percent(const std::optional<double>& fraction);

}  // namespace grading

#endif  // GRADING_METRICS_HPP_
