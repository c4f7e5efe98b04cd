#ifndef GRADING_PIPELINE_HPP_
#define GRADING_PIPELINE_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "grading/dataset.hpp"
#include "grading/edge.hpp"
#include "grading/grader_log.hpp"
#include "grading/metrics.hpp"
#include "grading/model_io.hpp"
#include "grading/reactor.hpp"
#include "grading/train.hpp"

namespace grading {

// manifest -> feature file. Per-image failures (e.g. foreground extraction
// finding nothing) go to the sidecar report instead of aborting the batch.
struct PreprocessOptions {
  std::filesystem::path manifest;
  Task task = Task::tomato;
  std::filesystem::path features_out;
  std::filesystem::path failures_out;   // optional sidecar CSV
  std::filesystem::path mask_dump_dir;  // optional PGM debug dumps
  EdgeParams edge;
  int threads = 0;
};

struct PreprocessResult {
  int processed = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // id, reason
};

PreprocessResult cmd_preprocess(const PreprocessOptions& options);

// feature file + split spec + structure -> model file (best-epoch weights)
// and optional per-epoch history file.
struct TrainOptions {
  std::filesystem::path features;
  std::vector<int> hidden = {64};
  bool jump = false;
  ActivationKind activation = ActivationKind::sigmoid;
  ActivationKind output_activation = ActivationKind::sigmoid;
  TrainingParams params;
  std::uint64_t init_seed = 1;
  SplitSpec split;
  std::filesystem::path model_out;
  std::filesystem::path history_out;  // optional
};

struct TrainSummary {
  Task task = Task::tomato;
  int best_epoch = 0;
  StopReason stopped_reason = StopReason::max_epochs;
  double best_test_error = 0;
  double validation_accuracy = 0;  // NaN when the validation split is empty
  int epochs_run = 0;
};

TrainSummary cmd_train(const TrainOptions& options);

// feature file + reactor settings -> best molecule (JSON with the trained
// model embedded), standalone model file and per-cycle log.
struct SearchOptions {
  std::filesystem::path features;
  ReactorConfig reactor;
  EvalSettings eval;
  SplitSpec split;
  std::filesystem::path model_out;
  std::filesystem::path molecule_out;  // optional
  std::filesystem::path log_out;       // optional
};

struct SearchSummary {
  Molecule best;
  int cycles_run = 0;
  bool stopped_by_consensus = false;
};

SearchSummary cmd_search(const SearchOptions& options);

// model + images (or a feature file) -> labels. Labels are also merged into
// `report_out` (id,label CSV) when given.
struct GradeOptions {
  std::filesystem::path model;
  std::vector<std::filesystem::path> images;
  std::filesystem::path features;  // used when images is empty
  EdgeParams edge;
  std::filesystem::path report_out;  // optional
};

std::vector<std::pair<std::string, std::string>> cmd_grade(
    const GradeOptions& options);

// predictions (id,label CSV) vs truth (manifest CSV) -> metric battery.
struct ReportOptions {
  std::filesystem::path predictions;
  std::filesystem::path truth;
  Task task = Task::egg;
  std::filesystem::path out;  // optional machine-readable CSV
};

struct ReportSummary {
  Task task = Task::egg;
  long samples = 0;
  // egg task
  BinaryConfusion egg_confusion;
  MetricsReport egg_metrics;
  // tomato task
  StageConfusion stage_confusion;
  OrdinalErrors ordinal;
  std::string table;  // human-readable rendering
};

ReportSummary cmd_report(const ReportOptions& options);

// grader log CSV -> hourly accuracy curve.
struct GradersOptions {
  std::filesystem::path log;
  Task task = Task::tomato;
  std::filesystem::path out;  // optional CSV
};

struct GradersSummary {
  HourlyCurve curve;
  std::string table;
};

GradersSummary cmd_graders(const GradersOptions& options);

}  // namespace grading

#endif  // GRADING_PIPELINE_HPP_
