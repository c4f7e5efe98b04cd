#include "grading/pipeline.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "grading/error.hpp"
#include "grading/feature_io.hpp"
#include "grading/foreground.hpp"
#include "grading/image.hpp"
#include "grading/spectral.hpp"
#include "grading/util.hpp"

namespace grading {

namespace {

using nlohmann::json;

std::string echo_edge(const EdgeParams& edge) {
  json j{{"blur_sigma", edge.blur_sigma},
         {"low_threshold", edge.low_threshold},
         {"high_threshold", edge.high_threshold}};
  return j.dump();
}

json split_json(const SplitSpec& split) {
  return json{{"train_per_class", split.train_per_class},
              {"test_per_class", split.test_per_class},
              {"validation_per_class", split.validation_per_class},
              {"seed", split.seed}};
}

// Splits feature records with the same machinery as manifests, keyed on ids.
struct FeatureSplit {
  std::vector<FeatureRecord> train;
  std::vector<FeatureRecord> test;
  std::vector<FeatureRecord> validation;
};

FeatureSplit split_features(const FeatureFile& file, const SplitSpec& spec) {
  Manifest view;
  view.task = file.task;
  std::map<std::string, const FeatureRecord*> by_id;
  for (const auto& rec : file.records) {
    ManifestRecord mr;
    mr.id = rec.id;
    mr.label = rec.label;
    view.records.push_back(std::move(mr));
    by_id[rec.id] = &rec;
  }
  const SplitResult split = stratified_split(view, spec);

  FeatureSplit out;
  const auto collect = [&](const Manifest& part,
                           std::vector<FeatureRecord>& dst) {
    dst.reserve(part.records.size());
    for (const auto& mr : part.records) dst.push_back(*by_id.at(mr.id));
  };
  collect(split.train, out.train);
  collect(split.test, out.test);
  collect(split.validation, out.validation);
  return out;
}

double classification_accuracy(const Network& net, Task task,
                               const SampleSet& set) {
  if (set.empty()) return std::numeric_limits<double>::quiet_NaN();
  long correct = 0;
  for (const auto& s : set) {
    const int predicted = classify_output(task, forward(net, s.input));
    if (predicted == classify_output(task, s.target)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(set.size());
}

std::string history_csv(const TrainingHistory& history,
                        const std::string& config_echo) {
  std::ostringstream out;
  if (!config_echo.empty()) out << "# config=" << config_echo << "\n";
  out << "epoch,train_error,test_error\n";
  for (const auto& rec : history.epochs)
    out << rec.epoch << "," << format_double(rec.train_error) << ","
        << format_double(rec.test_error) << "\n";
  return out.str();
}

// id,label rows; used by grade output and report input.
std::map<std::string, std::string> read_label_csv(
    const std::filesystem::path& path) {
  std::map<std::string, std::string> labels;
  std::istringstream in(read_file(path));
  std::string line;
  int line_no = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_done) {
      header_done = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 2)
      throw ParseError(path.string(), line_no, "expected id,label");
    if (!labels.emplace(f[0], f[1]).second)
      throw ParseError(path.string(), line_no, "duplicate id '" + f[0] + "'");
  }
  return labels;
}

}  // namespace

PreprocessResult cmd_preprocess(const PreprocessOptions& options) {
  options.edge.validate();
  const Manifest manifest = load_manifest(options.manifest, options.task);
  if (!options.mask_dump_dir.empty())
    std::filesystem::create_directories(options.mask_dump_dir);

  struct Slot {
    bool ok = false;
    FeatureRecord record;
    std::string reason;
  };
  std::vector<Slot> slots(manifest.records.size());

  parallel_for(manifest.records.size(), options.threads, [&](std::size_t i) {
    const ManifestRecord& rec = manifest.records[i];
    Slot& slot = slots[i];
    try {
      const RgbImage img = load_image(rec.path);
      const EdgeMap edges = detect_edges(to_grayscale(img), options.edge);
      const ForegroundMask mask = extract_foreground(img, edges);
      slot.record.id = rec.id;
      slot.record.label = rec.label;
      slot.record.pattern = extract_spectral_pattern(img, mask);
      slot.ok = true;
      if (!options.mask_dump_dir.empty()) {
        std::vector<std::uint8_t> bytes(mask.member.size());
        for (std::size_t p = 0; p < bytes.size(); ++p)
          bytes[p] = mask.member[p] ? 255 : 0;
        save_pgm(options.mask_dump_dir / (rec.id + ".pgm"), mask.width,
                 mask.height, bytes);
      }
    } catch (const Error& e) {
      slot.reason = e.what();
    }
  });

  PreprocessResult result;
  std::vector<FeatureRecord> records;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].ok) {
      records.push_back(std::move(slots[i].record));
      ++result.processed;
    } else {
      result.failures.emplace_back(manifest.records[i].id, slots[i].reason);
    }
  }

  write_feature_file(options.features_out, options.task, records,
                     echo_edge(options.edge));

  if (!options.failures_out.empty()) {
    std::ostringstream out;
    out << "id,reason\n";
    for (const auto& [id, reason] : result.failures) {
      std::string clean = reason;
      for (char& c : clean)
        if (c == ',' || c == '\n') c = ';';
      out << id << "," << clean << "\n";
    }
    write_file_atomic(options.failures_out, out.str());
  }
  return result;
}

TrainSummary cmd_train(const TrainOptions& options) {
  const FeatureFile file = read_feature_file(options.features);
  const Task task = file.task;
  const FeatureSplit split = split_features(file, options.split);

  NetworkStructure structure;
  structure.input_size = SpectralPattern::kSize;
  structure.hidden_layers = options.hidden;
  structure.output_size = task == Task::egg ? 1 : class_count(task);
  structure.jump_connections = options.jump;
  structure.activation = options.activation;
  structure.output_activation = options.output_activation;
  structure.validate();

  const SampleSet train_set = make_samples(task, split.train);
  const SampleSet test_set = make_samples(task, split.test);
  const SampleSet val_set = make_samples(task, split.validation);

  const Network initial = init_network(structure, options.init_seed);
  const TrainResult fit = train(initial, train_set, test_set, options.params);

  json echo{{"task", task_name(task)},
            {"hidden", options.hidden},
            {"jump", options.jump},
            {"activation", activation_name(options.activation)},
            {"output_activation", activation_name(options.output_activation)},
            {"learning_rate", options.params.learning_rate},
            {"momentum", options.params.momentum},
            {"max_epochs", options.params.max_epochs},
            {"patience", options.params.patience},
            {"shuffle_seed", options.params.shuffle_seed},
            {"init_seed", options.init_seed},
            {"split", split_json(options.split)}};

  save_model(options.model_out, fit.network, task, echo.dump());
  if (!options.history_out.empty())
    write_file_atomic(options.history_out,
                      history_csv(fit.history, echo.dump()));

  TrainSummary summary;
  summary.task = task;
  summary.best_epoch = fit.history.best_epoch;
  summary.stopped_reason = fit.history.stopped_reason;
  summary.epochs_run = static_cast<int>(fit.history.epochs.size());
  summary.best_test_error = mean_error(fit.network, test_set);
  summary.validation_accuracy =
      classification_accuracy(fit.network, task, val_set);
  return summary;
}

SearchSummary cmd_search(const SearchOptions& options) {
  const FeatureFile file = read_feature_file(options.features);
  const FeatureSplit split = split_features(file, options.split);

  EvalData data;
  data.task = file.task;
  data.input_size = SpectralPattern::kSize;
  data.output_size = file.task == Task::egg ? 1 : class_count(file.task);
  data.train = make_samples(file.task, split.train);
  data.test = make_samples(file.task, split.test);
  data.validation = make_samples(file.task, split.validation);

  const SearchResult result =
      run_search(options.reactor, make_ann_fitness(data, options.eval));

  json echo{{"task", task_name(file.task)},
            {"capacity", options.reactor.capacity},
            {"reaction_rate", options.reactor.reaction_rate},
            {"wall_rate", options.reactor.wall_rate},
            {"max_cycles", options.reactor.max_cycles},
            {"consensus_threshold", options.reactor.consensus_threshold},
            {"rng_seed", options.reactor.rng_seed},
            {"eval_max_epochs", options.eval.max_epochs},
            {"eval_patience", options.eval.patience},
            {"bounds",
             {{"layers", {options.reactor.bounds.min_layers,
                          options.reactor.bounds.max_layers}},
              {"width", {options.reactor.bounds.min_width,
                         options.reactor.bounds.max_width}},
              {"learning_rate", {options.reactor.bounds.min_learning_rate,
                                 options.reactor.bounds.max_learning_rate}},
              {"momentum", {options.reactor.bounds.min_momentum,
                            options.reactor.bounds.max_momentum}}}},
            {"split", split_json(options.split)}};

  // Replay the winning evaluation to materialize its trained network.
  Network best_net;
  evaluate_molecule(result.best, data, options.eval, result.best_eval_seed,
                    &best_net);
  save_model(options.model_out, best_net, file.task, echo.dump());

  if (!options.log_out.empty()) {
    std::ostringstream out;
    out << "# config=" << echo.dump() << "\n";
    out << "cycle,best,mean,consensus\n";
    for (const auto& stat : result.log)
      out << stat.cycle << "," << format_double(stat.best_weight) << ","
          << format_double(stat.mean_weight) << ","
          << format_double(stat.consensus) << "\n";
    write_file_atomic(options.log_out, out.str());
  }

  if (!options.molecule_out.empty()) {
    json mol{{"layer_count", result.best.layer_count},
             {"widths", result.best.active_widths()},
             {"jump", result.best.jump},
             {"activation", activation_name(result.best.activation)},
             {"learning_rate", result.best.learning_rate},
             {"momentum", result.best.momentum},
             {"molecular_weight", *result.best.molecular_weight},
             {"cycles_run", result.cycles_run},
             {"stopped_by_consensus", result.stopped_by_consensus},
             {"config", json::parse(echo.dump())}};
    // embed the trained model so the molecule document is self-contained
    mol["model"] = json::parse(read_file(options.model_out));
    write_file_atomic(options.molecule_out, mol.dump(2) + "\n");
  }

  SearchSummary summary;
  summary.best = result.best;
  summary.cycles_run = result.cycles_run;
  summary.stopped_by_consensus = result.stopped_by_consensus;
  return summary;
}

std::vector<std::pair<std::string, std::string>> cmd_grade(
    const GradeOptions& options) {
  const LoadedModel model = load_model(options.model);

  std::vector<std::pair<std::string, std::string>> graded;
  if (!options.images.empty()) {
    options.edge.validate();
    for (const auto& path : options.images) {
      const RgbImage img = load_image(path);
      const EdgeMap edges = detect_edges(to_grayscale(img), options.edge);
      const ForegroundMask mask = extract_foreground(img, edges);
      const SpectralPattern pattern = extract_spectral_pattern(img, mask);
      const int label = classify(model.network, pattern, model.task);
      graded.emplace_back(path.stem().string(),
                          label_name(model.task, label));
    }
  } else {
    const FeatureFile file = read_feature_file(options.features);
    if (file.task != model.task)
      throw Error("feature file task " + task_name(file.task) +
                  " does not match model task " + task_name(model.task));
    for (const auto& rec : file.records) {
      const int label = classify(model.network, rec.pattern, model.task);
      graded.emplace_back(rec.id, label_name(model.task, label));
    }
  }

  if (!options.report_out.empty()) {
    // merge with any existing report, then rewrite atomically
    std::map<std::string, std::string> merged;
    if (std::filesystem::exists(options.report_out))
      merged = read_label_csv(options.report_out);
    for (const auto& [id, label] : graded) merged[id] = label;
    std::ostringstream out;
    out << "id,label\n";
    for (const auto& [id, label] : merged) out << id << "," << label << "\n";
    write_file_atomic(options.report_out, out.str());
  }
  return graded;
}

ReportSummary cmd_report(const ReportOptions& options) {
  const std::map<std::string, std::string> predictions =
      read_label_csv(options.predictions);
  const Manifest truth = load_manifest(options.truth, options.task);

  std::vector<int> pred_labels, true_labels;
  for (const auto& rec : truth.records) {
    const auto it = predictions.find(rec.id);
    if (it == predictions.end()) continue;  // unpredicted items are skipped
    pred_labels.push_back(label_from_name(options.task, it->second));
    true_labels.push_back(rec.label);
  }
  if (pred_labels.empty())
    throw Error("no ids shared between predictions and truth");

  ReportSummary summary;
  summary.task = options.task;
  summary.samples = static_cast<long>(pred_labels.size());

  std::ostringstream table;
  std::ostringstream machine;
  machine << "metric,value,display\n";
  const auto emit = [&](const std::string& name,
                        const std::optional<double>& value) {
    table << "  " << name << ": " << format_percent(value);
    if (value) table << " (" << format_double(*value) << ")";
    table << "\n";
    machine << name << ","
            << (value ? format_double(*value) : std::string("undefined")) << ","
            << format_percent(value) << "\n";
  };

  if (options.task == Task::egg) {
    summary.egg_confusion = confusion_egg(pred_labels, true_labels);
    summary.egg_metrics = metrics(summary.egg_confusion);
    const BinaryConfusion& cm = summary.egg_confusion;
    table << "egg grading over " << summary.samples << " samples\n";
    table << "  tp=" << cm.tp << " fp=" << cm.fp << " fn=" << cm.fn
          << " tn=" << cm.tn << "\n";
    emit("accuracy", summary.egg_metrics.accuracy);
    emit("sensitivity", summary.egg_metrics.sensitivity);
    emit("specificity", summary.egg_metrics.specificity);
    emit("false_positive_rate", summary.egg_metrics.false_positive_rate);
    emit("false_negative_rate", summary.egg_metrics.false_negative_rate);
    emit("positive_predictive_value",
         summary.egg_metrics.positive_predictive_value);
    emit("negative_predictive_value",
         summary.egg_metrics.negative_predictive_value);
  } else {
    summary.stage_confusion = confusion_tomato(pred_labels, true_labels);
    summary.ordinal = ordinal_errors(summary.stage_confusion);
    table << "tomato staging over " << summary.samples << " samples\n";
    emit("accuracy", summary.ordinal.accuracy());
    table << "  ordinal distances:";
    machine << "max_ordinal_distance," << summary.ordinal.max_distance() << ","
            << summary.ordinal.max_distance() << "\n";
    for (int d = 0; d < kTomatoClasses; ++d) {
      table << " " << d << ":" << summary.ordinal.by_distance[d];
      machine << "distance_" << d << "," << summary.ordinal.by_distance[d]
              << "," << summary.ordinal.by_distance[d] << "\n";
    }
    table << "\n";
  }

  summary.table = table.str();
  if (!options.out.empty()) write_file_atomic(options.out, machine.str());
  return summary;
}

GradersSummary cmd_graders(const GradersOptions& options) {
  const GraderLog log = load_grader_log(options.log, options.task);

  GradersSummary summary;
  summary.curve = hourly_accuracy(log);

  std::ostringstream table;
  std::ostringstream machine;
  machine << "hour,accuracy\n";
  table << "hourly grading accuracy (" << summary.curve.grader_count
        << " graders)\n";
  for (int h = 0; h < kShiftHours; ++h) {
    table << "  hour " << (h + 1) << ": ";
    if (std::isnan(summary.curve.per_hour[h])) {
      table << "-\n";
      machine << (h + 1) << ",\n";
    } else {
      table << format_percent(summary.curve.per_hour[h]) << " ("
            << format_double(summary.curve.per_hour[h]) << ")\n";
      machine << (h + 1) << "," << format_double(summary.curve.per_hour[h])
              << "\n";
    }
  }
  table << "  daily average: " << format_percent(summary.curve.daily_average)
        << " (" << format_double(summary.curve.daily_average) << ")\n";
  machine << "daily_average," << format_double(summary.curve.daily_average)
          << "\n";
  summary.table = table.str();
  if (!options.out.empty()) write_file_atomic(options.out, machine.str());
  return summary;
}

}  // namespace grading
