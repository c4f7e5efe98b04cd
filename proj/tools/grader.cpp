// Command-line surface for the produce grading pipeline: synthesize or
// preprocess a corpus, train or structure-search a classifier, grade items
// and report metrics. Every run is deterministic given its config and seeds.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "grading/error.hpp"
#include "grading/pipeline.hpp"
#include "grading/synth.hpp"
#include "grading/util.hpp"

namespace {

using grading::Task;
using nlohmann::json;

// Values from --config form the defaults; explicitly passed flags win.
json load_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config")
      return json::parse(grading::read_file(argv[i + 1]));
  return json::object();
}

template <typename T>
void from_config(const json& cfg, const char* key, T& value) {
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

Task parse_task(const std::string& name) {
  return grading::task_from_name(name);
}

grading::SplitSpec split_from(const json& cfg, int train, int test, int val,
                              std::uint64_t seed) {
  grading::SplitSpec spec;
  spec.train_per_class = train;
  spec.test_per_class = test;
  spec.validation_per_class = val;
  spec.seed = seed;
  if (cfg.contains("split")) {
    const json& s = cfg.at("split");
    from_config(s, "train_per_class", spec.train_per_class);
    from_config(s, "test_per_class", spec.test_per_class);
    from_config(s, "validation_per_class", spec.validation_per_class);
    from_config(s, "seed", spec.seed);
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"produce grading toolkit"};
  app.require_subcommand(1);

  json cfg;
  try {
    cfg = load_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: bad config file: " << e.what() << "\n";
    return 1;
  }
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override)");

  // ---- synth ----------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  grading::SynthConfig synth_cfg;
  std::string synth_task = "tomato";
  from_config(cfg, "task", synth_task);
  from_config(cfg, "per_class", synth_cfg.per_class);
  from_config(cfg, "noise", synth_cfg.noise);
  from_config(cfg, "seed", synth_cfg.seed);
  from_config(cfg, "image_size", synth_cfg.image_size);
  std::string synth_out;
  synth->add_option("--task", synth_task, "tomato or egg");
  synth->add_option("--per-class", synth_cfg.per_class, "images per class");
  synth->add_option("--noise", synth_cfg.noise, "pixel noise sigma (0-255)");
  synth->add_option("--seed", synth_cfg.seed, "corpus seed");
  synth->add_option("--image-size", synth_cfg.image_size, "square image size");
  synth->add_option("--out", synth_out, "output directory")->required();

  // ---- preprocess ------------------------------------------------------
  auto* pre = app.add_subcommand("preprocess",
                                 "extract spectral patterns from a manifest");
  grading::PreprocessOptions pre_opts;
  std::string pre_task = "tomato";
  std::string pre_manifest, pre_out, pre_failures, pre_masks;
  from_config(cfg, "task", pre_task);
  from_config(cfg, "blur_sigma", pre_opts.edge.blur_sigma);
  from_config(cfg, "low_threshold", pre_opts.edge.low_threshold);
  from_config(cfg, "high_threshold", pre_opts.edge.high_threshold);
  from_config(cfg, "threads", pre_opts.threads);
  pre->add_option("--manifest", pre_manifest, "manifest CSV")->required();
  pre->add_option("--task", pre_task, "tomato or egg");
  pre->add_option("--out", pre_out, "feature file to write")->required();
  pre->add_option("--failures", pre_failures, "sidecar CSV for failed images");
  pre->add_option("--dump-masks", pre_masks, "directory for PGM mask dumps");
  pre->add_option("--blur-sigma", pre_opts.edge.blur_sigma, "Canny blur sigma");
  pre->add_option("--low-threshold", pre_opts.edge.low_threshold,
                  "hysteresis low threshold (fraction of max gradient)");
  pre->add_option("--high-threshold", pre_opts.edge.high_threshold,
                  "hysteresis high threshold (fraction of max gradient)");
  pre->add_option("--threads", pre_opts.threads, "worker threads (0 = auto)");

  // ---- train -----------------------------------------------------------
  auto* tr = app.add_subcommand("train", "train a classifier on features");
  grading::TrainOptions tr_opts;
  std::string tr_features, tr_model, tr_history;
  std::string tr_activation = "sigmoid", tr_output_activation = "sigmoid";
  int tr_split_train = 0, tr_split_test = 0, tr_split_val = 0;
  std::uint64_t tr_split_seed = 0;
  from_config(cfg, "hidden", tr_opts.hidden);
  from_config(cfg, "jump", tr_opts.jump);
  from_config(cfg, "activation", tr_activation);
  from_config(cfg, "output_activation", tr_output_activation);
  from_config(cfg, "learning_rate", tr_opts.params.learning_rate);
  from_config(cfg, "momentum", tr_opts.params.momentum);
  from_config(cfg, "max_epochs", tr_opts.params.max_epochs);
  from_config(cfg, "patience", tr_opts.params.patience);
  from_config(cfg, "shuffle_seed", tr_opts.params.shuffle_seed);
  from_config(cfg, "init_seed", tr_opts.init_seed);
  tr->add_option("--features", tr_features, "feature file")->required();
  tr->add_option("--model", tr_model, "model file to write")->required();
  tr->add_option("--history", tr_history, "per-epoch history CSV");
  tr->add_option("--hidden", tr_opts.hidden, "hidden layer widths");
  tr->add_flag("--jump", tr_opts.jump, "add input->output jump connections");
  tr->add_option("--activation", tr_activation, "hidden activation");
  tr->add_option("--output-activation", tr_output_activation,
                 "output activation");
  tr->add_option("--lr", tr_opts.params.learning_rate, "learning rate");
  tr->add_option("--momentum", tr_opts.params.momentum, "momentum");
  tr->add_option("--max-epochs", tr_opts.params.max_epochs, "epoch cap");
  tr->add_option("--patience", tr_opts.params.patience,
                 "early-stop window (epochs)");
  tr->add_option("--shuffle-seed", tr_opts.params.shuffle_seed, "shuffle seed");
  tr->add_option("--init-seed", tr_opts.init_seed, "weight init seed");
  tr->add_option("--split-train", tr_split_train, "train items per class")
      ->required();
  tr->add_option("--split-test", tr_split_test, "test items per class")
      ->required();
  tr->add_option("--split-val", tr_split_val, "validation items per class");
  tr->add_option("--split-seed", tr_split_seed, "split seed");

  // ---- search ----------------------------------------------------------
  auto* se = app.add_subcommand("search",
                                "structure search over network encodings");
  grading::SearchOptions se_opts;
  std::string se_features, se_model, se_molecule, se_log;
  int se_split_train = 0, se_split_test = 0, se_split_val = 0;
  std::uint64_t se_split_seed = 0;
  from_config(cfg, "capacity", se_opts.reactor.capacity);
  from_config(cfg, "reaction_rate", se_opts.reactor.reaction_rate);
  from_config(cfg, "wall_rate", se_opts.reactor.wall_rate);
  from_config(cfg, "max_cycles", se_opts.reactor.max_cycles);
  from_config(cfg, "consensus_threshold", se_opts.reactor.consensus_threshold);
  from_config(cfg, "rng_seed", se_opts.reactor.rng_seed);
  from_config(cfg, "threads", se_opts.reactor.threads);
  from_config(cfg, "min_layers", se_opts.reactor.bounds.min_layers);
  from_config(cfg, "max_layers", se_opts.reactor.bounds.max_layers);
  from_config(cfg, "min_width", se_opts.reactor.bounds.min_width);
  from_config(cfg, "max_width", se_opts.reactor.bounds.max_width);
  from_config(cfg, "min_lr", se_opts.reactor.bounds.min_learning_rate);
  from_config(cfg, "max_lr", se_opts.reactor.bounds.max_learning_rate);
  from_config(cfg, "min_momentum", se_opts.reactor.bounds.min_momentum);
  from_config(cfg, "max_momentum", se_opts.reactor.bounds.max_momentum);
  from_config(cfg, "eval_max_epochs", se_opts.eval.max_epochs);
  from_config(cfg, "eval_patience", se_opts.eval.patience);
  se->add_option("--features", se_features, "feature file")->required();
  se->add_option("--model", se_model, "best model file to write")->required();
  se->add_option("--molecule", se_molecule, "best molecule JSON");
  se->add_option("--log", se_log, "per-cycle search log CSV");
  se->add_option("--capacity", se_opts.reactor.capacity, "population cap");
  se->add_option("--reaction-rate", se_opts.reactor.reaction_rate,
                 "fraction of population reacting per cycle");
  se->add_option("--wall-rate", se_opts.reactor.wall_rate,
                 "fraction of population hitting the wall per cycle");
  se->add_option("--max-cycles", se_opts.reactor.max_cycles, "cycle cap");
  se->add_option("--consensus", se_opts.reactor.consensus_threshold,
                 "consensus stop threshold");
  se->add_option("--rng-seed", se_opts.reactor.rng_seed, "search seed");
  se->add_option("--threads", se_opts.reactor.threads,
                 "evaluation workers (0 = auto)");
  se->add_option("--min-layers", se_opts.reactor.bounds.min_layers, "");
  se->add_option("--max-layers", se_opts.reactor.bounds.max_layers, "");
  se->add_option("--min-width", se_opts.reactor.bounds.min_width, "");
  se->add_option("--max-width", se_opts.reactor.bounds.max_width, "");
  se->add_option("--min-lr", se_opts.reactor.bounds.min_learning_rate, "");
  se->add_option("--max-lr", se_opts.reactor.bounds.max_learning_rate, "");
  se->add_option("--min-momentum", se_opts.reactor.bounds.min_momentum, "");
  se->add_option("--max-momentum", se_opts.reactor.bounds.max_momentum, "");
  se->add_option("--eval-max-epochs", se_opts.eval.max_epochs,
                 "training epochs per molecule evaluation");
  se->add_option("--eval-patience", se_opts.eval.patience,
                 "early-stop window per molecule evaluation");
  se->add_option("--split-train", se_split_train, "train items per class")
      ->required();
  se->add_option("--split-test", se_split_test, "test items per class")
      ->required();
  se->add_option("--split-val", se_split_val, "validation items per class")
      ->required();
  se->add_option("--split-seed", se_split_seed, "split seed");

  // ---- grade -----------------------------------------------------------
  auto* gr = app.add_subcommand("grade", "grade images or feature records");
  grading::GradeOptions gr_opts;
  std::string gr_model, gr_features, gr_report;
  std::vector<std::string> gr_images;
  from_config(cfg, "blur_sigma", gr_opts.edge.blur_sigma);
  from_config(cfg, "low_threshold", gr_opts.edge.low_threshold);
  from_config(cfg, "high_threshold", gr_opts.edge.high_threshold);
  gr->add_option("--model", gr_model, "model file")->required();
  gr->add_option("--image", gr_images, "image file(s) to grade");
  gr->add_option("--features", gr_features,
                 "feature file to grade (bypasses imaging)");
  gr->add_option("--out", gr_report, "id,label CSV to merge results into");
  gr->add_option("--blur-sigma", gr_opts.edge.blur_sigma, "Canny blur sigma");
  gr->add_option("--low-threshold", gr_opts.edge.low_threshold, "");
  gr->add_option("--high-threshold", gr_opts.edge.high_threshold, "");

  // ---- report ----------------------------------------------------------
  auto* re = app.add_subcommand("report", "score predictions against truth");
  std::string re_pred, re_truth, re_task = "egg", re_out;
  from_config(cfg, "task", re_task);
  re->add_option("--predictions", re_pred, "id,label CSV")->required();
  re->add_option("--truth", re_truth, "truth manifest CSV")->required();
  re->add_option("--task", re_task, "tomato or egg");
  re->add_option("--out", re_out, "machine-readable metrics CSV");

  // ---- graders ---------------------------------------------------------
  auto* gl = app.add_subcommand("graders", "hourly human-grader accuracy");
  std::string gl_log, gl_task = "tomato", gl_out;
  from_config(cfg, "task", gl_task);
  gl->add_option("--log", gl_log, "grader log CSV")->required();
  gl->add_option("--task", gl_task, "tomato or egg");
  gl->add_option("--out", gl_out, "hourly curve CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      synth_cfg.task = parse_task(synth_task);
      synth_cfg.out_dir = synth_out;
      const grading::Manifest m = grading::synth_generate(synth_cfg);
      std::cout << "wrote " << m.records.size() << " images to " << synth_out
                << "\n";
    } else if (*pre) {
      pre_opts.task = parse_task(pre_task);
      pre_opts.manifest = pre_manifest;
      pre_opts.features_out = pre_out;
      pre_opts.failures_out = pre_failures;
      pre_opts.mask_dump_dir = pre_masks;
      const grading::PreprocessResult r = grading::cmd_preprocess(pre_opts);
      std::cout << r.processed << " patterns extracted, "
                << r.failures.size() << " failures\n";
      for (const auto& [id, reason] : r.failures)
        std::cerr << "  failed: " << id << ": " << reason << "\n";
    } else if (*tr) {
      tr_opts.features = tr_features;
      tr_opts.model_out = tr_model;
      tr_opts.history_out = tr_history;
      tr_opts.activation = grading::activation_from_name(tr_activation);
      tr_opts.output_activation =
          grading::activation_from_name(tr_output_activation);
      tr_opts.split = split_from(cfg, tr_split_train, tr_split_test,
                                 tr_split_val, tr_split_seed);
      const grading::TrainSummary s = grading::cmd_train(tr_opts);
      std::cout << "trained " << grading::task_name(s.task) << " model: best epoch "
                << s.best_epoch << "/" << s.epochs_run << ", test error "
                << grading::format_double(s.best_test_error);
      if (!std::isnan(s.validation_accuracy))
        std::cout << ", validation accuracy "
                  << grading::format_percent(s.validation_accuracy);
      std::cout << "\n";
    } else if (*se) {
      se_opts.features = se_features;
      se_opts.model_out = se_model;
      se_opts.molecule_out = se_molecule;
      se_opts.log_out = se_log;
      se_opts.split = split_from(cfg, se_split_train, se_split_test,
                                 se_split_val, se_split_seed);
      const grading::SearchSummary s = grading::cmd_search(se_opts);
      std::cout << "search finished after " << s.cycles_run << " cycles ("
                << (s.stopped_by_consensus ? "consensus" : "cycle cap")
                << "), best weight "
                << grading::format_double(*s.best.molecular_weight)
                << ", structure " << s.best.structure_key() << "\n";
    } else if (*gr) {
      gr_opts.model = gr_model;
      gr_opts.features = gr_features;
      gr_opts.report_out = gr_report;
      for (const auto& p : gr_images) gr_opts.images.emplace_back(p);
      if (gr_images.empty() && gr_features.empty())
        throw grading::Error("grade needs --image or --features");
      const auto graded = grading::cmd_grade(gr_opts);
      for (const auto& [id, label] : graded)
        std::cout << id << "," << label << "\n";
    } else if (*re) {
      grading::ReportOptions opts;
      opts.predictions = re_pred;
      opts.truth = re_truth;
      opts.task = parse_task(re_task);
      opts.out = re_out;
      const grading::ReportSummary s = grading::cmd_report(opts);
      std::cout << s.table;
    } else if (*gl) {
      grading::GradersOptions opts;
      opts.log = gl_log;
      opts.task = parse_task(gl_task);
      opts.out = gl_out;
      const grading::GradersSummary s = grading::cmd_graders(opts);
      std::cout << s.table;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
