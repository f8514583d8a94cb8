#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "fuzzeeg/anfis.hpp"
#include "fuzzeeg/anfis_cost.hpp"
#include "fuzzeeg/autoenc.hpp"
#include "fuzzeeg/csv.hpp"
#include "fuzzeeg/error.hpp"
#include "fuzzeeg/evaluation.hpp"
#include "fuzzeeg/pipeline.hpp"
#include "fuzzeeg/tqwt.hpp"

namespace fuzzeeg::cli {
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  int threads = -1;
  std::string input;
  std::string features;
  std::string out;
  std::string case_name;
  int repeats = -1;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_echo(const fs::path& dir, const std::string& command, const RunConfig& cfg) {
  std::ofstream o(dir / (command + ".config.ini"));
  if (!o) throw ConfigError("cannot write config echo in " + dir.string());
  o << "; effective configuration of '" << command << "'\n" << cfg.to_ini();
}

std::vector<fs::path> sorted_files(const fs::path& root, const std::vector<std::string>& extensions) {
  if (root.empty()) throw ConfigError("no data root: set data.root or " + std::string(kDataRootEnv));
  if (!fs::is_directory(root)) throw ConfigError("data root is not a directory: " + root.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

Recording load_one(const fs::path& path, const RunConfig& cfg) {
  if (!fs::exists(path)) throw ConfigError("input file not found: " + path.string());
  if (cfg.format == DataFormat::Bonn) return load_bonn_segment(path);
  return load_csv_multichannel(path, cfg.fs, cfg.channel, path.parent_path().filename().string());
}

Eigen::VectorXd as_targets(const std::vector<int>& labels) {
  Eigen::VectorXd t(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) t(static_cast<Eigen::Index>(i)) = labels[i];
  return t;
}

fs::path features_path(const Options& o, const RunConfig& cfg) {
  return o.features.empty() ? cfg.output_dir / "features.csv" : fs::path(o.features);
}

int cmd_decompose(const Options& o, const RunConfig& cfg, std::ostream& out) {
  std::vector<Recording> recs;
  if (!o.input.empty()) recs.push_back(load_one(o.input, cfg));
  else recs = load_recordings(cfg);
  const fs::path dir = cfg.output_dir / "decompose";
  ensure_dir(dir);
  std::size_t written = 0;
  for (const Recording& rec : recs) {
    for (const SignalFrame& frame : window(rec, cfg.window_seconds)) {
      const SubBandSet sb = decompose(frame.samples, cfg.tqwt);
      write_subbands_csv(dir / (rec.source_id + "_frame" + std::to_string(frame.index) + ".csv"), sb);
      ++written;
    }
  }
  write_echo(dir, "decompose", cfg);
  out << "wrote " << written << " sub-band files to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_features(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const CaseSpec spec = cfg.resolve_case();
  const std::vector<Recording> recs = load_recordings(cfg);
  const std::vector<SignalFrame> frames = assemble_case(pool_frames(recs, cfg.window_seconds), spec);
  FeatureMatrix fm = extract_features(frames, cfg.tqwt, cfg.entropy, cfg.threads);
  fm.metadata["case"] = spec.name;
  fm.metadata["window_seconds"] = format_double(cfg.window_seconds);
  ensure_dir(cfg.output_dir);
  const fs::path path = cfg.output_dir / "features.csv";
  write_feature_csv(path, fm);
  write_echo(cfg.output_dir, "features", cfg);
  if (!fm.skipped_frames.empty()) err << "warning: skipped " << fm.skipped_frames.size() << " frames\n";
  out << "wrote " << fm.rows() << " x " << fm.cols() << " features (" << fm.degenerate_count()
      << " degenerate cells) to " << path.string() << '\n';
  return kExitOk;
}

int cmd_reduce(const Options& o, const RunConfig& cfg, std::ostream& out) {
  const FeatureMatrix fm = read_feature_csv(features_path(o, cfg));
  const FeatureMatrix norm = normalize(fm);
  const AeConfig& ae_cfg = cfg.experiment.autoencoder;
  if (static_cast<std::size_t>(ae_cfg.layer_sizes.front()) != norm.cols())
    throw ConfigError("autoencoder input size " + std::to_string(ae_cfg.layer_sizes.front()) + " does not match " +
                      std::to_string(norm.cols()) + " feature columns");
  AeModel ae = init_autoencoder(ae_cfg, cfg.experiment.seed);
  train_autoencoder(ae, norm.values, cfg.experiment.seed + 1);
  FeatureMatrix reduced;
  reduced.values = encode(ae, norm.values);
  reduced.labels = norm.labels;
  reduced.frame_ids = norm.frame_ids;
  for (Eigen::Index c = 0; c < reduced.values.cols(); ++c) reduced.column_names.push_back("ae" + std::to_string(c));
  reduced.metadata = fm.metadata;
  reduced.metadata["autoencoder.final_mse"] = ae.history.empty() ? "nan" : format_double(ae.history.back());
  ensure_dir(cfg.output_dir);
  write_feature_csv(cfg.output_dir / "reduced.csv", reduced);
  save_autoencoder(cfg.output_dir / "autoencoder.txt", ae);
  write_loss_csv(cfg.output_dir / "autoencoder_loss.csv", ae);
  write_echo(cfg.output_dir, "reduce", cfg);
  out << "reduced " << norm.rows() << " rows to " << reduced.cols() << " features";
  if (!ae.history.empty()) out << " (final mse " << format_double(ae.history.back()) << ")";
  out << '\n';
  return kExitOk;
}

int cmd_train(const Options& o, const RunConfig& cfg, std::ostream& out) {
  const FeatureMatrix fm = read_feature_csv(features_path(o, cfg));
  const ExperimentConfig& ex = cfg.experiment;
  const NormStats stats = fit_normalization(fm.values);
  Eigen::MatrixXd x = apply_normalization(stats, fm.values);
  ensure_dir(cfg.output_dir);
  {
    CsvTable t;
    t.header = {"column", "min", "max"};
    for (std::size_t c = 0; c < fm.cols(); ++c)
      t.rows.push_back({fm.column_names[c], format_double(stats.min(static_cast<Eigen::Index>(c))),
                        format_double(stats.max(static_cast<Eigen::Index>(c)))});
    write_csv(cfg.output_dir / "norm_stats.csv", t);
  }
  if (ex.use_autoencoder) {
    if (ex.autoencoder.layer_sizes.front() != x.cols())
      throw ConfigError("autoencoder input size does not match the feature columns");
    AeModel ae = init_autoencoder(ex.autoencoder, ex.seed);
    train_autoencoder(ae, x, ex.seed + 1);
    save_autoencoder(cfg.output_dir / "autoencoder.txt", ae);
    x = encode(ae, x);
    x = apply_normalization(fit_normalization(x), x);
  }
  const ClassifierSpec& spec = ex.classifier;
  std::vector<int> labels = fm.labels;
  std::vector<int> label_set = labels;
  std::sort(label_set.begin(), label_set.end());
  label_set.erase(std::unique(label_set.begin(), label_set.end()), label_set.end());

  std::vector<int> predicted;
  if (spec.kind == ClassifierKind::Knn) {
    FeatureMatrix ref;
    ref.values = x;
    ref.labels = labels;
    for (Eigen::Index c = 0; c < x.cols(); ++c) ref.column_names.push_back("x" + std::to_string(c));
    write_feature_csv(cfg.output_dir / "knn_reference.csv", ref);
    predicted = knn_predict(x, labels, x, spec.k_neighbors);
  } else {
    const Eigen::VectorXd targets = as_targets(labels);
    AnfisModel model = init_from_fcm(x, targets, spec.mf_per_input, ex.seed);
    if (spec.kind == ClassifierKind::Anfis) {
      write_train_report_csv(cfg.output_dir / "train_report.csv", train_hybrid(model, x, targets, spec.hybrid));
    } else {
      SwarmConfig sc = spec.swarm;
      sc.seed = ex.seed;
      sc.threads = cfg.threads;
      const Optimizer opt = spec.kind == ClassifierKind::AnfisPso   ? Optimizer::Pso
                            : spec.kind == ClassifierKind::AnfisGoa ? Optimizer::Goa
                                                                    : Optimizer::Bs;
      write_trace_csv(cfg.output_dir / "trace.csv", train_anfis_swarm(model, x, targets, opt, sc, spec.search));
    }
    save_anfis(cfg.output_dir / "anfis.txt", model);
    predicted = anfis_classify(model, x, label_set);
  }
  const Metrics m = metrics_from_confusion(confusion_matrix(labels, predicted, label_set), ex.positive_label);
  write_echo(cfg.output_dir, "train", cfg);
  out << classifier_id(spec.kind) << " training accuracy " << format_double(m.acc) << '\n';
  return kExitOk;
}

int cmd_evaluate(const Options& o, const RunConfig& cfg, std::ostream& out) {
  const CaseSpec spec = cfg.resolve_case();
  const FeatureMatrix fm = read_feature_csv(features_path(o, cfg));
  ExperimentConfig ex = cfg.experiment;
  ex.threads = cfg.threads;
  const EvalReport report = run_experiment(fm.values, fm.labels, ex);
  ensure_dir(cfg.output_dir);
  write_eval_csv(cfg.output_dir / "eval.csv", report);
  write_summary_csv(cfg.output_dir / "summary.csv", report);
  write_confusion_csv(cfg.output_dir / "confusion.csv", report);
  write_echo(cfg.output_dir, "evaluate", cfg);
  out << "case " << spec.name << ", " << classifier_id(ex.classifier.kind) << ": acc " << format_double(report.mean.acc)
      << " sens " << format_double(report.mean.sens) << " spec " << format_double(report.mean.spec) << " prec "
      << format_double(report.mean.prec) << " f1 " << format_double(report.mean.f1);
  if (report.failed_folds) out << " (" << report.failed_folds << " failed folds)";
  out << '\n';
  return report.failed_folds == static_cast<int>(report.folds.size()) ? kExitRuntime : kExitOk;
}

int cmd_bench(const Options& o, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  int repeats = o.repeats > 0 ? o.repeats : cfg.bench_repeats;
  if (repeats < 3) {
    err << "warning: at least 3 timed repeats are required; using 3\n";
    repeats = 3;
  }
  std::mt19937_64 rng(cfg.experiment.seed);
  std::normal_distribution<double> noise;
  auto random_series = [&](std::size_t n) {
    std::vector<double> x(n);
    for (double& v : x) v = noise(rng);
    return x;
  };
  std::vector<double> frame;
  if (!o.input.empty()) {
    const Recording rec = load_one(o.input, cfg);
    if (rec.samples.size() < cfg.bench_length)
      throw ConfigError("input has " + std::to_string(rec.samples.size()) + " samples, fewer than bench.length");
    frame.assign(rec.samples.begin(), rec.samples.begin() + static_cast<std::ptrdiff_t>(cfg.bench_length));
  } else {
    frame = random_series(cfg.bench_length);
  }
  std::vector<Kernel> kernels;
  for (const auto& id : cfg.bench_kernels) kernels.push_back(*kernel_from_id(id));
  if (kernels.empty()) kernels.assign(all_kernels().begin(), all_kernels().end());

  CsvTable t;
  t.header = {"kernel_id", "n", "median_seconds", "min_seconds", "value"};
  auto add = [&](const BenchmarkStats& s) {
    t.rows.push_back({std::string(kernel_id(s.kernel)), std::to_string(s.n), format_double(s.median_seconds),
                      format_double(s.min_seconds), format_double(s.value)});
  };
  for (Kernel k : kernels) add(benchmark_entropy(k, frame, cfg.entropy, repeats));
  for (std::size_t n : cfg.bench_sweep) add(benchmark_entropy(Kernel::FuEn, random_series(n), cfg.entropy, repeats));

  ensure_dir(cfg.output_dir);
  write_csv(cfg.output_dir / "bench.csv", t);
  write_echo(cfg.output_dir, "bench", cfg);
  out << "wrote " << t.rows.size() << " timings to " << (cfg.output_dir / "bench.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

std::vector<Recording> load_recordings(const RunConfig& cfg) {
  std::vector<Recording> recs;
  if (cfg.format == DataFormat::Bonn) {
    for (const fs::path& p : sorted_files(cfg.data_root, {".txt"}))
      if (bonn_class_from_filename(p)) recs.push_back(load_bonn_segment(p));
  } else {
    for (const fs::path& p : sorted_files(cfg.data_root, {".csv"})) recs.push_back(load_one(p, cfg));
  }
  if (recs.empty()) throw EmptyInputError("no recordings found under " + cfg.data_root.string());
  return recs;
}

FramePools pool_frames(const std::vector<Recording>& recordings, double window_seconds) {
  FramePools pools;
  for (const Recording& rec : recordings) {
    auto frames = window(rec, window_seconds);
    auto& pool = pools[rec.class_tag];
    pool.insert(pool.end(), std::make_move_iterator(frames.begin()), std::make_move_iterator(frames.end()));
  }
  return pools;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"EEG seizure detection with TQWT fuzzy-entropy features and neuro-fuzzy classifiers", "fuzzeeg"};
  app.set_version_flag("--version", "fuzzeeg 0.1.0");
  Options o;
  app.add_option("-c,--config", o.config, "INI configuration file");
  app.add_option("-j,--threads", o.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app.require_subcommand(1);

  auto* decompose_cmd = app.add_subcommand("decompose", "write TQWT sub-bands of every frame");
  decompose_cmd->add_option("-i,--input", o.input, "single recording instead of the data root");
  auto* features_cmd = app.add_subcommand("features", "build the entropy feature matrix of the configured case");
  auto* reduce_cmd = app.add_subcommand("reduce", "train the autoencoder and write the reduced features");
  auto* train_cmd = app.add_subcommand("train", "fit the configured classifier on all rows");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "repeated stratified cross-validation");
  auto* bench_cmd = app.add_subcommand("bench", "time the entropy kernels");
  bench_cmd->add_option("-i,--input", o.input, "recording supplying the benchmark frame");
  bench_cmd->add_option("-r,--repeats", o.repeats, "timed repeats per kernel");
  for (auto* cmd : {reduce_cmd, train_cmd, evaluate_cmd})
    cmd->add_option("-f,--features", o.features, "feature CSV (default: <output>/features.csv)");
  for (auto* cmd : {decompose_cmd, features_cmd, reduce_cmd, train_cmd, evaluate_cmd, bench_cmd})
    cmd->add_option("-o,--out", o.out, "output directory (overrides output.dir)");
  features_cmd->add_option("--case", o.case_name, "class grouping, e.g. A-E or AB-CD-E");
  evaluate_cmd->add_option("--case", o.case_name, "class grouping, e.g. A-E or AB-CD-E");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    RunConfig cfg = load_config(o.config.empty() ? std::nullopt : std::optional<fs::path>(o.config));
    if (o.threads >= 0) cfg.threads = o.threads;
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (!o.case_name.empty()) cfg.case_name = o.case_name;

    if (*decompose_cmd) return cmd_decompose(o, cfg, out);
    if (*features_cmd) return cmd_features(cfg, out, err);
    if (*reduce_cmd) return cmd_reduce(o, cfg, out);
    if (*train_cmd) return cmd_train(o, cfg, out);
    if (*evaluate_cmd) return cmd_evaluate(o, cfg, out);
    if (*bench_cmd) return cmd_bench(o, cfg, out, err);
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace fuzzeeg::cli
