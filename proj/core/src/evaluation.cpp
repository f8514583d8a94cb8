#include "fuzzeeg/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "fuzzeeg/csv.hpp"
#include "fuzzeeg/error.hpp"
#include "fuzzeeg/pipeline.hpp"
#include "parallel.hpp"
#include "swarm_detail.hpp"

namespace fuzzeeg {
namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
  return out;
}

constexpr const char* kMetricNames[] = {"acc", "sens", "spec", "prec", "f1"};

std::array<double, 5> as_array(const Metrics& m) { return {m.acc, m.sens, m.spec, m.prec, m.f1}; }

Metrics from_array(const std::array<double, 5>& a) { return {a[0], a[1], a[2], a[3], a[4], false}; }

}  // namespace

std::vector<int> stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw ParameterError("stratified_kfold: k must be >= 2");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (const auto& [label, members] : by_class)
    if (members.size() < static_cast<std::size_t>(k))
      throw ParameterError("stratified_kfold: class " + std::to_string(label) + " has " +
                           std::to_string(members.size()) + " members, fewer than " + std::to_string(k) + " folds");
  std::mt19937_64 rng(seed);
  std::vector<int> fold(labels.size(), 0);
  std::size_t deal = 0;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i : members) fold[i] = static_cast<int>(deal++ % static_cast<std::size_t>(k));
  }
  return fold;
}

std::string_view classifier_id(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::Anfis: return "anfis";
    case ClassifierKind::AnfisPso: return "anfis_pso";
    case ClassifierKind::AnfisGoa: return "anfis_goa";
    case ClassifierKind::AnfisBs: return "anfis_bs";
    case ClassifierKind::Knn: return "knn";
  }
  return "anfis";
}

std::optional<ClassifierKind> classifier_from_id(std::string_view id) {
  for (ClassifierKind k : {ClassifierKind::Anfis, ClassifierKind::AnfisPso, ClassifierKind::AnfisGoa,
                           ClassifierKind::AnfisBs, ClassifierKind::Knn})
    if (classifier_id(k) == id) return k;
  return std::nullopt;
}

std::vector<int> fit_predict(const Eigen::MatrixXd& train, const std::vector<int>& train_labels,
                             const Eigen::MatrixXd& test, const ExperimentConfig& cfg, std::uint64_t seed) {
  if (static_cast<std::size_t>(train.rows()) != train_labels.size())
    throw ShapeError("fit_predict: rows and labels differ in count");
  const NormStats stats = fit_normalization(train);
  Eigen::MatrixXd trn = apply_normalization(stats, train);
  Eigen::MatrixXd tst = apply_normalization(stats, test);

  if (cfg.use_autoencoder) {
    if (cfg.autoencoder.layer_sizes.front() != trn.cols())
      throw ConfigError("autoencoder input size " + std::to_string(cfg.autoencoder.layer_sizes.front()) +
                        " does not match " + std::to_string(trn.cols()) + " feature columns");
    AeModel ae = init_autoencoder(cfg.autoencoder, detail::splitmix64(seed + 1));
    train_autoencoder(ae, trn, detail::splitmix64(seed + 2));
    trn = encode(ae, trn);
    tst = encode(ae, tst);
    const NormStats reduced = fit_normalization(trn);
    trn = apply_normalization(reduced, trn);
    tst = apply_normalization(reduced, tst);
  }

  const ClassifierSpec& spec = cfg.classifier;
  if (spec.kind == ClassifierKind::Knn) return knn_predict(trn, train_labels, tst, spec.k_neighbors);

  const std::set<int> distinct(train_labels.begin(), train_labels.end());
  const std::vector<int> label_set(distinct.begin(), distinct.end());
  Eigen::VectorXd targets(trn.rows());
  for (Eigen::Index i = 0; i < trn.rows(); ++i) targets(i) = train_labels[static_cast<std::size_t>(i)];
  AnfisModel model = init_from_fcm(trn, targets, spec.mf_per_input, detail::splitmix64(seed + 3));
  if (spec.kind == ClassifierKind::Anfis) {
    train_hybrid(model, trn, targets, spec.hybrid);
  } else {
    SwarmConfig sc = spec.swarm;
    sc.seed = detail::splitmix64(seed + 4);
    sc.threads = 1;
    const Optimizer opt = spec.kind == ClassifierKind::AnfisPso   ? Optimizer::Pso
                          : spec.kind == ClassifierKind::AnfisGoa ? Optimizer::Goa
                                                                  : Optimizer::Bs;
    train_anfis_swarm(model, trn, targets, opt, sc, spec.search);
  }
  return anfis_classify(model, tst, label_set);
}

EvalReport run_experiment(const Eigen::MatrixXd& values, const std::vector<int>& labels, const ExperimentConfig& cfg) {
  if (values.rows() == 0) throw EmptyInputError("run_experiment: no rows");
  if (static_cast<std::size_t>(values.rows()) != labels.size())
    throw ShapeError("run_experiment: rows and labels differ in count");
  if (cfg.repeats < 1) throw ParameterError("run_experiment: repeats must be >= 1");
  if (!values.allFinite()) throw ParameterError("run_experiment: feature values must be finite");

  EvalReport report;
  {
    const std::set<int> s(labels.begin(), labels.end());
    report.labels.assign(s.begin(), s.end());
  }
  if (report.labels.size() < 2) throw ParameterError("run_experiment: need at least two classes");
  report.config = describe(cfg);

  std::vector<std::vector<int>> splits;
  for (int r = 0; r < cfg.repeats; ++r)
    splits.push_back(stratified_kfold(labels, cfg.folds, detail::splitmix64(cfg.seed + static_cast<std::uint64_t>(r))));

  const auto jobs = static_cast<std::size_t>(cfg.repeats) * static_cast<std::size_t>(cfg.folds);
  report.folds.resize(jobs);
  detail::parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    FoldResult& out = report.folds[job];
    out.repeat = static_cast<int>(job / static_cast<std::size_t>(cfg.folds));
    out.fold = static_cast<int>(job % static_cast<std::size_t>(cfg.folds));
    const auto& split = splits[static_cast<std::size_t>(out.repeat)];
    std::vector<std::size_t> tr, te;
    for (std::size_t i = 0; i < labels.size(); ++i) (split[i] == out.fold ? te : tr).push_back(i);
    out.train_size = tr.size();
    out.test_size = te.size();
    std::vector<int> tr_labels, te_labels;
    for (std::size_t i : tr) tr_labels.push_back(labels[i]);
    for (std::size_t i : te) te_labels.push_back(labels[i]);
    out.confusion = ConfusionMatrix(report.labels);
    try {
      const std::uint64_t seed = detail::splitmix64(cfg.seed ^ detail::splitmix64(job + 1));
      const std::vector<int> pred = fit_predict(take_rows(values, tr), tr_labels, take_rows(values, te), cfg, seed);
      for (std::size_t i = 0; i < te.size(); ++i) out.confusion.add(te_labels[i], pred[i]);
      out.metrics = metrics_from_confusion(out.confusion, cfg.positive_label);
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
    }
  });

  std::array<double, 5> sum{}, sq{};
  int ok = 0;
  for (const FoldResult& f : report.folds) {
    if (f.failed) {
      ++report.failed_folds;
      continue;
    }
    ++ok;
    const auto a = as_array(f.metrics);
    for (std::size_t i = 0; i < 5; ++i) sum[i] += a[i];
    report.mean.undefined = report.mean.undefined || f.metrics.undefined;
  }
  if (ok > 0) {
    std::array<double, 5> mean{};
    for (std::size_t i = 0; i < 5; ++i) mean[i] = sum[i] / ok;
    for (const FoldResult& f : report.folds) {
      if (f.failed) continue;
      const auto a = as_array(f.metrics);
      for (std::size_t i = 0; i < 5; ++i) sq[i] += (a[i] - mean[i]) * (a[i] - mean[i]);
    }
    std::array<double, 5> sd{};
    for (std::size_t i = 0; i < 5; ++i) sd[i] = ok > 1 ? std::sqrt(sq[i] / (ok - 1)) : 0.0;
    const bool undefined = report.mean.undefined;
    report.mean = from_array(mean);
    report.mean.undefined = undefined;
    report.stddev = from_array(sd);
  }
  return report;
}

std::map<std::string, std::string> describe(const ExperimentConfig& cfg) {
  const ClassifierSpec& c = cfg.classifier;
  std::map<std::string, std::string> d{
      {"classifier", std::string(classifier_id(c.kind))},
      {"classifier.mf_per_input", std::to_string(c.mf_per_input)},
      {"classifier.k_neighbors", std::to_string(c.k_neighbors)},
      {"classifier.search", c.search == AnfisSearch::PremiseOnly ? "premise" : "all"},
      {"hybrid.epochs", std::to_string(c.hybrid.epochs)},
      {"hybrid.learning_rate", format_double(c.hybrid.learning_rate)},
      {"swarm.n_pop", std::to_string(c.swarm.n_pop)},
      {"swarm.max_iter", std::to_string(c.swarm.max_iter)},
      {"pso.c1", format_double(c.swarm.pso.c1)},
      {"pso.c2", format_double(c.swarm.pso.c2)},
      {"pso.w", format_double(c.swarm.pso.w)},
      {"bs.w1", format_double(c.swarm.bs.w1)},
      {"bs.k1", format_double(c.swarm.bs.k1)},
      {"bs.w", format_double(c.swarm.bs.w)},
      {"bs.ga_fraction", format_double(c.swarm.bs.ga_fraction)},
      {"goa.c_min", format_double(c.swarm.goa.c_min)},
      {"goa.c_max", format_double(c.swarm.goa.c_max)},
      {"autoencoder", cfg.use_autoencoder ? "on" : "off"},
      {"autoencoder.epochs", std::to_string(cfg.autoencoder.epochs)},
      {"autoencoder.batch_size", std::to_string(cfg.autoencoder.batch_size)},
      {"folds", std::to_string(cfg.folds)},
      {"repeats", std::to_string(cfg.repeats)},
      {"seed", std::to_string(cfg.seed)},
      {"sensitivity", "TP/(TP+FN)"},
  };
  if (cfg.positive_label) d["positive_label"] = std::to_string(*cfg.positive_label);
  return d;
}

void write_eval_csv(const std::filesystem::path& path, const EvalReport& report) {
  CsvTable t;
  t.header = {"repeat", "fold", "metric", "value", "failed"};
  for (const FoldResult& f : report.folds) {
    const auto a = as_array(f.metrics);
    for (std::size_t i = 0; i < 5; ++i)
      t.rows.push_back({std::to_string(f.repeat), std::to_string(f.fold), kMetricNames[i],
                        f.failed ? "nan" : format_double(a[i]), f.failed ? "1" : "0"});
  }
  write_csv(path, t);
}

void write_summary_csv(const std::filesystem::path& path, const EvalReport& report) {
  CsvTable t;
  t.header = {"metric", "mean", "std", "folds_used", "folds_failed"};
  const auto mean = as_array(report.mean), sd = as_array(report.stddev);
  const std::size_t used = report.folds.size() - static_cast<std::size_t>(report.failed_folds);
  for (std::size_t i = 0; i < 5; ++i)
    t.rows.push_back({kMetricNames[i], format_double(mean[i]), format_double(sd[i]), std::to_string(used),
                      std::to_string(report.failed_folds)});
  write_csv(path, t);
}

void write_confusion_csv(const std::filesystem::path& path, const EvalReport& report) {
  CsvTable t;
  t.header = {"repeat", "fold", "true_label"};
  for (int l : report.labels) t.header.push_back("pred_" + std::to_string(l));
  for (const FoldResult& f : report.folds) {
    for (std::size_t r = 0; r < f.confusion.labels.size(); ++r) {
      std::vector<std::string> row{std::to_string(f.repeat), std::to_string(f.fold),
                                   std::to_string(f.confusion.labels[r])};
      for (long v : f.confusion.counts[r]) row.push_back(std::to_string(v));
      t.rows.push_back(std::move(row));
    }
  }
  write_csv(path, t);
}

}  // namespace fuzzeeg
