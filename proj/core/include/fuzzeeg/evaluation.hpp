#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fuzzeeg/anfis.hpp"
#include "fuzzeeg/anfis_cost.hpp"
#include "fuzzeeg/autoenc.hpp"
#include "fuzzeeg/metaheuristics.hpp"

namespace fuzzeeg {

/// K x K counts, rows = true class, columns = predicted class, both indexed
/// by position in `labels` (ascending).
struct ConfusionMatrix {
  std::vector<int> labels;
  std::vector<std::vector<long>> counts;

  explicit ConfusionMatrix(std::vector<int> labels = {});
  void add(int truth, int predicted);
  long total() const;
  std::size_t index_of(int label) const;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& truth, const std::vector<int>& predicted,
                                 std::vector<int> labels = {});

struct Metrics {
  double acc = 0.0;
  double sens = 0.0;
  double spec = 0.0;
  double prec = 0.0;
  double f1 = 0.0;
  bool undefined = false;  // some ratio had a zero denominator and was set to 0
};

Metrics binary_metrics(long tp, long fn, long tn, long fp);

/// Two classes: binary metrics for `positive_label` (default: the larger
/// label). More classes: accuracy = trace / total, the other four are the
/// macro average of the one-vs-rest binary metrics.
Metrics metrics_from_confusion(const ConfusionMatrix& cm, std::optional<int> positive_label = std::nullopt);
Metrics macro_metrics(const ConfusionMatrix& cm);

/// Fold index (0..k-1) of every item. Each class is shuffled with the seed
/// and dealt round-robin, the deal continuing from one class to the next.
/// Throws ParameterError if a class has fewer than k members.
std::vector<int> stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed);

/// Euclidean k-nearest-neighbour vote; a tie between labels goes to the tied
/// label whose member is nearest.
int knn_classify(const Eigen::MatrixXd& train, const std::vector<int>& labels, const Eigen::RowVectorXd& query,
                 int k_neighbors = 5);
std::vector<int> knn_predict(const Eigen::MatrixXd& train, const std::vector<int>& labels,
                             const Eigen::MatrixXd& queries, int k_neighbors = 5);

enum class ClassifierKind { Anfis, AnfisPso, AnfisGoa, AnfisBs, Knn };

std::string_view classifier_id(ClassifierKind k);
std::optional<ClassifierKind> classifier_from_id(std::string_view id);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::AnfisBs;
  int mf_per_input = 2;
  HybridOptions hybrid;      // plain ANFIS training
  SwarmConfig swarm;         // ANFIS-PSO / GOA / BS; bounds are derived per fold
  AnfisSearch search = AnfisSearch::AllParameters;
  int k_neighbors = 5;
};

struct ExperimentConfig {
  ClassifierSpec classifier;
  bool use_autoencoder = false;
  AeConfig autoencoder;
  int folds = 10;
  int repeats = 10;
  std::uint64_t seed = 0;
  int threads = 1;  // (repeat, fold) jobs run concurrently
  std::optional<int> positive_label;
};

struct FoldResult {
  int repeat = 0;
  int fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  ConfusionMatrix confusion;
  Metrics metrics;
  bool failed = false;
  std::string error;
};

struct EvalReport {
  std::vector<FoldResult> folds;  // ordered by (repeat, fold)
  Metrics mean;
  Metrics stddev;
  int failed_folds = 0;
  std::vector<int> labels;
  std::map<std::string, std::string> config;
};

/// Fits a classifier on one training split and predicts the test rows.
/// Normalization, the optional autoencoder and the classifier inputs are
/// all fitted on `train` only.
std::vector<int> fit_predict(const Eigen::MatrixXd& train, const std::vector<int>& train_labels,
                             const Eigen::MatrixXd& test, const ExperimentConfig& cfg, std::uint64_t seed);

/// Repeated stratified k-fold cross-validation. Folds whose training throws
/// are recorded as failed and left out of the means.
EvalReport run_experiment(const Eigen::MatrixXd& values, const std::vector<int>& labels, const ExperimentConfig& cfg);

std::map<std::string, std::string> describe(const ExperimentConfig& cfg);

/// One row per (repeat, fold, metric).
void write_eval_csv(const std::filesystem::path& path, const EvalReport& report);
/// One row per metric with mean and standard deviation.
void write_summary_csv(const std::filesystem::path& path, const EvalReport& report);
/// Confusion matrices, one block per fold.
void write_confusion_csv(const std::filesystem::path& path, const EvalReport& report);

}  // namespace fuzzeeg
