#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fuzzeeg/fcm.hpp"

namespace fuzzeeg {

/// First-order Takagi-Sugeno model with one Gaussian per (rule, input):
/// mu = exp(-((x - c) / a)^2), rule output f = p . x + r.
struct AnfisModel {
  Eigen::MatrixXd centers;  // R x d
  Eigen::MatrixXd widths;   // R x d, > 0
  Eigen::MatrixXd coeffs;   // R x d
  Eigen::VectorXd offsets;  // R

  Eigen::Index rules() const { return centers.rows(); }
  Eigen::Index inputs() const { return centers.cols(); }
  std::size_t parameter_count() const;
  /// Throws ShapeError on inconsistent blocks, ParameterError on widths <= 0.
  void validate() const;
};

AnfisModel make_anfis(Eigen::Index rules, Eigen::Index inputs);

/// Every intermediate layer of one forward pass.
struct AnfisLayers {
  Eigen::MatrixXd membership;   // layer 1, R x d
  Eigen::VectorXd firing;       // layer 2, product of memberships (may underflow)
  Eigen::VectorXd normalized;   // layer 3, sums to 1
  Eigen::VectorXd rule_output;  // f_j
  Eigen::VectorXd weighted;     // layer 4, normalized * f_j
  double output = 0.0;          // layer 5
  bool underflow = false;       // every raw firing strength underflowed to 0
};

AnfisLayers anfis_layers(const AnfisModel& model, std::span<const double> x);
double anfis_output(const AnfisModel& model, std::span<const double> x);

/// Normalized firing strengths of every row (rows x R), computed in the log
/// domain so they stay well defined when the raw products underflow.
Eigen::MatrixXd normalized_strengths(const AnfisModel& model, const Eigen::MatrixXd& rows);
Eigen::VectorXd anfis_predict(const AnfisModel& model, const Eigen::MatrixXd& rows);

double anfis_mse(const AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets);
double anfis_rmse(const AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets);

/// Least-squares consequents for fixed premises. Returns true when the
/// design matrix was rank deficient and the ridge fallback was used.
bool fit_consequents(AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets,
                     double ridge = 1e-8);

struct AnfisInitReport {
  FcmResult clustering;
  int floored_widths = 0;
  bool ridge_used = false;
};

/// One rule per FCM cluster of the input rows (mf_per_input in {2, 3}).
/// Widths are the membership-weighted standard deviations, floored at 1e-3
/// of each input's range; consequents come from one global least-squares fit.
AnfisModel init_from_fcm(const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets, int mf_per_input,
                         std::uint64_t seed = 0, AnfisInitReport* report = nullptr);

/// Gradient of the training MSE with respect to the premise parameters,
/// ordered like flatten_params (all centers, then all widths).
Eigen::VectorXd premise_gradient(const AnfisModel& model, const Eigen::MatrixXd& rows,
                                 const Eigen::VectorXd& targets);

struct HybridOptions {
  int epochs = 50;
  double learning_rate = 0.01;
  double decay = 0.9;         // applied to the rate whenever the epoch RMSE rises
  double min_width = 1e-6;
};

struct TrainReport {
  std::vector<double> rmse;             // after each full epoch
  std::vector<double> rmse_before_lse;  // at the start of each epoch
  std::vector<double> rmse_after_lse;
  double final_rmse = 0.0;
  double elapsed_seconds = 0.0;
  int ridge_fallbacks = 0;
};

/// Per epoch: least-squares consequents, then one gradient step on the
/// premises with widths clamped to min_width.
TrainReport train_hybrid(AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets,
                         const HybridOptions& options = {});

/// Centers (rule-major), widths (rule-major), then per rule p_j followed by r_j.
Eigen::VectorXd flatten_params(const AnfisModel& model);
/// Inverse of flatten_params for a model shaped like `shape`.
AnfisModel unflatten_params(const AnfisModel& shape, std::span<const double> params);

/// Nearest label to the model output; ties go to the smaller label.
int decode_label(double y, const std::vector<int>& labels);
std::vector<int> anfis_classify(const AnfisModel& model, const Eigen::MatrixXd& rows, const std::vector<int>& labels);

void save_anfis(const std::filesystem::path& path, const AnfisModel& model);
AnfisModel load_anfis(const std::filesystem::path& path);
void write_train_report_csv(const std::filesystem::path& path, const TrainReport& report);

}  // namespace fuzzeeg
