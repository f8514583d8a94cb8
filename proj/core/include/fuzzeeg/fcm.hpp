#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace fuzzeeg {

struct FcmOptions {
  int clusters = 2;
  double fuzzifier = 2.0;
  double tol = 1e-6;     // stop when no center moves farther than this
  int max_iter = 300;
  std::uint64_t seed = 0;
};

struct FcmResult {
  Eigen::MatrixXd centers;      // c x d
  Eigen::MatrixXd memberships;  // rows x c, row-stochastic
  double fuzzifier = 2.0;
  int iterations = 0;
  bool converged = false;
};

/// Membership of every row to every center. A row sitting exactly on one or
/// more centers is shared equally among those centers.
Eigen::MatrixXd fcm_memberships(const Eigen::MatrixXd& data, const Eigen::MatrixXd& centers, double fuzzifier);

/// Fuzzy c-means. Centers start at distinct data rows: a seeded random row,
/// then repeatedly the row farthest from the chosen ones.
FcmResult fcm(const Eigen::MatrixXd& data, const FcmOptions& options);

}  // namespace fuzzeeg
