#include "fuzzeeg/fcm.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fuzzeeg/error.hpp"

namespace fuzzeeg {

Eigen::MatrixXd fcm_memberships(const Eigen::MatrixXd& data, const Eigen::MatrixXd& centers, double fuzzifier) {
  const Eigen::Index n = data.rows(), c = centers.rows();
  const double expo = 1.0 / (fuzzifier - 1.0);
  Eigen::MatrixXd u(n, c);
  Eigen::VectorXd d2(c);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index zeros = 0;
    for (Eigen::Index j = 0; j < c; ++j) {
      d2(j) = (data.row(k) - centers.row(j)).squaredNorm();
      if (d2(j) == 0.0) ++zeros;
    }
    if (zeros > 0) {
      for (Eigen::Index j = 0; j < c; ++j) u(k, j) = d2(j) == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
      continue;
    }
    // u_kj = 1 / sum_l (d_kj / d_kl)^(2/(m-1)), scaled by the nearest center.
    const double dmin = d2.minCoeff();
    double total = 0.0;
    for (Eigen::Index j = 0; j < c; ++j) {
      u(k, j) = std::pow(dmin / d2(j), expo);
      total += u(k, j);
    }
    u.row(k) /= total;
  }
  return u;
}

FcmResult fcm(const Eigen::MatrixXd& data, const FcmOptions& options) {
  const Eigen::Index n = data.rows(), c = options.clusters;
  if (c < 1) throw ParameterError("fcm: cluster count must be >= 1");
  if (n < c)
    throw ParameterError("fcm: " + std::to_string(n) + " rows cannot hold " + std::to_string(c) + " clusters");
  if (!(options.fuzzifier > 1.0)) throw ParameterError("fcm: fuzzifier must be > 1");
  if (!data.allFinite()) throw ParameterError("fcm: data must be finite");

  FcmResult res;
  res.fuzzifier = options.fuzzifier;
  res.centers.resize(c, data.cols());
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  res.centers.row(0) = data.row(pick(rng));
  Eigen::VectorXd nearest = (data.rowwise() - res.centers.row(0)).rowwise().squaredNorm();
  for (Eigen::Index j = 1; j < c; ++j) {
    Eigen::Index far = 0;
    nearest.maxCoeff(&far);
    res.centers.row(j) = data.row(far);
    nearest = nearest.cwiseMin((data.rowwise() - res.centers.row(j)).rowwise().squaredNorm());
  }

  for (int it = 0; it < options.max_iter; ++it) {
    res.memberships = fcm_memberships(data, res.centers, options.fuzzifier);
    const Eigen::MatrixXd w = res.memberships.array().pow(options.fuzzifier).matrix();
    Eigen::MatrixXd next = w.transpose() * data;
    const Eigen::VectorXd mass = w.colwise().sum().transpose();
    double shift = 0.0;
    for (Eigen::Index j = 0; j < c; ++j) {
      if (mass(j) > 0.0) next.row(j) /= mass(j);
      else next.row(j) = res.centers.row(j);
      shift = std::max(shift, (next.row(j) - res.centers.row(j)).norm());
    }
    res.centers = std::move(next);
    res.iterations = it + 1;
    if (shift < options.tol) {
      res.converged = true;
      break;
    }
  }
  res.memberships = fcm_memberships(data, res.centers, options.fuzzifier);
  return res;
}

}  // namespace fuzzeeg
