#include "fuzzeeg/anfis_cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzeeg/error.hpp"

namespace fuzzeeg {
namespace {

std::size_t premise_size(const AnfisModel& m) { return static_cast<std::size_t>(2 * m.rules() * m.inputs()); }

AnfisModel assemble(const AnfisModel& shape, std::span<const double> theta, AnfisSearch search) {
  if (search == AnfisSearch::AllParameters) return unflatten_params(shape, theta);
  if (theta.size() != premise_size(shape))
    throw ShapeError("premise vector has " + std::to_string(theta.size()) + " entries, expected " +
                     std::to_string(premise_size(shape)));
  Eigen::VectorXd full = flatten_params(shape);
  std::copy(theta.begin(), theta.end(), full.data());
  return unflatten_params(shape, {full.data(), static_cast<std::size_t>(full.size())});
}

}  // namespace

CostFunction make_anfis_cost(const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets, const AnfisModel& shape,
                             AnfisSearch search) {
  if (rows.rows() != targets.size()) throw ShapeError("anfis cost: rows and targets differ in count");
  if (rows.cols() != shape.inputs()) throw ShapeError("anfis cost: input width does not match the model");
  if (rows.rows() == 0) throw EmptyInputError("anfis cost: no rows");
  return [rows, targets, shape, search](std::span<const double> theta) {
    const AnfisModel m = assemble(shape, theta, search);
    if (!(m.widths.array() > 0.0).all()) return std::numeric_limits<double>::infinity();
    const double mse = (anfis_predict(m, rows) - targets).squaredNorm() / static_cast<double>(rows.rows());
    return std::isfinite(mse) ? mse : std::numeric_limits<double>::infinity();
  };
}

void anfis_bounds(const Eigen::MatrixXd& rows, const AnfisModel& init, AnfisSearch search,
                  std::vector<double>& lower, std::vector<double>& upper) {
  const Eigen::Index r = init.rules(), d = init.inputs();
  const Eigen::RowVectorXd lo = rows.colwise().minCoeff(), hi = rows.colwise().maxCoeff();
  lower.clear();
  upper.clear();
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double margin = 0.1 * (hi(i) - lo(i));
      lower.push_back(std::min(lo(i) - margin, init.centers(j, i)));
      upper.push_back(std::max(hi(i) + margin, init.centers(j, i)));
    }
  }
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double range = hi(i) - lo(i) > 0.0 ? hi(i) - lo(i) : 1.0;
      lower.push_back(std::min(1e-3 * range, init.widths(j, i)));
      upper.push_back(std::max(1.1 * range, init.widths(j, i)));
    }
  }
  if (search == AnfisSearch::PremiseOnly) return;
  const double theta0 = std::max(init.coeffs.cwiseAbs().maxCoeff(), init.offsets.cwiseAbs().maxCoeff());
  const double bound = std::max({rows.cwiseAbs().maxCoeff(), 1.1 * theta0, 1.0});
  for (Eigen::Index k = 0; k < r * (d + 1); ++k) {
    lower.push_back(-bound);
    upper.push_back(bound);
  }
}

OptResult train_anfis_swarm(AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets,
                            Optimizer optimizer, SwarmConfig cfg, AnfisSearch search) {
  model.validate();
  anfis_bounds(rows, model, search, cfg.lower, cfg.upper);
  Eigen::VectorXd start = flatten_params(model);
  const std::size_t dim = cfg.lower.size();
  cfg.initial = std::vector<double>(start.data(), start.data() + dim);
  const CostFunction cost = make_anfis_cost(rows, targets, model, search);
  OptResult res = minimize(optimizer, cost, dim, cfg);
  model = assemble(model, res.best, search);
  return res;
}

}  // namespace fuzzeeg
