#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fuzzeeg/anfis.hpp"
#include "fuzzeeg/metaheuristics.hpp"

namespace fuzzeeg {

enum class AnfisSearch { AllParameters, PremiseOnly };

/// Training MSE of unflatten(theta). Premise-only vectors hold the centers
/// and widths; the consequents are taken from `shape`. Non-finite outputs
/// cost +inf. The rows and targets are copied, so the function is
/// self-contained and safe to call concurrently.
CostFunction make_anfis_cost(const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets, const AnfisModel& shape,
                             AnfisSearch search = AnfisSearch::AllParameters);

/// Box bounds in flatten order: centers within the input range widened by
/// 10%, widths in [1e-3, 1.1] x range, consequents within +-max(max|x|,
/// 1.1 max|theta0|, 1) where theta0 are the consequents of `init`.
void anfis_bounds(const Eigen::MatrixXd& rows, const AnfisModel& init, AnfisSearch search,
                  std::vector<double>& lower, std::vector<double>& upper);

/// Swarm search over the ANFIS parameters starting from `model` (used as
/// particle 0); `model` receives the best parameters found.
OptResult train_anfis_swarm(AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets,
                            Optimizer optimizer, SwarmConfig cfg, AnfisSearch search = AnfisSearch::AllParameters);

}  // namespace fuzzeeg
