#include <algorithm>
#include <map>
#include <numeric>

#include "fuzzeeg/error.hpp"
#include "fuzzeeg/evaluation.hpp"

namespace fuzzeeg {

int knn_classify(const Eigen::MatrixXd& train, const std::vector<int>& labels, const Eigen::RowVectorXd& query,
                 int k_neighbors) {
  if (train.rows() == 0) throw EmptyInputError("knn: empty training set");
  if (static_cast<std::size_t>(train.rows()) != labels.size()) throw ShapeError("knn: rows and labels differ");
  if (query.size() != train.cols()) throw ShapeError("knn: query width does not match the training rows");
  if (k_neighbors < 1) throw ParameterError("knn: k must be >= 1");
  const auto n = static_cast<std::size_t>(train.rows());
  const std::size_t k = std::min(n, static_cast<std::size_t>(k_neighbors));
  const Eigen::VectorXd dist = (train.rowwise() - query).rowwise().squaredNorm();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), [&](std::size_t a, std::size_t b) {
    const double da = dist(static_cast<Eigen::Index>(a)), db = dist(static_cast<Eigen::Index>(b));
    return da < db || (da == db && a < b);
  });
  std::map<int, int> votes;
  int top = 0;
  for (std::size_t i = 0; i < k; ++i) top = std::max(top, ++votes[labels[idx[i]]]);
  for (std::size_t i = 0; i < k; ++i)
    if (votes[labels[idx[i]]] == top) return labels[idx[i]];
  return labels[idx[0]];
}

std::vector<int> knn_predict(const Eigen::MatrixXd& train, const std::vector<int>& labels,
                             const Eigen::MatrixXd& queries, int k_neighbors) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index q = 0; q < queries.rows(); ++q) out.push_back(knn_classify(train, labels, queries.row(q), k_neighbors));
  return out;
}

}  // namespace fuzzeeg
