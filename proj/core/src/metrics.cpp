#include <algorithm>
#include <string>

#include "fuzzeeg/error.hpp"
#include "fuzzeeg/evaluation.hpp"

namespace fuzzeeg {
namespace {

double ratio(long num, long den, bool& undefined) {
  if (den == 0) {
    undefined = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<int> l) : labels(std::move(l)) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  counts.assign(labels.size(), std::vector<long>(labels.size(), 0));
}

std::size_t ConfusionMatrix::index_of(int label) const {
  const auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) throw ParameterError("label " + std::to_string(label) + " not in the matrix");
  return static_cast<std::size_t>(it - labels.begin());
}

void ConfusionMatrix::add(int truth, int predicted) { ++counts[index_of(truth)][index_of(predicted)]; }

long ConfusionMatrix::total() const {
  long t = 0;
  for (const auto& row : counts)
    for (long v : row) t += v;
  return t;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& truth, const std::vector<int>& predicted,
                                 std::vector<int> labels) {
  if (truth.size() != predicted.size()) throw ShapeError("confusion_matrix: truth and prediction sizes differ");
  if (labels.empty()) {
    labels = truth;
    labels.insert(labels.end(), predicted.begin(), predicted.end());
  }
  ConfusionMatrix cm(std::move(labels));
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return cm;
}

Metrics binary_metrics(long tp, long fn, long tn, long fp) {
  Metrics m;
  m.acc = ratio(tp + tn, tp + tn + fp + fn, m.undefined);
  m.sens = ratio(tp, tp + fn, m.undefined);
  m.spec = ratio(tn, tn + fp, m.undefined);
  m.prec = ratio(tp, tp + fp, m.undefined);
  m.f1 = ratio(2 * tp, 2 * tp + fp + fn, m.undefined);
  return m;
}

Metrics macro_metrics(const ConfusionMatrix& cm) {
  const std::size_t k = cm.labels.size();
  if (k == 0) throw EmptyInputError("macro_metrics: empty confusion matrix");
  const long total = cm.total();
  Metrics out;
  long trace = 0;
  for (std::size_t c = 0; c < k; ++c) {
    long row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += cm.counts[c][j];
      col += cm.counts[j][c];
    }
    const long tp = cm.counts[c][c];
    trace += tp;
    const Metrics m = binary_metrics(tp, row - tp, total - row - col + tp, col - tp);
    out.sens += m.sens / static_cast<double>(k);
    out.spec += m.spec / static_cast<double>(k);
    out.prec += m.prec / static_cast<double>(k);
    out.f1 += m.f1 / static_cast<double>(k);
    out.undefined = out.undefined || m.undefined;
  }
  out.acc = ratio(trace, total, out.undefined);
  return out;
}

Metrics metrics_from_confusion(const ConfusionMatrix& cm, std::optional<int> positive_label) {
  if (cm.labels.size() != 2) return macro_metrics(cm);
  const std::size_t p = cm.index_of(positive_label.value_or(cm.labels.back()));
  const std::size_t q = 1 - p;
  return binary_metrics(cm.counts[p][p], cm.counts[p][q], cm.counts[q][q], cm.counts[q][p]);
}

}  // namespace fuzzeeg
