#include "fuzzeeg/anfis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "fuzzeeg/csv.hpp"
#include "fuzzeeg/error.hpp"

namespace fuzzeeg {
namespace {

// log of the raw firing strengths, rows x R.
Eigen::MatrixXd log_firing(const AnfisModel& model, const Eigen::MatrixXd& rows) {
  Eigen::MatrixXd lw(rows.rows(), model.rules());
  for (Eigen::Index j = 0; j < model.rules(); ++j) {
    const Eigen::ArrayXXd z =
        (rows.rowwise() - model.centers.row(j)).array().rowwise() / model.widths.row(j).array();
    lw.col(j) = -z.square().rowwise().sum().matrix();
  }
  return lw;
}

Eigen::MatrixXd normalize_log(const Eigen::MatrixXd& lw) {
  Eigen::MatrixXd w(lw.rows(), lw.cols());
  for (Eigen::Index k = 0; k < lw.rows(); ++k) {
    const double top = lw.row(k).maxCoeff();
    w.row(k) = (lw.row(k).array() - top).exp().matrix();
    w.row(k) /= w.row(k).sum();
  }
  return w;
}

Eigen::MatrixXd rule_outputs(const AnfisModel& model, const Eigen::MatrixXd& rows) {
  Eigen::MatrixXd f = rows * model.coeffs.transpose();
  f.rowwise() += model.offsets.transpose();
  return f;
}

void check_rows(const AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd* targets) {
  if (rows.cols() != model.inputs())
    throw ShapeError("anfis expects " + std::to_string(model.inputs()) + " inputs, got " +
                     std::to_string(rows.cols()));
  if (targets && targets->size() != rows.rows())
    throw ShapeError("anfis: " + std::to_string(rows.rows()) + " rows but " + std::to_string(targets->size()) +
                     " targets");
}

}  // namespace

std::size_t AnfisModel::parameter_count() const {
  return static_cast<std::size_t>(rules() * inputs() * 2 + rules() * (inputs() + 1));
}

void AnfisModel::validate() const {
  const Eigen::Index r = rules(), d = inputs();
  if (r < 1 || d < 1) throw ShapeError("anfis needs at least one rule and one input");
  if (widths.rows() != r || widths.cols() != d || coeffs.rows() != r || coeffs.cols() != d || offsets.size() != r)
    throw ShapeError("anfis parameter blocks have inconsistent shapes");
  if (!(widths.array() > 0.0).all()) throw ParameterError("anfis widths must be > 0");
}

AnfisModel make_anfis(Eigen::Index rules, Eigen::Index inputs) {
  AnfisModel m;
  m.centers = Eigen::MatrixXd::Zero(rules, inputs);
  m.widths = Eigen::MatrixXd::Ones(rules, inputs);
  m.coeffs = Eigen::MatrixXd::Zero(rules, inputs);
  m.offsets = Eigen::VectorXd::Zero(rules);
  return m;
}

AnfisLayers anfis_layers(const AnfisModel& model, std::span<const double> x) {
  if (static_cast<Eigen::Index>(x.size()) != model.inputs())
    throw ShapeError("anfis expects " + std::to_string(model.inputs()) + " inputs, got " + std::to_string(x.size()));
  const Eigen::Map<const Eigen::RowVectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  AnfisLayers out;
  const Eigen::Index r = model.rules();
  out.membership.resize(r, model.inputs());
  Eigen::VectorXd lw(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const Eigen::ArrayXd z = ((xv - model.centers.row(j)).array() / model.widths.row(j).array()).transpose();
    out.membership.row(j) = (-z.square()).exp().matrix().transpose();
    lw(j) = -z.square().sum();
  }
  out.firing = out.membership.rowwise().prod();
  out.underflow = (out.firing.array() == 0.0).all();
  out.normalized = normalize_log(lw.transpose()).transpose();
  out.rule_output = model.coeffs * xv.transpose() + model.offsets;
  out.weighted = out.normalized.cwiseProduct(out.rule_output);
  out.output = out.weighted.sum();
  return out;
}

double anfis_output(const AnfisModel& model, std::span<const double> x) { return anfis_layers(model, x).output; }

Eigen::MatrixXd normalized_strengths(const AnfisModel& model, const Eigen::MatrixXd& rows) {
  check_rows(model, rows, nullptr);
  return normalize_log(log_firing(model, rows));
}

Eigen::VectorXd anfis_predict(const AnfisModel& model, const Eigen::MatrixXd& rows) {
  const Eigen::MatrixXd w = normalized_strengths(model, rows);
  return w.cwiseProduct(rule_outputs(model, rows)).rowwise().sum();
}

double anfis_mse(const AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets) {
  check_rows(model, rows, &targets);
  if (rows.rows() == 0) throw EmptyInputError("anfis_mse: no rows");
  return (anfis_predict(model, rows) - targets).squaredNorm() / static_cast<double>(rows.rows());
}

double anfis_rmse(const AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets) {
  return std::sqrt(anfis_mse(model, rows, targets));
}

bool fit_consequents(AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets, double ridge) {
  check_rows(model, rows, &targets);
  const Eigen::Index r = model.rules(), d = model.inputs(), block = d + 1;
  const Eigen::MatrixXd w = normalized_strengths(model, rows);
  Eigen::MatrixXd phi(rows.rows(), r * block);
  for (Eigen::Index j = 0; j < r; ++j) {
    phi.middleCols(j * block, d) = rows.array().colwise() * w.col(j).array();
    phi.col(j * block + d) = w.col(j);
  }
  Eigen::VectorXd theta;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
  const bool deficient = qr.rank() < phi.cols();
  if (!deficient) {
    theta = qr.solve(targets);
  } else {
    Eigen::MatrixXd gram = phi.transpose() * phi;
    gram.diagonal().array() += ridge;
    theta = gram.ldlt().solve(phi.transpose() * targets);
  }
  for (Eigen::Index j = 0; j < r; ++j) {
    model.coeffs.row(j) = theta.segment(j * block, d).transpose();
    model.offsets(j) = theta(j * block + d);
  }
  return deficient;
}

AnfisModel init_from_fcm(const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets, int mf_per_input,
                         std::uint64_t seed, AnfisInitReport* report) {
  if (mf_per_input != 2 && mf_per_input != 3)
    throw ParameterError("anfis: membership functions per input must be 2 or 3, got " + std::to_string(mf_per_input));
  if (rows.rows() != targets.size()) throw ShapeError("anfis: rows and targets differ in count");
  FcmOptions opt;
  opt.clusters = mf_per_input;
  opt.seed = seed;
  FcmResult cl = fcm(rows, opt);

  const Eigen::Index r = mf_per_input, d = rows.cols();
  AnfisModel model = make_anfis(r, d);
  model.centers = cl.centers;
  const Eigen::MatrixXd weight = cl.memberships.array().pow(cl.fuzzifier).matrix();
  const Eigen::RowVectorXd range = rows.colwise().maxCoeff() - rows.colwise().minCoeff();
  int floored = 0;
  for (Eigen::Index j = 0; j < r; ++j) {
    const double mass = weight.col(j).sum();
    for (Eigen::Index i = 0; i < d; ++i) {
      const double var =
          mass > 0.0 ? (weight.col(j).array() * (rows.col(i).array() - model.centers(j, i)).square()).sum() / mass
                     : 0.0;
      const double floor = range(i) > 0.0 ? 1e-3 * range(i) : 1e-3;
      double a = std::sqrt(var);
      if (!(a >= floor)) {
        a = floor;
        ++floored;
      }
      model.widths(j, i) = a;
    }
  }
  const bool ridge = fit_consequents(model, rows, targets);
  if (report) {
    report->clustering = std::move(cl);
    report->floored_widths = floored;
    report->ridge_used = ridge;
  }
  return model;
}

Eigen::VectorXd premise_gradient(const AnfisModel& model, const Eigen::MatrixXd& rows,
                                 const Eigen::VectorXd& targets) {
  check_rows(model, rows, &targets);
  const Eigen::Index n = rows.rows(), r = model.rules(), d = model.inputs();
  const Eigen::MatrixXd w = normalized_strengths(model, rows);
  const Eigen::MatrixXd f = rule_outputs(model, rows);
  const Eigen::VectorXd y = w.cwiseProduct(f).rowwise().sum();
  const Eigen::VectorXd e = y - targets;
  Eigen::VectorXd grad(2 * r * d);
  for (Eigen::Index j = 0; j < r; ++j) {
    // dE/dlog(w_j) per row.
    const Eigen::ArrayXd g = (2.0 / static_cast<double>(n)) * e.array() * w.col(j).array() *
                             (f.col(j) - y).array();
    for (Eigen::Index i = 0; i < d; ++i) {
      const double a = model.widths(j, i);
      const Eigen::ArrayXd dx = rows.col(i).array() - model.centers(j, i);
      grad(j * d + i) = (g * 2.0 * dx).sum() / (a * a);
      grad(r * d + j * d + i) = (g * 2.0 * dx.square()).sum() / (a * a * a);
    }
  }
  return grad;
}

TrainReport train_hybrid(AnfisModel& model, const Eigen::MatrixXd& rows, const Eigen::VectorXd& targets,
                         const HybridOptions& options) {
  if (options.epochs < 1) throw ParameterError("train_hybrid: epochs must be >= 1");
  if (!(options.learning_rate > 0.0)) throw ParameterError("train_hybrid: learning rate must be > 0");
  model.validate();
  check_rows(model, rows, &targets);
  const auto t0 = std::chrono::steady_clock::now();
  TrainReport rep;
  const Eigen::Index rd = model.rules() * model.inputs();
  double lr = options.learning_rate;
  double prev = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rep.rmse_before_lse.push_back(anfis_rmse(model, rows, targets));
    if (fit_consequents(model, rows, targets)) ++rep.ridge_fallbacks;
    rep.rmse_after_lse.push_back(anfis_rmse(model, rows, targets));

    const Eigen::VectorXd g = premise_gradient(model, rows, targets);
    model.centers -= lr * Eigen::Map<const Eigen::MatrixXd>(g.data(), model.inputs(), model.rules()).transpose();
    model.widths -= lr * Eigen::Map<const Eigen::MatrixXd>(g.data() + rd, model.inputs(), model.rules()).transpose();
    model.widths = model.widths.cwiseMax(options.min_width);

    const double now = anfis_rmse(model, rows, targets);
    if (!std::isfinite(now)) throw TrainingError("anfis training diverged at epoch " + std::to_string(epoch));
    if (now > prev) lr *= options.decay;
    prev = now;
    rep.rmse.push_back(now);
  }
  rep.final_rmse = rep.rmse.back();
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Eigen::VectorXd flatten_params(const AnfisModel& model) {
  const Eigen::Index r = model.rules(), d = model.inputs();
  Eigen::VectorXd v(static_cast<Eigen::Index>(model.parameter_count()));
  Eigen::Index pos = 0;
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < d; ++i) v(pos++) = model.centers(j, i);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < d; ++i) v(pos++) = model.widths(j, i);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) v(pos++) = model.coeffs(j, i);
    v(pos++) = model.offsets(j);
  }
  return v;
}

AnfisModel unflatten_params(const AnfisModel& shape, std::span<const double> params) {
  if (params.size() != shape.parameter_count())
    throw ShapeError("anfis parameter vector has " + std::to_string(params.size()) + " entries, expected " +
                     std::to_string(shape.parameter_count()));
  const Eigen::Index r = shape.rules(), d = shape.inputs();
  AnfisModel m = make_anfis(r, d);
  std::size_t pos = 0;
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < d; ++i) m.centers(j, i) = params[pos++];
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < d; ++i) m.widths(j, i) = params[pos++];
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) m.coeffs(j, i) = params[pos++];
    m.offsets(j) = params[pos++];
  }
  return m;
}

int decode_label(double y, const std::vector<int>& labels) {
  if (labels.empty()) throw ParameterError("decode_label: empty label set");
  std::vector<int> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  int best = sorted.front();
  double dist = std::fabs(y - best);
  for (int l : sorted) {
    const double dl = std::fabs(y - l);
    if (dl < dist) {
      dist = dl;
      best = l;
    }
  }
  return best;
}

std::vector<int> anfis_classify(const AnfisModel& model, const Eigen::MatrixXd& rows, const std::vector<int>& labels) {
  const Eigen::VectorXd y = anfis_predict(model, rows);
  std::vector<int> out(static_cast<std::size_t>(y.size()));
  for (Eigen::Index k = 0; k < y.size(); ++k) out[static_cast<std::size_t>(k)] = decode_label(y(k), labels);
  return out;
}

void save_anfis(const std::filesystem::path& path, const AnfisModel& model) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "fuzzeeg-anfis 1\n" << "shape " << model.rules() << ' ' << model.inputs() << '\n';
  const Eigen::VectorXd v = flatten_params(model);
  out << "params";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v(i));
  out << '\n';
}

AnfisModel load_anfis(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  const std::string src = path.string();
  std::string line, key;
  if (!std::getline(in, line) || line != "fuzzeeg-anfis 1") throw FormatError(src, 1, "not an anfis model file");
  Eigen::Index r = 0, d = 0;
  if (!std::getline(in, line)) throw FormatError(src, 2, "missing shape line");
  {
    std::istringstream ss(line);
    if (!(ss >> key >> r >> d) || key != "shape" || r < 1 || d < 1) throw FormatError(src, 2, "bad shape line");
  }
  if (!std::getline(in, line)) throw FormatError(src, 3, "missing params line");
  std::istringstream ss(line);
  ss >> key;
  if (key != "params") throw FormatError(src, 3, "expected params");
  std::vector<double> v;
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw FormatError(src, 3, "bad number '" + tok + "'");
    v.push_back(x);
  }
  AnfisModel m = unflatten_params(make_anfis(r, d), v);
  m.validate();
  return m;
}

void write_train_report_csv(const std::filesystem::path& path, const TrainReport& report) {
  CsvTable t;
  t.header = {"epoch", "rmse", "rmse_before_lse", "rmse_after_lse"};
  for (std::size_t e = 0; e < report.rmse.size(); ++e)
    t.rows.push_back({std::to_string(e + 1), format_double(report.rmse[e]), format_double(report.rmse_before_lse[e]),
                      format_double(report.rmse_after_lse[e])});
  write_csv(path, t);
}

}  // namespace fuzzeeg
