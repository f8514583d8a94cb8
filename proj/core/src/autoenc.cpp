#include "fuzzeeg/autoenc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fuzzeeg/csv.hpp"
#include "fuzzeeg/error.hpp"

namespace fuzzeeg {
namespace {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Linear: return "linear";
  }
  return "linear";
}

Activation activation_from_name(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "linear") return Activation::Linear;
  throw FormatError("autoencoder", 0, "unknown activation '" + s + "'");
}

void activate(Activation a, Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::Relu: z = z.cwiseMax(0.0); break;
    case Activation::Tanh: z = z.array().tanh().matrix(); break;
    case Activation::Linear: break;
  }
}

// Derivative expressed through the activation output.
Eigen::MatrixXd activation_slope(Activation a, const Eigen::MatrixXd& out) {
  switch (a) {
    case Activation::Relu: return (out.array() > 0.0).cast<double>().matrix();
    case Activation::Tanh: return (1.0 - out.array().square()).matrix();
    case Activation::Linear: break;
  }
  return Eigen::MatrixXd::Ones(out.rows(), out.cols());
}

void check_width(const AeModel& model, const Eigen::MatrixXd& rows) {
  if (static_cast<std::size_t>(rows.cols()) != model.input_size())
    throw ShapeError("autoencoder expects " + std::to_string(model.input_size()) + " columns, got " +
                     std::to_string(rows.cols()));
}

// Layer inputs / outputs of a full forward pass; acts[0] is the input.
std::vector<Eigen::MatrixXd> forward_all(const AeModel& model, const Eigen::MatrixXd& rows) {
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(model.layers.size() + 1);
  acts.push_back(rows);
  for (const DenseLayer& l : model.layers) {
    Eigen::MatrixXd z = acts.back() * l.weights.transpose();
    z.rowwise() += l.bias.transpose();
    activate(l.activation, z);
    acts.push_back(std::move(z));
  }
  return acts;
}

struct Gradients {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
};

Gradients backprop(const AeModel& model, const Eigen::MatrixXd& rows, double* loss) {
  const auto acts = forward_all(model, rows);
  const double count = static_cast<double>(rows.rows() * rows.cols());
  const Eigen::MatrixXd diff = acts.back() - rows;
  if (loss) *loss = diff.squaredNorm() / count;
  Gradients g;
  g.w.resize(model.layers.size());
  g.b.resize(model.layers.size());
  Eigen::MatrixXd delta = (2.0 / count) * diff;
  for (std::size_t l = model.layers.size(); l-- > 0;) {
    delta = delta.cwiseProduct(activation_slope(model.layers[l].activation, acts[l + 1]));
    g.w[l] = delta.transpose() * acts[l];
    g.b[l] = delta.colwise().sum().transpose();
    if (l > 0) delta = delta * model.layers[l].weights;
  }
  return g;
}

double& parameter_ref(AeModel& model, std::size_t flat) {
  for (DenseLayer& l : model.layers) {
    const auto nw = static_cast<std::size_t>(l.weights.size());
    if (flat < nw) return l.weights.data()[flat];
    flat -= nw;
    const auto nb = static_cast<std::size_t>(l.bias.size());
    if (flat < nb) return l.bias.data()[flat];
    flat -= nb;
  }
  throw ShapeError("parameter index out of range");
}

}  // namespace

void AeConfig::validate() const {
  if (layer_sizes.size() < 2) throw ConfigError("autoencoder needs at least two layer sizes");
  if (layer_sizes.front() != layer_sizes.back())
    throw ConfigError("autoencoder output size " + std::to_string(layer_sizes.back()) + " differs from input size " +
                      std::to_string(layer_sizes.front()));
  for (int s : layer_sizes)
    if (s < 1) throw ConfigError("autoencoder layer sizes must be positive");
  if (activations.size() + 1 != layer_sizes.size())
    throw ConfigError("autoencoder needs one activation per dense layer");
  if (epochs < 0) throw ConfigError("autoencoder epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("autoencoder batch size must be >= 1");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("adadelta rho must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("adadelta epsilon must be > 0");
}

std::size_t AeConfig::bottleneck() const {
  if (layer_sizes.size() < 3) return 1;
  const auto it = std::min_element(layer_sizes.begin() + 1, layer_sizes.end() - 1);
  return static_cast<std::size_t>(it - layer_sizes.begin());
}

std::vector<std::size_t> AeModel::parameter_counts() const {
  std::vector<std::size_t> out;
  for (const auto& l : layers) out.push_back(l.parameter_count());
  return out;
}

std::size_t AeModel::input_size() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weights.cols());
}

AeModel init_autoencoder(const AeConfig& config, std::uint64_t seed) {
  config.validate();
  AeModel model;
  model.config = config;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < config.layer_sizes.size(); ++l) {
    const int in = config.layer_sizes[l], out = config.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> u(-limit, limit);
    DenseLayer layer;
    layer.weights.resize(out, in);
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) layer.weights.data()[i] = u(rng);
    layer.bias = Eigen::VectorXd::Zero(out);
    layer.activation = config.activations[l];
    model.layers.push_back(std::move(layer));
  }
  return model;
}

Eigen::MatrixXd forward(const AeModel& model, const Eigen::MatrixXd& rows, std::size_t depth) {
  check_width(model, rows);
  Eigen::MatrixXd a = rows;
  for (std::size_t l = 0; l < std::min(depth, model.layers.size()); ++l) {
    Eigen::MatrixXd z = a * model.layers[l].weights.transpose();
    z.rowwise() += model.layers[l].bias.transpose();
    activate(model.layers[l].activation, z);
    a = std::move(z);
  }
  return a;
}

Eigen::MatrixXd reconstruct(const AeModel& model, const Eigen::MatrixXd& rows) {
  return forward(model, rows, model.layers.size());
}

Eigen::MatrixXd encode(const AeModel& model, const Eigen::MatrixXd& rows) {
  return forward(model, rows, model.config.bottleneck());
}

double reconstruction_mse(const AeModel& model, const Eigen::MatrixXd& rows) {
  const Eigen::MatrixXd out = reconstruct(model, rows);
  return (out - rows).squaredNorm() / static_cast<double>(rows.size());
}

void train_autoencoder(AeModel& model, const Eigen::MatrixXd& data, std::uint64_t seed) {
  check_width(model, data);
  const AeConfig& cfg = model.config;
  if (cfg.epochs == 0) return;
  if (data.rows() == 0) throw EmptyInputError("autoencoder training data has no rows");

  const std::size_t nl = model.layers.size();
  std::vector<Eigen::MatrixXd> eg_w(nl), ed_w(nl);
  std::vector<Eigen::VectorXd> eg_b(nl), ed_b(nl);
  for (std::size_t l = 0; l < nl; ++l) {
    eg_w[l] = ed_w[l] = Eigen::MatrixXd::Zero(model.layers[l].weights.rows(), model.layers[l].weights.cols());
    eg_b[l] = ed_b[l] = Eigen::VectorXd::Zero(model.layers[l].bias.size());
  }
  const double rho = cfg.rho, eps = cfg.epsilon;
  auto step = [&](auto& param, auto& eg, auto& ed, const auto& grad) {
    eg = rho * eg + (1.0 - rho) * grad.cwiseProduct(grad);
    const auto update = (-((ed.array() + eps).sqrt() / (eg.array() + eps).sqrt()) * grad.array()).eval();
    ed = rho * ed + (1.0 - rho) * update.square().matrix();
    param += update.matrix();
  };

  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  Eigen::MatrixXd mb;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0, b = 0; start < order.size(); start += batch, ++b) {
      const std::size_t stop = std::min(order.size(), start + batch);
      mb.resize(static_cast<Eigen::Index>(stop - start), data.cols());
      for (std::size_t i = start; i < stop; ++i) mb.row(static_cast<Eigen::Index>(i - start)) = data.row(order[i]);
      double loss = 0.0;
      const Gradients g = backprop(model, mb, &loss);
      if (!std::isfinite(loss))
        throw TrainingError("autoencoder loss is not finite at epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(b));
      for (std::size_t l = 0; l < nl; ++l) {
        step(model.layers[l].weights, eg_w[l], ed_w[l], g.w[l]);
        step(model.layers[l].bias, eg_b[l], ed_b[l], g.b[l]);
      }
    }
    const double mse = reconstruction_mse(model, data);
    if (!std::isfinite(mse))
      throw TrainingError("autoencoder loss is not finite after epoch " + std::to_string(epoch));
    model.history.push_back(mse);
  }
}

Eigen::VectorXd mse_gradient(const AeModel& model, const Eigen::MatrixXd& rows) {
  check_width(model, rows);
  const Gradients g = backprop(model, rows, nullptr);
  std::size_t total = 0;
  for (const auto& l : model.layers) total += l.parameter_count();
  Eigen::VectorXd flat(static_cast<Eigen::Index>(total));
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    flat.segment(pos, g.w[l].size()) = Eigen::Map<const Eigen::VectorXd>(g.w[l].data(), g.w[l].size());
    pos += g.w[l].size();
    flat.segment(pos, g.b[l].size()) = g.b[l];
    pos += g.b[l].size();
  }
  return flat;
}

double gradient_check(const AeModel& model, const Eigen::MatrixXd& rows, int samples, double h, std::uint64_t seed) {
  const Eigen::VectorXd analytic = mse_gradient(model, rows);
  AeModel probe = model;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, analytic.size() - 1);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index k = pick(rng);
    double& p = parameter_ref(probe, static_cast<std::size_t>(k));
    const double saved = p;
    p = saved + h;
    const double up = reconstruction_mse(probe, rows);
    p = saved - h;
    const double down = reconstruction_mse(probe, rows);
    p = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max({std::fabs(numeric), std::fabs(analytic(k)), 1e-6});
    worst = std::max(worst, std::fabs(numeric - analytic(k)) / scale);
  }
  return worst;
}

void save_autoencoder(const std::filesystem::path& path, const AeModel& model) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  const AeConfig& c = model.config;
  out << "fuzzeeg-autoencoder 1\n";
  out << "sizes";
  for (int s : c.layer_sizes) out << ' ' << s;
  out << "\nactivations";
  for (Activation a : c.activations) out << ' ' << activation_name(a);
  out << "\ntraining " << c.epochs << ' ' << c.batch_size << ' ' << format_double(c.rho) << ' '
      << format_double(c.epsilon) << '\n';
  out << "history " << model.history.size();
  for (double v : model.history) out << ' ' << format_double(v);
  out << '\n';
  for (const DenseLayer& l : model.layers) {
    out << "weights";
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index col = 0; col < l.weights.cols(); ++col) out << ' ' << format_double(l.weights(r, col));
    out << "\nbias";
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) out << ' ' << format_double(l.bias(i));
    out << '\n';
  }
}

AeModel load_autoencoder(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  const std::string src = path.string();
  std::size_t line_no = 0;
  auto next_line = [&](const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(src, line_no + 1, "missing '" + key + "' line");
    ++line_no;
    std::istringstream ss(line);
    std::string head;
    ss >> head;
    if (head != key) throw FormatError(src, line_no, "expected '" + key + "', got '" + head + "'");
    return ss.str().substr(head.size());
  };
  auto numbers = [&](const std::string& text) {
    std::istringstream ss(text);
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
      if (used != tok.size()) throw FormatError(src, line_no, "bad number '" + tok + "'");
      v.push_back(x);
    }
    return v;
  };

  {
    std::string magic;
    std::getline(in, magic);
    ++line_no;
    if (magic != "fuzzeeg-autoencoder 1") throw FormatError(src, 1, "not an autoencoder file");
  }
  AeConfig c;
  c.layer_sizes.clear();
  for (double v : numbers(next_line("sizes"))) c.layer_sizes.push_back(static_cast<int>(v));
  c.activations.clear();
  {
    std::istringstream ss(next_line("activations"));
    std::string tok;
    while (ss >> tok) c.activations.push_back(activation_from_name(tok));
  }
  const auto t = numbers(next_line("training"));
  if (t.size() != 4) throw FormatError(src, line_no, "training line needs 4 values");
  c.epochs = static_cast<int>(t[0]);
  c.batch_size = static_cast<int>(t[1]);
  c.rho = t[2];
  c.epsilon = t[3];
  c.validate();

  AeModel model;
  model.config = c;
  auto hist = numbers(next_line("history"));
  if (hist.empty() || hist.size() != static_cast<std::size_t>(hist[0]) + 1)
    throw FormatError(src, line_no, "history count mismatch");
  model.history.assign(hist.begin() + 1, hist.end());
  for (std::size_t l = 0; l + 1 < c.layer_sizes.size(); ++l) {
    const int rows = c.layer_sizes[l + 1], cols = c.layer_sizes[l];
    const auto w = numbers(next_line("weights"));
    if (w.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
      throw FormatError(src, line_no, "weight count mismatch");
    const auto b = numbers(next_line("bias"));
    if (b.size() != static_cast<std::size_t>(rows)) throw FormatError(src, line_no, "bias count mismatch");
    DenseLayer layer;
    layer.weights = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        w.data(), rows, cols);
    layer.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
    layer.activation = c.activations[l];
    model.layers.push_back(std::move(layer));
  }
  return model;
}

void write_loss_csv(const std::filesystem::path& path, const AeModel& model) {
  CsvTable t;
  t.header = {"epoch", "mse"};
  for (std::size_t e = 0; e < model.history.size(); ++e)
    t.rows.push_back({std::to_string(e + 1), format_double(model.history[e])});
  write_csv(path, t);
}

}  // namespace fuzzeeg
