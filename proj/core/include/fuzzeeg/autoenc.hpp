#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

namespace fuzzeeg {

enum class Activation { Relu, Tanh, Linear };

struct AeConfig {
  std::vector<int> layer_sizes = {135, 128, 64, 32, 64, 128, 135};
  std::vector<Activation> activations = {Activation::Relu, Activation::Relu, Activation::Relu,
                                         Activation::Relu, Activation::Relu, Activation::Tanh};
  int epochs = 200;
  int batch_size = 32;
  double rho = 0.95;
  double epsilon = 1e-6;

  /// Throws ConfigError unless the sizes are mirrored at the ends, there is
  /// one activation per dense layer, and the training settings are positive.
  void validate() const;
  /// Index of the narrowest layer size (the first one on ties).
  std::size_t bottleneck() const;
};

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;
  Activation activation = Activation::Relu;

  std::size_t parameter_count() const {
    return static_cast<std::size_t>(weights.size() + bias.size());
  }
};

struct AeModel {
  AeConfig config;
  std::vector<DenseLayer> layers;
  std::vector<double> history;  // per-epoch mean reconstruction MSE

  std::vector<std::size_t> parameter_counts() const;
  std::size_t input_size() const;
};

/// Glorot-uniform weights, zero biases.
AeModel init_autoencoder(const AeConfig& config, std::uint64_t seed);

/// Adadelta mini-batch training on `data` (rows x input_size), shuffling
/// batches each epoch from `seed`. Appends one MSE per epoch to history; the
/// value is measured over all rows after the epoch's updates. Throws
/// TrainingError on a non-finite loss.
void train_autoencoder(AeModel& model, const Eigen::MatrixXd& data, std::uint64_t seed);

/// Forward pass through the first `depth` dense layers.
Eigen::MatrixXd forward(const AeModel& model, const Eigen::MatrixXd& rows, std::size_t depth);
Eigen::MatrixXd reconstruct(const AeModel& model, const Eigen::MatrixXd& rows);
/// Activations of the bottleneck layer.
Eigen::MatrixXd encode(const AeModel& model, const Eigen::MatrixXd& rows);

double reconstruction_mse(const AeModel& model, const Eigen::MatrixXd& rows);

/// Analytic gradient of the reconstruction MSE, flattened layer by layer
/// (weights column-major, then bias).
Eigen::VectorXd mse_gradient(const AeModel& model, const Eigen::MatrixXd& rows);

/// Max relative error between backprop and central differences (step h) on
/// `samples` randomly chosen parameters.
double gradient_check(const AeModel& model, const Eigen::MatrixXd& rows, int samples = 200, double h = 1e-5,
                      std::uint64_t seed = 0);

void save_autoencoder(const std::filesystem::path& path, const AeModel& model);
AeModel load_autoencoder(const std::filesystem::path& path);
void write_loss_csv(const std::filesystem::path& path, const AeModel& model);

}  // namespace fuzzeeg
