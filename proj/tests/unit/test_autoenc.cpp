#include <gtest/gtest.h>

#include "fuzzeeg/autoenc.hpp"
#include "fuzzeeg/error.hpp"
#include "test_support.hpp"

using namespace fuzzeeg;

namespace {
Eigen::MatrixXd random_rows(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  const auto v = testing_support::uniform_series(static_cast<std::size_t>(rows * cols), seed);
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

AeConfig small_config() {
  AeConfig c;
  c.layer_sizes = {6, 4, 2, 4, 6};
  c.activations = {Activation::Relu, Activation::Relu, Activation::Relu, Activation::Tanh};
  c.epochs = 5;
  return c;
}
}  // namespace

TEST(Autoencoder, TableParameterCounts) {
  const AeModel m = init_autoencoder(AeConfig{}, 1);
  EXPECT_EQ(m.parameter_counts(), (std::vector<std::size_t>{17408, 8256, 2080, 2112, 8320, 17415}));
  EXPECT_EQ(m.config.bottleneck(), 3u);
  EXPECT_EQ(m.input_size(), 135u);
  EXPECT_TRUE(m.history.empty());
}

TEST(Autoencoder, GlorotBoundsAndSeedDeterminism) {
  const AeModel a = init_autoencoder(AeConfig{}, 42), b = init_autoencoder(AeConfig{}, 42);
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    EXPECT_TRUE(a.layers[l].weights == b.layers[l].weights);
    const double limit = std::sqrt(6.0 / static_cast<double>(a.layers[l].weights.rows() + a.layers[l].weights.cols()));
    EXPECT_LE(a.layers[l].weights.cwiseAbs().maxCoeff(), limit);
    EXPECT_TRUE((a.layers[l].bias.array() == 0.0).all());
  }
  EXPECT_FALSE(init_autoencoder(AeConfig{}, 43).layers[0].weights == a.layers[0].weights);
}

TEST(Autoencoder, InvalidConfig) {
  AeConfig c;
  c.layer_sizes.back() = 134;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(init_autoencoder(c, 0), ConfigError);
  c = AeConfig{};
  c.activations.pop_back();
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Autoencoder, EncodeShapeAndRange) {
  const AeModel m = init_autoencoder(AeConfig{}, 2);
  const Eigen::MatrixXd rows = random_rows(10, 135, 3);
  const Eigen::MatrixXd z = encode(m, rows);
  EXPECT_EQ(z.cols(), 32);
  EXPECT_EQ(z.rows(), 10);
  EXPECT_GE(z.minCoeff(), 0.0);
  const Eigen::MatrixXd out = reconstruct(m, rows);
  EXPECT_LT(out.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_THROW(encode(m, random_rows(2, 10, 1)), ShapeError);
}

TEST(Autoencoder, EncodeIsDeterministic) {
  const AeModel m = init_autoencoder(AeConfig{}, 5);
  Eigen::MatrixXd rows(2, 135);
  rows.row(0) = random_rows(1, 135, 6);
  rows.row(1) = rows.row(0);
  const Eigen::MatrixXd z = encode(m, rows);
  EXPECT_TRUE(z.row(0) == z.row(1));
  EXPECT_TRUE(encode(m, rows) == z);
  const Eigen::MatrixXd zero = encode(m, Eigen::MatrixXd::Zero(1, 135));
  EXPECT_TRUE((zero.array() == 0.0).all());  // zero biases at init
}

TEST(Autoencoder, GradientCheckDefaultModel) {
  const AeModel m = init_autoencoder(AeConfig{}, 7);
  EXPECT_LT(gradient_check(m, random_rows(10, 135, 8), 200, 1e-5, 9), 1e-4);
}

TEST(Autoencoder, GradientCheckLinearLayer) {
  AeConfig c;
  c.layer_sizes = {5, 5};
  c.activations = {Activation::Linear};
  const AeModel m = init_autoencoder(c, 10);
  EXPECT_LT(gradient_check(m, random_rows(8, 5, 11), 30, 1e-5, 12), 1e-7);
}

TEST(Autoencoder, ZeroInputZeroWeightsBiasGradient) {
  AeConfig c;
  c.layer_sizes = {3, 3};
  c.activations = {Activation::Linear};
  AeModel m = init_autoencoder(c, 0);
  m.layers[0].weights.setZero();
  m.layers[0].bias << 0.5, -1.0, 2.0;
  const Eigen::VectorXd g = mse_gradient(m, Eigen::MatrixXd::Zero(4, 3));
  ASSERT_EQ(g.size(), 12);
  // MSE = mean over rows and columns of b^2, so d/db_k = 2 b_k / 3.
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(g(k), 0.0, 1e-15);
  EXPECT_NEAR(g(9), 2.0 * 0.5 / 3.0, 1e-15);
  EXPECT_NEAR(g(10), 2.0 * -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(g(11), 2.0 * 2.0 / 3.0, 1e-15);
}

TEST(Autoencoder, ZeroEpochsLeavesModel) {
  AeConfig c = small_config();
  c.epochs = 0;
  AeModel m = init_autoencoder(c, 1);
  const AeModel before = m;
  train_autoencoder(m, random_rows(20, 6, 2), 3);
  for (std::size_t l = 0; l < m.layers.size(); ++l) EXPECT_TRUE(m.layers[l].weights == before.layers[l].weights);
  EXPECT_TRUE(m.history.empty());
}

TEST(Autoencoder, ZeroDataLossDecreases) {
  AeConfig c = small_config();
  c.epochs = 30;
  AeModel m = init_autoencoder(c, 4);
  train_autoencoder(m, Eigen::MatrixXd::Zero(64, 6), 5);
  ASSERT_EQ(m.history.size(), 30u);
  EXPECT_LE(m.history.back(), m.history.front());
  double best = m.history.front();
  for (double h : m.history) best = std::min(best, h);
  EXPECT_EQ(best, *std::min_element(m.history.begin(), m.history.end()));
}

TEST(Autoencoder, TrainingIsSeeded) {
  AeModel a = init_autoencoder(small_config(), 1), b = init_autoencoder(small_config(), 1);
  const Eigen::MatrixXd data = random_rows(40, 6, 9);
  train_autoencoder(a, data, 7);
  train_autoencoder(b, data, 7);
  EXPECT_EQ(a.history, b.history);
}

TEST(Autoencoder, NonFiniteDataAborts) {
  AeModel m = init_autoencoder(small_config(), 1);
  Eigen::MatrixXd data = random_rows(10, 6, 2);
  data(3, 2) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(train_autoencoder(m, data, 1), TrainingError);
}

TEST(Autoencoder, SaveLoadRoundTrip) {
  testing_support::TempDir dir("ae");
  AeModel m = init_autoencoder(small_config(), 3);
  train_autoencoder(m, random_rows(30, 6, 4), 5);
  save_autoencoder(dir / "ae.txt", m);
  const AeModel back = load_autoencoder(dir / "ae.txt");
  ASSERT_EQ(back.layers.size(), m.layers.size());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    EXPECT_TRUE(back.layers[l].weights == m.layers[l].weights);
    EXPECT_TRUE(back.layers[l].bias == m.layers[l].bias);
    EXPECT_EQ(back.layers[l].activation, m.layers[l].activation);
  }
  EXPECT_EQ(back.history, m.history);
  write_loss_csv(dir / "loss.csv", m);
  EXPECT_EQ(testing_support::read_text(dir / "loss.csv").substr(0, 10), "epoch,mse\n");
}
