#include <gtest/gtest.h>

#include <random>

#include "fuzzeeg/anfis.hpp"
#include "fuzzeeg/error.hpp"
#include "fuzzeeg/fcm.hpp"
#include "test_support.hpp"

using namespace fuzzeeg;

namespace {

Eigen::MatrixXd two_clouds(int per_cloud, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.2);
  Eigen::MatrixXd x(2 * per_cloud, 2);
  for (int i = 0; i < 2 * per_cloud; ++i) {
    const double cx = i < per_cloud ? -3.0 : 3.0;
    x(i, 0) = cx + g(rng);
    x(i, 1) = cx * 0.5 + g(rng);
  }
  return x;
}

AnfisModel random_model(Eigen::Index rules, Eigen::Index inputs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AnfisModel m = make_anfis(rules, inputs);
  for (Eigen::Index j = 0; j < rules; ++j) {
    for (Eigen::Index i = 0; i < inputs; ++i) {
      m.centers(j, i) = u(rng);
      m.widths(j, i) = 0.6 + 0.5 * std::abs(u(rng));
      m.coeffs(j, i) = u(rng);
    }
    m.offsets(j) = u(rng);
  }
  return m;
}

Eigen::MatrixXd random_rows(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  const auto v = testing_support::uniform_series(static_cast<std::size_t>(n * d), seed);
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, d);
}

}  // namespace

TEST(Fcm, SeparatedClouds) {
  const Eigen::MatrixXd x = two_clouds(50, 1);
  FcmOptions o;
  o.seed = 3;
  const FcmResult r = fcm(x, o);
  EXPECT_TRUE(r.converged);
  const Eigen::RowVectorXd m1 = x.topRows(50).colwise().mean(), m2 = x.bottomRows(50).colwise().mean();
  const bool first_is_left = r.centers(0, 0) < 0;
  EXPECT_LT((r.centers.row(first_is_left ? 0 : 1) - m1).norm(), 0.1);
  EXPECT_LT((r.centers.row(first_is_left ? 1 : 0) - m2).norm(), 0.1);
  for (Eigen::Index i = 0; i < r.memberships.rows(); ++i) EXPECT_NEAR(r.memberships.row(i).sum(), 1.0, 1e-9);
}

TEST(Fcm, OneClusterPerPoint) {
  Eigen::MatrixXd x(3, 2);
  x << 0, 0, 5, 1, -2, 4;
  FcmOptions o;
  o.clusters = 3;
  const FcmResult r = fcm(x, o);
  for (Eigen::Index i = 0; i < 3; ++i) {
    double best = 1e9;
    for (Eigen::Index c = 0; c < 3; ++c) best = std::min(best, (r.centers.row(c) - x.row(i)).norm());
    EXPECT_LT(best, 1e-9);
  }
}

TEST(Fcm, ZeroDistanceSplitsEvenly) {
  Eigen::MatrixXd centers(3, 1), data(1, 1);
  centers << 1.0, 1.0, 4.0;
  data << 1.0;
  const Eigen::MatrixXd u = fcm_memberships(data, centers, 2.0);
  EXPECT_DOUBLE_EQ(u(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(u(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(u(0, 2), 0.0);
}

TEST(Anfis, SingleRuleIsLinear) {
  AnfisModel m = random_model(1, 3, 1);
  const std::vector<double> x = {0.3, -0.2, 0.9};
  const AnfisLayers l = anfis_layers(m, x);
  EXPECT_DOUBLE_EQ(l.normalized(0), 1.0);
  double f = m.offsets(0);
  for (int i = 0; i < 3; ++i) f += m.coeffs(0, i) * x[i];
  EXPECT_NEAR(l.output, f, 1e-15);
}

TEST(Anfis, DominantRuleAtCenter) {
  AnfisModel m = make_anfis(2, 2);
  m.centers << 0, 0, 10, 10;
  m.widths.setConstant(1.0);
  const std::vector<double> x = {0.0, 0.0};
  EXPECT_GT(anfis_layers(m, x).normalized(0), 0.99);
}

TEST(Anfis, NormalizedStrengthsSumToOne) {
  const AnfisModel m = random_model(3, 4, 2);
  const Eigen::MatrixXd rows = random_rows(50, 4, 3) * 5.0;
  const Eigen::MatrixXd w = normalized_strengths(m, rows);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) EXPECT_NEAR(w.row(i).sum(), 1.0, 1e-12);
}

TEST(Anfis, UnderflowStaysNormalized) {
  AnfisModel m = make_anfis(2, 1);
  m.centers << 0, 1;
  m.widths.setConstant(1e-3);
  const std::vector<double> x = {100.0};
  const AnfisLayers l = anfis_layers(m, x);
  EXPECT_TRUE(l.underflow);
  EXPECT_NEAR(l.normalized.sum(), 1.0, 1e-12);
  EXPECT_TRUE(std::isfinite(l.output));
}

TEST(Anfis, SingleRuleLeastSquaresMatchesClosedForm) {
  const Eigen::MatrixXd x = random_rows(40, 3, 4);
  Eigen::VectorXd y(40);
  const auto noise = testing_support::gaussian_series(40, 5, 0.1);
  for (int i = 0; i < 40; ++i) y(i) = 0.5 * x(i, 0) - 2.0 * x(i, 1) + x(i, 2) + 3.0 + noise[static_cast<std::size_t>(i)];
  AnfisModel m = random_model(1, 3, 6);
  fit_consequents(m, x, y);
  Eigen::MatrixXd a(40, 4);
  a << x, Eigen::VectorXd::Ones(40);
  const Eigen::VectorXd beta = (a.transpose() * a).ldlt().solve(a.transpose() * y);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(m.coeffs(0, i), beta(i), 1e-10);
  EXPECT_NEAR(m.offsets(0), beta(3), 1e-10);
}

TEST(Anfis, LinearTargetExactAfterOneEpoch) {
  Eigen::MatrixXd x(30, 1);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) {
    x(i, 0) = -1.0 + i / 15.0;
    y(i) = 2.0 * x(i, 0) + 1.0;
  }
  AnfisModel m = random_model(1, 1, 7);
  HybridOptions o;
  o.epochs = 1;
  const TrainReport r = train_hybrid(m, x, y, o);
  EXPECT_LT(r.rmse_after_lse.front(), 1e-10);
}

TEST(Anfis, PremiseGradientMatchesFiniteDifferences) {
  const AnfisModel m = random_model(3, 2, 8);
  const Eigen::MatrixXd x = random_rows(25, 2, 9);
  const Eigen::VectorXd y = random_rows(25, 1, 10).col(0);
  const Eigen::VectorXd g = premise_gradient(m, x, y);
  const Eigen::VectorXd theta = flatten_params(m);
  ASSERT_EQ(g.size(), 12);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    Eigen::VectorXd p = theta, q = theta;
    p(k) += 1e-6;
    q(k) -= 1e-6;
    const double num = (anfis_mse(unflatten_params(m, {p.data(), static_cast<std::size_t>(p.size())}), x, y) -
                        anfis_mse(unflatten_params(m, {q.data(), static_cast<std::size_t>(q.size())}), x, y)) /
                       2e-6;
    worst = std::max(worst, std::abs(num - g(k)) / std::max({std::abs(num), std::abs(g(k)), 1e-6}));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(Anfis, HybridLseNeverIncreasesRmse) {
  const Eigen::MatrixXd x = random_rows(60, 2, 11);
  Eigen::VectorXd y(60);
  for (int i = 0; i < 60; ++i) y(i) = std::sin(3 * x(i, 0)) * x(i, 1);
  AnfisModel m = init_from_fcm(x, y, 3, 1);
  const TrainReport r = train_hybrid(m, x, y);
  ASSERT_EQ(r.rmse.size(), 50u);
  for (std::size_t e = 0; e < r.rmse.size(); ++e) EXPECT_LE(r.rmse_after_lse[e], r.rmse_before_lse[e] + 1e-12);
  EXPECT_GE(r.final_rmse, 0.0);
  EXPECT_GT((m.widths.array() > 0.0).count(), 0);
}

TEST(Anfis, XorLikeData) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 0.15);
  Eigen::MatrixXd x(80, 2);
  Eigen::VectorXd y(80);
  for (int i = 0; i < 80; ++i) {
    const int a = i % 2, b = (i / 2) % 2;
    x(i, 0) = a + g(rng);
    x(i, 1) = b + g(rng);
    y(i) = a ^ b;
  }
  AnfisModel m = init_from_fcm(x, y, 3, 2);
  const TrainReport r = train_hybrid(m, x, y);
  EXPECT_LT(r.final_rmse, 0.3);
}

TEST(Anfis, InitFromFcmStructure) {
  const Eigen::MatrixXd x = random_rows(100, 32, 13);
  const Eigen::VectorXd y = (x.col(0).array() > 0).cast<double>();
  const AnfisModel m = init_from_fcm(x, y, 2, 1);
  EXPECT_EQ(m.rules(), 2);
  EXPECT_EQ(m.inputs(), 32);
  EXPECT_EQ(m.parameter_count(), 2u * 32 * 2 + 2u * 33);
  EXPECT_THROW(init_from_fcm(x, y, 4, 1), ParameterError);
}

TEST(Anfis, SingleClusterDataFloorsWidths) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(20, 3, 1.0);
  x(0, 0) = 1.5;
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(20);
  AnfisInitReport report;
  const AnfisModel m = init_from_fcm(x, y, 2, 1, &report);
  EXPECT_NO_THROW(m.validate());
  EXPECT_GT(report.floored_widths, 0);
}

TEST(Anfis, FlattenRoundTrip) {
  const AnfisModel m = random_model(3, 4, 14);
  const Eigen::VectorXd v = flatten_params(m);
  EXPECT_EQ(v.size(), 3 * 4 * 2 + 3 * 5);
  const AnfisModel back = unflatten_params(m, {v.data(), static_cast<std::size_t>(v.size())});
  EXPECT_TRUE(back.centers == m.centers);
  EXPECT_TRUE(back.widths == m.widths);
  EXPECT_TRUE(back.coeffs == m.coeffs);
  EXPECT_TRUE(back.offsets == m.offsets);
  EXPECT_THROW(unflatten_params(m, {v.data(), static_cast<std::size_t>(v.size() - 1)}), ShapeError);
  // Consequent block is p_j then r_j per rule.
  EXPECT_EQ(v(24), m.coeffs(0, 0));
  EXPECT_EQ(v(28), m.offsets(0));
}

TEST(Anfis, DecodeLabel) {
  EXPECT_EQ(decode_label(0.2, {0, 1}), 0);
  EXPECT_EQ(decode_label(1.7, {0, 1, 2}), 2);
  EXPECT_EQ(decode_label(0.5, {0, 1}), 0);
  EXPECT_EQ(decode_label(-4.0, {0, 1, 2}), 0);
  // Translating output and labels together keeps the decision.
  EXPECT_EQ(decode_label(10.2, {10, 11}), 10);
}

TEST(Anfis, SaveLoadRoundTrip) {
  testing_support::TempDir dir("anfis");
  const AnfisModel m = random_model(2, 3, 15);
  save_anfis(dir / "m.txt", m);
  const AnfisModel back = load_anfis(dir / "m.txt");
  EXPECT_TRUE(flatten_params(back) == flatten_params(m));
}
