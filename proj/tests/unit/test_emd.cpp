#include <gtest/gtest.h>

#include <cmath>

#include "fuzzeeg/emd.hpp"
#include "fuzzeeg/error.hpp"
#include "test_support.hpp"

using namespace fuzzeeg;

namespace {
double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double reconstruction_error(const std::vector<double>& x, const EmdResult& r) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = r.residual[i];
    for (const auto& imf : r.imfs) s += imf[i];
    num += (s - x[i]) * (s - x[i]);
    den += x[i] * x[i];
  }
  return std::sqrt(num / den);
}
}  // namespace

TEST(Emd, Extrema) {
  const std::vector<double> x = {0, 2, 1, 3, 3, 0, -1, 0};
  EXPECT_EQ(local_maxima(x), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(local_minima(x), (std::vector<std::size_t>{2, 6}));
}

TEST(Emd, SplineInterpolatesKnotsAndLines) {
  const std::vector<double> t = {0, 3, 7, 9}, v = {1, 4, 8, 10};
  const auto s = natural_cubic_spline(t, v, 10);
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_NEAR(s[static_cast<std::size_t>(t[k])], v[k], 1e-12);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(s[i], 1.0 + static_cast<double>(i), 1e-12);
}

TEST(Emd, TwoToneSeparation) {
  const double fs = 256.0;
  const auto slow = testing_support::sine(512, 2.0 / fs);
  const auto fast = testing_support::sine(512, 30.0 / fs, 0.8);
  std::vector<double> x(512);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = slow[i] + fast[i];
  const EmdResult r = emd(x);
  ASSERT_FALSE(r.imfs.empty());
  EXPECT_GT(correlation(r.imfs[0], fast), 0.9);
  EXPECT_LE(reconstruction_error(x, r), 1e-8);
}

TEST(Emd, MonotoneRampHasNoImf) {
  std::vector<double> x(64);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 2.0 * static_cast<double>(i);
  const EmdResult r = emd(x);
  EXPECT_TRUE(r.imfs.empty());
  EXPECT_EQ(r.residual, x);
}

TEST(Emd, ReconstructionIdentityOnNoise) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = testing_support::gaussian_series(300, seed);
    EXPECT_LE(reconstruction_error(x, emd(x)), 1e-8);
  }
}

TEST(Emd, TooShortThrows) {
  EXPECT_THROW(emd(std::vector<double>(8, 1.0)), InsufficientDataError);
}
