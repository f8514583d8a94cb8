#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "entropy_detail.hpp"
#include "fuzzeeg/entropy.hpp"
#include "fuzzeeg/error.hpp"

namespace fuzzeeg {
namespace detail {

Templates make_templates(std::span<const double> x, std::size_t dim, std::size_t count,
                         Baseline baseline, double global_mean) {
  Templates t;
  t.count = count;
  t.dim = dim;
  t.data.resize(count * dim);
  for (std::size_t i = 0; i < count; ++i) {
    double base = global_mean;
    if (baseline == Baseline::LocalMean) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += x[i + k];
      base = s / static_cast<double>(dim);
    }
    for (std::size_t k = 0; k < dim; ++k) t.data[i * dim + k] = x[i + k] - base;
  }
  return t;
}

double phi_self(const Templates& t, double n, double r) {
  const std::size_t count = t.count;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double* a = t.row(i);
    double row = 0.0;
    for (std::size_t j = i + 1; j < count; ++j) row += membership(chebyshev(a, t.row(j), t.dim), n, r);
    sum += row;
  }
  const double c = static_cast<double>(count);
  return 2.0 * sum / (c * (c - 1.0));
}

double phi_cross(const Templates& a, const Templates& b, double n, double r, bool exclude_diagonal) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.count; ++i) {
    const double* ai = a.row(i);
    double row = 0.0;
    for (std::size_t j = 0; j < b.count; ++j) {
      if (exclude_diagonal && i == j) continue;
      row += membership(chebyshev(ai, b.row(j), a.dim), n, r);
    }
    sum += row;
  }
  const double ca = static_cast<double>(a.count), cb = static_cast<double>(b.count);
  return sum / (exclude_diagonal ? ca * (cb - 1.0) : ca * cb);
}

PhiPair fuzzy_phi(std::span<const double> x, int m, double n, double r, Baseline baseline,
                  double global_mean) {
  const std::size_t dim = static_cast<std::size_t>(m);
  const std::size_t count = x.size() - dim;
  PhiPair phi;
  phi.m = phi_self(make_templates(x, dim, count, baseline, global_mean), n, r);
  phi.m1 = phi_self(make_templates(x, dim + 1, count, baseline, global_mean), n, r);
  return phi;
}

bool log_ratio(const PhiPair& phi, double& out) {
  if (!(phi.m > 0.0) || !(phi.m1 > 0.0) || !std::isfinite(phi.m) || !std::isfinite(phi.m1)) return false;
  out = std::log(phi.m) - std::log(phi.m1);
  return std::isfinite(out);
}

void require_length(std::size_t n, std::size_t needed, const char* kernel) {
  if (n < needed)
    throw InsufficientDataError(std::string(kernel) + ": need at least " + std::to_string(needed) +
                                " samples, got " + std::to_string(n));
}

}  // namespace detail

void EntropyParams::validate() const {
  if (m < 1) throw ParameterError("entropy: m must be >= 1");
  if (!(n > 0.0)) throw ParameterError("entropy: fuzzy exponent n must be > 0");
  if (!(r_frac > 0.0)) throw ParameterError("entropy: r_frac must be > 0");
  if (r_abs && !(*r_abs > 0.0)) throw ParameterError("entropy: r_abs must be > 0");
  if (tau < 1) throw ParameterError("entropy: tau must be >= 1");
  if (!(alpha > -1.0 && alpha < 1.0)) throw ParameterError("entropy: alpha must lie in (-1, 1)");
  if (pm < 2) throw ParameterError("entropy: pm must be >= 2");
  if (pm > 10) throw ParameterError("entropy: pm above 10 is not supported");
  if (delay < 1) throw ParameterError("entropy: delay must be >= 1");
  if (k_depth < 0) throw ParameterError("entropy: k_depth must be >= 0");
  if (k_seg < 2) throw ParameterError("entropy: k_seg must be >= 2");
  if (m_bins < 2) throw ParameterError("entropy: m_bins must be >= 2");
  if (shift < 0) throw ParameterError("entropy: shift must be >= 0");
  if (!(n_local > 0.0) || !(n_global > 0.0)) throw ParameterError("entropy: FuMeEn exponents must be > 0");
  if (!(r_local > 0.0) || !(r_global > 0.0)) throw ParameterError("entropy: FuMeEn tolerances must be > 0");
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double effective_tolerance(std::span<const double> x, const EntropyParams& p) {
  if (p.r_abs) return *p.r_abs;
  return p.r_frac * sample_sd(x);
}

std::vector<double> coarse_grain(std::span<const double> x, int tau, std::size_t offset) {
  if (tau < 1) throw ParameterError("coarse_grain: tau must be >= 1");
  const std::size_t t = static_cast<std::size_t>(tau);
  if (offset >= x.size()) return {};
  const std::size_t count = (x.size() - offset) / t;
  std::vector<double> y(count);
  for (std::size_t j = 0; j < count; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < t; ++k) s += x[offset + j * t + k];
    y[j] = s / static_cast<double>(t);
  }
  return y;
}

std::vector<double> ordinal_pattern_series(std::span<const double> x, int pm, int delay) {
  const std::size_t d = static_cast<std::size_t>(pm);
  const std::size_t lag = static_cast<std::size_t>(delay);
  const std::size_t span_len = (d - 1) * lag;
  if (x.size() <= span_len) return {};
  const std::size_t rows = x.size() - span_len;

  std::vector<std::size_t> order(d);
  std::vector<double> u(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[i + a * lag] < x[i + b * lag]; });
    // Lehmer code of the permutation gives its lexicographic rank.
    std::size_t rank = 0;
    for (std::size_t k = 0; k < d; ++k) {
      std::size_t smaller = 0;
      for (std::size_t l = k + 1; l < d; ++l)
        if (order[l] < order[k]) ++smaller;
      std::size_t fact = 1;
      for (std::size_t f = 2; f <= d - 1 - k; ++f) fact *= f;
      rank += smaller * fact;
    }
    u[i] = static_cast<double>(rank + 1);
  }
  return u;
}

std::vector<std::vector<double>> hierarchical_components(std::span<const double> x, int k) {
  std::vector<std::vector<double>> layer{std::vector<double>(x.begin(), x.end())};
  for (int level = 0; level < k; ++level) {
    std::vector<std::vector<double>> next;
    next.reserve(layer.size() * 2);
    for (const auto& u : layer) {
      const std::size_t half = u.size() / 2;
      std::vector<double> avg(half), diff(half);
      for (std::size_t j = 0; j < half; ++j) {
        avg[j] = 0.5 * (u[2 * j] + u[2 * j + 1]);
        diff[j] = 0.5 * (u[2 * j] - u[2 * j + 1]);
      }
      next.push_back(std::move(avg));
      next.push_back(std::move(diff));
    }
    layer = std::move(next);
  }
  return layer;
}

}  // namespace fuzzeeg
