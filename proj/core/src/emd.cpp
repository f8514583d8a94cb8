#include "fuzzeeg/emd.hpp"

#include <cmath>
#include <string>

#include "fuzzeeg/error.hpp"

namespace fuzzeeg {
namespace {

template <typename Cmp>
std::vector<std::size_t> extrema(std::span<const double> x, Cmp beats) {
  std::vector<std::size_t> idx;
  const std::size_t n = x.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (beats(x[i], x[i - 1])) {
      std::size_t j = i;
      while (j + 1 < n && x[j + 1] == x[i]) ++j;  // walk a plateau
      if (j + 1 < n && beats(x[i], x[j + 1])) idx.push_back(i);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return idx;
}

// Envelope through the given extrema with one mirrored knot per side.
std::vector<double> envelope(std::span<const double> x, const std::vector<std::size_t>& ext) {
  const double last = static_cast<double>(x.size() - 1);
  std::vector<double> t, v;
  t.reserve(ext.size() + 2);
  v.reserve(ext.size() + 2);
  t.push_back(-static_cast<double>(ext.front()));
  v.push_back(x[ext.front()]);
  for (std::size_t i : ext) {
    t.push_back(static_cast<double>(i));
    v.push_back(x[i]);
  }
  t.push_back(2.0 * last - static_cast<double>(ext.back()));
  v.push_back(x[ext.back()]);
  return natural_cubic_spline(t, v, x.size());
}

}  // namespace

std::vector<std::size_t> local_maxima(std::span<const double> x) {
  return extrema(x, [](double a, double b) { return a > b; });
}

std::vector<std::size_t> local_minima(std::span<const double> x) {
  return extrema(x, [](double a, double b) { return a < b; });
}

std::vector<double> natural_cubic_spline(std::span<const double> knot_t, std::span<const double> knot_v,
                                         std::size_t n) {
  const std::size_t k = knot_t.size();
  if (k < 2 || knot_v.size() != k) throw ParameterError("spline needs at least two knots");
  // Second derivatives via the tridiagonal system (Thomas algorithm).
  std::vector<double> h(k - 1), m(k, 0.0);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    h[i] = knot_t[i + 1] - knot_t[i];
    if (!(h[i] > 0.0)) throw ParameterError("spline knots must be strictly increasing");
  }
  if (k > 2) {
    const std::size_t sz = k - 2;
    std::vector<double> diag(sz), upper(sz), rhs(sz);
    for (std::size_t i = 1; i + 1 < k; ++i) {
      diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
      upper[i - 1] = h[i];
      rhs[i - 1] = 6.0 * ((knot_v[i + 1] - knot_v[i]) / h[i] - (knot_v[i] - knot_v[i - 1]) / h[i - 1]);
    }
    for (std::size_t i = 1; i < sz; ++i) {
      const double w = h[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    m[sz] = rhs[sz - 1] / diag[sz - 1];
    for (std::size_t i = sz - 1; i >= 1; --i) m[i] = (rhs[i - 1] - upper[i - 1] * m[i + 1]) / diag[i - 1];
  }

  std::vector<double> out(n);
  std::size_t seg = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const double t = static_cast<double>(p);
    while (seg + 2 < k && t > knot_t[seg + 1]) ++seg;
    const double hi = h[seg];
    const double a = (knot_t[seg + 1] - t) / hi;
    const double b = (t - knot_t[seg]) / hi;
    out[p] = a * knot_v[seg] + b * knot_v[seg + 1] +
             ((a * a * a - a) * m[seg] + (b * b * b - b) * m[seg + 1]) * hi * hi / 6.0;
  }
  return out;
}

EmdResult emd(std::span<const double> x, const EmdOptions& options) {
  if (x.size() < 16)
    throw InsufficientDataError("emd: need at least 16 samples, got " + std::to_string(x.size()));
  const int max_imfs =
      options.max_imfs > 0 ? options.max_imfs : static_cast<int>(std::floor(std::log2(static_cast<double>(x.size()))));

  EmdResult out;
  out.residual.assign(x.begin(), x.end());
  while (static_cast<int>(out.imfs.size()) < max_imfs) {
    if (local_maxima(out.residual).empty() || local_minima(out.residual).empty()) break;

    std::vector<double> h = out.residual;
    for (int sift = 0; sift < options.max_sifts; ++sift) {
      const auto maxima = local_maxima(h);
      const auto minima = local_minima(h);
      if (maxima.empty() || minima.empty()) break;
      const auto upper = envelope(h, maxima);
      const auto lower = envelope(h, minima);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double mean = 0.5 * (upper[i] + lower[i]);
        num += mean * mean;
        den += h[i] * h[i];
        h[i] -= mean;
      }
      if (den == 0.0 || num / den < options.sd_threshold) break;
    }

    for (std::size_t i = 0; i < h.size(); ++i) out.residual[i] -= h[i];
    out.imfs.push_back(std::move(h));
  }
  return out;
}

}  // namespace fuzzeeg
