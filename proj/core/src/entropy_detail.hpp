#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fuzzeeg::detail {

// Row-major block of `count` embedding vectors of length `dim`.
struct Templates {
  std::vector<double> data;
  std::size_t count = 0;
  std::size_t dim = 0;

  const double* row(std::size_t i) const { return data.data() + i * dim; }
};

enum class Baseline { LocalMean, Global };

// Vectors x[i..i+dim) for i < count. LocalMean subtracts each vector's own
// mean; Global subtracts `global_mean` from every element.
Templates make_templates(std::span<const double> x, std::size_t dim, std::size_t count,
                         Baseline baseline = Baseline::LocalMean, double global_mean = 0.0);

inline double chebyshev(const double* a, const double* b, std::size_t dim) {
  double d = 0.0;
  for (std::size_t k = 0; k < dim; ++k) d = std::fmax(d, std::fabs(a[k] - b[k]));
  return d;
}

// Chebyshev distance between a and -b.
inline double chebyshev_negated(const double* a, const double* b, std::size_t dim) {
  double d = 0.0;
  for (std::size_t k = 0; k < dim; ++k) d = std::fmax(d, std::fabs(a[k] + b[k]));
  return d;
}

// exp(-d^n / r) with the common integer exponents unrolled.
inline double membership(double d, double n, double r) {
  double dn;
  if (n == 2.0) dn = d * d;
  else if (n == 1.0) dn = d;
  else if (n == 3.0) dn = d * d * d;
  else dn = std::pow(d, n);
  return std::exp(-dn / r);
}

// Mean similarity over ordered pairs i != j of one template set.
double phi_self(const Templates& t, double n, double r);

// Mean similarity over all pairs (i, j) of two template sets; with
// exclude_diagonal the (i, i) pairs are skipped (requires equal counts).
double phi_cross(const Templates& a, const Templates& b, double n, double r, bool exclude_diagonal);

struct PhiPair {
  double m = 0.0;
  double m1 = 0.0;
};

// phi^m and phi^{m+1} of the standard fuzzy entropy: N - m local-mean
// templates in both dimensions.
PhiPair fuzzy_phi(std::span<const double> x, int m, double n, double r,
                  Baseline baseline = Baseline::LocalMean, double global_mean = 0.0);

// ln(phi_m) - ln(phi_m1), or nothing if either phi is not strictly positive.
bool log_ratio(const PhiPair& phi, double& out);

void require_length(std::size_t n, std::size_t needed, const char* kernel);

}  // namespace fuzzeeg::detail
