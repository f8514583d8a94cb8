#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fuzzeeg {

struct EmdOptions {
  double sd_threshold = 0.3;  // sifting stops when sum((h_prev - h)^2) / sum(h_prev^2) drops below this
  int max_sifts = 100;
  int max_imfs = 0;           // 0: floor(log2(N))
};

struct EmdResult {
  std::vector<std::vector<double>> imfs;  // highest frequency first
  std::vector<double> residual;
};

/// Indices of strict interior local maxima / minima (plateaus count once, at
/// their first sample).
std::vector<std::size_t> local_maxima(std::span<const double> x);
std::vector<std::size_t> local_minima(std::span<const double> x);

/// Natural cubic spline through (knot_t, knot_v) evaluated at 0..n-1.
/// Knots must be strictly increasing and at least two.
std::vector<double> natural_cubic_spline(std::span<const double> knot_t, std::span<const double> knot_v,
                                         std::size_t n);

/// Empirical mode decomposition by envelope-mean sifting. Envelopes are
/// natural cubic splines through the extrema plus one mirrored extremum at
/// each end. A series with fewer than one maximum and one minimum is returned
/// as the residual with no IMFs. Throws InsufficientDataError below 16 samples.
EmdResult emd(std::span<const double> x, const EmdOptions& options = {});

}  // namespace fuzzeeg
