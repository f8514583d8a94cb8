#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace fuzzeeg {

/// Tunable-Q wavelet transform parameters. The low-pass scaling factor xi
/// and the high-pass scaling factor gamma follow from Q and r:
///   gamma = 2 / (Q + 1),   xi = 1 - gamma / r.
struct TqwtParams {
  double q = 1.0;  // quality factor, >= 1
  double r = 3.0;  // redundancy, > 1
  int levels = 8;  // J

  double gamma() const { return 2.0 / (q + 1.0); }
  double xi() const { return 1.0 - gamma() / r; }

  /// Throws ParameterError if Q, r or J are outside the admissible range.
  void validate() const;

  /// floor(log(gamma * N / 8) / log(1 / xi)); may be <= 0 for short signals.
  int max_levels(std::size_t signal_length) const;
};

/// J + 1 coefficient sequences: bands[0] is the highest-frequency detail,
/// bands[J] the final low-pass approximation.
struct SubBandSet {
  std::vector<std::vector<double>> bands;
  TqwtParams params;
  std::size_t original_length = 0;
};

/// Daubechies-type transition response: cos^2(w/2) * sqrt(2 - cos w), |w| <= pi.
double daubechies_response(double omega);

/// Frequency responses of the two-channel analysis filter bank on `omega`
/// (radians, |omega| <= pi). Returns {H0, H1}.
std::pair<std::vector<double>, std::vector<double>> analysis_filters(
    const TqwtParams& params, std::span<const double> omega);

/// Sub-band lengths {high-pass N1, low-pass N0} produced at level `level`
/// (1-based) for an even input length `n`.
std::pair<std::size_t, std::size_t> level_lengths(const TqwtParams& params, std::size_t n, int level);

/// Odd-length frames are zero-padded by one sample; synthesize trims it.
SubBandSet decompose(std::span<const double> frame, const TqwtParams& params);

std::vector<double> synthesize(const SubBandSet& subbands);

/// One row per band ("band index, coefficients...") after a '#' metadata line
/// carrying Q, r, J and the original length.
void write_subbands_csv(const std::filesystem::path& path, const SubBandSet& subbands);
SubBandSet read_subbands_csv(const std::filesystem::path& path);

}  // namespace fuzzeeg
