#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzeeg {

/// Parameters shared by the fuzzy-entropy kernels. Each kernel reads only the
/// fields it needs; defaults are the ones used by the feature pipeline.
struct EntropyParams {
  int m = 2;            // embedding dimension
  double n = 2.0;       // fuzzy exponent of the membership exp(-d^n / r)
  double r_frac = 0.15; // tolerance as a fraction of the sample SD
  std::optional<double> r_abs;  // absolute tolerance; overrides r_frac when set

  int tau = 2;          // scale factor (MFuEn, RCMFuEn, IFuEn)
  double alpha = 0.5;   // fractional order (FFuEn), in (-1, 1)
  int pm = 3;           // permuted dimension (FuPeEn)
  int delay = 1;        // embedding delay (FuPeEn)
  int k_depth = 2;      // hierarchical layer (HFuEn)
  int k_seg = 8;        // segment count (MVMFuEn)
  int m_bins = 512;     // ePDF bins (FuDistEn)
  int shift = 1;        // symmetry-operator shift (AFuEn)

  // FuMeEn local / global similarity settings; tolerances are SD fractions.
  double n_local = 3.0;
  double r_local = 0.15;
  double n_global = 2.0;
  double r_global = 0.15;

  // IMF indices (0 = highest frequency) removed before IFuEn.
  std::vector<int> ifuen_drop = {0};

  /// Throws ParameterError on out-of-range fields.
  void validate() const;
};

/// A kernel output. Zero-variance or otherwise singular inputs yield value 0
/// with `degenerate` set instead of NaN/inf.
struct EntropyResult {
  double value = 0.0;
  bool degenerate = false;
};

struct AfuEnComponents {
  double translation = 0.0;
  double reflection = 0.0;
  double inversion = 0.0;
  double glide = 0.0;
  bool degenerate = false;
};

struct MeasureEntropy {
  double total = 0.0;
  double local = 0.0;
  double global = 0.0;
  bool degenerate = false;
};

// ---------------------------------------------------------------------------
// Helpers exposed for composition and tests.

/// Sample standard deviation (N - 1 denominator).
double sample_sd(std::span<const double> x);

/// r_abs if set, otherwise r_frac * sample_sd(x).
double effective_tolerance(std::span<const double> x, const EntropyParams& p);

/// Non-overlapping block means of size `tau`, starting at `offset`.
std::vector<double> coarse_grain(std::span<const double> x, int tau, std::size_t offset = 0);

/// Ordinal-pattern rank (1..pm!) of each delay-embedded row of `x`.
std::vector<double> ordinal_pattern_series(std::span<const double> x, int pm, int delay);

/// The 2^k components of layer k of the averaging / differencing hierarchy.
std::vector<std::vector<double>> hierarchical_components(std::span<const double> x, int k);

/// Signal rebuilt from all IMFs not listed in `drop`, plus the EMD residual.
std::vector<double> ifu_en_reconstruct(std::span<const double> x, const std::vector<int>& drop);

/// Per-segment MVMFuEn vector H_new / var(H_new); empty when degenerate.
std::vector<double> mvm_fu_en_profile(std::span<const double> x, int k_seg);

// ---------------------------------------------------------------------------
// Kernels. All throw InsufficientDataError when x is too short for the
// requested embedding.

EntropyResult fu_en(std::span<const double> x, const EntropyParams& p);
AfuEnComponents afu_en_components(std::span<const double> x, const EntropyParams& p);
EntropyResult afu_en(std::span<const double> x, const EntropyParams& p);
EntropyResult mfu_en(std::span<const double> x, const EntropyParams& p);
EntropyResult rcm_fu_en(std::span<const double> x, const EntropyParams& p);
EntropyResult ffu_en(std::span<const double> x, const EntropyParams& p);
EntropyResult fu_ap_en(std::span<const double> x, const EntropyParams& p);
EntropyResult mvm_fu_en(std::span<const double> x, const EntropyParams& p);
EntropyResult ifu_en(std::span<const double> x, const EntropyParams& p);
EntropyResult fu_dist_en(std::span<const double> x, const EntropyParams& p);

/// Cross fuzzy entropy of x against y. With `exclude_diagonal` the pair
/// (i, i) is skipped, which makes c_fu_en(x, x) coincide with fu_en(x).
EntropyResult c_fu_en(std::span<const double> x, std::span<const double> y, const EntropyParams& p,
                      bool exclude_diagonal = false);
EntropyResult fu_pe_en(std::span<const double> x, const EntropyParams& p);
EntropyResult h_fu_en(std::span<const double> x, const EntropyParams& p);
MeasureEntropy fu_me_en(std::span<const double> x, const EntropyParams& p);

// ---------------------------------------------------------------------------
// Registry.

enum class Kernel {
  FuEn,
  AFuEn,
  MFuEn,
  RcmFuEn,
  FFuEn,
  FuApEn,
  MvmFuEn,
  IFuEn,
  FuDistEn,
  CFuEn,
  FuPeEn,
  HFuEn,
  FuMeEn,
};

inline constexpr std::size_t kKernelCount = 13;
inline constexpr std::size_t kFeatureCount = 15;

const std::array<Kernel, kKernelCount>& all_kernels();
std::string_view kernel_id(Kernel k);
std::optional<Kernel> kernel_from_id(std::string_view id);

/// Single-series evaluation. CFuEn compares the first half of x with the
/// second half; FuMeEn reports the total.
EntropyResult compute_kernel(Kernel k, std::span<const double> x, const EntropyParams& p);

/// Column ids of the per-band feature set: the 13 kernels with FuMeEn split
/// into total / local / global.
const std::array<std::string_view, kFeatureCount>& feature_ids();

std::array<EntropyResult, kFeatureCount> compute_features(std::span<const double> x, const EntropyParams& p);

struct BenchmarkStats {
  Kernel kernel = Kernel::FuEn;
  std::size_t n = 0;
  int repeats = 0;
  double min_seconds = 0.0;
  double median_seconds = 0.0;
  double value = 0.0;
  bool deterministic = true;  // identical value on every repeat
};

/// Wall-clock timing of one kernel; one warm-up call is excluded and at
/// least three timed repeats are always run.
BenchmarkStats benchmark_entropy(Kernel k, std::span<const double> x, const EntropyParams& p, int repeats);

}  // namespace fuzzeeg
