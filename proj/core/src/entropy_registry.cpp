#include <algorithm>
#include <chrono>
#include <vector>

#include "fuzzeeg/entropy.hpp"

namespace fuzzeeg {
namespace {

constexpr std::array<std::string_view, kKernelCount> kIds = {
    "fu_en",      "afu_en",  "mfu_en", "rcm_fu_en", "ffu_en",  "fu_ap_en", "mvm_fu_en",
    "ifu_en",     "fu_dist_en", "c_fu_en", "fu_pe_en", "h_fu_en", "fu_me_en",
};

}  // namespace

const std::array<Kernel, kKernelCount>& all_kernels() {
  static const std::array<Kernel, kKernelCount> kernels = {
      Kernel::FuEn,    Kernel::AFuEn,    Kernel::MFuEn, Kernel::RcmFuEn, Kernel::FFuEn,
      Kernel::FuApEn,  Kernel::MvmFuEn,  Kernel::IFuEn, Kernel::FuDistEn, Kernel::CFuEn,
      Kernel::FuPeEn,  Kernel::HFuEn,    Kernel::FuMeEn,
  };
  return kernels;
}

std::string_view kernel_id(Kernel k) { return kIds[static_cast<std::size_t>(k)]; }

std::optional<Kernel> kernel_from_id(std::string_view id) {
  for (std::size_t i = 0; i < kIds.size(); ++i)
    if (kIds[i] == id) return all_kernels()[i];
  return std::nullopt;
}

EntropyResult compute_kernel(Kernel k, std::span<const double> x, const EntropyParams& p) {
  switch (k) {
    case Kernel::FuEn: return fu_en(x, p);
    case Kernel::AFuEn: return afu_en(x, p);
    case Kernel::MFuEn: return mfu_en(x, p);
    case Kernel::RcmFuEn: return rcm_fu_en(x, p);
    case Kernel::FFuEn: return ffu_en(x, p);
    case Kernel::FuApEn: return fu_ap_en(x, p);
    case Kernel::MvmFuEn: return mvm_fu_en(x, p);
    case Kernel::IFuEn: return ifu_en(x, p);
    case Kernel::FuDistEn: return fu_dist_en(x, p);
    case Kernel::CFuEn: {
      const std::size_t half = x.size() / 2;
      return c_fu_en(x.first(half), x.subspan(half, half), p);
    }
    case Kernel::FuPeEn: return fu_pe_en(x, p);
    case Kernel::HFuEn: return h_fu_en(x, p);
    case Kernel::FuMeEn: {
      const MeasureEntropy me = fu_me_en(x, p);
      return {me.total, me.degenerate};
    }
  }
  return {};
}

const std::array<std::string_view, kFeatureCount>& feature_ids() {
  static const std::array<std::string_view, kFeatureCount> ids = [] {
    std::array<std::string_view, kFeatureCount> out{};
    for (std::size_t i = 0; i < kKernelCount; ++i) out[i] = kIds[i];
    out[kKernelCount] = "fu_me_en_local";
    out[kKernelCount + 1] = "fu_me_en_global";
    return out;
  }();
  return ids;
}

std::array<EntropyResult, kFeatureCount> compute_features(std::span<const double> x, const EntropyParams& p) {
  std::array<EntropyResult, kFeatureCount> out{};
  for (std::size_t i = 0; i < kKernelCount; ++i) {
    const Kernel k = all_kernels()[i];
    if (k == Kernel::FuMeEn) {
      const MeasureEntropy me = fu_me_en(x, p);
      out[i] = {me.total, me.degenerate};
      out[kKernelCount] = {me.local, me.degenerate};
      out[kKernelCount + 1] = {me.global, me.degenerate};
    } else {
      out[i] = compute_kernel(k, x, p);
    }
  }
  return out;
}

BenchmarkStats benchmark_entropy(Kernel k, std::span<const double> x, const EntropyParams& p, int repeats) {
  using clock = std::chrono::steady_clock;
  BenchmarkStats stats;
  stats.kernel = k;
  stats.n = x.size();
  stats.repeats = std::max(3, repeats);
  stats.value = compute_kernel(k, x, p).value;
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(stats.repeats));
  for (int i = 0; i < stats.repeats; ++i) {
    const auto t0 = clock::now();
    const EntropyResult r = compute_kernel(k, x, p);
    times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    if (r.value != stats.value) stats.deterministic = false;
  }
  std::sort(times.begin(), times.end());
  stats.min_seconds = times.front();
  const std::size_t mid = times.size() / 2;
  stats.median_seconds = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
  return stats;
}

}  // namespace fuzzeeg
