#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace fuzzeeg::detail {
namespace {

// fftw_plan_* and fftw_destroy_plan are not thread-safe; fftw_execute is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

cvec transform(std::span<const std::complex<double>> in, int sign) {
  const int n = static_cast<int>(in.size());
  cvec out(in.size());
  if (n == 0) return out;
  cvec buffer(in.begin(), in.end());
  auto* src = reinterpret_cast<fftw_complex*>(buffer.data());
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, src, dst, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace

cvec unitary_dft(std::span<const std::complex<double>> x) { return transform(x, FFTW_FORWARD); }

cvec unitary_dft(std::span<const double> x) {
  cvec tmp(x.begin(), x.end());
  return transform(tmp, FFTW_FORWARD);
}

cvec unitary_idft(std::span<const std::complex<double>> X) { return transform(X, FFTW_BACKWARD); }

}  // namespace fuzzeeg::detail
