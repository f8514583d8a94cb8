#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fuzzeeg::detail {

using cvec = std::vector<std::complex<double>>;

// Unitary DFT: X[k] = (1/sqrt(N)) sum_n x[n] e^{-2 pi i k n / N}.
cvec unitary_dft(std::span<const std::complex<double>> x);
cvec unitary_dft(std::span<const double> x);

// Inverse of unitary_dft.
cvec unitary_idft(std::span<const std::complex<double>> X);

}  // namespace fuzzeeg::detail
