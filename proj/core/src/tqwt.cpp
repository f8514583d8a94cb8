#include "fuzzeeg/tqwt.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "fft.hpp"
#include "fuzzeeg/csv.hpp"
#include "fuzzeeg/error.hpp"

namespace fuzzeeg {
namespace {

using detail::cvec;
constexpr double kPi = std::numbers::pi;

std::size_t even_round(double v) { return 2 * static_cast<std::size_t>(std::llround(v / 2.0)); }

// trans[k - 1] = lambda(k pi / (T + 1)), k = 1..T
std::vector<double> transition(std::ptrdiff_t t) {
  std::vector<double> trans(static_cast<std::size_t>(t));
  for (std::ptrdiff_t k = 1; k <= t; ++k)
    trans[static_cast<std::size_t>(k - 1)] = daubechies_response(static_cast<double>(k) * kPi / static_cast<double>(t + 1));
  return trans;
}

struct Split {
  std::ptrdiff_t p, t, s;
};

Split split_sizes(std::size_t n, std::size_t n0, std::size_t n1) {
  const auto N = static_cast<std::ptrdiff_t>(n);
  const auto N0 = static_cast<std::ptrdiff_t>(n0);
  const auto N1 = static_cast<std::ptrdiff_t>(n1);
  Split sp{(N - N1) / 2, (N0 + N1 - N) / 2 - 1, (N - N0) / 2};
  if (sp.p < 0 || sp.t < 0 || sp.s < 0 || N0 < 2 || N1 < 2)
    throw ParameterError("filter bank split is degenerate for length " + std::to_string(n));
  return sp;
}

// Two-channel analysis filter bank with rational resampling in the DFT domain.
std::pair<cvec, cvec> analysis_bank(const cvec& X, std::size_t n0, std::size_t n1) {
  const std::size_t n = X.size();
  const auto [P, T, S] = split_sizes(n, n0, n1);
  const auto trans = transition(T);
  auto tr = [&](std::ptrdiff_t k) { return trans[static_cast<std::size_t>(k - 1)]; };
  auto x = [&](std::ptrdiff_t i) { return X[static_cast<std::size_t>(i)]; };
  const auto N = static_cast<std::ptrdiff_t>(n);
  const auto N0 = static_cast<std::ptrdiff_t>(n0);
  const auto N1 = static_cast<std::ptrdiff_t>(n1);

  cvec v0(n0), v1(n1);
  v0[0] = X[0];
  for (std::ptrdiff_t k = 1; k <= P; ++k) v0[static_cast<std::size_t>(k)] = x(k);
  for (std::ptrdiff_t k = 1; k <= T; ++k) v0[static_cast<std::size_t>(P + k)] = x(P + k) * tr(k);
  v0[n0 / 2] = 0.0;
  for (std::ptrdiff_t k = 1; k <= T; ++k) v0[static_cast<std::size_t>(N0 - P - k)] = x(N - P - k) * tr(k);
  for (std::ptrdiff_t k = 1; k <= P; ++k) v0[static_cast<std::size_t>(N0 - k)] = x(N - k);

  v1[0] = 0.0;
  for (std::ptrdiff_t k = 1; k <= T; ++k) v1[static_cast<std::size_t>(k)] = x(P + k) * tr(T + 1 - k);
  for (std::ptrdiff_t k = 1; k <= S; ++k) v1[static_cast<std::size_t>(T + k)] = x(P + T + k);
  v1[n1 / 2] = x(N / 2);
  for (std::ptrdiff_t k = 1; k <= S; ++k) v1[static_cast<std::size_t>(N1 - T - k)] = x(N - P - T - k);
  for (std::ptrdiff_t k = 1; k <= T; ++k) v1[static_cast<std::size_t>(N1 - k)] = x(N - P - k) * tr(T + 1 - k);
  return {std::move(v0), std::move(v1)};
}

cvec synthesis_bank(const cvec& V0, const cvec& V1, std::size_t n) {
  const std::size_t n0 = V0.size(), n1 = V1.size();
  const auto [P, T, S] = split_sizes(n, n0, n1);
  const auto trans = transition(T);
  auto tr = [&](std::ptrdiff_t k) { return trans[static_cast<std::size_t>(k - 1)]; };
  auto v0 = [&](std::ptrdiff_t i) { return V0[static_cast<std::size_t>(i)]; };
  auto v1 = [&](std::ptrdiff_t i) { return V1[static_cast<std::size_t>(i)]; };
  const auto N = static_cast<std::ptrdiff_t>(n);
  const auto N0 = static_cast<std::ptrdiff_t>(n0);
  const auto N1 = static_cast<std::ptrdiff_t>(n1);

  cvec y(n, 0.0);
  auto at = [&](std::ptrdiff_t i) -> std::complex<double>& { return y[static_cast<std::size_t>(i)]; };
  at(0) += v0(0);
  for (std::ptrdiff_t k = 1; k <= P; ++k) at(k) += v0(k);
  for (std::ptrdiff_t k = 1; k <= T; ++k) at(P + k) += v0(P + k) * tr(k);
  for (std::ptrdiff_t k = 1; k <= T; ++k) at(N - P - k) += v0(N0 - P - k) * tr(k);
  for (std::ptrdiff_t k = 1; k <= P; ++k) at(N - k) += v0(N0 - k);

  for (std::ptrdiff_t k = 1; k <= T; ++k) at(P + k) += v1(k) * tr(T + 1 - k);
  for (std::ptrdiff_t k = 1; k <= S; ++k) at(P + T + k) += v1(T + k);
  at(N / 2) += v1(N1 / 2);
  for (std::ptrdiff_t k = 1; k <= S; ++k) at(N - P - T - k) += v1(N1 - T - k);
  for (std::ptrdiff_t k = 1; k <= T; ++k) at(N - P - k) += v1(N1 - k) * tr(T + 1 - k);
  return y;
}

std::vector<double> real_part(const cvec& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

std::size_t padded_length(std::size_t n) { return n + (n % 2); }

}  // namespace

void TqwtParams::validate() const {
  if (!(q >= 1.0)) throw ParameterError("TQWT quality factor Q must be >= 1");
  if (!(r > 1.0)) throw ParameterError("TQWT redundancy r must be > 1");
  if (levels < 1) throw ParameterError("TQWT level count J must be >= 1");
  const double g = gamma(), x = xi();
  if (!(x > 0.0 && x < 1.0 && g > 0.0 && g <= 1.0 && x + g > 1.0))
    throw ParameterError("TQWT scaling factors violate 0<xi<1, 0<gamma<=1, xi+gamma>1");
}

int TqwtParams::max_levels(std::size_t signal_length) const {
  const double arg = gamma() * static_cast<double>(signal_length) / 8.0;
  if (arg <= 1.0) return 0;
  return static_cast<int>(std::floor(std::log(arg) / std::log(1.0 / xi())));
}

double daubechies_response(double omega) {
  const double c = std::cos(omega);
  return 0.5 * (1.0 + c) * std::sqrt(2.0 - c);
}

std::pair<std::vector<double>, std::vector<double>> analysis_filters(
    const TqwtParams& params, std::span<const double> omega) {
  params.validate();
  const double g = params.gamma(), x = params.xi();
  const double lo = (1.0 - g) * kPi, hi = x * kPi, width = x + g - 1.0;
  std::vector<double> h0(omega.size()), h1(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double w = std::abs(omega[i]);
    if (w < lo) {
      h0[i] = 1.0;
      h1[i] = 0.0;
    } else if (w < hi) {
      h0[i] = daubechies_response((w + (g - 1.0) * kPi) / width);
      h1[i] = daubechies_response((hi - w) / width);
    } else {
      h0[i] = 0.0;
      h1[i] = 1.0;
    }
  }
  return {std::move(h0), std::move(h1)};
}

std::pair<std::size_t, std::size_t> level_lengths(const TqwtParams& params, std::size_t n, int level) {
  const double g = params.gamma(), x = params.xi();
  const double nn = static_cast<double>(n);
  const std::size_t n0 = even_round(std::pow(x, level) * nn);
  const std::size_t n1 = even_round(g * std::pow(x, level - 1) * nn);
  return {n1, n0};
}

SubBandSet decompose(std::span<const double> frame, const TqwtParams& params) {
  params.validate();
  if (frame.empty()) throw EmptyInputError("cannot decompose an empty frame");
  const std::size_t n = padded_length(frame.size());
  const int jmax = params.max_levels(n);
  if (params.levels > jmax)
    throw ParameterError("J = " + std::to_string(params.levels) + " exceeds J_max = " +
                         std::to_string(jmax) + " for length " + std::to_string(n));

  std::vector<double> padded(frame.begin(), frame.end());
  padded.resize(n, 0.0);

  SubBandSet out;
  out.params = params;
  out.original_length = frame.size();
  out.bands.reserve(static_cast<std::size_t>(params.levels) + 1);

  cvec X = detail::unitary_dft(std::span<const double>(padded));
  for (int j = 1; j <= params.levels; ++j) {
    const auto [n1, n0] = level_lengths(params, n, j);
    auto [low, high] = analysis_bank(X, n0, n1);
    out.bands.push_back(real_part(detail::unitary_idft(high)));
    X = std::move(low);
  }
  out.bands.push_back(real_part(detail::unitary_idft(X)));
  return out;
}

std::vector<double> synthesize(const SubBandSet& subbands) {
  const auto& params = subbands.params;
  params.validate();
  const std::size_t levels = static_cast<std::size_t>(params.levels);
  if (subbands.bands.size() != levels + 1)
    throw StructuralError("expected " + std::to_string(levels + 1) + " bands, got " +
                          std::to_string(subbands.bands.size()));
  const std::size_t n = padded_length(subbands.original_length);
  if (params.levels > params.max_levels(n))
    throw StructuralError("band set parameters exceed J_max for its original length");
  for (int j = 1; j <= params.levels; ++j) {
    const auto [n1, n0] = level_lengths(params, n, j);
    if (subbands.bands[static_cast<std::size_t>(j - 1)].size() != n1 ||
        (j == params.levels && subbands.bands.back().size() != n0))
      throw StructuralError("band " + std::to_string(j) + " length does not match the parameters");
  }

  cvec Y = detail::unitary_dft(std::span<const double>(subbands.bands.back()));
  for (int j = params.levels; j >= 1; --j) {
    const cvec W = detail::unitary_dft(std::span<const double>(subbands.bands[static_cast<std::size_t>(j - 1)]));
    const std::size_t m = even_round(std::pow(params.xi(), j - 1) * static_cast<double>(n));
    Y = synthesis_bank(Y, W, m);
  }
  auto y = real_part(detail::unitary_idft(Y));
  y.resize(subbands.original_length);
  return y;
}

void write_subbands_csv(const std::filesystem::path& path, const SubBandSet& subbands) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  const auto& p = subbands.params;
  out << "# Q=" << format_double(p.q) << " r=" << format_double(p.r) << " J=" << p.levels
      << " original_length=" << subbands.original_length << '\n';
  for (std::size_t b = 0; b < subbands.bands.size(); ++b) {
    out << (b + 1);
    for (double v : subbands.bands[b]) out << ',' << format_double(v);
    out << '\n';
  }
}

SubBandSet read_subbands_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  SubBandSet out;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw FormatError(path.string(), 1, "missing metadata line");
  {
    std::istringstream meta(line.substr(2));
    std::string kv;
    while (meta >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const auto key = kv.substr(0, eq);
      const auto value = kv.substr(eq + 1);
      if (key == "Q") out.params.q = std::stod(value);
      else if (key == "r") out.params.r = std::stod(value);
      else if (key == "J") out.params.levels = std::stoi(value);
      else if (key == "original_length") out.original_length = std::stoul(value);
    }
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');  // band index
    std::vector<double> band;
    while (std::getline(row, cell, ',')) {
      try {
        band.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw FormatError(path.string(), line_no, "bad coefficient '" + cell + "'");
      }
    }
    out.bands.push_back(std::move(band));
  }
  return out;
}

}  // namespace fuzzeeg
