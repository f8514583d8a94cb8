#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>

#include "entropy_detail.hpp"
#include "fuzzeeg/emd.hpp"
#include "fuzzeeg/entropy.hpp"
#include "fuzzeeg/error.hpp"

namespace fuzzeeg {

using detail::Baseline;
using detail::PhiPair;
using detail::Templates;

namespace {

constexpr EntropyResult kDegenerate{0.0, true};

std::size_t dim_of(const EntropyParams& p) { return static_cast<std::size_t>(p.m); }

EntropyResult from_phi(const PhiPair& phi) {
  double v = 0.0;
  if (!detail::log_ratio(phi, v)) return kDegenerate;
  return {v, false};
}

// FuEn with an externally supplied tolerance.
EntropyResult fu_en_with_r(std::span<const double> x, int m, double n, double r) {
  if (!(r > 0.0)) return kDegenerate;
  return from_phi(detail::fuzzy_phi(x, m, n, r));
}

enum class Operator { Translation, Reflection, Inversion, Glide };

// phi_k for one symmetry operator: template i against the operated template j,
// with comparison indices wrapped modulo the template count.
double afu_phi(const Templates& t, Operator op, std::size_t shift, double n, double r) {
  const std::size_t count = t.count;
  const bool negate = op == Operator::Inversion || op == Operator::Glide;
  const bool reflect = op == Operator::Reflection || op == Operator::Inversion;
  const std::size_t s = shift % count;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double* a = t.row(i);
    double row = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      const std::size_t k = reflect ? (s + count - j) % count : (j + s) % count;
      const double d = negate ? detail::chebyshev_negated(a, t.row(k), t.dim) : detail::chebyshev(a, t.row(k), t.dim);
      row += detail::membership(d, n, r);
    }
    sum += row;
  }
  const double c = static_cast<double>(count);
  return sum / (c * (c - 1.0));
}

// Fuzzy ApEn phi: mean of ln C(i) over the N - dim + 1 templates.
bool fu_ap_phi(std::span<const double> x, std::size_t dim, double n, double r, double& out) {
  const std::size_t count = x.size() - dim + 1;
  const Templates t = detail::make_templates(x, dim, count);
  std::vector<double> c(count, 0.0);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const double d = detail::membership(detail::chebyshev(t.row(i), t.row(j), dim), n, r);
      c[i] += d;
      c[j] += d;
    }
  }
  double acc = 0.0;
  for (double ci : c) {
    if (!(ci > 0.0)) return false;
    acc += std::log(ci / static_cast<double>(count));
  }
  out = acc / static_cast<double>(count);
  return std::isfinite(out);
}

double binary_entropy_term(double psi) {
  double h = 0.0;
  if (psi > 0.0) h += psi * std::log(psi);
  if (psi < 1.0) h += (1.0 - psi) * std::log(1.0 - psi);
  return h;
}

}  // namespace

EntropyResult fu_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  detail::require_length(x.size(), dim_of(p) + 2, "fu_en");
  if (sample_sd(x) == 0.0) return kDegenerate;
  return fu_en_with_r(x, p.m, p.n, effective_tolerance(x, p));
}

AfuEnComponents afu_en_components(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  const std::size_t dim = dim_of(p);
  detail::require_length(x.size(), dim + static_cast<std::size_t>(p.shift) + 2, "afu_en");
  AfuEnComponents out;
  const double r = effective_tolerance(x, p);
  if (sample_sd(x) == 0.0 || !(r > 0.0)) {
    out.degenerate = true;
    return out;
  }
  const std::size_t count = x.size() - dim;
  const Templates tm = detail::make_templates(x, dim, count);
  const Templates tm1 = detail::make_templates(x, dim + 1, count);
  const std::size_t s = static_cast<std::size_t>(p.shift);
  const Operator ops[] = {Operator::Translation, Operator::Reflection, Operator::Inversion, Operator::Glide};
  double* slots[] = {&out.translation, &out.reflection, &out.inversion, &out.glide};
  for (int k = 0; k < 4; ++k) {
    const PhiPair phi{afu_phi(tm, ops[k], s, p.n, r), afu_phi(tm1, ops[k], s, p.n, r)};
    double v = 0.0;
    if (!detail::log_ratio(phi, v)) {
      out = AfuEnComponents{};
      out.degenerate = true;
      return out;
    }
    *slots[k] = v;
  }
  return out;
}

EntropyResult afu_en(std::span<const double> x, const EntropyParams& p) {
  const AfuEnComponents c = afu_en_components(x, p);
  if (c.degenerate) return kDegenerate;
  return {(c.translation + c.reflection + c.inversion + c.glide) / 4.0, false};
}

EntropyResult mfu_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  const std::size_t tau = static_cast<std::size_t>(p.tau);
  detail::require_length(x.size() / tau, dim_of(p) + 2, "mfu_en (coarse-grained)");
  if (sample_sd(x) == 0.0) return kDegenerate;
  const std::vector<double> y = coarse_grain(x, p.tau);
  return fu_en_with_r(y, p.m, p.n, effective_tolerance(x, p));
}

EntropyResult rcm_fu_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  const std::size_t tau = static_cast<std::size_t>(p.tau);
  const std::size_t shortest = x.size() + 1 >= tau ? (x.size() + 1 - tau) / tau : 0;
  detail::require_length(shortest, dim_of(p) + 2, "rcm_fu_en (coarse-grained)");
  if (sample_sd(x) == 0.0) return kDegenerate;
  const double r = effective_tolerance(x, p);
  if (!(r > 0.0)) return kDegenerate;
  PhiPair mean;
  for (std::size_t k = 0; k < tau; ++k) {
    const std::vector<double> y = coarse_grain(x, p.tau, k);
    const PhiPair phi = detail::fuzzy_phi(y, p.m, p.n, r);
    mean.m += phi.m;
    mean.m1 += phi.m1;
  }
  mean.m /= static_cast<double>(tau);
  mean.m1 /= static_cast<double>(tau);
  return from_phi(mean);
}

EntropyResult ffu_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  detail::require_length(x.size(), dim_of(p) + 2, "ffu_en");
  if (sample_sd(x) == 0.0) return kDegenerate;
  const double r = effective_tolerance(x, p);
  if (!(r > 0.0)) return kDegenerate;
  const PhiPair phi = detail::fuzzy_phi(x, p.m, p.n, r);
  if (!(phi.m > 0.0) || !(phi.m1 > 0.0)) return kDegenerate;
  const double q = phi.m1 / phi.m;
  const double a = p.alpha;
  const double psi_diff = boost::math::digamma(1.0) - boost::math::digamma(1.0 - a);
  const double v = -std::pow(q, -a) * (std::log(q) + psi_diff) / std::tgamma(1.0 + a);
  if (!std::isfinite(v)) return kDegenerate;
  return {v, false};
}

EntropyResult fu_ap_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  const std::size_t dim = dim_of(p);
  detail::require_length(x.size(), dim + 2, "fu_ap_en");
  if (sample_sd(x) == 0.0) return kDegenerate;
  const double r = effective_tolerance(x, p);
  if (!(r > 0.0)) return kDegenerate;
  double phi_m = 0.0, phi_m1 = 0.0;
  if (!fu_ap_phi(x, dim, p.n, r, phi_m) || !fu_ap_phi(x, dim + 1, p.n, r, phi_m1)) return kDegenerate;
  return {phi_m - phi_m1, false};
}

std::vector<double> mvm_fu_en_profile(std::span<const double> x, int k_seg) {
  if (k_seg < 2) throw ParameterError("mvm_fu_en: k_seg must be >= 2");
  const std::size_t k = static_cast<std::size_t>(k_seg);
  const std::size_t len = x.size() / k;
  if (len == 0) return {};
  std::vector<double> h(k);
  for (std::size_t s = 0; s < k; ++s) {
    const auto seg = x.subspan(s * len, len);
    double energy = 0.0;
    for (double v : seg) energy += v * v;
    if (!(energy > 0.0)) return {};
    double acc = 0.0;
    for (double v : seg) acc += binary_entropy_term(v * v / energy);
    h[s] = -acc / static_cast<double>(len);
  }
  const double hmin = *std::min_element(h.begin(), h.end());
  if (!(hmin > 0.0)) return {};
  for (double& v : h) v /= hmin;
  const double mean = std::accumulate(h.begin(), h.end(), 0.0) / static_cast<double>(k);
  double var = 0.0;
  for (double v : h) var += (v - mean) * (v - mean);
  var /= static_cast<double>(k);
  if (!(var > 1e-20 * mean * mean)) return {};
  for (double& v : h) v /= var;
  return h;
}

EntropyResult mvm_fu_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  detail::require_length(x.size(), static_cast<std::size_t>(p.k_seg) * 4, "mvm_fu_en");
  const std::vector<double> profile = mvm_fu_en_profile(x, p.k_seg);
  if (profile.empty()) return kDegenerate;
  const double v = std::accumulate(profile.begin(), profile.end(), 0.0) / static_cast<double>(profile.size());
  if (!std::isfinite(v)) return kDegenerate;
  return {v, false};
}

std::vector<double> ifu_en_reconstruct(std::span<const double> x, const std::vector<int>& drop) {
  const EmdResult d = emd(x);
  std::vector<double> out = d.residual;
  for (std::size_t k = 0; k < d.imfs.size(); ++k) {
    if (std::find(drop.begin(), drop.end(), static_cast<int>(k)) != drop.end()) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d.imfs[k][i];
  }
  return out;
}

EntropyResult ifu_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  const std::size_t tau = static_cast<std::size_t>(p.tau);
  detail::require_length(x.size(), std::max<std::size_t>(16, tau * (dim_of(p) + 2)), "ifu_en");
  if (sample_sd(x) == 0.0) return kDegenerate;
  const std::vector<double> xhat = ifu_en_reconstruct(x, p.ifuen_drop);
  if (sample_sd(xhat) == 0.0) return kDegenerate;
  return mfu_en(xhat, p);
}

EntropyResult fu_dist_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  const std::size_t dim = dim_of(p);
  detail::require_length(x.size(), dim + 2, "fu_dist_en");
  if (sample_sd(x) == 0.0) return kDegenerate;
  const double r = effective_tolerance(x, p);
  if (!(r > 0.0)) return kDegenerate;
  const std::size_t count = x.size() - dim + 1;
  const Templates t = detail::make_templates(x, dim, count);
  const std::size_t bins = static_cast<std::size_t>(p.m_bins);
  std::vector<std::size_t> hist(bins, 0);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double* a = t.row(i);
    for (std::size_t j = i + 1; j < count; ++j) {
      const double d = detail::membership(detail::chebyshev(a, t.row(j), dim), p.n, r);
      hist[std::min(bins - 1, static_cast<std::size_t>(d * static_cast<double>(bins)))] += 1;
    }
  }
  const double total = static_cast<double>(count) * static_cast<double>(count - 1) / 2.0;
  double h = 0.0;
  for (std::size_t c : hist) {
    if (c == 0) continue;
    const double pt = static_cast<double>(c) / total;
    h -= pt * std::log2(pt);
  }
  return {h / std::log2(static_cast<double>(bins)), false};
}

EntropyResult c_fu_en(std::span<const double> x, std::span<const double> y, const EntropyParams& p,
                      bool exclude_diagonal) {
  p.validate();
  const std::size_t dim = dim_of(p);
  detail::require_length(std::min(x.size(), y.size()), dim + 2, "c_fu_en");
  if (exclude_diagonal && x.size() != y.size())
    throw ParameterError("c_fu_en: diagonal exclusion needs equal-length series");
  const double sx = sample_sd(x), sy = sample_sd(y);
  if (sx == 0.0 && sy == 0.0) return kDegenerate;
  const double r = p.r_abs ? *p.r_abs : p.r_frac * 0.5 * (sx + sy);
  if (!(r > 0.0)) return kDegenerate;
  const std::size_t cx = x.size() - dim, cy = y.size() - dim;
  PhiPair phi;
  phi.m = detail::phi_cross(detail::make_templates(x, dim, cx), detail::make_templates(y, dim, cy), p.n, r,
                            exclude_diagonal);
  phi.m1 = detail::phi_cross(detail::make_templates(x, dim + 1, cx), detail::make_templates(y, dim + 1, cy), p.n,
                             r, exclude_diagonal);
  return from_phi(phi);
}

EntropyResult fu_pe_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  const std::size_t span_len = static_cast<std::size_t>(p.pm - 1) * static_cast<std::size_t>(p.delay);
  detail::require_length(x.size(), span_len + dim_of(p) + 2, "fu_pe_en");
  if (sample_sd(x) == 0.0) return kDegenerate;
  const std::vector<double> u = ordinal_pattern_series(x, p.pm, p.delay);
  if (sample_sd(u) == 0.0) return {0.0, false};
  return fu_en_with_r(u, p.m, p.n, effective_tolerance(u, p));
}

EntropyResult h_fu_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  const std::size_t layer = std::size_t{1} << p.k_depth;
  detail::require_length(x.size(), layer * (dim_of(p) + 2), "h_fu_en");
  if (sample_sd(x) == 0.0) return kDegenerate;
  const double r = effective_tolerance(x, p);
  if (!(r > 0.0)) return kDegenerate;
  const auto comps = hierarchical_components(x, p.k_depth);
  double acc = 0.0;
  for (const auto& u : comps) {
    const EntropyResult e = fu_en_with_r(u, p.m, p.n, r);
    if (e.degenerate) return kDegenerate;
    acc += e.value;
  }
  return {acc / static_cast<double>(comps.size()), false};
}

MeasureEntropy fu_me_en(std::span<const double> x, const EntropyParams& p) {
  p.validate();
  detail::require_length(x.size(), dim_of(p) + 2, "fu_me_en");
  MeasureEntropy out;
  const double sd = sample_sd(x);
  if (sd == 0.0) {
    out.degenerate = true;
    return out;
  }
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double local = 0.0, global = 0.0;
  const bool ok =
      detail::log_ratio(detail::fuzzy_phi(x, p.m, p.n_local, p.r_local * sd, Baseline::LocalMean), local) &&
      detail::log_ratio(detail::fuzzy_phi(x, p.m, p.n_global, p.r_global * sd, Baseline::Global, mean), global);
  if (!ok) {
    out.degenerate = true;
    return out;
  }
  out.local = local;
  out.global = global;
  out.total = local + global;
  return out;
}

}  // namespace fuzzeeg
