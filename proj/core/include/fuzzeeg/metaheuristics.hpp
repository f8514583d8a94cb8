#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fuzzeeg {

using CostFunction = std::function<double(std::span<const double>)>;

struct PsoParams {
  double c1 = 2.0;
  double c2 = 2.0;
  double w = 0.2;
  double velocity_limit = 0.2;  // fraction of each dimension's range
};

struct BsParams {
  double w1 = 1.8;            // acceleration sum, split evenly between the two pulls
  double k1 = 2.0;            // mutation scale multiplier
  double w = 0.2;             // inertia
  double ga_fraction = 0.5;   // share of the population refilled by the GA each iteration
  double mutation_rate = 0.05;
  double mutation_sigma = 0.05;  // sigma = mutation_sigma * k1 * range
};

struct GoaParams {
  double c_min = 0.00004;
  double c_max = 1.0;
  double f = 0.5;  // attraction intensity
  double l = 1.5;  // attractive length scale
};

struct SwarmConfig {
  int n_pop = 60;
  int max_iter = 400;
  std::vector<double> lower;
  std::vector<double> upper;
  PsoParams pso;
  BsParams bs;
  GoaParams goa;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> initial;  // seeds particle 0 when set
  int threads = 1;                             // cost evaluations per iteration

  /// Throws ParameterError on bad sizes, inverted bounds or rates.
  void validate(std::size_t dim) const;
};

struct OptResult {
  std::vector<double> best;
  double best_cost = 0.0;
  std::vector<double> trace;  // best cost after initialization, then after each iteration
  std::size_t evaluations = 0;
  std::size_t non_finite = 0;  // cost values that were NaN and counted as +inf
};

enum class Optimizer { Pso, Goa, Bs };

std::string_view optimizer_id(Optimizer o);
std::optional<Optimizer> optimizer_from_id(std::string_view id);

OptResult pso_minimize(const CostFunction& cost, std::size_t dim, const SwarmConfig& cfg);
OptResult goa_minimize(const CostFunction& cost, std::size_t dim, const SwarmConfig& cfg);
OptResult bs_minimize(const CostFunction& cost, std::size_t dim, const SwarmConfig& cfg);
OptResult minimize(Optimizer which, const CostFunction& cost, std::size_t dim, const SwarmConfig& cfg);

/// GOA comfort coefficient: c_max at iteration 0, c_min at the last one.
double goa_coefficient(int iteration, int max_iter, const GoaParams& p);
/// GOA social force s(r) = f exp(-r / l) - exp(-r).
double goa_social(double r, const GoaParams& p);

void write_trace_csv(const std::filesystem::path& path, const OptResult& result);

}  // namespace fuzzeeg
