#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "fuzzeeg/metaheuristics.hpp"
#include "parallel.hpp"

namespace fuzzeeg::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent generator for stream `index` of a run seeded with `seed`.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index + 1)));
}

struct Swarm {
  std::size_t dim = 0;
  std::vector<std::vector<double>> x;
  std::vector<double> cost;
  std::vector<std::mt19937_64> rng;
  std::vector<double> best;
  double best_cost = std::numeric_limits<double>::infinity();
  OptResult result;
};

inline double clamp_to(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Uniform positions per particle stream; particle 0 takes the initial guess.
inline Swarm init_swarm(std::size_t dim, const SwarmConfig& cfg) {
  Swarm s;
  s.dim = dim;
  const auto n = static_cast<std::size_t>(cfg.n_pop);
  s.x.assign(n, std::vector<double>(dim));
  s.cost.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    s.rng.push_back(stream(cfg.seed, i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t d = 0; d < dim; ++d) s.x[i][d] = cfg.lower[d] + u(s.rng[i]) * (cfg.upper[d] - cfg.lower[d]);
  }
  if (cfg.initial)
    for (std::size_t d = 0; d < dim; ++d) s.x[0][d] = clamp_to((*cfg.initial)[d], cfg.lower[d], cfg.upper[d]);
  return s;
}

// Evaluates the listed particles, mapping NaN to +inf.
inline void evaluate(Swarm& s, const CostFunction& cost, const std::vector<std::size_t>& which, int threads) {
  std::vector<double> out(which.size());
  parallel_for(which.size(), threads, [&](std::size_t k) { out[k] = cost(s.x[which[k]]); });
  for (std::size_t k = 0; k < which.size(); ++k) {
    double c = out[k];
    if (std::isnan(c)) {
      c = std::numeric_limits<double>::infinity();
      ++s.result.non_finite;
    }
    s.cost[which[k]] = c;
  }
  s.result.evaluations += which.size();
}

inline void evaluate_all(Swarm& s, const CostFunction& cost, int threads) {
  std::vector<std::size_t> all(s.x.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  evaluate(s, cost, all, threads);
}

// Elitist global best: replaced only on strict improvement, scanning in index order.
inline void update_best(Swarm& s) {
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (s.cost[i] < s.best_cost || s.best.empty()) {
      s.best_cost = s.cost[i];
      s.best = s.x[i];
    }
  }
}

inline OptResult finish(Swarm& s) {
  s.result.best = s.best;
  s.result.best_cost = s.best_cost;
  return std::move(s.result);
}

}  // namespace fuzzeeg::detail

namespace fuzzeeg::detail {

// Velocity and position update of particle i; draws two uniforms per
// dimension from the particle's own stream.
inline void pso_move(Swarm& s, std::size_t i, std::vector<double>& v, const std::vector<double>& pbest, double w,
                     double c1, double c2, const SwarmConfig& cfg) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto& x = s.x[i];
  for (std::size_t d = 0; d < s.dim; ++d) {
    const double r1 = u(s.rng[i]);
    const double r2 = u(s.rng[i]);
    const double vmax = cfg.pso.velocity_limit * (cfg.upper[d] - cfg.lower[d]);
    v[d] = w * v[d] + c1 * r1 * (pbest[d] - x[d]) + c2 * r2 * (s.best[d] - x[d]);
    v[d] = clamp_to(v[d], -vmax, vmax);
    x[d] = clamp_to(x[d] + v[d], cfg.lower[d], cfg.upper[d]);
  }
}

}  // namespace fuzzeeg::detail
