#include <cmath>

#include "fuzzeeg/metaheuristics.hpp"
#include "swarm_detail.hpp"

namespace fuzzeeg {

double goa_coefficient(int iteration, int max_iter, const GoaParams& p) {
  if (max_iter <= 1) return p.c_max;
  return p.c_max - iteration * (p.c_max - p.c_min) / static_cast<double>(max_iter - 1);
}

double goa_social(double r, const GoaParams& p) { return p.f * std::exp(-r / p.l) - std::exp(-r); }

OptResult goa_minimize(const CostFunction& cost, std::size_t dim, const SwarmConfig& cfg) {
  cfg.validate(dim);
  detail::Swarm s = detail::init_swarm(dim, cfg);
  detail::evaluate_all(s, cost, cfg.threads);
  detail::update_best(s);
  s.result.trace.push_back(s.best_cost);

  const std::size_t n = s.x.size();
  std::vector<std::vector<double>> next(n, std::vector<double>(dim));
  std::vector<double> social(dim);
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double c = goa_coefficient(it, cfg.max_iter, cfg.goa);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(social.begin(), social.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double dist = 0.0;
        for (std::size_t d = 0; d < dim; ++d) dist += (s.x[j][d] - s.x[i][d]) * (s.x[j][d] - s.x[i][d]);
        dist = std::sqrt(dist);
        // Distances are folded into [2, 4) before the social force.
        const double force = goa_social(2.0 + std::fmod(dist, 2.0), cfg.goa);
        const double inv = 1.0 / (dist + 2.220446049250313e-16);
        for (std::size_t d = 0; d < dim; ++d)
          social[d] += c * (cfg.upper[d] - cfg.lower[d]) / 2.0 * force * (s.x[j][d] - s.x[i][d]) * inv;
      }
      for (std::size_t d = 0; d < dim; ++d)
        next[i][d] = detail::clamp_to(c * social[d] + s.best[d], cfg.lower[d], cfg.upper[d]);
    }
    s.x.swap(next);
    detail::evaluate_all(s, cost, cfg.threads);
    detail::update_best(s);
    s.result.trace.push_back(s.best_cost);
  }
  return detail::finish(s);
}

}  // namespace fuzzeeg
