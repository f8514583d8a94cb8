#include <algorithm>
#include <numeric>

#include "fuzzeeg/metaheuristics.hpp"
#include "swarm_detail.hpp"

namespace fuzzeeg {

OptResult bs_minimize(const CostFunction& cost, std::size_t dim, const SwarmConfig& cfg) {
  cfg.validate(dim);
  detail::Swarm s = detail::init_swarm(dim, cfg);
  const std::size_t n = s.x.size();
  std::mt19937_64 ga_rng = detail::stream(cfg.seed, n);
  detail::evaluate_all(s, cost, cfg.threads);
  std::vector<std::vector<double>> v(n, std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> pbest = s.x;
  std::vector<double> pcost = s.cost;
  detail::update_best(s);
  s.result.trace.push_back(s.best_cost);

  const auto n_ga = static_cast<std::size_t>(std::lround(cfg.bs.ga_fraction * static_cast<double>(n)));
  const double pull = cfg.bs.w1 / 2.0;
  std::vector<std::size_t> order(n), rank(n);
  std::vector<double> fitness(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int it = 0; it < cfg.max_iter; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.cost[a] < s.cost[b]; });
    for (std::size_t k = 0; k < n; ++k) rank[order[k]] = k;

    // Offspring are bred from the positions before this iteration's moves.
    std::vector<std::vector<double>> children;
    if (n_ga > 0) {
      for (std::size_t i = 0; i < n; ++i) fitness[i] = static_cast<double>(n - rank[i]);
      std::discrete_distribution<std::size_t> wheel(fitness.begin(), fitness.end());
      for (std::size_t c = 0; c < n_ga; ++c) {
        const auto& p1 = s.x[wheel(ga_rng)];
        const auto& p2 = s.x[wheel(ga_rng)];
        std::vector<double> child(dim);
        for (std::size_t d = 0; d < dim; ++d) {
          const double beta = u(ga_rng);
          child[d] = beta * p1[d] + (1.0 - beta) * p2[d];
          if (u(ga_rng) < cfg.bs.mutation_rate)
            child[d] += gauss(ga_rng) * cfg.bs.mutation_sigma * cfg.bs.k1 * (cfg.upper[d] - cfg.lower[d]);
          child[d] = detail::clamp_to(child[d], cfg.lower[d], cfg.upper[d]);
        }
        children.push_back(std::move(child));
      }
    }

    for (std::size_t i = 0; i < n; ++i)
      if (rank[i] < n - n_ga) detail::pso_move(s, i, v[i], pbest[i], cfg.bs.w, pull, pull, cfg);
    for (std::size_t c = 0; c < n_ga; ++c) {
      const std::size_t slot = order[n - n_ga + c];
      s.x[slot] = std::move(children[c]);
      std::fill(v[slot].begin(), v[slot].end(), 0.0);
    }

    detail::evaluate_all(s, cost, cfg.threads);
    for (std::size_t i = 0; i < n; ++i) {
      if (s.cost[i] < pcost[i]) {
        pcost[i] = s.cost[i];
        pbest[i] = s.x[i];
      }
    }
    detail::update_best(s);
    s.result.trace.push_back(s.best_cost);
  }
  return detail::finish(s);
}

}  // namespace fuzzeeg
