#include "fuzzeeg/metaheuristics.hpp"
#include "swarm_detail.hpp"

namespace fuzzeeg {

OptResult pso_minimize(const CostFunction& cost, std::size_t dim, const SwarmConfig& cfg) {
  cfg.validate(dim);
  detail::Swarm s = detail::init_swarm(dim, cfg);
  detail::evaluate_all(s, cost, cfg.threads);
  std::vector<std::vector<double>> v(s.x.size(), std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> pbest = s.x;
  std::vector<double> pcost = s.cost;
  detail::update_best(s);
  s.result.trace.push_back(s.best_cost);

  for (int it = 0; it < cfg.max_iter; ++it) {
    for (std::size_t i = 0; i < s.x.size(); ++i)
      detail::pso_move(s, i, v[i], pbest[i], cfg.pso.w, cfg.pso.c1, cfg.pso.c2, cfg);
    detail::evaluate_all(s, cost, cfg.threads);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
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
