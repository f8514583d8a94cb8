#include <fstream>
#include <string>

#include "fuzzeeg/csv.hpp"
#include "fuzzeeg/error.hpp"
#include "fuzzeeg/metaheuristics.hpp"

namespace fuzzeeg {

void SwarmConfig::validate(std::size_t dim) const {
  if (dim < 1) throw ParameterError("optimizer: dimension must be >= 1");
  if (n_pop < 1) throw ParameterError("optimizer: population must be >= 1");
  if (max_iter < 0) throw ParameterError("optimizer: max_iter must be >= 0");
  if (lower.size() != dim || upper.size() != dim)
    throw ParameterError("optimizer: bounds have " + std::to_string(lower.size()) + "/" +
                         std::to_string(upper.size()) + " entries for dimension " + std::to_string(dim));
  for (std::size_t d = 0; d < dim; ++d)
    if (!(lower[d] <= upper[d])) throw ParameterError("optimizer: lower bound above upper bound at " + std::to_string(d));
  if (initial && initial->size() != dim) throw ParameterError("optimizer: initial guess has the wrong dimension");
  if (!(pso.velocity_limit > 0.0)) throw ParameterError("optimizer: velocity limit must be > 0");
  if (!(bs.ga_fraction >= 0.0 && bs.ga_fraction < 1.0)) throw ParameterError("optimizer: ga_fraction must lie in [0, 1)");
  if (!(bs.mutation_rate >= 0.0 && bs.mutation_rate <= 1.0))
    throw ParameterError("optimizer: mutation rate must lie in [0, 1]");
  if (!(goa.c_min > 0.0 && goa.c_min <= goa.c_max)) throw ParameterError("optimizer: need 0 < c_min <= c_max");
  if (!(goa.l > 0.0)) throw ParameterError("optimizer: GOA length scale must be > 0");
}

std::string_view optimizer_id(Optimizer o) {
  switch (o) {
    case Optimizer::Pso: return "pso";
    case Optimizer::Goa: return "goa";
    case Optimizer::Bs: return "bs";
  }
  return "pso";
}

std::optional<Optimizer> optimizer_from_id(std::string_view id) {
  if (id == "pso") return Optimizer::Pso;
  if (id == "goa") return Optimizer::Goa;
  if (id == "bs") return Optimizer::Bs;
  return std::nullopt;
}

OptResult minimize(Optimizer which, const CostFunction& cost, std::size_t dim, const SwarmConfig& cfg) {
  switch (which) {
    case Optimizer::Pso: return pso_minimize(cost, dim, cfg);
    case Optimizer::Goa: return goa_minimize(cost, dim, cfg);
    case Optimizer::Bs: return bs_minimize(cost, dim, cfg);
  }
  return pso_minimize(cost, dim, cfg);
}

void write_trace_csv(const std::filesystem::path& path, const OptResult& result) {
  CsvTable t;
  t.header = {"iteration", "best_cost"};
  for (std::size_t i = 0; i < result.trace.size(); ++i)
    t.rows.push_back({std::to_string(i), format_double(result.trace[i])});
  write_csv(path, t);
}

}  // namespace fuzzeeg
