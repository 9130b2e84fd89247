#include "lorentz/model_oracle.hpp"

#include <algorithm>

namespace lorentz {

double model_tau_oracle(const ModelSpace& space, const Event& x, const Event& y) {
  ShootingOptions opts;
  opts.seeds = 4;
  opts.nodes = 2;
  return model_tau_oracle(space, x, y, opts);
}

double model_tau_oracle(const ModelSpace& space, const Event& x, const Event& y, const ShootingOptions& opts) {
  ShootingOptions o = opts;
  o.use_exact_flow = false;
  o.timelike_only = true;
  const auto sols = solve_bvp(space, x, y, Tangent(y - x), o);
  if (sols.empty()) throw OracleFailure("model_tau_oracle: no connecting timelike geodesic found");
  double best = 0.0;
  for (const auto& s : sols) best = std::max(best, lg_length(space, s));
  return best;
}

}  // namespace lorentz
