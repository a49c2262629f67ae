// Stability windows of the synchronized equilibrium of two PLLs: crossing delays,
// the unstable-root count between them, and the rightmost root at each midpoint.
#include <cstdio>

#include "pllnet/pllnet.hpp"

int main() {
  using namespace pllnet;
  const NetworkParams p{2, 1.05, 0.3, 1.0, 0.0};
  const QuasiPolynomial q = build_blocks(p, equilibrium(p, EquilibriumBranch::Minus)).fix_block;

  const auto crossings = crossings_below(q, 25.0);
  double prev = 0.0;
  for (const auto& c : crossings) {
    const double mid = 0.5 * (prev + c.tau_star);
    const auto rm = rightmost_root(q, mid);
    std::printf("(%8.4f, %8.4f)  Re lambda = %+.6f  then crossing omega = %.5f, %s\n", prev, c.tau_star,
                rm.lambda.real(), c.omega_candidate.omega, c.delta_sign > 0 ? "destabilizing" : "stabilizing");
    prev = c.tau_star;
  }
}
