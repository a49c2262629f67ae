#include <catch_amalgamated.hpp>

#include "pllnet/charfun.hpp"
#include "pllnet/snmap.hpp"
#include "pllnet/spectrum.hpp"

using namespace pllnet;
using Catch::Approx;

static QuasiPolynomial block(double K, double mu, EquilibriumBranch b) {
  const NetworkParams p{2, K, mu, 1.0, 0.0};
  return build_blocks(p, equilibrium(p, b)).fix_block;
}

// Rightmost root by brute force: Newton from a dense seed grid.
static double dense_seed_rightmost(const QuasiPolynomial& q, double tau) {
  double best = -INFINITY;
  for (double re = -3.0; re <= 3.0; re += 0.25)
    for (double im = 0.0; im <= 12.0; im += 0.25)
      if (auto z = polish_root(q.coefficients(), tau, cplx(re, im), Scheme::Newton)) best = std::max(best, z->real());
  return best;
}

TEST_CASE("census counts polynomial roots at zero delay") {
  const auto q = block(2.0, 0.5, EquilibriumBranch::Plus);
  const auto k = q.coefficients();
  const auto roots = quadratic_roots(k.r1, k.r0 + k.s0);
  int inside = 0;
  for (const auto& r : roots) inside += r.real() > 0.0;
  CHECK(root_census(q, 0.0, CensusBox{0.0 + 1e-6, 5.0, -5.0, 5.0, 0}) == inside);
  CHECK(root_census(q, 0.0, CensusBox{-5.0, 5.0, -5.0, 5.0, 0}) == 2);
}

TEST_CASE("census reports roots on the contour") {
  const auto q = block(1.05, 0.3, EquilibriumBranch::Minus);
  const auto c = crossings_below(q, 10.0).front();
  const double w = c.omega_candidate.omega;
  try {
    root_census(q, c.tau_star, CensusBox{0.0, 2.0, -2.0 * w, w, 0});
    FAIL("expected BoundaryRoot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryRoot);
  }
}

TEST_CASE("rightmost root matches a dense seed grid") {
  const auto q = block(1.05, 0.3, EquilibriumBranch::Minus);
  for (double tau : {0.5, 3.0, 6.0, 8.0, 12.5, 20.0}) {
    const auto est = rightmost_root(q, tau);
    CHECK(est.certified);
    CHECK(est.residual <= 1e-10);
    CHECK(est.lambda.real() == Approx(dense_seed_rightmost(q, tau)).margin(1e-8));
  }
}

TEST_CASE("rightmost root at zero delay is the closed-form quadratic root") {
  for (double mu : {0.1, 0.5, 1.3}) {
    const auto est = rightmost_root(block(2.0, mu, EquilibriumBranch::Plus), 0.0);
    const double expect = -0.5 * mu + 0.5 * std::sqrt(mu * mu + 8.0 * std::sqrt(3.0) * mu);
    CHECK(est.lambda.real() == Approx(expect).margin(1e-12));
  }
}

TEST_CASE("Newton and Halley polishing agree") {
  const auto q = block(1.05, 0.3, EquilibriumBranch::Minus);
  const auto a = rightmost_root(q, 9.0, Scheme::Newton);
  const auto b = rightmost_root(q, 9.0, Scheme::Halley);
  CHECK(std::abs(a.lambda - b.lambda) < 1e-10);
  CHECK(b.scheme == Scheme::Halley);
}

TEST_CASE("sweep rejects non-ascending grids and stays certified") {
  const auto q = block(2.0, 0.4, EquilibriumBranch::Plus);
  CHECK_THROWS_AS(rightmost_sweep(q, {1.0, 0.5}), Error);
  const auto rows = rightmost_sweep(q, {0.0, 1.0, 2.0, 5.0, 10.0});
  for (const auto& r : rows) {
    CHECK(r.certified);
    CHECK(r.lambda.real() > 0.0);
  }
}

TEST_CASE("root bound encloses every root found") {
  const auto q = block(1.05, 0.3, EquilibriumBranch::Minus);
  const double tau = 8.0;
  const double b = root_bound(q.coefficients(), tau, 0.0);
  for (double re = 0.0; re <= 2.0; re += 0.5)
    for (double im = 0.0; im <= 4.0; im += 0.5)
      if (auto z = polish_root(q.coefficients(), tau, cplx(re, im), Scheme::Newton))
        if (z->real() >= 0.0) CHECK(std::abs(*z) <= b);
}
