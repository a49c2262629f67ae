#include <catch_amalgamated.hpp>

#include <random>

#include "pllnet/charfun.hpp"
#include "pllnet/model.hpp"

using namespace pllnet;
using Catch::Approx;

TEST_CASE("equilibria solve sin(2 phi) = -omega_M / K") {
  const NetworkParams p{2, 1.05, 0.3, 1.0, 0.0};
  const auto eqs = equilibria(p);
  REQUIRE(eqs.size() == 2);
  CHECK(eqs[0].branch == EquilibriumBranch::Plus);
  CHECK(eqs[1].branch == EquilibriumBranch::Minus);
  for (const auto& e : eqs) {
    CHECK(std::sin(2 * e.phi) == Approx(-1.0 / 1.05).margin(1e-14));
    CHECK(e.cos_two_phi == Approx(std::cos(2 * e.phi)).margin(1e-14));
  }
  CHECK(eqs[0].cos_two_phi > 0.0);
  CHECK(eqs[1].cos_two_phi < 0.0);
  CHECK(eqs[1].phi == Approx(-0.9403205).margin(1e-7));
}

TEST_CASE("equilibria degenerate and absent cases") {
  CHECK(equilibria(NetworkParams{2, 1.0, 0.3, 1.0, 0.0}).size() == 1);
  try {
    equilibria(NetworkParams{2, 0.9, 0.3, 1.0, 0.0});
    FAIL("expected NoEquilibrium");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoEquilibrium);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(NetworkParams({1, 1.0, 1.0, 1.0, 0.0}).validate(), Error);
  CHECK_THROWS_AS(NetworkParams({2, -1.0, 1.0, 1.0, 0.0}).validate(), Error);
  CHECK_THROWS_AS(NetworkParams({2, 1.0, 1.0, 1.0, -0.1}).validate(), Error);
  CHECK_NOTHROW(NetworkParams({2, 1.0, 1.0, 1.0, 0.0}).validate());
}

TEST_CASE("normalization maps to unit free frequency") {
  const auto p = normalize(NetworkParams{3, 2.1, 0.6, 2.0, 4.0});
  CHECK(p.free_freq == 1.0);
  CHECK(p.coupling == Approx(1.05));
  CHECK(p.filter_gain == Approx(0.3));
  CHECK(p.delay == Approx(8.0));
}

TEST_CASE("pair index is lexicographic over ordered pairs") {
  CHECK(pair_index(3, 0, 1) == 0);
  CHECK(pair_index(3, 0, 2) == 1);
  CHECK(pair_index(3, 1, 0) == 2);
  CHECK(pair_index(3, 2, 1) == 5);
  CHECK_THROWS_AS(pair_index(3, 1, 1), Error);
}

TEST_CASE("equilibrium state is a fixed point of the full-phase model") {
  const NetworkParams p{4, 1.3, 0.7, 1.0, 2.5};
  for (const auto& eq : equilibria(p)) {
    const auto x = equilibrium_state(p, eq);
    for (double v : rhs(ModelKind::FullPhase, p, x, x)) CHECK(std::abs(v) < 1e-14);
  }
}

TEST_CASE("rhs is equivariant under node permutations") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  const NetworkParams p{4, 1.3, 0.7, 1.0, 2.5};
  const std::vector<int> perm{2, 0, 3, 1};
  for (ModelKind k : {ModelKind::FullPhase, ModelKind::Phase}) {
    StateVector x(8), xd(8);
    for (auto& v : x) v = u(rng);
    for (auto& v : xd) v = u(rng);
    const auto a = permute_nodes(rhs(k, p, x, xd), perm);
    const auto b = rhs(k, p, permute_nodes(x, perm), permute_nodes(xd, perm));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == Approx(b[i]).margin(1e-14));
  }
}

TEST_CASE("analytic jacobian matches central differences") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  const NetworkParams p{3, 1.2, 0.8, 1.0, 1.7};
  for (ModelKind k : {ModelKind::FullPhase, ModelKind::Phase, ModelKind::PhaseRotatingFrame,
                      ModelKind::PhaseDifference}) {
    const std::size_t dim = state_dimension(k, 3);
    StateVector x(dim), xd(dim);
    for (auto& v : x) v = u(rng);
    for (auto& v : xd) v = u(rng);
    const std::optional<double> aux = k == ModelKind::PhaseRotatingFrame ? std::optional(0.6) : std::nullopt;
    const Linearization L = jacobian(k, p, x, xd, aux);
    const double h = 1e-6;
    for (std::size_t c = 0; c < dim; ++c) {
      StateVector xp = x, xm = x, dp = xd, dm = xd;
      xp[c] += h;
      xm[c] -= h;
      dp[c] += h;
      dm[c] -= h;
      const auto f1 = rhs(k, p, xp, xd, aux), f0 = rhs(k, p, xm, xd, aux);
      const auto g1 = rhs(k, p, x, dp, aux), g0 = rhs(k, p, x, dm, aux);
      for (std::size_t r = 0; r < dim; ++r) {
        CHECK(L.a0(r, c) == Approx((f1[r] - f0[r]) / (2 * h)).margin(1e-8));
        CHECK(L.a_tau(r, c) == Approx((g1[r] - g0[r]) / (2 * h)).margin(1e-8));
      }
    }
  }
}

TEST_CASE("phase model is invariant under a common angle shift") {
  const NetworkParams p{3, 1.2, 0.8, 1.0, 1.7};
  const StateVector x{0.1, 0.2, -0.4, 0.0, 0.9, -0.3};
  const StateVector xd{0.3, 0.1, 0.2, 0.5, -0.7, 0.2};
  StateVector xs = x, xds = xd;
  for (std::size_t i = 0; i < xs.size(); i += 2) {
    xs[i] += 2.3;
    xds[i] += 2.3;
  }
  const auto a = rhs(ModelKind::Phase, p, x, xd), b = rhs(ModelKind::Phase, p, xs, xds);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == Approx(b[i]).margin(1e-14));
}
