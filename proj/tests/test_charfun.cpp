#include <catch_amalgamated.hpp>

#include <random>

#include "pllnet/charfun.hpp"
#include "pllnet/phase_model.hpp"

using namespace pllnet;
using Catch::Approx;

TEST_CASE("isotypic transform is unitary") {
  for (int n = 2; n <= 6; ++n) {
    const CMatrix w = isotypic_transform(n);
    const CMatrix id = w * w.adjoint();
    CHECK((id - CMatrix::Identity(2 * n, 2 * n)).norm() < 1e-13);
  }
}

TEST_CASE("isotypic transform block-diagonalizes the characteristic matrix") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int n = 2; n <= 5; ++n) {
    const NetworkParams p{n, 1.4, 0.6, 1.0, 2.2};
    const Equilibrium eq = equilibrium(p, EquilibriumBranch::Minus);
    const Linearization L = linearization_at(ModelKind::FullPhase, p, eq);
    const cplx lambda(u(rng), u(rng));
    const CMatrix w = isotypic_transform(n);
    const CMatrix d = w * characteristic_matrix(L, lambda, p.delay) * w.adjoint();
    const BlockSet b = build_blocks(p, eq);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        CHECK(d.block(2 * j, 2 * k, 2, 2).norm() < 1e-12);
      }
      const cplx det = d.block(2 * j, 2 * j, 2, 2).determinant();
      const cplx expect = eval(j == 0 ? b.fix_block : b.standard_block, lambda);
      CHECK(std::abs(det - expect) < 1e-10 * (1 + std::abs(expect)));
    }
  }
}

TEST_CASE("full-phase block coefficients") {
  const NetworkParams p{3, 1.05, 0.075, 1.0, 0.0};
  const Equilibrium eq = equilibrium(p, EquilibriumBranch::Minus);
  const double c = eq.cos_two_phi, km = 1.05 * 0.075;
  const auto b = build_blocks(p, eq);
  const auto f = b.fix_block.coefficients(), s = b.standard_block.coefficients();
  CHECK(f.r1 == Approx(0.075));
  CHECK(f.r0 == Approx(km * (1 - c)));
  CHECK(f.s0 == Approx(-km * (1 + c)));
  CHECK(s.r0 == Approx(km * (1 - c)));
  CHECK(s.s0 == Approx(km * (1 + c) / 2));
  CHECK(b.standard_multiplicity == 2);
}

TEST_CASE("phase blocks depend on tau through Omega-hat tau") {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  const auto branches = releq_branches(p, 0.0, 3.0);
  REQUIRE(!branches.empty());
  const QuasiPolynomial q = build_phase_blocks(p, branch_tracker(p, branches.front())).fix_block;
  const double tau = 1.3, h = 1e-6;
  const auto k = q.coefficients(tau);
  CHECK(k.dr0 == Approx((q.coefficients(tau + h).r0 - q.coefficients(tau - h).r0) / (2 * h)).margin(1e-6));
  CHECK(k.ds0 == Approx((q.coefficients(tau + h).s0 - q.coefficients(tau - h).s0) / (2 * h)).margin(1e-6));
  CHECK(k.dr1 == 0.0);
}

TEST_CASE("determinant factorizes into Fix and standard blocks") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int n = 2; n <= 4; ++n) {
    const NetworkParams p{n, 1.7, 0.9, 1.0, 3.1};
    const double w = releq_solve(p, p.delay).front();
    const BlockSet b = build_phase_blocks(p, w);
    const cplx lambda(u(rng), u(rng));
    const cplx det = full_determinant(ModelKind::Phase, p, w, lambda);
    const cplx prod = eval(b.fix_block, lambda) * std::pow(eval(b.standard_block, lambda), n - 1);
    CHECK(std::abs(det - prod) < 1e-10 * std::abs(det));
  }
}

TEST_CASE("standard pair direction is e_a - e_b normalized") {
  const auto d = standard_pair_direction(3, 0, 1);
  CHECK(d[0] == Approx(1 / std::sqrt(2.0)));
  CHECK(d[2] == Approx(-1 / std::sqrt(2.0)));
  CHECK(std::abs(d[4]) < 1e-15);
  for (std::size_t i = 1; i < d.size(); i += 2) CHECK(d[i] == 0.0);
  const auto f = isotypic_direction(4, 0);
  for (std::size_t i = 0; i < f.size(); i += 2) CHECK(f[i] == Approx(0.5));
}
