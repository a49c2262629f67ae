#include <catch_amalgamated.hpp>

#include "pllnet/phase_model.hpp"

using namespace pllnet;
using Catch::Approx;

TEST_CASE("relative equilibria solve the rotation equation") {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  CHECK(releq_solve(p, 0.0) == std::vector<double>{1.0});
  for (double tau : {0.5, 3.0, 7.7, 15.0}) {
    const auto sols = releq_solve(p, tau);
    REQUIRE(!sols.empty());
    CHECK(std::is_sorted(sols.begin(), sols.end()));
    for (double w : sols) CHECK(std::abs(releq_residual(p, w, tau)) < 1e-12);
  }
}

TEST_CASE("root count matches a dense sign-change oracle") {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  for (double tau : {4.0, 9.3, 14.1}) {
    int changes = 0;
    const int m = 200000;
    double prev = releq_residual(p, 0.0, tau);
    for (int i = 1; i <= m; ++i) {
      const double v = releq_residual(p, 2.0 * i / m, tau);
      changes += (v < 0) != (prev < 0);
      prev = v;
    }
    CHECK(static_cast<int>(releq_solve(p, tau).size()) == changes);
  }
}

TEST_CASE("eleven branches on [0, 5 pi]") {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  const auto br = releq_branches(p, 0.0, 5 * M_PI);
  CHECK(br.size() == 11);
  for (std::size_t i = 0; i < br.size(); ++i) {
    CHECK(br[i].branch_id == static_cast<int>(i));
    for (const auto& [tau, w] : br[i].samples) CHECK(std::abs(releq_residual(p, w, tau)) < 1e-10);
  }
  CHECK(br.front().window_lo == 0.0);
}

TEST_CASE("branch tracker follows its branch") {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  const auto br = releq_branches(p, 0.0, 5 * M_PI);
  const auto track = branch_tracker(p, br[3]);
  const double mid = 0.5 * (br[3].window_lo + br[3].window_hi);
  CHECK(std::abs(releq_residual(p, track(mid), mid)) < 1e-10);
}

TEST_CASE("relative Hopf zeros of the Fix block are destabilizing") {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  const auto fix = relative_hopf_scan(p, BlockKind::Fix, 0.0, 5 * M_PI, 0.0, 2);
  REQUIRE(!fix.empty());
  for (const auto& c : fix) CHECK(c.delta > 0.0);
  const auto std_ = relative_hopf_scan(p, BlockKind::Standard, 0.0, 5 * M_PI);
  REQUIRE(!std_.empty());
  CHECK(std_.front().tau_star >= 3.0);
  CHECK(std_.front().tau_star <= 3.3);
}

TEST_CASE("zero-root events") {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  const auto ev = zero_root_taus(p, -3, 5);
  REQUIRE(!ev.empty());
  CHECK(ev.front().tau_star == Approx(0.75 * M_PI).margin(1e-12));
  for (const auto& e : ev) {
    const double w = (0.5 + e.n) * M_PI / e.tau_star;
    CHECK(std::abs(releq_residual(p, w, e.tau_star)) < 1e-12);
    const auto k = build_phase_blocks(p, w).standard_block.coefficients(e.tau_star);
    CHECK(std::abs(k.r0 + k.s0) < 1e-12);
    // d lambda / d tau at the zero root, -P_tau / P_lambda
    const double slope = -(k.dr0 + k.ds0) / (k.r1 - e.tau_star * k.s0);
    CHECK(e.delta0 == Approx(slope).margin(1e-10));
  }
  for (const auto& e : ev)
    if (e.n == 1) CHECK(e.delta0 == Approx(-4.0).margin(1e-12));
}

TEST_CASE("case curves give an imaginary Fix root at Omega-hat = omega_M") {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  const auto pts = equilibrium_case_curves(p, 2, 1, 3, {0.2, 0.5, 1.0});
  REQUIRE(!pts.empty());
  const double tau = 2 * M_PI;
  for (const auto& pt : pts) {
    const double w = std::sqrt(2 * pt.coupling * pt.mu - pt.mu * pt.mu);
    const auto q = QuasiPolynomial::constant(pt.mu, pt.coupling * pt.mu, -pt.coupling * pt.mu, tau);
    CHECK(std::abs(eval(q, cplx(0.0, w))) < 1e-8);
  }
  CHECK(equilibrium_case_curves(p, 3, 1, 3, {0.5}).empty());
}
