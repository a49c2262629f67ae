#include <catch_amalgamated.hpp>

#include <random>

#include "pllnet/phase_difference.hpp"
#include "pllnet/phase_model.hpp"

using namespace pllnet;

TEST_CASE("N = 2 blocks coincide with the phase-model blocks") {
  const NetworkParams p{2, 1.3, 0.7, 1.0, 2.1};
  for (double w : releq_solve(p, p.delay)) {
    const auto pd = char_functions_n2(p, (w - 1.0) * p.delay);
    const auto ph = build_phase_blocks(p, w);
    const auto a = pd.p1.coefficients(), b = ph.fix_block.coefficients();
    const auto c = pd.p2.coefficients(), d = ph.standard_block.coefficients();
    CHECK(std::abs(a.r0 - b.r0) < 1e-14);
    CHECK(std::abs(a.s0 - b.s0) < 1e-14);
    CHECK(std::abs(c.s0 - d.s0) < 1e-14);
    CHECK(a.r1 == b.r1);
  }
}

TEST_CASE("N = 3 determinant carries the extra factor (lambda^2 + mu lambda)^3") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  const NetworkParams p{3, 1.3, 0.7, 1.0, 2.1};
  for (double w : releq_solve(p, p.delay)) {
    const double cc = (w - 1.0) * p.delay;
    const auto ch = char_functions_n3(p, cc);
    for (int i = 0; i < 10; ++i) {
      const cplx l(u(rng), u(rng));
      const cplx pu = eval(ch.p2, l);
      const cplx expect = std::pow(l * l + 0.7 * l, 3) * eval(ch.p1, l) * pu * pu;
      CHECK(std::abs(ch.det3(l) - expect) < 1e-10 * std::abs(expect));
    }
  }
}

TEST_CASE("fictitious roots") {
  const NetworkParams p{3, 1.3, 0.7, 1.0, 2.1};
  const double w = releq_solve(p, p.delay).front();
  const auto roots = fictitious_roots(p, (w - 1.0) * p.delay);
  REQUIRE(roots.size() == 2);
  for (const auto& r : roots) CHECK(r.det_residual < 1e-12);
  // lambda = 0 is the translation mode of the phase model, -mu is spurious
  CHECK_FALSE(roots[0].is_fictitious);
  CHECK(roots[1].is_fictitious);
  CHECK(roots[1].lambda == cplx(-0.7));
}

TEST_CASE("size guards") {
  const NetworkParams p{4, 1.3, 0.7, 1.0, 2.1};
  CHECK_THROWS_AS(char_functions_n2(p, 0.0), Error);
  CHECK_THROWS_AS(determinant_n3(p, 0.0, cplx(1.0)), Error);
}
