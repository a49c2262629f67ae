#include <catch_amalgamated.hpp>

#include <random>

#include "pllnet/lambert_w.hpp"

using namespace pllnet;
using cplx = std::complex<double>;

static double bisect_w0(double z) {
  double lo = -1.0, hi = std::max(1.0, std::log1p(z) + 1.0);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (m * std::exp(m) < z ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

TEST_CASE("principal branch agrees with a bisection oracle on the real axis") {
  for (double z : {-0.3, -0.05, 1e-6, 0.5, 1.0, 2.718281828, 10.0, 100.0, 1e4}) {
    const cplx w = lambert_w(0, cplx(z));
    CHECK(std::abs(w.imag()) < 1e-14);
    CHECK(w.real() == Catch::Approx(bisect_w0(z)).epsilon(1e-12));
  }
}

TEST_CASE("reference values") {
  CHECK(std::abs(lambert_w(0, cplx(1.0)) - 0.5671432904097838) < 1e-14);
  CHECK(std::abs(lambert_w(0, cplx(-std::exp(-1.0))) + 1.0) < 1e-10);
  CHECK(std::abs(lambert_w(-1, cplx(-std::exp(-1.0))) + 1.0) < 1e-10);
  CHECK(std::abs(lambert_w(0, cplx(0.0))) == 0.0);
  CHECK(std::abs(lambert_w(-1, cplx(-0.1)) - (-3.577152063957297)) < 1e-12);
}

TEST_CASE("zero is outside the nonprincipal branches") {
  try {
    lambert_w(1, cplx(0.0));
    FAIL("expected BranchDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BranchDomain);
  }
}

TEST_CASE("defining identity on random points for branches -3..3") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ulog(-3, 3), uang(-M_PI, M_PI);
  for (int k = -3; k <= 3; ++k)
    for (int i = 0; i < 300; ++i) {
      const cplx z = std::polar(std::pow(10.0, ulog(rng)), uang(rng));
      const cplx w = lambert_w(k, z);
      CHECK(std::abs(w * std::exp(w) - z) <= 1e-12 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("branch imaginary parts fall in the expected strips") {
  // W_k(z) for large |z| has Im near 2 pi k
  for (int k = -3; k <= 3; ++k) {
    const cplx w = lambert_w(k, cplx(1e3, 0.0));
    CHECK(std::abs(w.imag() - 2 * M_PI * k) < M_PI);
  }
  CHECK(lambert_w(0, cplx(-0.2)).real() > -1.0);
  CHECK(lambert_w(-1, cplx(-0.2)).real() < -1.0);
}
