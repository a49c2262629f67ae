#pragma once

#include <complex>
#include <functional>
#include <utility>

namespace pllnet {

using cplx = std::complex<double>;

/// \brief Coefficients of R = lambda^2 + r1 lambda + r0 and S = s0 at one delay.
///
/// The d* members are derivatives with respect to tau.
struct BlockCoefficients {
  double r0 = 0.0;
  double r1 = 0.0;
  double s0 = 0.0;
  double dr0 = 0.0;
  double dr1 = 0.0;
  double ds0 = 0.0;
};

/// \brief P(lambda, tau) = R(lambda, tau) + S(lambda, tau) exp(-lambda tau).
///
/// R is monic of degree two and S is constant in lambda; the coefficients may
/// depend on tau through the provider.
struct QuasiPolynomial {
  std::function<BlockCoefficients(double)> provider;
  double delay = 0.0;

  static QuasiPolynomial constant(double r1, double r0, double s0, double tau) {
    return {[=](double) { return BlockCoefficients{r0, r1, s0, 0.0, 0.0, 0.0}; }, tau};
  }

  BlockCoefficients coefficients() const { return provider(delay); }
  BlockCoefficients coefficients(double tau) const { return provider(tau); }

  QuasiPolynomial at(double tau) const { return {provider, tau}; }
};

inline cplx eval(const BlockCoefficients& c, cplx lambda, double tau) {
  return lambda * lambda + c.r1 * lambda + c.r0 + c.s0 * std::exp(-lambda * tau);
}

inline cplx eval(const QuasiPolynomial& p, cplx lambda) {
  return eval(p.coefficients(), lambda, p.delay);
}

/// dP/dlambda
inline cplx derivative(const BlockCoefficients& c, cplx lambda, double tau) {
  return 2.0 * lambda + c.r1 - tau * c.s0 * std::exp(-lambda * tau);
}

/// d^2P/dlambda^2
inline cplx second_derivative(const BlockCoefficients& c, cplx lambda, double tau) {
  return 2.0 + tau * tau * c.s0 * std::exp(-lambda * tau);
}

/// R and S evaluated separately.
inline std::pair<cplx, cplx> eval_parts(const BlockCoefficients& c, cplx lambda) {
  return {lambda * lambda + c.r1 * lambda + c.r0, cplx(c.s0, 0.0)};
}

}  // namespace pllnet
