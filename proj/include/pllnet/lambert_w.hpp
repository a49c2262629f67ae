#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "pllnet/error.hpp"

namespace pllnet {

namespace detail {

inline std::complex<double> lambert_w_seed(int k, std::complex<double> z) {
  using C = std::complex<double>;
  constexpr double e = std::numbers::e;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const C near = e * z + 1.0;
  const bool branch_point_side =
      k == 0 || (k == -1 && z.imag() >= 0.0) || (k == 1 && z.imag() < 0.0);
  if (branch_point_side && std::abs(near) < 0.3) {
    C p = std::sqrt(2.0 * near);
    if (k != 0) p = -p;
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (k == 0 && std::abs(z) < 0.3) return z * (1.0 - z + 1.5 * z * z);
  if (k == 0 && std::abs(z) < 20.0) {
    const C l = std::log(1.0 + z);
    return l * (1.0 - std::log(1.0 + l) / (2.0 + l));
  }
  const C l1 = std::log(z) + C(0.0, two_pi * k);
  const C l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace detail

/// \brief Branch k of the Lambert W function, w exp(w) = z.
///
/// Halley iteration from asymptotic seeds, with the branch-point series near -1/e.
inline std::complex<double> lambert_w(int k, std::complex<double> z) {
  using C = std::complex<double>;
  if (z == C(0.0)) {
    if (k == 0) return C(0.0);
    throw Error(ErrorCode::BranchDomain, "W_k(0) is singular for k != 0");
  }
  const C branch_point(-std::exp(-1.0), 0.0);
  if ((k == 0 || k == -1) && std::abs(z - branch_point) <= 4.0 * std::numeric_limits<double>::epsilon())
    return C(-1.0);

  C w = detail::lambert_w_seed(k, z);
  for (int it = 0; it < 100; ++it) {
    const C ew = std::exp(w);
    const C f = w * ew - z;
    const C wp1 = w + 1.0;
    const C denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const C step = f / denom;
    w -= step;
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
      throw Error(ErrorCode::NoConvergence, "Lambert W iteration diverged");
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
  }
  return w;
}

inline std::complex<double> lambert_w(std::complex<double> z) { return lambert_w(0, z); }

}  // namespace pllnet
