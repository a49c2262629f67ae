#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "pllnet/error.hpp"
#include "pllnet/lambert_w.hpp"
#include "pllnet/quasi_polynomial.hpp"

namespace pllnet {

enum class Scheme { Newton, Halley };

inline std::string to_string(Scheme s) { return s == Scheme::Newton ? "newton" : "halley"; }

struct SpectrumEstimate {
  cplx lambda;
  Scheme scheme = Scheme::Newton;
  double residual = 0.0;
  bool certified = false;
};

struct CensusBox {
  double re_lo = 0.0, re_hi = 1.0;
  double im_lo = -1.0, im_hi = 1.0;
  int count = 0;
};

namespace detail {

inline double census_scale(const BlockCoefficients& k, cplx z, double tau) {
  const double a = std::abs(z);
  return a * a + std::abs(k.r1) * a + std::abs(k.r0) + std::abs(k.s0) * std::exp(-z.real() * tau) + 1e-300;
}

struct ArgTracker {
  const BlockCoefficients& k;
  double tau;

  cplx value(cplx z) const {
    const cplx v = eval(k, z, tau);
    if (std::abs(v) < 1e-11 * census_scale(k, z, tau) || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::BoundaryRoot, "root on or near the census contour");
    return v;
  }

  // winding increment along [a, b], refined until each piece turns by < pi/4
  double segment(cplx a, cplx va, cplx b, cplx vb, int depth) const {
    const double d = std::arg(vb / va);
    if (std::abs(d) < std::numbers::pi / 4) return d;
    if (depth > 60) throw Error(ErrorCode::BoundaryRoot, "census refinement exhausted");
    const cplx m = 0.5 * (a + b);
    const cplx vm = value(m);
    return segment(a, va, m, vm, depth + 1) + segment(m, vm, b, vb, depth + 1);
  }

  double edge(cplx a, cplx b) const {
    const double len = std::abs(b - a);
    const int n = std::max(64, static_cast<int>(std::ceil(len * (1.0 + tau) * 8.0)));
    double total = 0.0;
    cplx za = a, va = value(a);
    for (int i = 1; i <= n; ++i) {
      const cplx zb = i == n ? b : a + (b - a) * (static_cast<double>(i) / n);
      const cplx vb = value(zb);
      total += segment(za, va, zb, vb, 0);
      za = zb;
      va = vb;
    }
    return total;
  }
};

}  // namespace detail

/// \brief Number of roots of P inside the rectangle, by the argument principle.
inline int root_census(const QuasiPolynomial& p, double tau, const CensusBox& box) {
  if (!(box.re_hi > box.re_lo) || !(box.im_hi > box.im_lo))
    throw Error(ErrorCode::InvalidArgument, "empty census box");
  const BlockCoefficients k = p.coefficients(tau);
  const detail::ArgTracker tr{k, tau};
  const cplx c0(box.re_lo, box.im_lo), c1(box.re_hi, box.im_lo), c2(box.re_hi, box.im_hi), c3(box.re_lo, box.im_hi);
  const double total = tr.edge(c0, c1) + tr.edge(c1, c2) + tr.edge(c2, c3) + tr.edge(c3, c0);
  const double turns = total / (2.0 * std::numbers::pi);
  const double count = std::round(turns);
  if (std::abs(turns - count) > 1e-3 || count < 0)
    throw Error(ErrorCode::BoundaryRoot, "non-integer winding number");
  return static_cast<int>(count);
}

inline int root_census(const QuasiPolynomial& p, const CensusBox& box) { return root_census(p, p.delay, box); }

/// Radius containing every root with real part >= x0.
inline double root_bound(const BlockCoefficients& k, double tau, double x0) {
  const double s = std::abs(k.s0) * std::exp(-x0 * tau);
  return 0.5 * (std::abs(k.r1) + std::sqrt(k.r1 * k.r1 + 4.0 * (std::abs(k.r0) + s)));
}

/// \brief Newton or Halley iteration on P from one seed.
inline std::optional<cplx> polish_root(const BlockCoefficients& k, double tau, cplx seed, Scheme scheme,
                                       int max_iter = 200) {
  cplx z = seed;
  for (int it = 0; it < max_iter; ++it) {
    const cplx f = eval(k, z, tau);
    const cplx d1 = derivative(k, z, tau);
    cplx step;
    if (scheme == Scheme::Newton) {
      step = f / d1;
    } else {
      const cplx d2 = second_derivative(k, z, tau);
      step = 2.0 * f * d1 / (2.0 * d1 * d1 - f * d2);
    }
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e8) return std::nullopt;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
  }
  if (std::abs(eval(k, z, tau)) > 1e-10) return std::nullopt;
  return z;
}

inline std::vector<cplx> quadratic_roots(double b, double c) {
  const cplx sq = std::sqrt(cplx(b * b - 4.0 * c));
  cplx q = -0.5 * (b + (b >= 0 ? sq : -sq));
  if (q == cplx(0.0)) return {cplx(0.0), cplx(0.0)};
  return {q, c / q};
}

/// \brief Initial guesses: auxiliary-polynomial roots and Lambert W branches k = -3..3.
inline std::vector<cplx> root_seeds(const BlockCoefficients& k, double tau) {
  std::vector<cplx> seeds;
  const auto aux = quadratic_roots(k.r1, k.r0);
  for (auto z : aux) seeds.push_back(z);
  for (auto z : quadratic_roots(k.r1, k.r0 + k.s0)) seeds.push_back(z);
  if (tau <= 0.0 || k.s0 == 0.0) return seeds;
  auto try_w = [&](int br, cplx arg) -> std::optional<cplx> {
    try {
      if (arg == cplx(0.0)) return std::nullopt;
      return lambert_w(br, arg);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  for (int br = -3; br <= 3; ++br) {
    if (std::abs(aux[0] - aux[1]) > 1e-12) {
      for (int i = 0; i < 2; ++i) {
        const cplx rho = aux[i], other = aux[1 - i];
        const cplx arg = -(k.s0 * tau / (rho - other)) * std::exp(-rho * tau);
        if (auto w = try_w(br, arg)) seeds.push_back(rho + *w / tau);
      }
    }
    if (k.r1 != 0.0) {
      const double a = k.r0 / k.r1;
      if (auto w = try_w(br, -(k.s0 * tau / k.r1) * std::exp(a * tau))) seeds.push_back(-a + *w / tau);
    }
    const cplx root = std::sqrt(cplx(-k.s0));
    for (double sg : {1.0, -1.0})
      if (auto w = try_w(br, sg * 0.5 * tau * root)) seeds.push_back(2.0 / tau * *w);
  }
  return seeds;
}

namespace detail {

inline int census_retry(const QuasiPolynomial& p, double tau, CensusBox box) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      return root_census(p, tau, box);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundaryRoot) throw;
      const double w = box.re_hi - box.re_lo, h = box.im_hi - box.im_lo;
      box.re_hi += 1e-3 * w * (attempt + 1);
      box.im_lo -= 1.3e-3 * h * (attempt + 1);
      box.im_hi += 0.7e-3 * h * (attempt + 1);
    }
  }
  throw Error(ErrorCode::BoundaryRoot, "census contour keeps meeting roots");
}

// roots inside a box located by recursive census bisection
inline void locate_roots(const QuasiPolynomial& p, double tau, const BlockCoefficients& k, CensusBox box,
                         Scheme scheme, int depth, std::vector<cplx>& found) {
  int count = 0;
  try {
    count = root_census(p, tau, box);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BoundaryRoot) throw;
    box.re_lo -= 1e-7 * (1 + depth);
    box.im_lo -= 1.7e-7 * (1 + depth);
    count = census_retry(p, tau, box);
  }
  if (count == 0) return;
  const cplx centre(0.5 * (box.re_lo + box.re_hi), 0.5 * (box.im_lo + box.im_hi));
  const double w = box.re_hi - box.re_lo, h = box.im_hi - box.im_lo;
  if (count == 1 || depth > 40 || std::max(w, h) < 1e-6) {
    if (auto z = polish_root(k, tau, centre, scheme)) {
      if (z->real() >= box.re_lo - 1e-6 && z->real() <= box.re_hi + 1e-6 && z->imag() >= box.im_lo - 1e-6 &&
          z->imag() <= box.im_hi + 1e-6) {
        found.push_back(*z);
        if (count == 1) return;
      }
    }
    if (depth > 40 || std::max(w, h) < 1e-6) return;
  }
  CensusBox a = box, b = box;
  if (w >= h) {
    const double m = box.re_lo + w * 0.50013;
    a.re_hi = m;
    b.re_lo = m;
  } else {
    const double m = box.im_lo + h * 0.49987;
    a.im_hi = m;
    b.im_lo = m;
  }
  locate_roots(p, tau, k, a, scheme, depth + 1, found);
  locate_roots(p, tau, k, b, scheme, depth + 1, found);
}

}  // namespace detail

/// \brief Rightmost root of P at delay tau, certified by a census to its right.
inline SpectrumEstimate rightmost_root(const QuasiPolynomial& p, double tau, Scheme scheme = Scheme::Newton,
                                       const std::vector<cplx>& extra_seeds = {}) {
  const BlockCoefficients k = p.coefficients(tau);
  std::optional<cplx> best;
  auto consider = [&](cplx z) {
    if (z.imag() < 0 && std::abs(eval(k, std::conj(z), tau)) <= 1e-10) z = std::conj(z);
    if (!best || z.real() > best->real() + 1e-12 ||
        (std::abs(z.real() - best->real()) <= 1e-12 && z.imag() > best->imag()))
      best = z;
  };
  if (tau == 0.0) {
    for (auto z : quadratic_roots(k.r1, k.r0 + k.s0)) consider(z);
  } else {
    std::vector<cplx> seeds = extra_seeds;
    const auto more = root_seeds(k, tau);
    seeds.insert(seeds.end(), more.begin(), more.end());
    for (auto s : seeds)
      if (auto z = polish_root(k, tau, s, scheme)) consider(*z);
  }

  // certify; any root found to the right replaces the candidate
  for (int round = 0; round < 20; ++round) {
    const double x0 = best ? best->real() + 1e-6 : -1.0;
    const double bound = root_bound(k, tau, x0) + 1.0;
    CensusBox box{x0, std::max(bound, x0 + 1.0), -bound, bound, 0};
    const int count = detail::census_retry(p, tau, box);
    if (count == 0) {
      if (!best) throw Error(ErrorCode::NoConvergence, "no root converged");
      return {*best, scheme, std::abs(eval(k, *best, tau)), true};
    }
    std::vector<cplx> found;
    detail::locate_roots(p, tau, k, box, scheme, 0, found);
    const auto before = best;
    for (auto z : found) consider(z);
    if (before == best) break;
  }
  if (!best) throw Error(ErrorCode::NoConvergence, "no root converged");
  return {*best, scheme, std::abs(eval(k, *best, tau)), false};
}

inline SpectrumEstimate rightmost_root(const QuasiPolynomial& p, Scheme scheme = Scheme::Newton) {
  return rightmost_root(p, p.delay, scheme);
}

struct SweepRow {
  double tau = 0.0;
  cplx lambda;
  bool certified = false;
};

/// \brief Rightmost root along a delay grid, warm-started from the previous grid point.
inline std::vector<SweepRow> rightmost_sweep(const QuasiPolynomial& p, const std::vector<double>& tau_grid,
                                             Scheme scheme = Scheme::Newton) {
  std::vector<SweepRow> rows;
  std::vector<cplx> warm;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (i > 0 && !(tau_grid[i] > tau_grid[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "delay grid must be ascending");
    SpectrumEstimate est;
    try {
      est = rightmost_root(p, tau_grid[i], scheme, warm);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoConvergence)
        throw Error(ErrorCode::NoConvergence, "at tau = " + std::to_string(tau_grid[i]));
      throw;
    }
    rows.push_back({tau_grid[i], est.lambda, est.certified});
    warm = {est.lambda};
  }
  return rows;
}

}  // namespace pllnet
