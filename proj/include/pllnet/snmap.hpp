#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "pllnet/charfun.hpp"
#include "pllnet/parallel.hpp"
#include "pllnet/quasi_polynomial.hpp"

namespace pllnet {

enum class RootBranch { PlusRoot, MinusRoot };
enum class OmegaCase { Case1a, Case1b, Case2a, Case2b };

inline std::string to_string(RootBranch r) { return r == RootBranch::PlusRoot ? "plus" : "minus"; }

struct OmegaCandidate {
  double omega = 0.0;
  RootBranch root_branch = RootBranch::PlusRoot;
  double b = 0.0;
  double c = 0.0;
};

struct CrossingCandidate {
  OmegaCandidate omega_candidate;
  double tau_star = 0.0;
  int winding = 0;
  int delta_sign = 0;
  BlockKind block = BlockKind::Fix;
  double delta = 0.0;
  int branch_id = -1;
};

struct RegionBoundaries {
  std::optional<double> mu_minus;
  std::optional<double> mu_plus;
  double mu_b = 0.0;
  double k_n = 0.0;
  std::optional<double> mu_max;
};

struct Transversality {
  double delta = 0.0;
  int sign = 0;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

struct FCoefficients {
  double b = 0.0;
  double c = 0.0;
};

/// F(omega) = omega^4 + b omega^2 + c = |R(i omega)|^2 - |S|^2.
inline FCoefficients f_coefficients(const BlockCoefficients& k) {
  return {k.r1 * k.r1 - 2.0 * k.r0, k.r0 * k.r0 - k.s0 * k.s0};
}

inline double f_value(double b, double c, double omega) {
  const double w2 = omega * omega;
  return w2 * w2 + b * w2 + c;
}

/// Existence case of real omega; empty when b^2 - 4c < 0.
inline std::optional<OmegaCase> classify(double b, double c) {
  if (b * b - 4.0 * c < 0.0) return std::nullopt;
  if (b >= 0.0) return c <= 0.0 ? OmegaCase::Case1a : OmegaCase::Case1b;
  return c <= 0.0 ? OmegaCase::Case2a : OmegaCase::Case2b;
}

/// \brief Positive real roots of F, polished by one Newton step.
inline std::vector<OmegaCandidate> omega_candidates(double b, double c) {
  std::vector<OmegaCandidate> out;
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  // roots of x^2 + b x + c in x = omega^2, without cancellation
  double big, small;
  if (b >= 0.0) {
    const double q = -0.5 * (b + sq);
    big = q == 0.0 ? 0.0 : c / q;
    small = q;
  } else {
    const double q = 0.5 * (sq - b);
    big = q;
    small = c / q;
  }
  auto push = [&](double w2, RootBranch r) {
    if (!(w2 > 0.0)) return;
    double w = std::sqrt(w2);
    const double fp = 4.0 * w * w * w + 2.0 * b * w;
    if (fp != 0.0) {
      const double polished = w - f_value(b, c, w) / fp;
      if (polished > 0.0) w = polished;
    }
    out.push_back({w, r, b, c});
  };
  push(big, RootBranch::PlusRoot);
  if (disc > 0.0) push(small, RootBranch::MinusRoot);
  return out;
}

inline std::vector<OmegaCandidate> omega_candidates(const BlockCoefficients& k) {
  const auto f = f_coefficients(k);
  return omega_candidates(f.b, f.c);
}

struct CrossingTrig {
  double sin_wt = 0.0;
  double cos_wt = 0.0;
  double theta = 0.0;
};

/// \brief sin and cos of omega tau that make i omega a root, and their angle in (-pi, pi].
inline CrossingTrig crossing_trig(const BlockCoefficients& k, double omega) {
  const auto [R, S] = eval_parts(k, cplx(0.0, omega));
  const double s2 = std::norm(S);
  if (!(s2 > 0.0)) throw Error(ErrorCode::DegenerateS, "|S(i omega)| vanishes");
  CrossingTrig t;
  t.sin_wt = (R.imag() * S.real() - S.imag() * R.real()) / s2;
  t.cos_wt = -(S.imag() * R.imag() + S.real() * R.real()) / s2;
  t.theta = std::atan2(t.sin_wt, t.cos_wt);
  if (t.theta == -std::numbers::pi) t.theta = std::numbers::pi;
  return t;
}

inline double crossing_angle(const QuasiPolynomial& p, double omega, double tau) {
  return crossing_trig(p.coefficients(tau), omega).theta;
}

/// \brief Real part of d lambda / d tau at the root i omega.
inline Transversality transversality(const QuasiPolynomial& p, double omega, double tau_star) {
  const BlockCoefficients k = p.coefficients(tau_star);
  const cplx lam(0.0, omega);
  const cplx e = std::exp(-lam * tau_star);
  const cplx num = e * (lam * k.s0 - k.ds0) - (k.dr1 * lam + k.dr0);
  const cplx den = 2.0 * lam + k.r1 - e * (tau_star * k.s0);
  Transversality t;
  t.a = num.real();
  t.b = num.imag();
  t.c = den.real();
  t.d = den.imag();
  const double d2 = t.c * t.c + t.d * t.d;
  if (!(d2 > 0.0)) throw Error(ErrorCode::DegenerateCrossing, "multiple root on the imaginary axis");
  const double top = t.a * t.c + t.b * t.d;
  if (std::abs(top) <= 1e-10 * (std::abs(t.a * t.c) + std::abs(t.b * t.d)) || top == 0.0)
    throw Error(ErrorCode::DegenerateCrossing, "transversality fails");
  t.delta = top / d2;
  t.sign = t.delta > 0 ? 1 : -1;
  return t;
}

/// \brief Crossing delays (theta + 2 n pi) / omega for n in [n_lo, n_hi], tau >= 0.
///
/// Coefficients are taken at p.delay and treated as independent of tau.
inline std::vector<CrossingCandidate> tau_candidates(const QuasiPolynomial& p, const OmegaCandidate& cand,
                                                     int n_lo, int n_hi, BlockKind block = BlockKind::Fix) {
  std::vector<CrossingCandidate> out;
  const double theta = crossing_angle(p, cand.omega, p.delay);
  for (int n = n_lo; n <= n_hi; ++n) {
    const double tau = (theta + 2.0 * std::numbers::pi * n) / cand.omega;
    if (tau < 0.0) continue;
    CrossingCandidate cc{cand, tau, n, 0, block, 0.0, -1};
    try {
      const auto t = transversality(p, cand.omega, tau);
      cc.delta = t.delta;
      cc.delta_sign = t.sign;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateCrossing) throw;
    }
    out.push_back(cc);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.tau_star < y.tau_star; });
  return out;
}

/// All crossings of a constant-coefficient block with tau in [0, tau_max].
inline std::vector<CrossingCandidate> crossings_below(const QuasiPolynomial& p, double tau_max,
                                                      BlockKind block = BlockKind::Fix) {
  std::vector<CrossingCandidate> out;
  for (const auto& cand : omega_candidates(p.coefficients())) {
    const int n_hi = static_cast<int>(std::ceil(cand.omega * tau_max / (2.0 * std::numbers::pi))) + 1;
    for (auto& cc : tau_candidates(p, cand, -2, n_hi, block))
      if (cc.tau_star <= tau_max) out.push_back(cc);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.tau_star < y.tau_star; });
  return out;
}

namespace detail {

struct SnSample {
  bool valid = false;
  double omega = 0.0;
  double theta = 0.0;
};

inline SnSample sn_sample(const QuasiPolynomial& p, RootBranch root, double tau) {
  const BlockCoefficients k = p.coefficients(tau);
  for (const auto& c : omega_candidates(k))
    if (c.root_branch == root) {
      if (std::norm(cplx(k.s0)) == 0.0) return {};
      return {true, c.omega, crossing_trig(k, c.omega).theta};
    }
  return {};
}

inline double sn_value(const SnSample& s, double tau, int n) {
  return tau - (s.theta + 2.0 * std::numbers::pi * n) / s.omega;
}

}  // namespace detail

/// \brief Zeros of S_n(tau) = tau - tau_n(tau) for tau-dependent coefficients.
///
/// grid_step <= 0 selects 1e-3 of the window length.
inline std::vector<CrossingCandidate> sn_scan(const QuasiPolynomial& p, const std::vector<RootBranch>& roots,
                                              double tau_lo, double tau_hi, double grid_step = 0.0,
                                              BlockKind block = BlockKind::Fix) {
  std::vector<CrossingCandidate> out;
  if (!(tau_hi > tau_lo)) return out;
  if (grid_step <= 0.0) grid_step = 1e-3 * (tau_hi - tau_lo);
  const auto count = static_cast<std::size_t>(std::ceil((tau_hi - tau_lo) / grid_step));
  std::vector<double> taus(count + 1);
  for (std::size_t i = 0; i <= count; ++i) taus[i] = i == count ? tau_hi : tau_lo + grid_step * i;

  for (RootBranch root : roots) {
    std::vector<detail::SnSample> s(taus.size());
    double vmin = 1e300, vmax = -1e300;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      s[i] = detail::sn_sample(p, root, taus[i]);
      if (!s[i].valid) continue;
      const double v = (s[i].omega * taus[i] - s[i].theta) / (2.0 * std::numbers::pi);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    if (vmin > vmax) continue;
    const int n_lo = static_cast<int>(std::floor(vmin)) - 1;
    const int n_hi = static_cast<int>(std::ceil(vmax)) + 1;
    for (int n = n_lo; n <= n_hi; ++n) {
      for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
        if (!s[i].valid || !s[i + 1].valid) continue;
        const double f0 = detail::sn_value(s[i], taus[i], n);
        const double f1 = detail::sn_value(s[i + 1], taus[i + 1], n);
        if (f0 == 0.0 && i > 0) continue;
        if (f0 * f1 > 0.0) continue;
        if (std::abs(s[i].theta - s[i + 1].theta) > std::numbers::pi) continue;
        double a = taus[i], b = taus[i + 1], fa = f0;
        double root_tau = f0 == 0.0 ? a : (f1 == 0.0 ? b : 0.5 * (a + b));
        detail::SnSample sm = f0 == 0.0 ? s[i] : s[i + 1];
        bool ok = true;
        if (f0 != 0.0 && f1 != 0.0) {
          for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            sm = detail::sn_sample(p, root, m);
            if (!sm.valid) { ok = false; break; }
            const double fm = detail::sn_value(sm, m, n);
            root_tau = m;
            if (std::abs(fm) < 1e-12 || b - a < 1e-15 * std::max(1.0, m)) break;
            if ((fm < 0) == (fa < 0)) { a = m; fa = fm; } else { b = m; }
          }
        }
        if (!ok) continue;
        sm = detail::sn_sample(p, root, root_tau);
        if (!sm.valid || std::abs(detail::sn_value(sm, root_tau, n)) > 1e-9) continue;
        if (std::abs(eval(p.at(root_tau), cplx(0.0, sm.omega))) > 1e-8) continue;
        const auto f = f_coefficients(p.coefficients(root_tau));
        CrossingCandidate cc{{sm.omega, root, f.b, f.c}, root_tau, n, 0, block, 0.0, -1};
        try {
          const auto t = transversality(p, sm.omega, root_tau);
          cc.delta = t.delta;
          cc.delta_sign = t.sign;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::DegenerateCrossing) throw;
        }
        const bool dup = std::any_of(out.begin(), out.end(), [&](const auto& o) {
          return o.omega_candidate.root_branch == root && o.winding == n && std::abs(o.tau_star - root_tau) < 1e-8;
        });
        if (!dup) out.push_back(cc);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.tau_star < y.tau_star; });
  return out;
}

/// \brief Existence-region boundaries in mu for one equilibrium and block.
inline RegionBoundaries region_boundaries(const NetworkParams& p, const Equilibrium& eq, BlockKind block) {
  const double K = p.coupling;
  if (K < 1.0) throw Error(ErrorCode::NoEquilibrium, "region boundaries require K >= 1");
  const double c = eq.cos_two_phi;
  const int n = p.n_nodes;
  RegionBoundaries rb;
  rb.mu_b = 2.0 * K * (1.0 - c);
  rb.k_n = 0.5 * n / std::sqrt(static_cast<double>(n - 1));
  if (block == BlockKind::Standard) {
    const double rad = (1.0 - c) * (1.0 - c) - (1.0 + c) * (1.0 + c) / ((n - 1.0) * (n - 1.0));
    if (rad >= 0.0) {
      rb.mu_minus = 2.0 * K * (1.0 - c) - 2.0 * K * std::sqrt(rad);
      rb.mu_plus = 2.0 * K * (1.0 - c) + 2.0 * K * std::sqrt(rad);
      if (!(*rb.mu_minus > 0.0)) rb.mu_minus.reset();
    }
  } else if (eq.branch == EquilibriumBranch::Minus) {
    const double r = std::sqrt(K * K - 1.0);
    rb.mu_max = 2.0 * (K + r) - 4.0 * std::sqrt(K * r);
  }
  return rb;
}

enum class SweepParameter { Mu, K };

struct CurveRow {
  double sweep_value = 0.0;
  int n = 0;
  RootBranch root_branch = RootBranch::PlusRoot;
  double omega = 0.0;
  double tau_star = 0.0;
  int delta_sign = 0;
};

/// \brief Crossing delays of a full-phase block over a one-parameter sweep.
inline std::vector<CurveRow> bifurcation_curves(ModelKind kind, BlockKind block, EquilibriumBranch eq_branch,
                                                const NetworkParams& base, SweepParameter which,
                                                const std::vector<double>& sweep, int n_lo, int n_hi,
                                                double tau_max = INFINITY, unsigned threads = 1) {
  if (kind != ModelKind::FullPhase)
    throw Error(ErrorCode::UnsupportedKind, "curve sweeps cover the full-phase model");
  auto rows_for = [&](std::size_t i) {
    NetworkParams p = base;
    (which == SweepParameter::Mu ? p.filter_gain : p.coupling) = sweep[i];
    std::vector<CurveRow> rows;
    const Equilibrium eq = equilibrium(p, eq_branch);
    const QuasiPolynomial q = build_blocks(p, eq).block(block);
    for (const auto& cand : omega_candidates(q.coefficients()))
      for (const auto& cc : tau_candidates(q, cand, n_lo, n_hi, block))
        if (cc.tau_star <= tau_max)
          rows.push_back({sweep[i], cc.winding, cand.root_branch, cand.omega, cc.tau_star, cc.delta_sign});
    return rows;
  };
  auto parts = parallel_map(sweep.size(), threads, rows_for);
  std::vector<CurveRow> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.sweep_value != y.sweep_value ? x.sweep_value < y.sweep_value : x.tau_star < y.tau_star;
  });
  return out;
}

}  // namespace pllnet
