#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pllnet/charfun.hpp"
#include "pllnet/lambert_w.hpp"
#include "pllnet/phase_difference.hpp"
#include "pllnet/phase_model.hpp"
#include "pllnet/simulator.hpp"
#include "pllnet/snmap.hpp"
#include "pllnet/spectrum.hpp"

namespace pllnet::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> check;
};

namespace detail {

inline std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline Outcome crossing_delays() {
  const auto t0 = std::chrono::steady_clock::now();
  const NetworkParams p{2, 1.05, 0.3, 1.0, 0.0};
  const auto blocks = build_blocks(p, equilibrium(p, EquilibriumBranch::Minus));
  const auto cs = crossings_below(blocks.fix_block, 25.0);
  const double elapsed = seconds_since(t0);
  const double want[] = {6.34, 11.00, 15.41, 23.51, 24.48};
  const int signs[] = {1, -1, 1, -1, 1};
  bool ok = cs.size() == 5 && elapsed < 1.0;
  std::string d = "tau =";
  for (std::size_t i = 0; i < cs.size(); ++i) {
    d += " " + fmt(cs[i].tau_star, 6) + (cs[i].delta_sign > 0 ? "(+)" : "(-)");
    if (i < 5) ok = ok && std::abs(cs[i].tau_star - want[i]) <= 0.01 && cs[i].delta_sign == signs[i];
  }
  return {ok, d + ", " + fmt(elapsed * 1e3, 3) + " ms"};
}

inline Outcome existence_boundary() {
  const NetworkParams p{2, 1.05, 0.3, 1.0, 0.0};
  const auto rb = region_boundaries(p, equilibrium(p, EquilibriumBranch::Minus), BlockKind::Fix);
  const bool ok = rb.mu_max && std::abs(*rb.mu_max - 0.4211) <= 0.0005;
  return {ok, "mu_max = " + (rb.mu_max ? fmt(*rb.mu_max, 8) : std::string("absent"))};
}

inline Outcome symmetry_breaking_hopf() {
  const NetworkParams p{3, 1.05, 0.075, 1.0, 0.0};
  const auto q = build_blocks(p, equilibrium(p, EquilibriumBranch::Minus)).standard_block;
  std::optional<double> omega, tau;
  for (const auto& c : crossings_below(q, 50.0, BlockKind::Standard))
    if (c.omega_candidate.root_branch == RootBranch::MinusRoot) {
      omega = c.omega_candidate.omega;
      tau = c.tau_star;
      break;
    }
  if (!omega) return {false, "no omega_- crossing"};
  const bool ok = std::abs(*omega - 0.2942) <= 0.0005 && std::abs(*tau - 7.4898) <= 0.005;
  return {ok, "omega_- = " + fmt(*omega, 6) + ", first omega_- crossing tau = " + fmt(*tau, 6)};
}

inline Outcome orbit_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  const NetworkParams p{3, 1.05, 0.075, 1.0, 9.5};
  const Equilibrium eq = equilibrium(p, EquilibriumBranch::Minus);
  const auto history = HistorySpec::perturbed(equilibrium_state(p, eq), standard_pair_direction(3, 0, 1), 0.05);
  const Trajectory tr = integrate(ModelKind::FullPhase, p, history, 4000.0, p.delay / 100.0);
  double period = 0.0;
  try {
    period = period_estimate(tr, 0.6);
  } catch (const Error& e) {
    return {false, std::string("no periodic orbit: ") + e.what()};
  }
  const SymmetryClass cls = symmetry_classify(tr, period, 1e-2);
  const double elapsed = seconds_since(t0);
  double amplitude = 0.0;
  for (std::size_t k = tr.size() * 6 / 10; k < tr.size(); ++k)
    for (int i = 0; i < 3; ++i) amplitude = std::max(amplitude, std::abs(tr.state(k)[2 * i] - eq.phi));
  const bool ok = std::abs(period - 24.19) <= 0.5 && cls.tag == SymmetryTag::Z2SpatioTemporal && cls.pair_i == 0 &&
                  cls.pair_j == 1 && cls.residual < 1e-2 && elapsed < 60.0;
  return {ok, "T = " + fmt(period, 6) + ", class " + to_string(cls) + " residual " + fmt(cls.residual, 3) +
                  ", late amplitude " + fmt(amplitude, 3) + ", " + fmt(elapsed, 3) + " s"};
}

inline Outcome block_factorization() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uk(1.0, 3.0), umu(0.05, 2.0), utau(0.0, 20.0), ur(0.0, 10.0),
      uang(-std::numbers::pi, std::numbers::pi), u01(0.0, 1.0);
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n)
    for (ModelKind kind : {ModelKind::FullPhase, ModelKind::Phase})
      for (int s = 0; s < 100; ++s) {
        NetworkParams p{n, uk(rng), umu(rng), 1.0, utau(rng)};
        const cplx lambda = std::polar(ur(rng), uang(rng));
        BlockPoint point;
        BlockSet b;
        if (kind == ModelKind::FullPhase) {
          const Equilibrium eq = equilibrium(p, u01(rng) < 0.5 ? EquilibriumBranch::Plus : EquilibriumBranch::Minus);
          point = eq;
          b = build_blocks(p, eq);
        } else {
          const auto sols = releq_solve(p, p.delay);
          const double w = sols[static_cast<std::size_t>(u01(rng) * sols.size()) % sols.size()];
          point = w;
          b = build_phase_blocks(p, w);
        }
        const cplx det = full_determinant(kind, p, point, lambda);
        const cplx prod = eval(b.fix_block, lambda) * std::pow(eval(b.standard_block, lambda), n - 1);
        worst = std::max(worst, std::abs(det - prod) / std::abs(det));
      }
  return {worst < 1e-10, "max relative error " + fmt(worst, 3) + " over 800 samples"};
}

inline Outcome lambert_w_checks() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ulog(-3.0, 3.0), uang(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  for (int k = -3; k <= 3; ++k)
    for (int i = 0; i < 1000; ++i) {
      const cplx z = std::polar(std::pow(10.0, ulog(rng)), uang(rng));
      const cplx w = lambert_w(k, z);
      worst = std::max(worst, std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z)));
    }
  const double at_branch = std::abs(lambert_w(0, cplx(-std::exp(-1.0), 0.0)) - cplx(-1.0));
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-14) {
    const double m = 0.5 * (lo + hi);
    (m * std::exp(m) < 1.0 ? lo : hi) = m;
  }
  const double w1 = lambert_w(0, cplx(1.0)).real();
  const bool ok = worst < 1e-12 && at_branch < 1e-10 && std::abs(w1 - 0.5 * (lo + hi)) < 1e-6 &&
                  std::abs(w1 - 0.5671433) < 1e-6;
  return {ok, "max defect " + fmt(worst, 3) + ", |W0(-1/e)+1| = " + fmt(at_branch, 3) + ", W0(1) = " + fmt(w1, 10)};
}

inline Outcome rightmost_sweep_check() {
  std::vector<double> grid;
  for (int i = 0; i <= 500; ++i) grid.push_back(0.1 * i);
  bool ok = true;
  std::string d;
  for (double mu : {0.1, 0.2, 0.4, 0.6, 0.8}) {
    const NetworkParams p{2, 2.0, mu, 1.0, 0.0};
    const auto q = build_blocks(p, equilibrium(p, EquilibriumBranch::Plus)).fix_block;
    const auto rows = rightmost_sweep(q, grid, Scheme::Newton);
    const double closed = -0.5 * mu + 0.5 * std::sqrt(mu * mu + 8.0 * std::sqrt(3.0) * mu);
    bool positive = true, certified = true;
    for (const auto& r : rows) {
      positive = positive && r.lambda.real() > 0.0;
      certified = certified && r.certified;
    }
    const double re0 = rows.front().lambda.real(), re50 = rows.back().lambda.real();
    const bool this_ok = std::abs(re0 - closed) < 1e-9 && positive && certified && re50 < re0 / 10.0;
    ok = ok && this_ok;
    d += (d.empty() ? "" : "; ") + std::string("mu=") + fmt(mu, 2) + " Re(0)=" + fmt(re0, 8) + " Re(50)=" + fmt(re50, 5) +
         (this_ok ? "" : " FAILED");
  }
  return {ok, d};
}

inline Outcome root_count_switching() {
  const NetworkParams p{2, 1.05, 0.3, 1.0, 0.0};
  const auto q = build_blocks(p, equilibrium(p, EquilibriumBranch::Minus)).fix_block;
  const auto cs = crossings_below(q, 40.0);
  if (cs.size() < 6) return {false, "fewer than six crossings"};
  std::vector<double> edges{0.0};
  for (std::size_t i = 0; i < 6; ++i) edges.push_back(cs[i].tau_star);
  const int want[] = {0, 2, 0, 2, 0, 2};
  bool ok = true;
  std::string d = "counts";
  for (int i = 0; i < 6; ++i) {
    const double tau = 0.5 * (edges[i] + edges[i + 1]);
    const double b = root_bound(q.coefficients(tau), tau, 0.0) + 1.0;
    const int n = root_census(q, tau, CensusBox{1e-6, b, -b, b, 0});
    ok = ok && n == want[i];
    d += " " + std::to_string(n);
  }
  return {ok, d};
}

inline Outcome phase_model_scan() {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  const double hi = 5.0 * std::numbers::pi;
  const auto branches = releq_branches(p, 0.0, hi);
  const auto fix = relative_hopf_scan(p, BlockKind::Fix, 0.0, hi);
  const auto std_ = relative_hopf_scan(p, BlockKind::Standard, 0.0, hi);
  bool all_positive = !fix.empty();
  for (const auto& c : fix) all_positive = all_positive && c.delta > 0.0;
  const double first = std_.empty() ? NAN : std_.front().tau_star;
  const bool ok = branches.size() == 11 && all_positive && first >= 3.0 && first <= 3.3;
  return {ok, std::to_string(branches.size()) + " branches, " + std::to_string(fix.size()) + " Fix zeros" +
                  (all_positive ? " all delta > 0" : " with delta <= 0") + ", first standard zero " + fmt(first, 6)};
}

inline Outcome zero_root_events() {
  const NetworkParams p{2, 1.0, 1.0, 1.0, 0.0};
  const auto ev = zero_root_taus(p, -5, 10);
  double delta_n1 = NAN;
  for (const auto& e : ev)
    if (e.n == 1) delta_n1 = e.delta0;
  const bool ok = !ev.empty() && std::abs(ev.front().tau_star - 0.75 * std::numbers::pi) < 1e-10 &&
                  std::abs(delta_n1 + 4.0) < 1e-10;
  return {ok, "smallest tau* = " + fmt(ev.empty() ? NAN : ev.front().tau_star, 12) + ", delta0(n=1) = " + fmt(delta_n1, 12)};
}

inline Outcome phase_difference_checks() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uk(0.3, 2.5), umu(0.1, 2.0), utau(0.5, 4.0), ur(0.0, 3.0),
      uang(-std::numbers::pi, std::numbers::pi), ure(-0.5, 3.0), uim(-3.0, 3.0);
  double worst2 = 0.0, worst3 = 0.0;
  for (int s = 0; s < 20; ++s) {
    NetworkParams p{2, uk(rng), umu(rng), 1.0, utau(rng)};
    for (double w : releq_solve(p, p.delay)) {
      const auto pd = char_functions_n2(p, (w - p.free_freq) * p.delay);
      const auto ph = build_phase_blocks(p, w);
      for (int i = 0; i < 50; ++i) {
        // exp(-lambda tau) amplifies angle rounding far left; sample Re lambda >= -0.5
        const cplx l(ure(rng), uim(rng));
        worst2 = std::max({worst2, std::abs(eval(pd.p1, l) - eval(ph.fix_block, l)),
                           std::abs(eval(pd.p2, l) - eval(ph.standard_block, l))});
      }
    }
    NetworkParams p3 = p;
    p3.n_nodes = 3;
    for (double w : releq_solve(p3, p3.delay)) {
      const auto ph = build_phase_blocks(p3, w);
      for (int i = 0; i < 20; ++i) {
        const cplx l = std::polar(0.5 + ur(rng), uang(rng));
        const cplx pu = eval(ph.standard_block, l);
        const cplx expect = std::pow(l * l + p3.filter_gain * l, 3) * eval(ph.fix_block, l) * pu * pu;
        const cplx det = determinant_n3(p3, (w - p3.free_freq) * p3.delay, l);
        worst3 = std::max(worst3, std::abs(det - expect) / std::abs(det));
      }
    }
  }
  const bool ok = worst2 < 1e-12 && worst3 < 1e-10;
  return {ok, "N=2 max block mismatch " + fmt(worst2, 3) + ", N=3 max factorization error " + fmt(worst3, 3)};
}

inline Outcome simulator_properties() {
  // order on the tau = 0 reduction
  NetworkParams p{3, 1.05, 0.3, 1.0, 0.0};
  const Equilibrium eq = equilibrium(p, EquilibriumBranch::Minus);
  const auto h = HistorySpec::perturbed(equilibrium_state(p, eq), isotypic_direction(3, 1), 0.5);
  std::vector<double> fin;
  for (double step : {0.1, 0.05, 0.025}) {
    const auto tr = integrate(ModelKind::FullPhase, p, h, 10.0, step);
    fin.push_back(tr.state(tr.size() - 1)[0]);
  }
  const double order = std::log2(std::abs(fin[0] - fin[1]) / std::abs(fin[1] - fin[2]));

  // permutation equivariance
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double equi = 0.0;
  for (ModelKind kind : {ModelKind::FullPhase, ModelKind::Phase}) {
    NetworkParams q{3, 1.3, 0.4, 1.0, 2.0};
    StateVector x0(6);
    for (auto& v : x0) v = u(rng);
    const std::vector<int> perm{1, 0, 2};
    const auto a = integrate(kind, q, HistorySpec::constant(x0), 50.0, 0.05);
    const auto b = integrate(kind, q, HistorySpec::constant(permute_nodes(x0, perm)), 50.0, 0.05);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto pa = permute_nodes(std::span<const double>(a.state(k), 6), perm);
      for (int c = 0; c < 6; ++c) equi = std::max(equi, std::abs(pa[c] - b.state(k)[c]));
    }
  }

  // constant equilibrium history
  NetworkParams r{3, 1.05, 0.3, 1.0, 5.0};
  const Equilibrium er = equilibrium(r, EquilibriumBranch::Minus);
  const auto xe = equilibrium_state(r, er);
  const auto te = integrate(ModelKind::FullPhase, r, HistorySpec::constant(xe), 100.0, 0.05);
  double resid = 0.0;
  for (std::size_t k = 0; k < te.size(); ++k)
    for (int c = 0; c < 6; ++c) resid = std::max(resid, std::abs(te.state(k)[c] - xe[c]));

  const bool ok = order >= 3.7 && order <= 4.3 && equi < 1e-9 && resid < 1e-10;
  return {ok, "order " + fmt(order, 5) + ", equivariance " + fmt(equi, 3) + ", equilibrium drift " + fmt(resid, 3)};
}

}  // namespace detail

inline std::vector<Criterion> criteria() {
  using namespace detail;
  return {
      {1, "Fix-block crossing delays, K=1.05 mu=0.3 minus", crossing_delays},
      {2, "existence boundary mu_max, K=1.05 minus", existence_boundary},
      {3, "symmetry-breaking Hopf, N=3 K=1.05 mu=0.075", symmetry_breaking_hopf},
      {4, "orbit reproduction, N=3 tau=9.5", orbit_reproduction},
      {5, "block factorization of the characteristic matrix", block_factorization},
      {6, "Lambert W identity and reference values", lambert_w_checks},
      {7, "rightmost-root sweep, K=2 plus", rightmost_sweep_check},
      {8, "unstable-root census between crossings", root_count_switching},
      {9, "phase-model branches and relative Hopf zeros", phase_model_scan},
      {10, "zero-root events of the standard block", zero_root_events},
      {11, "phase-difference blocks and fictitious factor", phase_difference_checks},
      {12, "simulator order, equivariance, equilibrium drift", simulator_properties},
  };
}

/// \brief Runs every criterion, one PASS/FAIL line each; true when all pass.
inline bool run_acceptance(std::ostream& os) {
  int failed = 0;
  for (const auto& c : criteria()) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = detail::seconds_since(t0);
    os << (o.pass ? "PASS" : "FAIL") << " [" << std::setw(2) << c.id << "] " << c.name << " -- " << o.detail << " ("
       << detail::fmt(dt, 3) << " s)" << std::endl;
    if (!o.pass) ++failed;
  }
  os << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << std::endl;
  return failed == 0;
}

}  // namespace pllnet::acceptance
