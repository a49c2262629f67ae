#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "pllnet/charfun.hpp"
#include "pllnet/parallel.hpp"
#include "pllnet/snmap.hpp"

namespace pllnet {

struct RelEqBranch {
  int branch_id = 0;
  std::vector<std::pair<double, double>> samples;  // (tau, Omega-hat)
  double window_lo = 0.0;
  double window_hi = 0.0;
};

struct ZeroRootEvent {
  double tau_star = 0.0;
  int n = 0;
  double delta0 = 0.0;
};

struct EquilibriumCasePoint {
  int m = 0;
  double mu = 0.0;
  double coupling = 0.0;
};

inline double releq_residual(const NetworkParams& p, double omega_hat, double tau) {
  return omega_hat + p.coupling * std::sin(omega_hat * tau) - p.free_freq;
}

/// \brief All rotation frequencies Omega-hat + K sin(Omega-hat tau) = omega_M, ascending.
///
/// The scan grid is refined with the critical points cos(x tau) = -1 / (K tau), so
/// the residual is monotone between neighbours and close root pairs are not missed.
inline std::vector<double> releq_solve(const NetworkParams& p, double tau) {
  if (tau < 0.0) throw Error(ErrorCode::InvalidArgument, "delay must be >= 0");
  const double K = p.coupling;
  if (tau == 0.0) return {p.free_freq};
  const double lo = p.free_freq - K, hi = p.free_freq + K;
  const double step = std::min(std::numbers::pi / (4.0 * tau * K), (hi - lo) / 100.0);
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  std::vector<double> grid;
  grid.reserve(n + 8);
  for (std::size_t i = 0; i <= n; ++i)
    grid.push_back(i == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
  if (K * tau >= 1.0) {
    const double base = std::acos(-1.0 / (K * tau));
    const double period = 2.0 * std::numbers::pi;
    const auto k_lo = static_cast<long>(std::floor((lo * tau - base) / period)) - 1;
    const auto k_hi = static_cast<long>(std::ceil((hi * tau + base) / period)) + 1;
    for (long k = k_lo; k <= k_hi; ++k)
      for (double sgn : {1.0, -1.0}) {
        const double x = (sgn * base + period * static_cast<double>(k)) / tau;
        if (x > lo && x < hi) grid.push_back(x);
      }
    std::sort(grid.begin(), grid.end());
  }
  auto g = [&](double x) { return releq_residual(p, x, tau); };
  std::vector<double> out;
  double x0 = grid[0], g0 = g(x0);
  if (g0 == 0.0) out.push_back(x0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x1 = grid[i];
    const double g1 = g(x1);
    if (g1 == 0.0) {
      out.push_back(x1);
    } else if (g0 != 0.0 && (g0 < 0) != (g1 < 0)) {
      double a = x0, b = x1, ga = g0;
      while (b - a > 1e-13) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if (gm == 0.0) { a = b = m; break; }
        if ((gm < 0) == (ga < 0)) { a = m; ga = gm; } else { b = m; }
      }
      double x = 0.5 * (a + b);
      for (int it = 0; it < 3; ++it) {
        const double d = 1.0 + K * tau * std::cos(x * tau);
        if (d == 0.0) break;
        const double nx = x - g(x) / d;
        if (nx < x0 || nx > x1) break;
        x = nx;
      }
      out.push_back(x);
    }
    x0 = x1;
    g0 = g1;
  }
  return out;
}

namespace detail {

// monotone assignment of the shorter sorted list into the longer one
inline std::vector<int> align_sorted(const std::vector<double>& shorter, const std::vector<double>& longer) {
  const std::size_t m = shorter.size(), n = longer.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(m + 1, std::vector<double>(n + 1, inf));
  for (std::size_t j = 0; j <= n; ++j) cost[0][j] = 0.0;
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = i; j <= n; ++j)
      cost[i][j] = std::min(cost[i][j - 1], cost[i - 1][j - 1] + std::abs(shorter[i - 1] - longer[j - 1]));
  std::vector<int> match(m, -1);
  std::size_t i = m, j = n;
  while (i > 0) {
    if (j > i && cost[i][j] == cost[i][j - 1]) {
      --j;
    } else {
      match[i - 1] = static_cast<int>(j - 1);
      --i;
      --j;
    }
  }
  return match;
}

inline double count_change_point(const NetworkParams& p, double a, double b, std::size_t count_a) {
  while (b - a > 1e-6) {
    const double m = 0.5 * (a + b);
    if (releq_solve(p, m).size() == count_a) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// \brief Branches tau -> Omega-hat(tau) on a delay window; resolution <= 0 picks window/4000.
inline std::vector<RelEqBranch> releq_branches(const NetworkParams& p, double tau_lo, double tau_hi,
                                               double resolution = 0.0) {
  if (tau_lo < 0.0 || !(tau_hi >= tau_lo)) throw Error(ErrorCode::InvalidArgument, "invalid delay window");
  if (resolution <= 0.0) resolution = std::max((tau_hi - tau_lo) / 4000.0, 1e-9);
  const auto steps = static_cast<std::size_t>(std::ceil((tau_hi - tau_lo) / resolution));
  std::vector<RelEqBranch> all;
  std::vector<int> active;  // branch index for each sorted solution at the previous grid point
  std::vector<double> prev;
  double prev_tau = tau_lo;
  for (std::size_t s = 0; s <= steps; ++s) {
    const double tau = s == steps ? tau_hi : tau_lo + (tau_hi - tau_lo) * static_cast<double>(s) / steps;
    const auto sols = releq_solve(p, tau);
    std::vector<int> now(sols.size(), -1);
    if (s > 0) {
      if (sols.size() >= prev.size()) {
        const auto match = detail::align_sorted(prev, sols);
        for (std::size_t i = 0; i < prev.size(); ++i) now[match[i]] = active[i];
      } else {
        const auto match = detail::align_sorted(sols, prev);
        std::vector<bool> kept(prev.size(), false);
        for (std::size_t j = 0; j < sols.size(); ++j) {
          now[j] = active[match[j]];
          kept[match[j]] = true;
        }
        const double end = detail::count_change_point(p, prev_tau, tau, prev.size());
        for (std::size_t i = 0; i < prev.size(); ++i)
          if (!kept[i]) all[active[i]].window_hi = end;
      }
    }
    double birth = tau;
    if (s > 0 && sols.size() > prev.size()) birth = detail::count_change_point(p, prev_tau, tau, prev.size());
    for (std::size_t j = 0; j < sols.size(); ++j) {
      if (now[j] < 0) {
        now[j] = static_cast<int>(all.size());
        all.push_back({0, {}, s == 0 ? tau : birth, tau});
      }
      auto& br = all[now[j]];
      br.samples.emplace_back(tau, sols[j]);
      br.window_hi = tau;
    }
    active = now;
    prev = sols;
    prev_tau = tau;
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.window_lo != b.window_lo) return a.window_lo < b.window_lo;
    return a.samples.front().second < b.samples.front().second;
  });
  for (std::size_t i = 0; i < all.size(); ++i) all[i].branch_id = static_cast<int>(i);
  return all;
}

/// \brief Omega-hat on one branch at any delay in its window.
inline RotationTracker branch_tracker(const NetworkParams& p, const RelEqBranch& br) {
  return [p, samples = br.samples](double tau) {
    auto it = std::lower_bound(samples.begin(), samples.end(), tau,
                               [](const auto& s, double t) { return s.first < t; });
    double guess;
    if (it == samples.begin()) {
      guess = it->second;
    } else if (it == samples.end()) {
      guess = samples.back().second;
    } else {
      const auto& a = *(it - 1);
      const auto& b = *it;
      guess = a.second + (b.second - a.second) * (tau - a.first) / (b.first - a.first);
    }
    const auto sols = releq_solve(p, tau);
    if (sols.empty()) return guess;
    return *std::min_element(sols.begin(), sols.end(),
                             [&](double x, double y) { return std::abs(x - guess) < std::abs(y - guess); });
  };
}

/// \brief Relative-Hopf crossings of one phase-model block, branch by branch.
inline std::vector<CrossingCandidate> relative_hopf_scan(const NetworkParams& p, BlockKind block, double tau_lo,
                                                         double tau_hi, double grid_step = 0.0,
                                                         unsigned threads = 1) {
  const auto branches = releq_branches(p, tau_lo, tau_hi);
  if (grid_step <= 0.0) grid_step = 1e-3 * (tau_hi - tau_lo);
  auto per_branch = [&](std::size_t i) {
    const auto& br = branches[i];
    const QuasiPolynomial q = build_phase_blocks(p, branch_tracker(p, br)).block(block);
    const double lo = std::max(tau_lo, br.window_lo + 1e-9);
    const double hi = std::min(tau_hi, br.window_hi);
    std::vector<CrossingCandidate> found;
    if (hi > lo) {
      const double step = std::min(grid_step, (hi - lo) / 8.0);
      found = sn_scan(q, {RootBranch::PlusRoot, RootBranch::MinusRoot}, lo, hi, step, block);
    }
    for (auto& c : found) c.branch_id = br.branch_id;
    return found;
  };
  auto parts = parallel_map(branches.size(), threads, per_branch);
  std::vector<CrossingCandidate> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.tau_star < y.tau_star; });
  return out;
}

/// \brief Curves K(mu) on which Omega-hat = omega_M has an imaginary Fix root, omega_M tau = pi_multiple * pi.
///
/// Odd multiples admit no nonzero root and give an empty table.
inline std::vector<EquilibriumCasePoint> equilibrium_case_curves(const NetworkParams& p, int pi_multiple, int m_lo,
                                                                 int m_hi, const std::vector<double>& mu_grid,
                                                                 double k_max = 20.0) {
  std::vector<EquilibriumCasePoint> out;
  if (pi_multiple <= 0 || pi_multiple % 2 != 0) return out;
  const int n = pi_multiple / 2;
  const double wm = p.free_freq;
  for (int m = m_lo; m <= m_hi; ++m) {
    for (double mu : mu_grid) {
      auto h = [&](double K) {
        const double w = std::sqrt(std::max(0.0, 2.0 * K * mu - mu * mu));
        return w - wm / (2.0 * n * std::numbers::pi) * (std::atan2(-w, mu - K) + 2.0 * m * std::numbers::pi);
      };
      const double a0 = 0.5 * mu, span = k_max - a0;
      if (!(span > 0)) continue;
      const int samples = 4000;
      double ka = a0 * (1 + 1e-12) + 1e-300, ha = h(ka);
      for (int i = 1; i <= samples; ++i) {
        const double kb = a0 + span * i / samples;
        const double hb = h(kb);
        if ((ha < 0) != (hb < 0)) {
          double lo = ka, hi = kb, hlo = ha;
          for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double hm = h(mid);
            if ((hm < 0) == (hlo < 0)) { lo = mid; hlo = hm; } else { hi = mid; }
          }
          const double root = 0.5 * (lo + hi);
          if (std::abs(h(root)) < 1e-9) out.push_back({m, mu, root});
        }
        ka = kb;
        ha = hb;
      }
    }
  }
  return out;
}

/// \brief Delays at which the standard block has a zero root.
inline std::vector<ZeroRootEvent> zero_root_taus(const NetworkParams& p, int n_lo, int n_hi) {
  std::vector<ZeroRootEvent> out;
  const double K = p.coupling, wm = p.free_freq;
  const int N = p.n_nodes;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
    const double denom = wm - sgn * K;             // omega_M + (-1)^(n+1) K
    if (!(denom > 0.0)) continue;
    const double tau = (0.5 * std::numbers::pi + n * std::numbers::pi) / denom;
    if (tau < 0.0) continue;
    out.push_back({tau, n, sgn * K * N / (N - 1.0) * denom});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.tau_star < b.tau_star; });
  return out;
}

}  // namespace pllnet
