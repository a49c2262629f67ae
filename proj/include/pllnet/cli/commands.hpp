#pragma once

#include <algorithm>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pllnet/charfun.hpp"
#include "pllnet/cli/config.hpp"
#include "pllnet/cli/output.hpp"
#include "pllnet/cli/verify.hpp"
#include "pllnet/model.hpp"
#include "pllnet/phase_difference.hpp"
#include "pllnet/phase_model.hpp"
#include "pllnet/simulator.hpp"
#include "pllnet/snmap.hpp"
#include "pllnet/spectrum.hpp"

namespace pllnet::cli {

/// Output sink or file could not be opened; exit code 2 like usage errors.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_phase(ModelKind k) { return k == ModelKind::Phase || k == ModelKind::PhaseRotatingFrame; }

inline std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::FullPhase: return "full-phase";
    case ModelKind::Phase: return "phase";
    case ModelKind::PhaseRotatingFrame: return "phase-rotating";
    case ModelKind::PhaseDifference: return "phase-difference";
  }
  return "?";
}

/// Everything expressed in units where omega_M = 1.
struct Resolved {
  NetworkParams p;
  double scale = 1.0;  // physical omega_M
  std::vector<std::string> comments;
};

inline Resolved resolve(const RunConfig& c) {
  Resolved r;
  r.p = normalize(c.params);
  r.scale = c.params.free_freq;
  r.comments.push_back("model=" + model_name(c.model) + " N=" + std::to_string(r.p.n_nodes) +
                       " K=" + format_number(r.p.coupling) + " mu=" + format_number(r.p.filter_gain) +
                       " omega_M=" + format_number(r.p.free_freq) + " tau=" + format_number(r.p.delay));
  if (r.scale != 1.0)
    r.comments.push_back("normalized from omega_M=" + format_number(r.scale) +
                         "; rates divided and times multiplied by it");
  return r;
}

inline std::pair<double, double> window(const RunConfig& c, double scale, double default_hi) {
  if (c.tau_window) return {c.tau_window->first * scale, c.tau_window->second * scale};
  if (c.tau_max) return {0.0, *c.tau_max * scale};
  if (c.tau_grid) return {c.tau_grid->lo * scale, c.tau_grid->hi * scale};
  return {0.0, default_hi};
}

inline QuasiPolynomial full_phase_block(const RunConfig& c, const NetworkParams& p) {
  return build_blocks(p, equilibrium(p, c.eq)).block(c.block);
}

inline std::string flag(BlockKind b) { return to_string(b); }

struct Result {
  Table table;
  std::string summary;
  std::string chart_x;
  std::vector<std::string> chart_y;
  std::vector<std::string> chart_groups;
};

inline Result run_curves(const RunConfig& c, const Resolved& r) {
  if (c.mu_grid.has_value() == c.k_grid.has_value()) throw UsageError("curves needs exactly one of --mu-grid, --K-grid");
  const bool by_mu = c.mu_grid.has_value();
  const auto sweep = (by_mu ? *c.mu_grid : *c.k_grid).scaled(1.0 / r.scale).values();
  const double tau_max = c.tau_max ? *c.tau_max * r.scale : INFINITY;
  const auto rows = bifurcation_curves(c.model, c.block, c.eq, r.p, by_mu ? SweepParameter::Mu : SweepParameter::K,
                                       sweep, c.n_range.lo, c.n_range.hi, tau_max, c.threads);
  Result out;
  const std::string x = by_mu ? "mu" : "K";
  out.table.header = {x, "n", "root_branch", "omega", "tau_star", "delta_sign"};
  for (const auto& row : rows)
    out.table.add({row.sweep_value, static_cast<long>(row.n), to_string(row.root_branch), row.omega, row.tau_star,
                   static_cast<long>(row.delta_sign)});
  out.summary = "curves: " + std::to_string(rows.size()) + " crossings over " + std::to_string(sweep.size()) + " " + x +
                " values, block " + flag(c.block) + ", equilibrium " + to_string(c.eq);
  out.chart_x = x;
  out.chart_y = {"tau_star"};
  out.chart_groups = {"n", "root_branch"};
  return out;
}

/// Block for the phase models: fixed --omega-hat, else the first relative-equilibrium branch.
inline std::pair<QuasiPolynomial, std::pair<double, double>> phase_block(const RunConfig& c, const NetworkParams& p,
                                                                         double lo, double hi) {
  if (c.omega_hat) {
    const double w = *c.omega_hat / c.params.free_freq;
    return {build_phase_blocks(p, w).block(c.block), {lo, hi}};
  }
  const auto branches = releq_branches(p, lo, hi);
  if (branches.empty()) throw Error(ErrorCode::NoEquilibrium, "no relative equilibrium in the delay window");
  const auto& br = branches.front();
  return {build_phase_blocks(p, branch_tracker(p, br)).block(c.block), {br.window_lo, br.window_hi}};
}

inline Result run_rightmost(const RunConfig& c, const Resolved& r) {
  if (!c.tau_grid) throw UsageError("rightmost needs --tau-grid");
  std::vector<double> grid = c.tau_grid->scaled(r.scale).values();
  QuasiPolynomial q;
  std::size_t skipped = 0;
  if (c.model == ModelKind::FullPhase) {
    q = full_phase_block(c, r.p);
  } else if (is_phase(c.model)) {
    auto [block, span] = phase_block(c, r.p, grid.front(), grid.back());
    q = block;
    const auto before = grid.size();
    std::erase_if(grid, [&](double t) { return t < span.first || t > span.second; });
    skipped = before - grid.size();
  } else {
    throw Error(ErrorCode::UnsupportedKind, "rightmost covers the full-phase and phase models");
  }
  const auto rows = rightmost_sweep(q, grid, c.scheme);
  Result out;
  out.table.header = {"tau", "re_lambda", "im_lambda", "certified"};
  double max_re = -INFINITY;
  long uncertified = 0;
  for (const auto& row : rows) {
    out.table.add({row.tau, row.lambda.real(), row.lambda.imag(), static_cast<long>(row.certified)});
    max_re = std::max(max_re, row.lambda.real());
    uncertified += !row.certified;
  }
  out.summary = "rightmost: " + std::to_string(rows.size()) + " delays, max Re lambda " + format_number(max_re) + ", " +
                std::to_string(uncertified) + " uncertified";
  if (skipped) out.summary += ", " + std::to_string(skipped) + " delays outside the branch window skipped";
  out.chart_x = "tau";
  out.chart_y = {"re_lambda"};
  return out;
}

inline Result run_snmap_samples(const RunConfig& c, const Resolved& r, double lo, double hi) {
  Result out;
  out.table.header = {"branch_id", "root_branch", "n", "tau", "s_n"};
  const std::vector<double> taus = c.tau_grid ? c.tau_grid->scaled(r.scale).values() : Grid{lo, hi, 401}.values();
  auto emit = [&](const QuasiPolynomial& q, long id, double wlo, double whi) {
    for (RootBranch root : {RootBranch::PlusRoot, RootBranch::MinusRoot})
      for (double tau : taus) {
        if (tau < wlo || tau > whi) continue;
        const auto s = pllnet::detail::sn_sample(q, root, tau);
        if (!s.valid) continue;
        for (int n = c.n_range.lo; n <= c.n_range.hi; ++n)
          out.table.add({id, to_string(root), static_cast<long>(n), tau, pllnet::detail::sn_value(s, tau, n)});
      }
  };
  if (c.model == ModelKind::FullPhase) {
    emit(full_phase_block(c, r.p), -1, lo, hi);
  } else {
    for (const auto& br : releq_branches(r.p, lo, hi))
      emit(build_phase_blocks(r.p, branch_tracker(r.p, br)).block(c.block), br.branch_id, br.window_lo, br.window_hi);
  }
  // keep a deterministic, plot-friendly order
  std::stable_sort(out.table.rows.begin(), out.table.rows.end(), [](const auto& a, const auto& b) {
    if (numeric(a[0]) != numeric(b[0])) return numeric(a[0]) < numeric(b[0]);
    if (std::get<std::string>(a[1]) != std::get<std::string>(b[1]))
      return std::get<std::string>(a[1]) > std::get<std::string>(b[1]);
    if (numeric(a[2]) != numeric(b[2])) return numeric(a[2]) < numeric(b[2]);
    return numeric(a[3]) < numeric(b[3]);
  });
  out.summary = "snmap: " + std::to_string(out.table.rows.size()) + " S_n samples";
  out.chart_x = "tau";
  out.chart_y = {"s_n"};
  out.chart_groups = {"branch_id", "root_branch", "n"};
  return out;
}

inline Result run_snmap(const RunConfig& c, const Resolved& r) {
  if (!(c.model == ModelKind::FullPhase || is_phase(c.model)))
    throw Error(ErrorCode::UnsupportedKind, "snmap covers the full-phase and phase models");
  const auto [lo, hi] = window(c, r.scale, 50.0);
  if (c.samples) return run_snmap_samples(c, r, lo, hi);
  std::vector<CrossingCandidate> found;
  if (c.model == ModelKind::FullPhase) {
    for (const auto& cc : crossings_below(full_phase_block(c, r.p), hi, c.block))
      if (cc.tau_star >= lo) found.push_back(cc);
  } else {
    found = relative_hopf_scan(r.p, c.block, lo, hi, 0.0, c.threads);
  }
  Result out;
  out.table.header = {"tau_star", "omega", "root_branch", "n", "delta", "delta_sign", "branch_id"};
  long positive = 0;
  for (const auto& cc : found) {
    out.table.add({cc.tau_star, cc.omega_candidate.omega, to_string(cc.omega_candidate.root_branch),
                   static_cast<long>(cc.winding), cc.delta, static_cast<long>(cc.delta_sign),
                   static_cast<long>(cc.branch_id)});
    positive += cc.delta_sign > 0;
  }
  out.summary = "snmap: " + std::to_string(found.size()) + " crossings of the " + flag(c.block) + " block in [" +
                format_number(lo) + ", " + format_number(hi) + "], " + std::to_string(positive) + " with delta > 0";
  out.chart_x = "tau_star";
  out.chart_y = {"omega"};
  out.chart_groups = {"root_branch"};
  return out;
}

inline Result run_releq(const RunConfig& c, const Resolved& r) {
  Result out;
  if (c.case_curves) {
    if (!c.mu_grid) throw UsageError("releq --case-curves needs --mu-grid");
    const auto mus = c.mu_grid->scaled(1.0 / r.scale).values();
    const auto pts = equilibrium_case_curves(r.p, c.pi_multiple, c.m_range.lo, c.m_range.hi, mus);
    out.table.header = {"m", "mu", "K"};
    for (const auto& pt : pts) out.table.add({static_cast<long>(pt.m), pt.mu, pt.coupling});
    out.summary = "releq: " + std::to_string(pts.size()) + " case-curve points for omega_M tau = " +
                  std::to_string(c.pi_multiple) + " pi";
    out.chart_x = "mu";
    out.chart_y = {"K"};
    out.chart_groups = {"m"};
    return out;
  }
  const auto [lo, hi] = window(c, r.scale, 5.0 * std::numbers::pi);
  const auto branches = releq_branches(r.p, lo, hi);
  out.table.header = {"branch_id", "tau", "omega_hat"};
  for (const auto& br : branches)
    for (const auto& [tau, w] : br.samples) out.table.add({static_cast<long>(br.branch_id), tau, w});
  out.summary = "releq: " + std::to_string(branches.size()) + " branches in [" + format_number(lo) + ", " +
                format_number(hi) + "]";
  out.chart_x = "tau";
  out.chart_y = {"omega_hat"};
  out.chart_groups = {"branch_id"};
  return out;
}

inline Result run_zero_roots(const RunConfig& c, const Resolved& r) {
  const auto ev = zero_root_taus(r.p, c.n_range.lo, c.n_range.hi);
  Result out;
  out.table.header = {"n", "tau_star", "delta0"};
  for (const auto& e : ev) out.table.add({static_cast<long>(e.n), e.tau_star, e.delta0});
  out.summary = "zero-roots: " + std::to_string(ev.size()) + " events" +
                (ev.empty() ? std::string() : ", smallest tau* " + format_number(ev.front().tau_star));
  out.chart_x = "n";
  out.chart_y = {"tau_star"};
  return out;
}

inline Result run_phasediff_check(const RunConfig& c, const Resolved& r) {
  const int n = r.p.n_nodes;
  if (n != 2 && n != 3) throw Error(ErrorCode::UnsupportedKind, "phasediff-check needs N = 2 or 3");
  const double tau = r.p.delay;
  std::vector<double> omegas;
  if (c.omega_hat) omegas.push_back(*c.omega_hat / r.scale);
  else omegas = releq_solve(r.p, tau);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> ure(-0.5, 3.0), uim(-3.0, 3.0);
  Result out;
  out.table.header = {"omega_hat", "c_const", "quantity", "value"};
  double worst = 0.0;
  for (double w : omegas) {
    const double cc = (w - r.p.free_freq) * tau + c.c_offset;
    const BlockSet ph = phase_blocks_at_angle(r.p, cc + r.p.free_freq * tau);
    std::vector<cplx> lambdas(64);
    for (auto& l : lambdas) l = cplx(ure(rng), uim(rng));
    if (n == 2) {
      const auto pd = char_functions_n2(r.p, cc);
      double e1 = 0.0, e2 = 0.0;
      for (cplx l : lambdas) {
        e1 = std::max(e1, std::abs(eval(pd.p1, l) - eval(ph.fix_block, l)));
        e2 = std::max(e2, std::abs(eval(pd.p2, l) - eval(ph.standard_block, l)));
      }
      out.table.add({w, cc, std::string("fix_block_mismatch"), e1});
      out.table.add({w, cc, std::string("standard_block_mismatch"), e2});
      worst = std::max({worst, e1, e2});
    } else {
      double e = 0.0;
      for (cplx l : lambdas) {
        if (std::abs(l) < 0.5) l += 1.0;  // keep away from the factor's roots
        const cplx pu = eval(ph.standard_block, l);
        const cplx expect = std::pow(l * l + r.p.filter_gain * l, 3) * eval(ph.fix_block, l) * pu * pu;
        const cplx det = determinant_n3(r.p, cc, l);
        e = std::max(e, std::abs(det - expect) / std::abs(det));
      }
      out.table.add({w, cc, std::string("factorization_error"), e});
      worst = std::max(worst, e);
      for (const auto& fr : fictitious_roots(r.p, cc)) {
        const std::string tag = fr.lambda == cplx(0.0) ? "lambda_0" : "lambda_minus_mu";
        out.table.add({w, cc, tag + "_fictitious", static_cast<double>(fr.is_fictitious)});
        out.table.add({w, cc, tag + "_block_residual", fr.block_residual});
      }
    }
  }
  out.summary = "phasediff-check: " + std::to_string(omegas.size()) + " relative equilibria, max " +
                (n == 2 ? "block mismatch " : "relative factorization error ") + format_number(worst);
  out.chart_x = "omega_hat";
  out.chart_y = {"value"};
  out.chart_groups = {"quantity"};
  return out;
}

struct SimulationRun {
  Trajectory trajectory;
  std::string summary;
};

inline SimulationRun run_simulate(const RunConfig& c, const Resolved& r) {
  const NetworkParams& p = r.p;
  const int n = p.n_nodes;
  std::optional<double> aux;
  StateVector base(2 * static_cast<std::size_t>(n), 0.0);
  if (c.model == ModelKind::FullPhase) {
    base = equilibrium_state(p, equilibrium(p, c.eq));
  } else if (c.model == ModelKind::PhaseRotatingFrame) {
    if (c.omega_hat) aux = *c.omega_hat / r.scale;
    else aux = releq_solve(p, p.delay).front();
  } else if (c.model != ModelKind::Phase) {
    throw Error(ErrorCode::UnsupportedKind, "simulate covers the full-phase and phase models");
  }
  const StateVector dir = c.perturb == BlockKind::Fix ? isotypic_direction(n, 0) : standard_pair_direction(n, 0, 1);
  const HistorySpec h = c.amplitude > 0.0 ? HistorySpec::perturbed(base, dir, c.amplitude) : HistorySpec::constant(base);
  const double step = c.step ? *c.step * r.scale : (p.delay > 0.0 ? p.delay / 100.0 : 0.01);
  SimulationRun run{integrate(c.model, p, h, c.t_end * r.scale, step, aux), ""};
  std::ostringstream s;
  s << "simulate: " << run.trajectory.size() << " samples, step " << format_number(run.trajectory.step);
  try {
    const double T = period_estimate(run.trajectory, c.transient);
    s << ", period " << format_number(T) << ", class " << to_string(symmetry_classify(run.trajectory, T, c.tol));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPeriodic) throw;
    s << ", no stable period (" << e.what() << ")";
  }
  run.summary = s.str();
  return run;
}

/// Angle columns of a trajectory, thinned to at most 4000 rows for charting.
inline Table trajectory_chart(const Trajectory& tr, std::vector<std::string>& ys) {
  Table t;
  t.header = {"t"};
  for (std::size_t c = 0; c < tr.dim; c += 2) {
    t.header.push_back("x1_" + std::to_string(c / 2 + 1));
    ys.push_back(t.header.back());
  }
  const std::size_t stride = std::max<std::size_t>(1, tr.size() / 4000);
  for (std::size_t k = 0; k < tr.size(); k += stride) {
    std::vector<Cell> row{tr.times[k]};
    for (std::size_t c = 0; c < tr.dim; c += 2) row.emplace_back(tr.state(k)[c]);
    t.add(std::move(row));
  }
  return t;
}

inline void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  body(f);
  if (!f) throw IoError("write failed for " + path);
}

}  // namespace detail

/// \brief Runs one command. CSV goes to --out or to out; the summary to out, or err when out carries CSV.
///
/// Returns the process exit code; library and usage errors propagate to the caller.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  using namespace detail;
  if (c.command == Command::Verify) return acceptance::run_acceptance(out) ? 0 : 1;

  const Resolved r = resolve(c);
  std::ostream& summary = c.out.empty() ? err : out;

  if (c.command == Command::Simulate) {
    const SimulationRun run = run_simulate(c, r);
    auto body = [&](std::ostream& os) {
      for (const auto& line : r.comments) os << "# " << line << "\n";
      write_csv(run.trajectory, os);
    };
    if (c.out.empty()) body(out);
    else write_file(c.out, body);
    if (!c.svg.empty()) {
      std::vector<std::string> ys;
      const Table chart = trajectory_chart(run.trajectory, ys);
      write_file(c.svg, [&](std::ostream& os) { write_svg(chart, "t", ys, {}, os); });
    }
    summary << run.summary << "\n";
    return 0;
  }

  Result res;
  switch (c.command) {
    case Command::Curves: res = run_curves(c, r); break;
    case Command::Rightmost: res = run_rightmost(c, r); break;
    case Command::Snmap: res = run_snmap(c, r); break;
    case Command::Releq: res = run_releq(c, r); break;
    case Command::ZeroRoots: res = run_zero_roots(c, r); break;
    case Command::PhasediffCheck: res = run_phasediff_check(c, r); break;
    default: throw UsageError("unhandled command");
  }
  res.table.comments = r.comments;
  res.table.comments.push_back("block=" + flag(c.block) + " eq=" + to_string(c.eq));
  if (c.out.empty()) write_csv(res.table, out);
  else write_file(c.out, [&](std::ostream& os) { write_csv(res.table, os); });
  if (!c.svg.empty())
    write_file(c.svg, [&](std::ostream& os) { write_svg(res.table, res.chart_x, res.chart_y, res.chart_groups, os); });
  summary << res.summary << "\n";
  return 0;
}

}  // namespace pllnet::cli
