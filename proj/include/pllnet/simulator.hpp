#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pllnet/model.hpp"

namespace pllnet {

struct HistorySpec {
  enum class Kind { Constant, EquilibriumPerturbed };
  Kind kind = Kind::Constant;
  StateVector base;
  StateVector direction;
  double amplitude = 0.0;

  static HistorySpec constant(StateVector x) { return {Kind::Constant, std::move(x), {}, 0.0}; }
  static HistorySpec perturbed(StateVector x, StateVector dir, double amp) {
    return {Kind::EquilibriumPerturbed, std::move(x), std::move(dir), amp};
  }

  StateVector value() const {
    StateVector v = base;
    if (kind == Kind::EquilibriumPerturbed) {
      if (direction.size() != base.size()) throw Error(ErrorCode::DimensionMismatch, "perturbation length");
      if (amplitude < 0.0) throw Error(ErrorCode::InvalidArgument, "perturbation amplitude must be >= 0");
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += amplitude * direction[i];
    }
    return v;
  }
};

/// \brief Grid solution with cubic Hermite dense output; t <= 0 is the constant history.
struct Trajectory {
  ModelKind kind = ModelKind::FullPhase;
  NetworkParams params;
  std::optional<double> aux;
  double step = 0.0;
  std::size_t dim = 0;
  StateVector history;
  std::vector<double> times;
  std::vector<double> states;  // times.size() * dim
  std::vector<double> derivs;  // dense-output slopes at the grid nodes

  std::size_t size() const { return times.size(); }
  double t_end() const { return times.back(); }
  const double* state(std::size_t k) const { return states.data() + k * dim; }
  const double* deriv(std::size_t k) const { return derivs.data() + k * dim; }

  /// Component c on step k at local fraction s in [0, 1].
  double hermite(std::size_t k, double s, std::size_t c) const {
    const double y0 = states[k * dim + c], y1 = states[(k + 1) * dim + c];
    const double f0 = derivs[k * dim + c], f1 = derivs[(k + 1) * dim + c];
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * step * f0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * step * f1;
  }

  double component(double t, std::size_t c) const {
    if (t <= 0.0) return history[c];
    const double u = t / step;
    auto k = static_cast<std::size_t>(std::floor(u));
    if (k >= size() - 1) {
      if (t > t_end() * (1 + 1e-14)) throw Error(ErrorCode::IndexOutOfRange, "time beyond trajectory");
      return states[(size() - 1) * dim + c];
    }
    return hermite(k, u - static_cast<double>(k), c);
  }

  StateVector at(double t) const {
    StateVector x(dim);
    for (std::size_t c = 0; c < dim; ++c) x[c] = component(t, c);
    return x;
  }
};

/// \brief Classical RK4 method of steps with step tau / m and Hermite history lookups.
inline Trajectory integrate(ModelKind kind, const NetworkParams& params, const HistorySpec& history, double t_end,
                            double step, std::optional<double> aux = std::nullopt) {
  params.validate();
  if (kind == ModelKind::PhaseDifference)
    throw Error(ErrorCode::UnsupportedKind, "phase-difference dynamics are not integrated");
  if (!(t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
  const double tau = params.delay;
  if (tau > 0.0 && step > tau / 4.0 * (1 + 1e-12)) throw Error(ErrorCode::StepTooLarge, "step exceeds tau / 4");

  Trajectory tr;
  tr.kind = kind;
  tr.params = params;
  tr.aux = aux;
  tr.dim = state_dimension(kind, params.n_nodes);
  tr.history = history.value();
  if (tr.history.size() != tr.dim) throw Error(ErrorCode::DimensionMismatch, "history length does not match model");
  long m = 0;
  if (tau > 0.0) {
    m = static_cast<long>(std::ceil(tau / step - 1e-9));
    tr.step = tau / static_cast<double>(m);
  } else {
    tr.step = step;
  }
  const double h = tr.step;
  const auto nsteps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
  const std::size_t d = tr.dim;
  tr.times.resize(nsteps + 1);
  tr.states.resize((nsteps + 1) * d);
  tr.derivs.resize((nsteps + 1) * d);
  for (std::size_t k = 0; k <= nsteps; ++k) tr.times[k] = static_cast<double>(k) * h;
  std::copy(tr.history.begin(), tr.history.end(), tr.states.begin());

  StateVector k1(d), k2(d), k3(d), k4(d), tmp(d), dl(d);
  auto delayed = [&](std::size_t k, double s, const StateVector& current) -> const StateVector& {
    if (tau == 0.0) return current;
    const long j = static_cast<long>(k) - m;
    if (j < 0) {
      dl = tr.history;  // node 0 also holds the history value
    } else if (s == 0.0) {
      std::copy(tr.state(j), tr.state(j) + d, dl.begin());
    } else if (s == 1.0) {
      std::copy(tr.state(j + 1), tr.state(j + 1) + d, dl.begin());
    } else {
      for (std::size_t c = 0; c < d; ++c) dl[c] = tr.hermite(static_cast<std::size_t>(j), s, c);
    }
    return dl;
  };
  auto f = [&](const StateVector& x, const StateVector& xd, StateVector& out) { rhs_into(kind, params, x, xd, out, aux); };

  StateVector x(tr.history);
  for (std::size_t k = 0; k < nsteps; ++k) {
    f(x, delayed(k, 0.0, x), k1);
    std::copy(k1.begin(), k1.end(), tr.derivs.begin() + k * d);
    for (std::size_t c = 0; c < d; ++c) tmp[c] = x[c] + 0.5 * h * k1[c];
    f(tmp, delayed(k, 0.5, tmp), k2);
    for (std::size_t c = 0; c < d; ++c) tmp[c] = x[c] + 0.5 * h * k2[c];
    f(tmp, delayed(k, 0.5, tmp), k3);
    for (std::size_t c = 0; c < d; ++c) tmp[c] = x[c] + h * k3[c];
    f(tmp, delayed(k, 1.0, tmp), k4);
    for (std::size_t c = 0; c < d; ++c) {
      x[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      if (!std::isfinite(x[c])) throw Error(ErrorCode::NonFinite, "solution blew up at t = " + std::to_string(tr.times[k + 1]));
    }
    std::copy(x.begin(), x.end(), tr.states.begin() + (k + 1) * d);
  }
  f(x, delayed(nsteps, 0.0, x), k1);
  std::copy(k1.begin(), k1.end(), tr.derivs.begin() + nsteps * d);
  return tr;
}

/// \brief Period from upward mean crossings of one coordinate after a transient.
///
/// coordinate defaults to the velocity of the first node.
inline double period_estimate(const Trajectory& tr, double transient_fraction = 0.6, std::size_t coordinate = 1) {
  if (coordinate >= tr.dim) throw Error(ErrorCode::IndexOutOfRange, "coordinate out of range");
  const std::size_t k0 = static_cast<std::size_t>(transient_fraction * static_cast<double>(tr.size() - 1));
  if (tr.size() - k0 < 8) throw Error(ErrorCode::NotPeriodic, "too few samples after transient");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, acc = 0.0;
  for (std::size_t k = k0; k < tr.size(); ++k) {
    const double v = tr.states[k * tr.dim + coordinate];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    if (k + 1 < tr.size()) acc += 0.5 * (v + tr.states[(k + 1) * tr.dim + coordinate]);
  }
  const double mean = acc / static_cast<double>(tr.size() - 1 - k0);
  if (!(hi - lo > 1e-9 * (1.0 + std::abs(mean)))) throw Error(ErrorCode::NotPeriodic, "no oscillation");

  std::vector<double> crossings;
  for (std::size_t k = k0; k + 1 < tr.size(); ++k) {
    const double a = tr.states[k * tr.dim + coordinate] - mean;
    const double b = tr.states[(k + 1) * tr.dim + coordinate] - mean;
    if (!(a < 0.0 && b >= 0.0)) continue;
    double s0 = 0.0, s1 = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double sm = 0.5 * (s0 + s1);
      if (tr.hermite(k, sm, coordinate) - mean < 0.0) s0 = sm; else s1 = sm;
    }
    crossings.push_back(tr.times[k] + 0.5 * (s0 + s1) * tr.step);
  }
  // waveforms may cross the mean upward more than once per period
  for (std::size_t q = 1; q <= 4; ++q) {
    if (crossings.size() < 5 * q + 1) break;
    std::vector<double> periods;
    for (std::size_t i = 0; i + q < crossings.size(); ++i) periods.push_back(crossings[i + q] - crossings[i]);
    const auto [mn, mx] = std::minmax_element(periods.begin(), periods.end());
    double avg = 0.0;
    for (double p : periods) avg += p;
    avg /= static_cast<double>(periods.size());
    if ((*mx - *mn) / avg < 1e-3) return avg;
  }
  throw Error(ErrorCode::NotPeriodic, "successive periods disagree");
}

enum class SymmetryTag { FullySync, RotatingWave, Z2SpatioTemporal, Z2Spatial, Asymmetric };

struct SymmetryClass {
  SymmetryTag tag = SymmetryTag::Asymmetric;
  int pair_i = -1;  // zero-based
  int pair_j = -1;
  std::optional<double> period;
  double residual = 0.0;
};

inline std::string to_string(const SymmetryClass& s) {
  auto pair = [&] { return "(" + std::to_string(s.pair_i + 1) + "," + std::to_string(s.pair_j + 1) + ")"; };
  switch (s.tag) {
    case SymmetryTag::FullySync: return "FullySync";
    case SymmetryTag::RotatingWave: return "RotatingWave";
    case SymmetryTag::Z2SpatioTemporal: return "Z2SpatioTemporal" + pair();
    case SymmetryTag::Z2Spatial: return "Z2Spatial" + pair();
    case SymmetryTag::Asymmetric: return "Asymmetric";
  }
  return "?";
}

/// \brief Candidate relations with their max-norm defects over one period.
inline std::vector<SymmetryClass> symmetry_residuals(const Trajectory& tr, std::optional<double> period) {
  const int n = tr.params.n_nodes;
  if (tr.kind == ModelKind::PhaseDifference) throw Error(ErrorCode::UnsupportedKind, "node symmetry only");
  const double T = period.value_or(0.2 * tr.t_end());
  const double t1 = period ? tr.t_end() - T : tr.t_end();
  const double t0 = std::max(0.0, t1 - T);
  const int samples = 400;
  std::vector<double> ts(samples + 1);
  for (int s = 0; s <= samples; ++s) ts[s] = t0 + (t1 - t0) * s / samples;
  auto node = [&](double t, int i, int c) { return tr.component(t, static_cast<std::size_t>(2 * i + c)); };

  std::vector<SymmetryClass> out;
  auto add = [&](SymmetryTag tag, int i, int j, auto&& defect) {
    double r = 0.0;
    for (double t : ts) r = std::max(r, defect(t));
    out.push_back({tag, i, j, period, r});
  };
  add(SymmetryTag::FullySync, -1, -1, [&](double t) {
    double r = 0.0;
    for (int i = 1; i < n; ++i)
      for (int c = 0; c < 2; ++c) r = std::max(r, std::abs(node(t, i, c) - node(t, 0, c)));
    return r;
  });
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      add(SymmetryTag::Z2Spatial, i, j, [&](double t) {
        double r = 0.0;
        for (int c = 0; c < 2; ++c) r = std::max(r, std::abs(node(t, i, c) - node(t, j, c)));
        return r;
      });
  if (period) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        add(SymmetryTag::Z2SpatioTemporal, i, j, [&](double t) {
          double r = 0.0;
          for (int k = 0; k < n; ++k) {
            const int src = k == i ? j : (k == j ? i : k);
            for (int c = 0; c < 2; ++c) r = std::max(r, std::abs(node(t, k, c) - node(t + 0.5 * T, src, c)));
          }
          return r;
        });
    for (int dir : {1, -1})
      add(SymmetryTag::RotatingWave, -1, -1, [&](double t) {
        double r = 0.0;
        for (int k = 0; k < n; ++k) {
          const int src = ((k + dir) % n + n) % n;
          for (int c = 0; c < 2; ++c) r = std::max(r, std::abs(node(t, src, c) - node(t + T / n, k, c)));
        }
        return r;
      });
  }
  return out;
}

/// \brief Most specific relation holding within tol, else Asymmetric.
inline SymmetryClass symmetry_classify(const Trajectory& tr, std::optional<double> period, double tol) {
  const auto all = symmetry_residuals(tr, period);
  auto rank = [](SymmetryTag t) {
    switch (t) {
      case SymmetryTag::FullySync: return 0;
      case SymmetryTag::Z2SpatioTemporal: return 1;
      case SymmetryTag::Z2Spatial: return 2;
      case SymmetryTag::RotatingWave: return 3;
      default: return 4;
    }
  };
  const SymmetryClass* best = nullptr;
  for (const auto& s : all) {
    if (s.residual >= tol) continue;
    if (s.tag == SymmetryTag::FullySync) return s;
    if (!best || s.residual < best->residual - 1e-12 ||
        (std::abs(s.residual - best->residual) <= 1e-12 && rank(s.tag) < rank(best->tag)))
      best = &s;
  }
  if (best) return *best;
  double least = std::numeric_limits<double>::infinity();
  for (const auto& s : all) least = std::min(least, s.residual);
  return {SymmetryTag::Asymmetric, -1, -1, period, least};
}

/// CSV with columns t, x1_1, x2_1, ..., 17 significant digits.
inline void write_csv(const Trajectory& tr, std::ostream& os) {
  os << "t";
  for (std::size_t c = 0; c < tr.dim; ++c) os << ",x" << (c % 2 + 1) << "_" << (c / 2 + 1);
  os << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    os << tr.times[k];
    for (std::size_t c = 0; c < tr.dim; ++c) os << "," << tr.states[k * tr.dim + c];
    os << "\n";
  }
}

}  // namespace pllnet
