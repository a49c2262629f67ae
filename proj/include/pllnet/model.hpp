#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pllnet/error.hpp"

namespace pllnet {

using StateVector = std::vector<double>;

/// \brief Network parameters (N, K, mu, omega_M, tau).
struct NetworkParams {
  int n_nodes = 2;
  double coupling = 1.0;
  double filter_gain = 1.0;
  double free_freq = 1.0;
  double delay = 0.0;

  void validate() const {
    if (n_nodes < 2) throw Error(ErrorCode::InvalidArgument, "n_nodes must be >= 2");
    if (!(coupling > 0)) throw Error(ErrorCode::InvalidArgument, "coupling must be > 0");
    if (!(filter_gain > 0)) throw Error(ErrorCode::InvalidArgument, "filter_gain must be > 0");
    if (!(free_freq > 0)) throw Error(ErrorCode::InvalidArgument, "free_freq must be > 0");
    if (!(delay >= 0) || !std::isfinite(delay))
      throw Error(ErrorCode::InvalidArgument, "delay must be finite and >= 0");
  }

  NetworkParams with_delay(double tau) const {
    NetworkParams p = *this;
    p.delay = tau;
    return p;
  }
};

enum class ModelKind { FullPhase, Phase, PhaseRotatingFrame, PhaseDifference };
enum class EquilibriumBranch { Plus, Minus };

struct Equilibrium {
  EquilibriumBranch branch = EquilibriumBranch::Plus;
  double phi = 0.0;
  double cos_two_phi = 0.0;
};

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::FullPhase: return "full-phase";
    case ModelKind::Phase: return "phase";
    case ModelKind::PhaseRotatingFrame: return "phase-rotating";
    case ModelKind::PhaseDifference: return "phase-difference";
  }
  return "?";
}

inline std::string to_string(EquilibriumBranch b) {
  return b == EquilibriumBranch::Plus ? "plus" : "minus";
}

/// Scale to free_freq = 1.
inline NetworkParams normalize(const NetworkParams& physical) {
  physical.validate();
  NetworkParams p = physical;
  const double w = physical.free_freq;
  if (w == 1.0) return p;
  p.coupling = physical.coupling / w;
  p.filter_gain = physical.filter_gain / w;
  p.delay = physical.delay * w;
  p.free_freq = 1.0;
  return p;
}

/// \brief Equilibria of the full-phase model, sin(2 phi) = -omega_M / K.
///
/// Returns Plus then Minus; a single record when K equals omega_M.
inline std::vector<Equilibrium> equilibria(const NetworkParams& params) {
  params.validate();
  const double s = -params.free_freq / params.coupling;
  if (s < -1.0) throw Error(ErrorCode::NoEquilibrium, "coupling below free frequency, no fixed points");
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  std::vector<Equilibrium> out;
  out.push_back({EquilibriumBranch::Plus, 0.5 * std::atan2(s, c), c});
  if (c > 0.0) out.push_back({EquilibriumBranch::Minus, 0.5 * std::atan2(s, -c), -c});
  return out;
}

inline Equilibrium equilibrium(const NetworkParams& params, EquilibriumBranch b) {
  auto eqs = equilibria(params);
  if (b == EquilibriumBranch::Minus && eqs.size() == 2) return eqs[1];
  Equilibrium e = eqs[0];
  e.branch = b;
  return e;
}

/// Dimension of the state vector for a model kind.
inline std::size_t state_dimension(ModelKind kind, int n_nodes) {
  const auto n = static_cast<std::size_t>(n_nodes);
  return kind == ModelKind::PhaseDifference ? 2 * n * (n - 1) : 2 * n;
}

/// Index of the ordered pair (i, j), i != j, in lexicographic order.
inline std::size_t pair_index(int n_nodes, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= n_nodes || j >= n_nodes)
    throw Error(ErrorCode::IndexOutOfRange, "invalid node pair");
  return static_cast<std::size_t>(i * (n_nodes - 1) + (j < i ? j : j - 1));
}

inline StateVector equilibrium_state(const NetworkParams& params, const Equilibrium& eq) {
  StateVector x(2 * static_cast<std::size_t>(params.n_nodes), 0.0);
  for (int i = 0; i < params.n_nodes; ++i) x[2 * i] = eq.phi;
  return x;
}

/// out[i] = in[perm[i]] acting on node pairs.
inline StateVector permute_nodes(std::span<const double> x, std::span<const int> perm) {
  StateVector out(x.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out[2 * i] = x[2 * perm[i]];
    out[2 * i + 1] = x[2 * perm[i] + 1];
  }
  return out;
}

/// \brief Right-hand side of the delay models, written into out.
///
/// state and delayed hold interleaved (angle, velocity) pairs. aux is the
/// rotation frequency Omega used by the rotating-frame model.
inline void rhs_into(ModelKind kind, const NetworkParams& p, std::span<const double> x,
                     std::span<const double> xd, std::span<double> out,
                     std::optional<double> aux = std::nullopt) {
  const int n = p.n_nodes;
  const std::size_t dim = state_dimension(kind, n);
  if (x.size() != dim || xd.size() != dim || out.size() != dim)
    throw Error(ErrorCode::DimensionMismatch, "state length does not match model");
  const double mu = p.filter_gain;
  const double g = p.coupling * mu / (n - 1);
  const double wt = p.free_freq * p.delay;

  switch (kind) {
    case ModelKind::FullPhase:
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          acc += std::sin(xd[2 * j] - x[2 * i]) + std::sin(xd[2 * j] + x[2 * i]);
        }
        out[2 * i] = x[2 * i + 1];
        out[2 * i + 1] = -mu * x[2 * i + 1] + mu * p.free_freq + g * acc;
      }
      return;
    case ModelKind::Phase:
    case ModelKind::PhaseRotatingFrame: {
      double shift = wt;
      double drive = 0.0;
      if (kind == ModelKind::PhaseRotatingFrame) {
        if (!aux) throw Error(ErrorCode::InvalidArgument, "rotating frame requires Omega");
        shift += *aux * p.delay;
        drive = -mu * *aux;
      }
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          acc += std::sin(xd[2 * j] - x[2 * i] - shift);
        }
        out[2 * i] = x[2 * i + 1];
        out[2 * i + 1] = -mu * x[2 * i + 1] + drive + g * acc;
      }
      return;
    }
    case ModelKind::PhaseDifference: {
      if (n > 3) throw Error(ErrorCode::UnsupportedKind, "phase-difference model supports N <= 3");
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          double own = 0.0, other = 0.0;
          for (int l = 0; l < n; ++l) {
            if (l != i) own += std::sin(x[2 * pair_index(n, i, l)] + wt);
            if (l != j) other += std::sin(xd[2 * pair_index(n, j, l)] + wt);
          }
          const std::size_t k = 2 * pair_index(n, i, j);
          out[k] = x[k + 1];
          out[k + 1] = -mu * x[k + 1] - g * (own - other);
        }
      }
      return;
    }
  }
}

inline StateVector rhs(ModelKind kind, const NetworkParams& p, std::span<const double> x,
                       std::span<const double> xd, std::optional<double> aux = std::nullopt) {
  StateVector out(x.size());
  rhs_into(kind, p, x, xd, out, aux);
  return out;
}

}  // namespace pllnet
