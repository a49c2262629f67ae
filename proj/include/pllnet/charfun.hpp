#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <variant>

#include "pllnet/model.hpp"
#include "pllnet/quasi_polynomial.hpp"

namespace pllnet {

enum class BlockKind { Fix, Standard };

inline std::string to_string(BlockKind b) { return b == BlockKind::Fix ? "fix" : "standard"; }

struct BlockSet {
  QuasiPolynomial fix_block;
  QuasiPolynomial standard_block;
  int fix_multiplicity = 1;
  int standard_multiplicity = 1;

  const QuasiPolynomial& block(BlockKind b) const { return b == BlockKind::Fix ? fix_block : standard_block; }
};

/// Omega-hat as a function of tau along one relative-equilibrium branch.
using RotationTracker = std::function<double(double)>;

/// Equilibrium for the full-phase model, Omega-hat for the phase models.
using BlockPoint = std::variant<Equilibrium, double>;

/// \brief Blocks of the full-phase model at an equilibrium.
inline BlockSet build_blocks(const NetworkParams& p, const Equilibrium& eq) {
  const double km = p.coupling * p.filter_gain;
  const double c = eq.cos_two_phi;
  const double q = km * (1.0 - c);
  const double s = km * (1.0 + c);
  const int n = p.n_nodes;
  BlockSet out;
  out.fix_block = QuasiPolynomial::constant(p.filter_gain, q, -s, p.delay);
  out.standard_block = QuasiPolynomial::constant(p.filter_gain, q, s / (n - 1), p.delay);
  out.standard_multiplicity = n - 1;
  return out;
}

/// \brief Blocks of the phase model along a branch tau -> Omega-hat(tau).
///
/// The tau-derivatives use dOmega/dtau = -Omega K cos / (1 + tau K cos),
/// which holds on a branch of Omega + K sin(Omega tau) = omega_M.
inline BlockSet build_phase_blocks(const NetworkParams& p, RotationTracker tracker) {
  const double km = p.coupling * p.filter_gain;
  const double K = p.coupling;
  const double mu = p.filter_gain;
  const int n = p.n_nodes;
  auto base = [=](double tau) {
    const double w = tracker(tau);
    const double g = std::cos(w * tau);
    const double dphase = w / (1.0 + tau * K * g);
    const double dg = -std::sin(w * tau) * dphase;
    return std::pair{g, dg};
  };
  BlockSet out;
  out.fix_block = {[=](double tau) {
                     auto [g, dg] = base(tau);
                     return BlockCoefficients{km * g, mu, -km * g, km * dg, 0.0, -km * dg};
                   },
                   p.delay};
  out.standard_block = {[=](double tau) {
                          auto [g, dg] = base(tau);
                          const double f = km / (n - 1);
                          return BlockCoefficients{km * g, mu, f * g, km * dg, 0.0, f * dg};
                        },
                        p.delay};
  out.standard_multiplicity = n - 1;
  return out;
}

/// Phase blocks at a fixed Omega-hat.
inline BlockSet build_phase_blocks(const NetworkParams& p, double omega_hat) {
  return build_phase_blocks(p, [omega_hat](double) { return omega_hat; });
}

inline BlockSet build_blocks(ModelKind kind, const NetworkParams& p, const BlockPoint& point) {
  switch (kind) {
    case ModelKind::FullPhase:
      if (!std::holds_alternative<Equilibrium>(point))
        throw Error(ErrorCode::InvalidArgument, "full-phase blocks need an equilibrium");
      return build_blocks(p, std::get<Equilibrium>(point));
    case ModelKind::PhaseDifference:
      if (p.n_nodes > 3) throw Error(ErrorCode::UnsupportedKind, "phase-difference model supports N <= 3");
      [[fallthrough]];
    case ModelKind::Phase:
    case ModelKind::PhaseRotatingFrame:
      if (!std::holds_alternative<double>(point))
        throw Error(ErrorCode::InvalidArgument, "phase blocks need a rotation frequency");
      return build_phase_blocks(p, std::get<double>(point));
  }
  throw Error(ErrorCode::UnsupportedKind, "unknown model kind");
}

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

struct Linearization {
  RMatrix a0;
  RMatrix a_tau;
};

/// \brief Partial derivatives of rhs with respect to state and delayed state.
inline Linearization jacobian(ModelKind kind, const NetworkParams& p, std::span<const double> x,
                              std::span<const double> xd, std::optional<double> aux = std::nullopt) {
  const int n = p.n_nodes;
  const auto dim = static_cast<Eigen::Index>(state_dimension(kind, n));
  if (static_cast<Eigen::Index>(x.size()) != dim || static_cast<Eigen::Index>(xd.size()) != dim)
    throw Error(ErrorCode::DimensionMismatch, "state length does not match model");
  Linearization L{RMatrix::Zero(dim, dim), RMatrix::Zero(dim, dim)};
  const double mu = p.filter_gain;
  const double g = p.coupling * mu / (n - 1);
  const double wt = p.free_freq * p.delay;
  for (Eigen::Index k = 0; k < dim; k += 2) {
    L.a0(k, k + 1) = 1.0;
    L.a0(k + 1, k + 1) = -mu;
  }
  switch (kind) {
    case ModelKind::FullPhase:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          const double cm = std::cos(xd[2 * j] - x[2 * i]);
          const double cp = std::cos(xd[2 * j] + x[2 * i]);
          L.a0(2 * i + 1, 2 * i) += g * (cp - cm);
          L.a_tau(2 * i + 1, 2 * j) += g * (cm + cp);
        }
      break;
    case ModelKind::Phase:
    case ModelKind::PhaseRotatingFrame: {
      double shift = wt;
      if (kind == ModelKind::PhaseRotatingFrame) {
        if (!aux) throw Error(ErrorCode::InvalidArgument, "rotating frame requires Omega");
        shift += *aux * p.delay;
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          const double c = std::cos(xd[2 * j] - x[2 * i] - shift);
          L.a0(2 * i + 1, 2 * i) -= g * c;
          L.a_tau(2 * i + 1, 2 * j) += g * c;
        }
      break;
    }
    case ModelKind::PhaseDifference:
      if (n > 3) throw Error(ErrorCode::UnsupportedKind, "phase-difference model supports N <= 3");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          const auto row = static_cast<Eigen::Index>(2 * pair_index(n, i, j) + 1);
          for (int l = 0; l < n; ++l) {
            if (l != i) {
              const auto col = static_cast<Eigen::Index>(2 * pair_index(n, i, l));
              L.a0(row, col) -= g * std::cos(x[col] + wt);
            }
            if (l != j) {
              const auto col = static_cast<Eigen::Index>(2 * pair_index(n, j, l));
              L.a_tau(row, col) += g * std::cos(xd[col] + wt);
            }
          }
        }
      break;
  }
  return L;
}

/// lambda I - A0 - A_tau exp(-lambda tau)
inline CMatrix characteristic_matrix(const Linearization& L, cplx lambda, double tau) {
  const auto dim = L.a0.rows();
  CMatrix m = -L.a0.cast<cplx>() - std::exp(-lambda * tau) * L.a_tau.cast<cplx>();
  m.diagonal().array() += lambda;
  (void)dim;
  return m;
}

inline Linearization linearization_at(ModelKind kind, const NetworkParams& p, const BlockPoint& point) {
  if (kind == ModelKind::FullPhase) {
    if (!std::holds_alternative<Equilibrium>(point))
      throw Error(ErrorCode::InvalidArgument, "full-phase linearization needs an equilibrium");
    const auto x = equilibrium_state(p, std::get<Equilibrium>(point));
    return jacobian(kind, p, x, x);
  }
  if (kind == ModelKind::Phase || kind == ModelKind::PhaseRotatingFrame) {
    if (!std::holds_alternative<double>(point))
      throw Error(ErrorCode::InvalidArgument, "phase linearization needs a rotation frequency");
    const StateVector x(2 * static_cast<std::size_t>(p.n_nodes), 0.0);
    return jacobian(ModelKind::PhaseRotatingFrame, p, x, x, std::get<double>(point) - p.free_freq);
  }
  throw Error(ErrorCode::UnsupportedKind, "full determinant supports full-phase and phase models");
}

/// \brief Dense characteristic determinant by partial-pivot LU.
inline cplx full_determinant(ModelKind kind, const NetworkParams& p, const BlockPoint& point, cplx lambda) {
  const Linearization L = linearization_at(kind, p, point);
  return characteristic_matrix(L, lambda, p.delay).partialPivLu().determinant();
}

/// \brief Two rows of the isotypic basis W_j, entries exp(2 pi i (k j mod N) / N) / sqrt(N).
inline CMatrix isotypic_basis(int n_nodes, int index) {
  if (n_nodes < 2) throw Error(ErrorCode::InvalidArgument, "n_nodes must be >= 2");
  if (index < 0 || index >= n_nodes) throw Error(ErrorCode::IndexOutOfRange, "isotypic index out of range");
  CMatrix w = CMatrix::Zero(2, 2 * n_nodes);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_nodes));
  for (int k = 0; k < n_nodes; ++k) {
    const double angle = 2.0 * std::numbers::pi * ((k * index) % n_nodes) / n_nodes;
    const cplx e = std::polar(scale, angle);
    w(0, 2 * k) = e;
    w(1, 2 * k + 1) = e;
  }
  return w;
}

/// All W_j stacked, j = 0 .. N-1.
inline CMatrix isotypic_transform(int n_nodes) {
  CMatrix w(2 * n_nodes, 2 * n_nodes);
  for (int j = 0; j < n_nodes; ++j) w.middleRows(2 * j, 2) = isotypic_basis(n_nodes, j);
  return w;
}

/// Unit angle direction Re(exp(i phase) W_j), velocities zero.
inline StateVector isotypic_direction(int n_nodes, int index, double phase = 0.0) {
  const CMatrix w = isotypic_basis(n_nodes, index);
  const cplx rot = std::polar(1.0, phase);
  StateVector d(2 * static_cast<std::size_t>(n_nodes), 0.0);
  double norm = 0.0;
  for (int k = 0; k < n_nodes; ++k) {
    d[2 * k] = (rot * w(0, 2 * k)).real();
    norm += d[2 * k] * d[2 * k];
  }
  if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "degenerate isotypic direction");
  for (auto& v : d) v /= std::sqrt(norm);
  return d;
}

/// \brief Unit angle direction e_a - e_b assembled from the standard isotypic rows W_1 .. W_{N-1}.
inline StateVector standard_pair_direction(int n_nodes, int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= n_nodes || b >= n_nodes)
    throw Error(ErrorCode::IndexOutOfRange, "invalid node pair");
  StateVector d(2 * static_cast<std::size_t>(n_nodes), 0.0);
  for (int j = 1; j < n_nodes; ++j) {
    const CMatrix w = isotypic_basis(n_nodes, j);
    const cplx coef = std::conj(w(0, 2 * a)) - std::conj(w(0, 2 * b));
    for (int k = 0; k < n_nodes; ++k) d[2 * k] += (coef * w(0, 2 * k)).real();
  }
  for (auto& v : d) v /= std::sqrt(2.0);
  return d;
}

}  // namespace pllnet
