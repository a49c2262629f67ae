#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "pllnet/charfun.hpp"

namespace pllnet {

struct PhaseDiffChar {
  double c_const = 0.0;
  QuasiPolynomial p1;  // symmetric block
  QuasiPolynomial p2;  // antisymmetric block
  std::function<cplx(cplx)> det3;
};

struct FictitiousRoot {
  cplx lambda;
  int multiplicity = 0;
  bool is_fictitious = false;
  double det_residual = 0.0;
  double block_residual = 0.0;
};

/// Phase-model blocks with the coupling angle Omega-hat tau given directly.
inline BlockSet phase_blocks_at_angle(const NetworkParams& p, double angle) {
  const double km = p.coupling * p.filter_gain;
  const double g = std::cos(angle);
  BlockSet b;
  b.fix_block = QuasiPolynomial::constant(p.filter_gain, km * g, -km * g, p.delay);
  b.standard_block = QuasiPolynomial::constant(p.filter_gain, km * g, km * g / (p.n_nodes - 1), p.delay);
  b.standard_multiplicity = p.n_nodes - 1;
  return b;
}

/// \brief det(lambda I - L) of the N = 3 phase-difference linearization at phi^(i,j) = C.
inline cplx determinant_n3(const NetworkParams& p, double c_const, cplx lambda) {
  if (p.n_nodes != 3) throw Error(ErrorCode::InvalidArgument, "determinant_n3 needs N = 3");
  StateVector x(state_dimension(ModelKind::PhaseDifference, 3), 0.0);
  for (std::size_t k = 0; k < x.size(); k += 2) x[k] = c_const;
  const Linearization L = jacobian(ModelKind::PhaseDifference, p, x, x);
  return characteristic_matrix(L, lambda, p.delay).partialPivLu().determinant();
}

/// \brief N = 2 block functions from the linearization of the pair dynamics.
///
/// With x^(1,2) = +/- x^(2,1) the 4x4 system splits into
/// lambda^2 + mu lambda + a -/+ a exp(-lambda tau), a = K mu cos(C + omega_M tau).
inline PhaseDiffChar char_functions_n2(const NetworkParams& p, double c_const) {
  if (p.n_nodes != 2) throw Error(ErrorCode::InvalidArgument, "char_functions_n2 needs N = 2");
  StateVector x(state_dimension(ModelKind::PhaseDifference, 2), 0.0);
  x[0] = x[2] = c_const;
  const Linearization L = jacobian(ModelKind::PhaseDifference, p, x, x);
  const double r1 = -L.a0(1, 1);
  const double r0 = -L.a0(1, 0);
  const double cross = L.a_tau(1, 2);
  PhaseDiffChar out;
  out.c_const = c_const;
  out.p1 = QuasiPolynomial::constant(r1, r0, -cross, p.delay);
  out.p2 = QuasiPolynomial::constant(r1, r0, cross, p.delay);
  return out;
}

inline PhaseDiffChar char_functions_n3(const NetworkParams& p, double c_const) {
  if (p.n_nodes != 3) throw Error(ErrorCode::InvalidArgument, "char_functions_n3 needs N = 3");
  const BlockSet b = phase_blocks_at_angle(p, c_const + p.free_freq * p.delay);
  return {c_const, b.fix_block, b.standard_block,
          [p, c_const](cplx lambda) { return determinant_n3(p, c_const, lambda); }};
}

/// \brief Roots 0 and -mu of the N = 3 determinant, flagged when the phase-model blocks do not vanish.
inline std::vector<FictitiousRoot> fictitious_roots(const NetworkParams& p, double c_const) {
  const BlockSet b = phase_blocks_at_angle(p, c_const + p.free_freq * p.delay);
  std::vector<FictitiousRoot> out;
  for (cplx lambda : {cplx(0.0), cplx(-p.filter_gain)}) {
    FictitiousRoot r;
    r.lambda = lambda;
    r.multiplicity = 3;
    r.det_residual = std::abs(determinant_n3(p, c_const, lambda));
    if (r.det_residual > 1e-6) continue;
    const cplx pu = eval(b.standard_block, lambda);
    r.block_residual = std::abs(eval(b.fix_block, lambda) * pu * pu);
    r.is_fictitious = r.block_residual >= 1e-6;
    out.push_back(r);
  }
  return out;
}

}  // namespace pllnet
