#pragma once

// Steady-state solver for the mixed Neumann / power-type problem: monotone
// Galerkin solve, the preconditioned fixed-point iteration driven by the
// inverse Robin-Laplacian, and a sampled estimate of its operator norm M_p.

#include <cstdint>
#include <vector>

#include "parest/estimates.hpp"
#include "parest/fem.hpp"
#include "parest/meshfields.hpp"

namespace parest::elliptic {

using fem::BoundaryLaw;
using fem::CoefficientField;
using fem::SolverOptions;
using mesh::GridFunction;
using mesh::Real;
using mesh::SpaceTimeGrid;

struct SteadyInstance {
  SpaceTimeGrid grid;  // stationary footprint (nt = 0)
  CoefficientField A;
  BoundaryLaw law;
  GridFunction fvec_x, fvec_y, f, h;  // stationary data fields

  void validate() const;
};

estimates::EllipticityData<> derive_ellipticity(const SteadyInstance& inst);

// Newton solve of the monotone steady problem; discrete residual <= newton_tol.
GridFunction solve_monotone(const SteadyInstance& inst, const SolverOptions& opts = {},
                            int* newton_iterations = nullptr);

struct ContractionTrace {
  std::vector<Real> iterate_norms;  // ||u_k|| in the W^{1,p}-type solver norm
  std::vector<Real> diff_norms;     // ||u_{k+1} - u_k||
  std::vector<Real> ratios;         // successive quotients of diff_norms
  Real mp_estimate = 0;             // discrete M_p used for the feasibility gate
  Real q_factor = 0;                // theoretical contraction factor
  int iterations = 0;

  Real tail_ratio(int tail = 5) const;
};

struct ContractionResult {
  GridFunction u;
  ContractionTrace trace;
};

// Fixed-point iteration u_{k+1} = (-Laplace_R)^{-1} (L_t u_k) with
// t = a_lo / a_hi^2; requires ell = 2 and contraction feasibility with the
// discrete M_p estimate (p = 2).  Stops when the steady weak residual falls
// below newton_tol; errors out if the difference ratios exceed 1 five times in
// a row.
ContractionResult solve_contraction(const SteadyInstance& inst,
                                    const estimates::EllipticityData<>& ed,
                                    const SolverOptions& opts = {});

// Sampled lower estimate of M_p = ||(-Laplace_R)^{-1}||  between the dual of
// W^{1,p'} and W^{1,p} with ||v|| = ||grad v||_p + ||v||_{2,Gamma}.  Random
// right-hand sides; the dual norm is maximized over a fixed random test set
// plus the solution itself; p = 2 adds a two-dimensional subspace refinement.
// The result is a sampled lower bound, not a certified constant, and is
// nondecreasing in `samples` for a fixed seed.
Real estimate_Mp(const SpaceTimeGrid& grid, Real p, int samples, std::uint64_t seed);

// Discrete W^{1,p}-type solver norm ||grad v||_p + ||v||_{2,Gamma} (element
// quadrature, consistent with the assembled operators).
Real sobolev_norm(const SteadyInstance& inst, const GridFunction& v, Real p);

}  // namespace parest::elliptic
