#pragma once

// Discrete analogue of the mixed Neumann / power-type boundary problem on a
// 2-D rectangle: implicit Euler in time, bilinear conforming elements in
// space, Newton iteration for the nonlinear boundary flux b(u)u.
//
// Strong form being discretized:
//   dt u - div(A grad u - fvec) = f            in  Omega x (0,T)
//   (A grad u - fvec) . n = h - b(u) u         on  Gamma
//   (A grad u - fvec) . n = 0                  on  the remaining boundary

#include "parest/estimates.hpp"
#include "parest/fem.hpp"
#include "parest/meshfields.hpp"

namespace parest::parabolic {

using fem::BoundaryLaw;
using fem::CoefficientField;
using fem::SolverOptions;
using mesh::GridFunction;
using mesh::Real;
using mesh::SpaceTimeGrid;

struct ProblemInstance {
  SpaceTimeGrid grid;        // space-time grid, t0 = 0
  CoefficientField A;        // node-sampled symmetric diffusion matrix
  BoundaryLaw law;
  GridFunction fvec_x, fvec_y;  // volumetric flux datum, space-time
  GridFunction f;               // volumetric source, space-time
  GridFunction h;               // boundary datum, space-time (read on Gamma)
  GridFunction u0;              // initial value, stationary

  void validate() const;
};

// Tight structural constants realized by the sampled instance fields.
estimates::EllipticityData<> derive_ellipticity(const ProblemInstance& inst);

struct SolveStats {
  int max_newton_iterations = 0;
  int total_newton_iterations = 0;
  Real max_step_residual = 0;
};

// Time-marching solve; returns u on all levels with u(.,0) = u0.  Each step's
// nonlinear residual is driven below opts.newton_tol in the euclidean norm.
GridFunction solve(const ProblemInstance& inst, const SolverOptions& opts = {},
                   SolveStats* stats = nullptr);

// Euclidean norm of the space-time residual of the implicit Euler system at u,
// scaled by sqrt(dt hx hy) per entry.
Real weak_residual(const ProblemInstance& inst, const GridFunction& u);

}  // namespace parest::parabolic
