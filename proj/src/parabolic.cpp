#include "parest/parabolic.hpp"

#include <cmath>
#include <string>

namespace parest::parabolic {

using fem::Assembly;
using fem::SpMat;
using fem::Vec;

void ProblemInstance::validate() const {
  grid.validate();
  if (grid.nt < 1) throw parameter_error("parabolic instance: need at least one time step");
  if (grid.t0 != 0) throw parameter_error("parabolic instance: time axis must start at 0");
  const auto [alo, ahi] = A.eigenvalue_range();
  if (!(alo > 0)) throw parameter_error("parabolic instance: diffusion matrix not elliptic");
  (void)ahi;
  if (!(law.ell >= 2)) throw parameter_error("parabolic instance: need ell >= 2");
  if ((law.beta.values() < 0).any())
    throw parameter_error("parabolic instance: boundary coefficient must be >= 0");
  for (const GridFunction* g : {&fvec_x, &fvec_y, &f, &h, &u0}) g->check_finite();
  if (!u0.stationary()) throw parameter_error("parabolic instance: u0 must be stationary");
  if (!f.grid().same_layout(grid) || !h.grid().same_layout(grid) ||
      !fvec_x.grid().same_layout(grid) || !fvec_y.grid().same_layout(grid))
    throw parameter_error("parabolic instance: data fields must live on the instance grid");
}

estimates::EllipticityData<> derive_ellipticity(const ProblemInstance& inst) {
  estimates::EllipticityData<> ed;
  const auto [alo, ahi] = inst.A.eigenvalue_range();
  ed.a_lo = alo;
  ed.a_hi = ahi;
  const auto [blo, bhi] = inst.law.beta_range_on_gamma();
  ed.b_lo = blo;
  ed.b_hi = bhi;
  ed.ell = inst.law.ell;
  return ed;
}

namespace {

struct Stepper {
  const ProblemInstance& inst;
  Assembly asmb;
  SpMat A0;      // M/dt + K
  Vec gw;        // Gamma edge-trapezoid weights
  Vec beta;      // nodal boundary coefficient
  Real dt;

  explicit Stepper(const ProblemInstance& pi)
      : inst(pi), asmb(pi.grid), dt(pi.grid.dt()) {
    const SpMat K = asmb.stiffness(pi.A);
    A0 = asmb.mass() / dt + K;
    gw = asmb.gamma_weights();
    beta = pi.law.beta.values().matrix();
  }

  Vec boundary_flux(const Vec& v) const {
    Vec out = Vec::Zero(v.size());
    for (int i = 0; i < v.size(); ++i)
      if (gw[i] != 0) out[i] = gw[i] * inst.law.flux(beta[i], v[i]);
    return out;
  }

  Vec step_rhs(int level, const Vec& u_prev) const {
    const int n = asmb.dofs();
    const long off = static_cast<long>(level) * n;
    const auto slice = [&](const GridFunction& g) {
      return Eigen::Map<const Vec>(g.values().data() + off, n);
    };
    Vec rhs = asmb.load_volume(slice(inst.f), slice(inst.fvec_x), slice(inst.fvec_y));
    rhs += asmb.load_gamma(slice(inst.h));
    rhs += asmb.mass() * u_prev / dt;
    return rhs;
  }

  Vec residual(const Vec& v, const Vec& rhs) const { return A0 * v + boundary_flux(v) - rhs; }

  // Newton loop for one implicit Euler step; returns the iteration count.
  int advance(Vec& v, const Vec& rhs, const fem::SolverOptions& opts, Real* out_res) const {
    SpMat J = A0;
    int it = 0;
    Vec res = residual(v, rhs);
    while (res.norm() > opts.newton_tol) {
      if (it >= opts.newton_max)
        throw solver_error("newton iteration exceeded the step budget (last residual " +
                               std::to_string(res.norm()) + ")",
                           res.norm());
      J = A0;
      for (int i = 0; i < v.size(); ++i)
        if (gw[i] != 0) J.coeffRef(i, i) += gw[i] * inst.law.dflux(beta[i], v[i]);
      const Vec delta = fem::cg_solve(J, -res, Vec::Zero(v.size()), opts.linear_tol);
      v += opts.damping * delta;
      res = residual(v, rhs);
      ++it;
    }
    if (out_res) *out_res = res.norm();
    return it;
  }
};

}  // namespace

GridFunction solve(const ProblemInstance& inst, const SolverOptions& opts, SolveStats* stats) {
  inst.validate();
  opts.validate();
  Stepper st(inst);
  const int n = st.asmb.dofs();

  GridFunction u = GridFunction::zeros(inst.grid);
  u.values().segment(0, n) = inst.u0.values();

  Vec v = inst.u0.values().matrix();
  SolveStats local;
  for (int k = 1; k <= inst.grid.nt; ++k) {
    const Vec rhs = st.step_rhs(k, v);
    Real res = 0;
    const int it = st.advance(v, rhs, opts, &res);
    local.max_newton_iterations = std::max(local.max_newton_iterations, it);
    local.total_newton_iterations += it;
    local.max_step_residual = std::max(local.max_step_residual, res);
    u.values().segment(static_cast<long>(k) * n, n) = v.array();
  }
  if (stats) *stats = local;
  return u;
}

Real weak_residual(const ProblemInstance& inst, const GridFunction& u) {
  inst.validate();
  if (!u.grid().same_layout(inst.grid))
    throw parameter_error("weak_residual: solution does not match the instance grid");
  Stepper st(inst);
  const int n = st.asmb.dofs();
  Real acc = 0;
  for (int k = 1; k <= inst.grid.nt; ++k) {
    const Vec u_prev = Eigen::Map<const Vec>(u.values().data() + static_cast<long>(k - 1) * n, n);
    const Vec v = Eigen::Map<const Vec>(u.values().data() + static_cast<long>(k) * n, n);
    const Vec res = st.residual(v, st.step_rhs(k, u_prev));
    acc += res.squaredNorm();
  }
  return std::sqrt(acc * inst.grid.dt() * inst.grid.hx() * inst.grid.hy());
}

}  // namespace parest::parabolic
