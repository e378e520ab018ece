#include "parest/elliptic.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "parest/rng.hpp"

namespace parest::elliptic {

using fem::Assembly;
using fem::SpMat;
using fem::Vec;

void SteadyInstance::validate() const {
  grid.validate();
  if (grid.nt != 0) throw parameter_error("steady instance: grid must be stationary");
  if (!grid.has_gamma())
    throw parameter_error("steady instance: Gamma must be nonempty (Robin operator kernel)");
  const auto [alo, ahi] = A.eigenvalue_range();
  (void)ahi;
  if (!(alo > 0)) throw parameter_error("steady instance: diffusion matrix not elliptic");
  if (!(law.ell >= 2)) throw parameter_error("steady instance: need ell >= 2");
  if ((law.beta.values() < 0).any())
    throw parameter_error("steady instance: boundary coefficient must be >= 0");
  for (const GridFunction* g : {&fvec_x, &fvec_y, &f, &h}) {
    g->check_finite();
    if (!g->stationary()) throw parameter_error("steady instance: data must be stationary");
  }
}

estimates::EllipticityData<> derive_ellipticity(const SteadyInstance& inst) {
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

Vec assemble_load(const Assembly& asmb, const SteadyInstance& inst) {
  Vec rhs = asmb.load_volume(inst.f.values().matrix(), inst.fvec_x.values().matrix(),
                             inst.fvec_y.values().matrix());
  rhs += asmb.load_gamma(inst.h.values().matrix());
  return rhs;
}

Vec boundary_flux(const SteadyInstance& inst, const Vec& gw, const Vec& v) {
  Vec out = Vec::Zero(v.size());
  for (int i = 0; i < v.size(); ++i)
    if (gw[i] != 0) out[i] = gw[i] * inst.law.flux(inst.law.beta.values()[i], v[i]);
  return out;
}

}  // namespace

GridFunction solve_monotone(const SteadyInstance& inst, const SolverOptions& opts,
                            int* newton_iterations) {
  inst.validate();
  opts.validate();
  Assembly asmb(inst.grid);
  const SpMat K = asmb.stiffness(inst.A);
  const Vec gw = asmb.gamma_weights();
  const Vec rhs = assemble_load(asmb, inst);

  Vec v = Vec::Zero(asmb.dofs());
  Vec res = K * v + boundary_flux(inst, gw, v) - rhs;
  int it = 0;
  while (res.norm() > opts.newton_tol) {
    if (it >= opts.newton_max)
      throw solver_error("steady newton iteration exceeded the budget (last residual " +
                             std::to_string(res.norm()) + ")",
                         res.norm());
    SpMat J = K;
    for (int i = 0; i < v.size(); ++i)
      if (gw[i] != 0) J.coeffRef(i, i) += gw[i] * inst.law.dflux(inst.law.beta.values()[i], v[i]);
    const Vec delta = fem::cg_solve(J, -res, Vec::Zero(v.size()), opts.linear_tol);
    v += opts.damping * delta;
    res = K * v + boundary_flux(inst, gw, v) - rhs;
    ++it;
  }
  if (newton_iterations) *newton_iterations = it;

  SpaceTimeGrid g = inst.grid.space_only();
  return GridFunction(g, v.array());
}

Real ContractionTrace::tail_ratio(int tail) const {
  if (ratios.empty()) return 0;
  const int m = std::min<int>(tail, static_cast<int>(ratios.size()));
  Real acc = 0;
  for (int i = 0; i < m; ++i) acc += ratios[ratios.size() - 1 - i];
  return acc / m;
}

ContractionResult solve_contraction(const SteadyInstance& inst,
                                    const estimates::EllipticityData<>& ed,
                                    const SolverOptions& opts) {
  inst.validate();
  opts.validate();
  if (std::abs(inst.law.ell - 2.0) > 1e-12)
    throw parameter_error("solve_contraction: requires ell = 2");
  ed.validate();
  inst.A.validate(ed.a_lo, ed.a_hi);
  inst.law.validate(ed.b_lo, ed.b_hi);

  Assembly asmb(inst.grid);
  const int n = asmb.dofs();
  const SpMat K_A = asmb.stiffness(inst.A);
  const SpMat K_I = asmb.stiffness_identity();
  const Vec gw = asmb.gamma_weights();

  SpMat robin = K_I;
  for (int i = 0; i < n; ++i)
    if (gw[i] != 0) robin.coeffRef(i, i) += gw[i];
  Eigen::SimplicialLDLT<SpMat> chol(robin);
  if (chol.info() != Eigen::Success)
    throw solver_error("robin operator factorization failed", 0.0);

  ContractionTrace trace;
  trace.mp_estimate = estimate_Mp(inst.grid, 2.0, 12, /*seed=*/20240521u);
  // Throws infeasible_error when a_hi / Mp <= kappa.
  const auto cd = estimates::contraction_data(ed, trace.mp_estimate, 2.0, 2);
  trace.q_factor = cd.q_factor;
  const Real t = cd.t;

  const Vec load = assemble_load(asmb, inst);
  const Vec rhs_newton = load;  // the steady weak residual target

  auto solver_norm = [&](const Vec& v) { return asmb.sobolev_norm(v, 2.0); };
  auto residual = [&](const Vec& v) {
    return (K_A * v + boundary_flux(inst, gw, v) - rhs_newton).norm();
  };

  Vec u = Vec::Zero(n);
  int bad_streak = 0;
  Real prev_diff = -1;
  while (residual(u) > opts.newton_tol) {
    if (trace.iterations >= 500)
      throw solver_error("contraction iteration exceeded the budget", residual(u));
    // L_t u = (K_I - t K_A) u + (1 - t beta) u on Gamma + t * (all data loads).
    Vec rhs = (K_I - t * K_A) * u + t * load;
    for (int i = 0; i < n; ++i)
      if (gw[i] != 0) rhs[i] += gw[i] * (1 - t * inst.law.beta.values()[i]) * u[i];
    const Vec next = chol.solve(rhs);
    const Real d = solver_norm(next - u);
    trace.diff_norms.push_back(d);
    if (prev_diff > 0 && d > 0) {
      const Real ratio = d / prev_diff;
      trace.ratios.push_back(ratio);
      bad_streak = ratio > 1 ? bad_streak + 1 : 0;
      if (bad_streak >= 5)
        throw solver_error("contraction iteration diverging (ratio > 1 for 5 steps)", d);
    }
    prev_diff = d;
    u = next;
    trace.iterate_norms.push_back(solver_norm(u));
    ++trace.iterations;
  }

  SpaceTimeGrid g = inst.grid.space_only();
  return {GridFunction(g, u.array()), std::move(trace)};
}

Real sobolev_norm(const SteadyInstance& inst, const GridFunction& v, Real p) {
  Assembly asmb(inst.grid);
  return asmb.sobolev_norm(v.values().matrix(), p);
}

// ---------------------------------------------------------------------------
// M_p estimate
// ---------------------------------------------------------------------------

Real estimate_Mp(const SpaceTimeGrid& grid, Real p, int samples, std::uint64_t seed) {
  if (!(p >= 2)) throw parameter_error("estimate_Mp: need p >= 2");
  if (samples < 1) throw parameter_error("estimate_Mp: need at least one sample");
  SpaceTimeGrid g = grid.space_only();
  if (!g.has_gamma()) throw parameter_error("estimate_Mp: Gamma must be nonempty");
  Assembly asmb(g);
  const int n = asmb.dofs();

  SpMat robin = asmb.stiffness_identity();
  const Vec gw = asmb.gamma_weights();
  for (int i = 0; i < n; ++i)
    if (gw[i] != 0) robin.coeffRef(i, i) += gw[i];
  Eigen::SimplicialLDLT<SpMat> chol(robin);
  if (chol.info() != Eigen::Success)
    throw solver_error("robin operator factorization failed", 0.0);

  const Real pprime = p / (p - 1);
  auto primal_norm = [&](const Vec& v) { return asmb.sobolev_norm(v, p); };
  auto test_norm = [&](const Vec& v) { return asmb.sobolev_norm(v, pprime); };

  // Fixed random test set for the dual norm (independent of the sample count).
  const int n_tests = 16;
  std::vector<Vec> tests;
  std::vector<Real> tests_norm;
  tests.reserve(n_tests);
  for (int j = 0; j < n_tests; ++j) {
    Rng rng = Rng::forked(seed, 1000000u + j);
    Vec w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.normal();
    tests_norm.push_back(test_norm(w));
    tests.push_back(std::move(w));
  }

  auto dual_norm = [&](const Vec& F, const Vec& sol) {
    Real best;
    if (p == 2) {
      // the pairing <F, sol> equals the energy, written in the same quadrature
      // as the norms so the coercivity bound survives rounding
      const Real gp = asmb.grad_p_norm(sol, 2), tr = asmb.gamma_l2(sol);
      best = (gp * gp + tr * tr) / (gp + tr);
    } else {
      best = std::abs(F.dot(sol)) / primal_norm(sol);
    }
    for (int j = 0; j < n_tests; ++j)
      best = std::max(best, std::abs(F.dot(tests[j])) / tests_norm[j]);
    return best;
  };

  Real est = 0;
  std::vector<Vec> sols;
  sols.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    Rng rng = Rng::forked(seed, s);
    Vec F(n);
    for (int i = 0; i < n; ++i) F[i] = rng.normal();
    const Vec u = chol.solve(F);
    est = std::max(est, primal_norm(u) / dual_norm(F, u));
    sols.push_back(u);
  }

  if (p == 2) {
    // Two-dimensional subspace refinement over nested candidate pairs, so the
    // estimate stays monotone in the sample count.
    auto ratio_of = [&](const Vec& u) {
      const Vec F = robin * u;
      return primal_norm(u) / dual_norm(F, u);
    };
    for (size_t s = 1; s < sols.size(); ++s) {
      for (const Vec* other : {&sols[s - 1], &sols[0]}) {
        for (int k = 1; k < 64; ++k) {
          const Real th = 3.14159265358979323846 * k / 64;
          const Vec cand = std::cos(th) * sols[s] + std::sin(th) * (*other);
          if (cand.norm() == 0) continue;
          est = std::max(est, ratio_of(cand));
        }
      }
    }
  }
  return est;
}

}  // namespace parest::elliptic
