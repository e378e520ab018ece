#include <doctest.h>

#include <cmath>

#include "parest/fem.hpp"
#include "parest/meshfields.hpp"
#include "parest/parabolic.hpp"

using namespace parest;
using namespace parest::mesh;
using parabolic::ProblemInstance;

namespace {

constexpr double kPi = 3.14159265358979323846;

using Fn = std::function<double(double, double, double)>;

ProblemInstance make_instance(const SpaceTimeGrid& g, double a11, double a12, double a22,
                              double ell, double beta, const Fn& f, const Fn& fx, const Fn& fy,
                              const Fn& h, const Fn& u0) {
  const SpaceTimeGrid sp = g.space_only();
  ProblemInstance inst{g,
                       fem::CoefficientField::constant(sp, a11, a12, a22),
                       fem::BoundaryLaw{ell, GridFunction::constant(sp, beta)},
                       GridFunction::sample(g, fx),
                       GridFunction::sample(g, fy),
                       GridFunction::sample(g, f),
                       GridFunction::sample(g, h),
                       GridFunction::sample(sp, u0)};
  inst.validate();
  return inst;
}

Fn zero() {
  return [](double, double, double) { return 0.0; };
}

}  // namespace

TEST_SUITE_BEGIN("parabolic");

TEST_CASE("zero data gives the zero solution") {
  const auto g = SpaceTimeGrid::space_time(1, 1, 8, 8, 8, 0.5);
  const auto inst = make_instance(g, 1, 0, 1, 2, 1, zero(), zero(), zero(), zero(), zero());
  const auto u = parabolic::solve(inst);
  CHECK(u.values().abs().maxCoeff() == 0.0);
}

TEST_CASE("spatially flat decay: u = exp(-t) within first-order step error") {
  // A = I, ell = 2, beta = 1, f = -exp(-t), h = exp(-t), u0 = 1
  const Fn exp_t = [](double, double, double t) { return std::exp(-t); };
  const Fn f = [](double, double, double t) { return -std::exp(-t); };
  double prev_err = 0;
  for (int k = 0; k < 2; ++k) {
    const int nt = 64 << k;
    const auto g = SpaceTimeGrid::space_time(1, 1, 8, 8, nt, 1.0);
    const auto inst = make_instance(g, 1, 0, 1, 2, 1, f, zero(), zero(), exp_t,
                                    [](double, double, double) { return 1.0; });
    const auto u = parabolic::solve(inst);
    double err = 0;
    for (int lvl = 0; lvl <= g.nt; ++lvl)
      for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
          err = std::max(err, std::abs(u(lvl, j, i) - std::exp(-g.t(lvl))));
    CHECK(err < 1.5 / nt);
    if (k > 0) CHECK(err < prev_err * 0.7);
    prev_err = err;
  }
}

TEST_CASE("linear problems converge in one newton iteration") {
  const auto g = SpaceTimeGrid::space_time(1, 1, 12, 12, 6, 0.3);
  const auto inst = make_instance(
      g, 1, 0, 1, 2, 1.0,
      [](double x, double y, double t) { return std::cos(kPi * x) * std::exp(-t) + y; },
      zero(), zero(), [](double, double, double t) { return std::sin(t); },
      [](double x, double, double) { return x; });
  fem::SolverOptions opts;
  opts.newton_tol = 1e-8;
  parabolic::SolveStats stats;
  (void)parabolic::solve(inst, opts, &stats);
  CHECK(stats.max_newton_iterations == 1);
}

TEST_CASE("monotone law: boundary flux has the sign of the trace") {
  fem::BoundaryLaw law{5.0, GridFunction::constant(SpaceTimeGrid::spatial(1, 1, 2, 2), 1.3)};
  for (double s : {-2.0, -0.5, -1e-8, 0.0, 1e-8, 0.7, 3.0}) {
    CHECK(law.flux(1.3, s) * s >= 0.0);
    CHECK(law.dflux(1.3, s) >= 0.0);
  }
  // solved instance: flux sign matches the solution sign on Gamma samples
  const auto g = SpaceTimeGrid::space_time(1, 1, 8, 8, 8, 0.4);
  const auto inst = make_instance(
      g, 1, 0, 1, 5, 1.0, zero(), zero(), zero(),
      [](double x, double, double t) { return std::cos(kPi * x) * std::exp(-t); },
      [](double x, double y, double) { return std::cos(kPi * x) * std::cos(kPi * y); });
  const auto u = parabolic::solve(inst);
  for (int i = 0; i <= g.nx; ++i) {
    const double s = u(g.nt, 0, i);  // bottom edge, final level
    CHECK(inst.law.flux(1.0, s) * s >= 0.0);
  }
}

TEST_CASE("zero-data solutions decay in the discrete L2 norm") {
  const auto g = SpaceTimeGrid::space_time(1, 1, 10, 10, 12, 0.5);
  for (double ell : {2.0, 3.0, 5.0}) {
    const auto inst = make_instance(g, 1, 0.1, 1.3, ell, 1.0, zero(), zero(), zero(), zero(),
                                    [](double x, double y, double) {
                                      return std::cos(kPi * x) * std::cos(kPi * y) + 0.3;
                                    });
    const auto u = parabolic::solve(inst);
    fem::Assembly asmb(g);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= g.nt; ++k) {
      const Eigen::VectorXd v = u.level(k).matrix();
      const double m_norm = std::sqrt(v.dot(asmb.mass() * v));
      CHECK(m_norm <= prev * (1 + 1e-9));
      prev = m_norm;
    }
  }
}

TEST_CASE("discrete energy inequality with data pairing terms") {
  const auto g = SpaceTimeGrid::space_time(1, 1, 16, 16, 64, 0.5);
  const auto inst = make_instance(
      g, 1.0, 0.0, 1.2, 3, 1.0,
      [](double x, double y, double t) { return std::cos(kPi * x) * std::cos(kPi * y) * std::exp(-t); },
      [](double x, double, double) { return 0.2 * x; }, zero(),
      [](double x, double, double t) { return 0.3 * std::cos(kPi * x) * std::exp(-t); },
      [](double x, double y, double) { return 0.5 * std::cos(kPi * x) * std::cos(kPi * y); });
  const auto ed = parabolic::derive_ellipticity(inst);
  double prev_gap = 0;
  for (int refine = 0; refine < 2; ++refine) {
    SpaceTimeGrid gr = g;
    if (refine) {
      gr.nx = gr.ny = 32;
      gr.nt = 128;
    }
    const auto instr = make_instance(
        gr, 1.0, 0.0, 1.2, 3, 1.0,
        [](double x, double y, double t) { return std::cos(kPi * x) * std::cos(kPi * y) * std::exp(-t); },
        [](double x, double, double) { return 0.2 * x; }, zero(),
        [](double x, double, double t) { return 0.3 * std::cos(kPi * x) * std::exp(-t); },
        [](double x, double y, double) { return 0.5 * std::cos(kPi * x) * std::cos(kPi * y); });
    const auto u = parabolic::solve(instr);
    const auto grad = mesh::gradient(u);

    const double uT = lp_norm(u.level_field(gr.nt), 2);
    const double u0n = lp_norm(instr.u0, 2);
    GridFunction bnd = u;
    bnd.values() = u.values().abs().pow(instr.law.ell);
    double lhs = 0.5 * uT * uT +
                 ed.a_lo * std::pow(lp_norm(grad.magnitude(), 2), 2) +
                 ed.b_lo * integrate(bnd, Region::gamma_trace);

    GridFunction fu = u;
    fu.values() = instr.f.values() * u.values();
    GridFunction fgrad = u;
    fgrad.values() = instr.fvec_x.values() * grad.x.values() +
                     instr.fvec_y.values() * grad.y.values();
    GridFunction hu = u;
    hu.values() = instr.h.values() * u.values();
    const double rhs = 0.5 * u0n * u0n + integrate(fu) + integrate(fgrad) +
                       integrate(hu, Region::gamma_trace);

    const double gap = (lhs - rhs) / std::max(1.0, std::abs(rhs));
    CHECK(lhs <= rhs * 1.02 + 0.02);
    if (refine) CHECK(gap <= prev_gap + 1e-3);  // slack shrinks under refinement
    prev_gap = gap;
  }
}

TEST_CASE("weak residual") {
  const auto g = SpaceTimeGrid::space_time(1, 1, 8, 8, 8, 0.4);
  const auto inst = make_instance(
      g, 1, 0, 1, 3, 1.0,
      [](double x, double, double t) { return std::cos(kPi * x) * std::exp(-t); }, zero(),
      zero(), zero(), [](double x, double y, double) { return x * y; });
  SUBCASE("solver output satisfies the tolerance") {
    fem::SolverOptions opts;
    const auto u = parabolic::solve(inst, opts);
    CHECK(parabolic::weak_residual(inst, u) <= opts.newton_tol * (1 + lp_norm(u, 2)));
  }
  SUBCASE("zero field against constant f reproduces the load functional") {
    const auto instc = make_instance(g, 1, 0, 1, 2, 1.0,
                                     [](double, double, double) { return 2.0; }, zero(),
                                     zero(), zero(), zero());
    const auto u0 = GridFunction::zeros(g);
    // residual rows are the load entries 2 * int(phi_i); sum their squares
    fem::Assembly asmb(g);
    double sq = 0;
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        const double wx = (i == 0 || i == g.nx) ? g.hx() / 2 : g.hx();
        const double wy = (j == 0 || j == g.ny) ? g.hy() / 2 : g.hy();
        sq += std::pow(2.0 * wx * wy, 2);
      }
    const double expected = std::sqrt(sq * g.nt * g.dt() * g.hx() * g.hy());
    CHECK(parabolic::weak_residual(instc, u0) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("perturbing the solution raises the residual") {
    const auto u = parabolic::solve(inst);
    const double base = parabolic::weak_residual(inst, u);
    GridFunction up = u;
    up.values() += 1e-3;
    CHECK(parabolic::weak_residual(inst, up) > base);
  }
}

TEST_CASE("manufactured smooth solution: small grid sanity") {
  // u* = cos(pi x) cos(pi y) exp(-t) with A = I, ell = 2, beta = 1:
  // f = (2 pi^2 - 1) u*, h = u* on Gamma, homogeneous Neumann flux elsewhere.
  const Fn ustar = [](double x, double y, double t) {
    return std::cos(kPi * x) * std::cos(kPi * y) * std::exp(-t);
  };
  const Fn f = [&](double x, double y, double t) {
    return (2 * kPi * kPi - 1) * std::cos(kPi * x) * std::cos(kPi * y) * std::exp(-t);
  };
  const auto g = SpaceTimeGrid::space_time(1, 1, 24, 24, 96, 0.25);
  const auto inst = make_instance(g, 1, 0, 1, 2, 1.0, f, zero(), zero(), ustar,
                                  [&](double x, double y, double) { return ustar(x, y, 0); });
  const auto u = parabolic::solve(inst);
  GridFunction err = u;
  err.values() -= GridFunction::sample(g, ustar).values();
  CHECK(lp_norm(err, 2) < 5e-3);
}

TEST_SUITE_END();
