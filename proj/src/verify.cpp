#include "parest/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace parest::verify {

using estimates::BoundVariant;
using estimates::CubeVariant;
using estimates::EllipticityData;
using estimates::FreeParameters;
using estimates::UpsilonVariant;
using mesh::GridFunction;
using mesh::ParabolicCube;
using mesh::Region;
using mesh::SpaceTimeGrid;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::pair<std::string, std::string> kv(const std::string& k, double v) { return {k, fmt(v)}; }
std::pair<std::string, std::string> kv(const std::string& k, const std::string& v) {
  return {k, v};
}

GridFunction fvec_magnitude(const GridFunction& fx, const GridFunction& fy) {
  GridFunction m = fx;
  m.values() = (fx.values().square() + fy.values().square()).sqrt();
  return m;
}

constexpr std::uint64_t kConstantSeed = 777;  // seed of internally estimated embedding constants

}  // namespace

EstimateReport make_report(std::string name, double lhs, double rhs, double tol,
                           std::vector<std::pair<std::string, std::string>> params,
                           bool informational) {
  EstimateReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.margin = rhs > 0 ? lhs / rhs : (lhs == 0 ? 0 : std::numeric_limits<double>::infinity());
  r.pass = lhs <= rhs * (1 + tol);
  r.informational = informational;
  r.params = std::move(params);
  return r;
}

// ---------------------------------------------------------------------------
// CoverSpec
// ---------------------------------------------------------------------------

CoverSpec CoverSpec::uniform(const SpaceTimeGrid& grid, double side, double beta) {
  if (!(side > 0) || !(beta > 0) || !(beta < 1))
    throw parameter_error("cover: need side > 0 and beta in (0,1)");
  if (grid.nt > 0 && !(side / 2 < std::sqrt(grid.horizon())))
    throw parameter_error("cover: cube radius exceeds sqrt(T)");
  const double sobolev_cap = 1.0 / (4 * estimates::poincare_sobolev_constant<double>(2));
  if (!(side / 2 < sobolev_cap))
    throw parameter_error("cover: cube radius exceeds the Sobolev radius cap");

  // Closed tiles [x0 + a s, x0 + (a+1) s] x [y0 + b s, y0 + (b+1) s]; exhaustive
  // membership count over the grid nodes checks coverage and overlap <= 2^n + 1.
  const int cols = static_cast<int>(std::ceil(grid.Lx / side - 1e-12));
  const int rows = static_cast<int>(std::ceil(grid.Ly / side - 1e-12));
  const int n_bound = 5;  // 2^2 + 1
  for (int j = 0; j <= grid.ny; ++j)
    for (int i = 0; i <= grid.nx; ++i) {
      const double x = grid.x(i) - grid.x0, y = grid.y(j) - grid.y0;
      int count = 0;
      for (int b = 0; b < rows; ++b)
        for (int a = 0; a < cols; ++a)
          if (x >= a * side - 1e-12 && x <= (a + 1) * side + 1e-12 &&
              y >= b * side - 1e-12 && y <= (b + 1) * side + 1e-12)
            ++count;
      if (count < 1) throw parameter_error("cover: a grid node escaped the cover");
      if (count > n_bound) throw parameter_error("cover: overlap bound exceeded");
    }

  CoverSpec c;
  c.r_side = side;
  c.N = n_bound;
  c.beta = beta;
  return c;
}

// ---------------------------------------------------------------------------
// Data norms of an instance
// ---------------------------------------------------------------------------

namespace {

estimates::DataNorms<> data_norms(const parabolic::ProblemInstance& inst, double p, double ell,
                                  BoundVariant variant, double K_trace, double S_dual);

}  // namespace

estimates::DataNorms<> instance_data_norms(const parabolic::ProblemInstance& inst, double p,
                                           BoundVariant variant, double K_trace,
                                           double S_dual) {
  return data_norms(inst, p, parabolic::derive_ellipticity(inst).ell, variant, K_trace, S_dual);
}

namespace {

estimates::DataNorms<> data_norms(const parabolic::ProblemInstance& inst, double p, double ell,
                                  BoundVariant variant, double K_trace, double S_dual) {
  estimates::DataNorms<> dn;
  const bool has_gamma = inst.grid.has_gamma();
  const GridFunction mag = fvec_magnitude(inst.fvec_x, inst.fvec_y);

  auto fill = [&](double q, double& u0, double& f, double& fv, double& hm) {
    u0 = mesh::lp_norm(inst.u0, q);
    f = mesh::lp_norm(inst.f, q);
    fv = mesh::lp_norm(mag, q);
    const double he = variant == BoundVariant::standard ? (ell + q - 2) / (ell - 1)
                                                        : q / (q - 1);
    hm = has_gamma ? std::pow(mesh::lp_norm(inst.h, he, Region::gamma_trace), he) : 0.0;
  };
  fill(p, dn.u0_p, dn.f_p, dn.fvec_p, dn.h_mixed);
  fill(2, dn.u0_2, dn.f_2, dn.fvec_2, dn.h_mixed_2);
  dn.h_p = has_gamma ? mesh::lp_norm(inst.h, p, Region::gamma_trace) : 0.0;
  dn.omega_vol = inst.grid.Lx * inst.grid.Ly;
  dn.K_trace = K_trace;
  dn.S_dual = S_dual;
  return dn;
}

}  // namespace

// ---------------------------------------------------------------------------
// Energy bounds
// ---------------------------------------------------------------------------

std::vector<EstimateReport> verify_energy(const parabolic::ProblemInstance& inst,
                                          const GridFunction& u,
                                          const FreeParameters<>& fp, double p, double tol) {
  const EllipticityData<> ed = parabolic::derive_ellipticity(inst);
  const BoundVariant variant = ed.b_lo > 0 ? BoundVariant::standard : BoundVariant::b_zero;
  const double K = variant == BoundVariant::b_zero
                       ? estimate_trace_constant(inst.grid, 8, kConstantSeed)
                       : 1.0;
  const auto dn = data_norms(inst, p, ed.ell, variant, K, 1.0);
  const auto bounds =
      estimates::apriori_bounds(p, ed, fp, dn, inst.grid.horizon(), variant, 2);

  std::vector<std::pair<std::string, std::string>> base{
      kv("p", p), kv("ell", ed.ell), kv("a_lo", ed.a_lo), kv("b_lo", ed.b_lo),
      kv("kappa", bounds.kappa)};

  std::vector<EstimateReport> out;
  {
    const double lhs = std::pow(mesh::ess_sup_lp(u, p), p);
    const double rhs = bounds.G * std::exp(bounds.kappa * inst.grid.horizon());
    out.push_back(make_report("energy.sup", lhs, rhs, tol, base));
  }
  {
    GridFunction w = mesh::gradient(u).magnitude();
    w.values() *= u.values().abs().pow((p - 2) / 2);
    const double q = ed.ell + p - 2;
    double lhs = ed.a_lo * std::pow(mesh::lp_norm(w, 2), 2);
    if (inst.grid.has_gamma())
      lhs += ed.b_lo * std::pow(mesh::lp_norm(u, q, Region::gamma_trace), q);
    out.push_back(make_report("energy.dissipation", lhs, bounds.E, tol, base));
  }
  if (variant == BoundVariant::standard && inst.grid.has_gamma()) {
    const double q = ed.ell + p - 2;
    const double lhs = std::pow(mesh::lp_norm(u, q, Region::gamma_trace), q);
    out.push_back(make_report("energy.boundary", lhs, bounds.E / ed.b_lo, tol, base));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Caccioppoli
// ---------------------------------------------------------------------------

namespace {

GridFunction cutoff_field(const SpaceTimeGrid& spatial, const ParabolicCube& c, double r) {
  const double R = c.radius;
  return GridFunction::sample(spatial, [&](double x, double y, double) {
    const double d = std::max(std::abs(x - c.cx), std::abs(y - c.cy));
    return std::clamp((R - d) / (R - r), 0.0, 1.0);
  });
}

bool cube_touches_gamma(const SpaceTimeGrid& g, const ParabolicCube& c, double margin) {
  const double R = c.radius;
  if ((g.gamma & mesh::edge_left) && c.cx - R <= g.x0 + margin) return true;
  if ((g.gamma & mesh::edge_right) && c.cx + R >= g.x0 + g.Lx - margin) return true;
  if ((g.gamma & mesh::edge_bottom) && c.cy - R <= g.y0 + margin) return true;
  if ((g.gamma & mesh::edge_top) && c.cy + R >= g.y0 + g.Ly - margin) return true;
  return false;
}

}  // namespace

std::vector<EstimateReport> verify_caccioppoli(const parabolic::ProblemInstance& inst,
                                               const GridFunction& u,
                                               const std::vector<ParabolicCube>& cubes,
                                               const FreeParameters<>& fp, double tol,
                                               double K_trace) {
  const EllipticityData<> ed = parabolic::derive_ellipticity(inst);
  const SpaceTimeGrid& g = inst.grid;
  const double T = g.horizon();
  for (const auto& c : cubes) {
    if (!(c.radius > 0) || !(c.radius < std::sqrt(T)))
      throw parameter_error("verify_caccioppoli: cube radius must lie in (0, sqrt(T))");
    if (c.ct < -1e-12 || c.ct > T + 1e-12 || c.cx < g.x0 - 1e-12 ||
        c.cx > g.x0 + g.Lx + 1e-12 || c.cy < g.y0 - 1e-12 || c.cy > g.y0 + g.Ly + 1e-12)
      throw parameter_error("verify_caccioppoli: cube center outside the closed cylinder");
    // the inner cube (radius R/2) needs a resolvable window and footprint
    if (c.radius * c.radius < 5 * g.dt() || c.radius < 2.2 * std::max(g.hx(), g.hy()))
      throw parameter_error("verify_caccioppoli: cube too small for the grid resolution");
  }
  if (K_trace <= 0) K_trace = estimate_trace_constant(g, 8, kConstantSeed);

  const GridFunction mag = fvec_magnitude(inst.fvec_x, inst.fvec_y);
  const GridFunction grad_mag = mesh::gradient(u).magnitude();

  std::vector<EstimateReport> out;
  for (size_t ci = 0; ci < cubes.size(); ++ci) {
    const ParabolicCube& cube = cubes[ci];
    const double R = cube.radius, r = R / 2;
    const bool boundary = cube_touches_gamma(g, cube, 0.5 * std::min(g.hx(), g.hy()));

    // Work on the reflected field whenever the window leaves [0, T].
    const bool reflect = cube.ct - R * R < 0 || cube.ct + R * R > T;
    const GridFunction u_ext = reflect ? mesh::time_reflect(u) : u;
    const GridFunction eta = cutoff_field(g.space_only(), cube, r);

    std::vector<double> U(u_ext.grid().levels(), 0.0);
    if (!boundary) U = mesh::weighted_mean_U(u_ext, eta);

    GridFunction w = u_ext;
    for (int k = 0; k < u_ext.grid().levels(); ++k)
      for (int j = 0; j < g.nsy(); ++j)
        for (int i = 0; i < g.nsx(); ++i)
          w.at(k, j, i) = eta(0, j, i) * (u_ext(k, j, i) - U[k]);

    // LHS: essential sup of ||eta (u-U)||^2 over the window plus the gradient
    // energy on the inner cube.
    double sup_sq = 0;
    {
      const SpaceTimeGrid& eg = u_ext.grid();
      for (int k = 0; k < eg.levels(); ++k)
        if (eg.t(k) >= cube.ct - R * R - 1e-12 && eg.t(k) <= cube.ct + R * R + 1e-12) {
          const double s = mesh::lp_norm(w.level_field(k), 2);
          sup_sq = std::max(sup_sq, s * s);
        }
    }
    const GridFunction grad_ext = reflect ? mesh::time_reflect(grad_mag) : grad_mag;
    const ParabolicCube inner{cube.cx, cube.cy, cube.ct, r};
    const double grad_r = mesh::lp_norm(mesh::cube_restrict(grad_ext, inner), 2);
    const double lhs = sup_sq + ed.a_lo * (1 - fp.nu1 - fp.nu2) * grad_r * grad_r;

    estimates::CaccioppoliLocalNorms<> ln;
    ln.eta_u_minus_U_R = mesh::lp_norm(mesh::cube_restrict(w, cube), 2);
    ln.f_R = mesh::lp_norm(mesh::cube_restrict(inst.f, cube), 2);
    ln.fvec_R = mesh::lp_norm(mesh::cube_restrict(mag, cube), 2);
    double h_R = 0;
    {
      const GridFunction hc = mesh::cube_restrict(inst.h, cube);
      if (hc.grid().has_gamma()) h_R = mesh::lp_norm(hc, 2, Region::gamma_trace);
    }
    ln.h_R = h_R;
    const double rhs = estimates::caccioppoli_rhs(ed, fp, R, r, K_trace, ln);

    out.push_back(make_report(
        "caccioppoli.cube", lhs, rhs, tol,
        {kv("cube", static_cast<double>(ci)), kv("branch", boundary ? "boundary" : "interior"),
         kv("R", R), kv("cx", cube.cx), kv("cy", cube.cy), kv("ct", cube.ct),
         kv("K_trace", K_trace)}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Poincare campaign
// ---------------------------------------------------------------------------

std::vector<EstimateReport> verify_poincare(int n, int trials, std::uint64_t seed) {
  if (n != 2)
    throw parameter_error("verify_poincare: discrete fields are two-dimensional (n = 2)");
  const double S = estimates::poincare_sobolev_constant<double>(n);
  const double eps = 0.5;
  const double R = 0.5;  // < eps / (2 S)
  const double C = S / (1 - eps);

  const SpaceTimeGrid g = SpaceTimeGrid::spatial(2 * R, 2 * R, 40, 40, 0);

  std::vector<EstimateReport> out;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::forked(seed, trial);
    double a[4][4], b[2];
    for (auto& row : a)
      for (double& c : row) c = rng.uniform(-1, 1);
    for (double& c : b) c = rng.uniform(-1, 1);
    GridFunction u = GridFunction::sample(g, [&](double x, double y, double) {
      double v = b[0] * x + b[1] * y;
      for (int m = 0; m < 4; ++m)
        for (int k = 0; k < 4; ++k)
          v += a[m][k] * std::cos(m * 3.14159265358979323846 * x / (2 * R)) *
               std::cos(k * 3.14159265358979323846 * y / (2 * R));
      return v;
    });
    // enforce zero quadrature mean
    double acc = 0, vol = 0;
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) {
        const double wy = (j == 0 || j == g.ny) ? g.hy() / 2 : g.hy();
        const double wx = (i == 0 || i == g.nx) ? g.hx() / 2 : g.hx();
        acc += wx * wy * u(0, j, i);
        vol += wx * wy;
      }
    u.values() -= acc / vol;

    const double lhs = mesh::lp_norm(u, 2);
    const double rhs = C * mesh::lp_norm(mesh::gradient(u).magnitude(), 1);
    out.push_back(make_report("poincare.trial", lhs, rhs, 1e-9,
                              {kv("trial", static_cast<double>(trial)), kv("R", R),
                               kv("eps", eps)}));
  }

  // Constant witness: gradient-free but nonzero, recorded and excluded from gates.
  {
    const GridFunction c1 = GridFunction::constant(g, 1.0);
    const double lhs = mesh::lp_norm(c1, 2);
    out.push_back(make_report("poincare.constant_witness", lhs, 0.0, 1e-9,
                              {kv("note", "zero-mean hypothesis is required")}, true));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stieltjes campaign
// ---------------------------------------------------------------------------

namespace {

mesh::StieltjesFn random_step_fn(Rng& rng, int max_jumps) {
  const int m = 1 + rng.uniform_int(0, max_jumps - 1);
  std::vector<double> pts;
  for (int i = 0; i < m; ++i) pts.push_back(rng.uniform(1.05, 8.0));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> jumps(pts.size());
  for (double& j : jumps) j = rng.uniform(0.05, 1.0);

  mesh::StieltjesFn h;
  h.breakpoints.push_back(1.0);
  double total = 0;
  for (double j : jumps) total += j;
  h.values.push_back(total);
  double rem = total;
  for (size_t i = 0; i < pts.size(); ++i) {
    rem -= jumps[i];
    h.breakpoints.push_back(pts[i]);
    h.values.push_back(std::max(rem, 0.0));
  }
  h.values.back() = 0.0;
  h.validate();
  return h;
}

}  // namespace

std::vector<EstimateReport> verify_stieltjes(int trials, std::uint64_t seed) {
  std::vector<EstimateReport> out;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::forked(seed, trial);
    const double q = rng.uniform(0.5, 3.0);
    const mesh::StieltjesFn h = random_step_fn(rng, 6);
    const int m0 = rng.uniform_int(0, 2);
    std::vector<mesh::StieltjesFn> H(m0);
    std::vector<double> betas(m0);
    for (int i = 0; i < m0; ++i) {
      H[i] = random_step_fn(rng, 4);
      betas[i] = rng.uniform(1.0, 2.5);
    }

    // Scan iota over a geometric grid refined by every breakpoint: the ratio is
    // piecewise monotone, so this hits the exact supremum.
    double support_max = h.breakpoints.back();
    for (const auto& Hi : H) support_max = std::max(support_max, Hi.breakpoints.back());
    std::vector<double> iotas{1.0};
    for (double t = 1.0; t <= support_max; t *= 1.05) iotas.push_back(t);
    for (double bp : h.breakpoints) iotas.push_back(bp);
    for (const auto& Hi : H)
      for (double bp : Hi.breakpoints) iotas.push_back(bp);
    std::sort(iotas.begin(), iotas.end());

    double a_min = 0;
    for (double iota : iotas) {
      const double num = h.tail_moment_strict(iota, q);
      if (num <= 0) continue;
      double den = std::pow(iota, q) * h.at(iota);
      for (int i = 0; i < m0; ++i) den += std::pow(H[i].at(iota), betas[i]);
      if (den > 0) a_min = std::max(a_min, num / den);
    }
    const double a = std::max(a_min, 1.0 + 1e-6);

    const double cap = a * q / (a - 1);
    const double gamma = std::min(q + 0.5 * (cap - q), q + 40.0);
    const double den_c = a * q - (a - 1) * gamma;

    const double lhs = mesh::stieltjes_integral(h, gamma, 1.0);
    double rhs = q / den_c * mesh::stieltjes_integral(h, q, 1.0);
    for (int i = 0; i < m0; ++i)
      rhs += a * gamma / den_c * std::pow(H[i].at(1.0), betas[i] - 1) *
             mesh::stieltjes_integral(H[i], gamma - q, 1.0);

    out.push_back(make_report("stieltjes.trial", lhs, rhs, 1e-9,
                              {kv("trial", static_cast<double>(trial)), kv("q", q),
                               kv("a", a), kv("gamma", gamma),
                               kv("M0", static_cast<double>(m0))}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gradient bound
// ---------------------------------------------------------------------------

double gradient_eps_cap(const parabolic::ProblemInstance& inst, const FreeParameters<>& fp) {
  const EllipticityData<> ed = parabolic::derive_ellipticity(inst);
  const double B = estimates::gehring_B(ed, fp.nu0, 2, CubeVariant::boundary);
  estimates::GehringExponents<> ge;
  ge.n = 2;
  ge.p = 2;  // (n + 2) / n
  const double ups = estimates::gehring_upsilon(B, ge, UpsilonVariant::no_phi);
  return 4.0 / ((2 + 2) * (ups - 1));
}

EstimateReport verify_gradient_bound(const parabolic::ProblemInstance& inst,
                                     const GridFunction& u, FreeParameters<> fp,
                                     const CoverSpec& cover, double p, double K_trace) {
  const EllipticityData<> ed = parabolic::derive_ellipticity(inst);
  const BoundVariant variant = ed.b_lo > 0 ? BoundVariant::standard : BoundVariant::b_zero;
  const double eps = p - 2;
  if (!(eps >= 0) || !(eps <= gradient_eps_cap(inst, fp)) || !(eps <= fp.delta))
    throw parameter_error("verify_gradient_bound: p - 2 outside the admissible interval");
  if (K_trace <= 0) K_trace = estimate_trace_constant(inst.grid, 8, kConstantSeed);

  fp.eps = eps;
  fp.cover_N = cover.N;
  fp.cover_r = cover.r_side;
  fp.beta = cover.beta;

  const auto dn = data_norms(inst, p, ed.ell, variant, K_trace, 1.0);
  const auto bounds =
      estimates::apriori_bounds(p, ed, fp, dn, inst.grid.horizon(), variant, 2);
  const double lhs = mesh::lp_norm(mesh::gradient(u).magnitude(), p);
  return make_report("gradient.global", lhs, bounds.M, 0.0,
                     {kv("p", p), kv("eps", eps), kv("cover_r", cover.r_side),
                      kv("cover_N", static_cast<double>(cover.N)), kv("beta", cover.beta),
                      kv("K_trace", K_trace)});
}

// ---------------------------------------------------------------------------
// Steady checks
// ---------------------------------------------------------------------------

std::vector<EstimateReport> verify_steady(const elliptic::SteadyInstance& inst,
                                          const EllipticityData<>& ed,
                                          const FreeParameters<>& fp, double tol,
                                          double K_trace) {
  std::vector<EstimateReport> out;
  ed.validate();
  inst.A.validate(ed.a_lo, ed.a_hi);
  inst.law.validate(ed.b_lo, ed.b_hi);
  if (K_trace <= 0) K_trace = estimate_trace_constant(inst.grid, 8, kConstantSeed);
  const GridFunction u = elliptic::solve_monotone(inst);
  const GridFunction grad_mag = mesh::gradient(u).magnitude();
  const GridFunction mag = fvec_magnitude(inst.fvec_x, inst.fvec_y);

  // Gradient-power bound at p = 2 + eps.
  {
    const double ups = estimates::steady_upsilon(ed, fp.nu0, 2);
    const double eps = 0.5 / (ups - 1);
    const double p = 2 + eps;
    estimates::SteadyNorms<> norms;
    norms.grad_u_2 = mesh::lp_norm(grad_mag, 2);
    GridFunction Ffield = mag;
    {
      const double wf = 2 / ed.a_lo + 2;
      const bool f_zero = (inst.f.values().abs() < 1e-300).all();
      if (!f_zero && !(fp.nu0 > 0))
        throw parameter_error("verify_steady: nu0 must be positive for nonzero f");
      const double inv_nu = f_zero ? 0.0 : 1.0 / fp.nu0;
      Ffield.values() =
          (wf * mag.values().square() + inv_nu * inst.f.values().square()).sqrt();
    }
    norms.F_norm = mesh::lp_norm(Ffield, p);
    norms.H_norm =
        inst.grid.has_gamma() ? mesh::lp_norm(inst.h, p, Region::gamma_trace) : 0.0;
    const estimates::SteadyCover<> cover{5, 0.25};
    const auto sb = estimates::steady_state_bounds(ed, fp, 2, cover, eps, norms, K_trace);
    const double lhs = std::pow(mesh::lp_norm(grad_mag, p), p);
    out.push_back(make_report("steady.gradient_power", lhs, sb.rhs, 0.0,
                              {kv("eps", eps), kv("upsilon_s", sb.upsilon_s),
                               kv("K_trace", K_trace)}));
  }

  // W^{1,p} perturbation bound with the sampled M_p proxy.
  {
    const double p = 2 + 0.05;
    const double Mp = elliptic::estimate_Mp(inst.grid, p, 12, kConstantSeed);
    try {
      const auto cd = estimates::contraction_data(ed, Mp, p, 2);
      const double lhs = mesh::lp_norm(grad_mag, p) +
                         mesh::lp_norm(u, 2, Region::gamma_trace);
      const bool f_zero = (inst.f.values().abs() < 1e-300).all();
      const double S_dual =
          f_zero ? 0.0 : estimate_sobolev_dual(inst.grid, p, 8, kConstantSeed);
      const double fq = p * 2 / (p + 2);
      const double rhs =
          cd.el2_mult * (mesh::lp_norm(mag, p) + S_dual * mesh::lp_norm(inst.f, fq) +
                         mesh::lp_norm(inst.h, 2, Region::gamma_trace));
      out.push_back(make_report("steady.perturbation", lhs, rhs, tol,
                                {kv("p", p), kv("Mp", Mp), kv("S_dual", S_dual),
                                 kv("proxy", "sampled-lower-bound")}));
    } catch (const infeasible_error& e) {
      out.push_back(make_report("steady.perturbation", 0, 0, tol,
                                {kv("p", p), kv("Mp", Mp), kv("status", e.what())}, true));
    }
  }

  // Contraction rate and agreement with the monotone solve.
  try {
    const auto res = elliptic::solve_contraction(inst, ed);
    out.push_back(make_report(
        "steady.contraction_rate", res.trace.tail_ratio(), res.trace.q_factor + 0.05, 0.0,
        {kv("iterations", static_cast<double>(res.trace.iterations)),
         kv("q_factor", res.trace.q_factor), kv("Mp", res.trace.mp_estimate)}));
    GridFunction diff = res.u;
    diff.values() -= u.values();
    const double dn = elliptic::sobolev_norm(inst, diff, 2.0);
    const double un = elliptic::sobolev_norm(inst, u, 2.0);
    out.push_back(make_report("steady.contraction_agreement", dn, 1e-8 * (1 + un), 0.0,
                              {kv("solution_norm", un)}));
  } catch (const infeasible_error& e) {
    out.push_back(
        make_report("steady.contraction_rate", 0, 0, 0.0, {kv("status", e.what())}, true));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reverse Holder spot check
// ---------------------------------------------------------------------------

namespace {

// Right-hand side of the general reverse-Holder conclusion on the half cube,
// with the two mixed-norm weights E1, E2.
struct GeneralFormInputs {
  double p, eps, upsilon, beta, R0;
  estimates::GehringExponents<> ge;
  double phi_p, phi_pe;            // ||Phi||_p, ||Phi||_{p+eps} over Q+
  double F_m, F_me;                // ||F||_{m1,m2}, ||F||_{m1+r eps/p, m2+r eps/p}
  double G_l, G_le;                // same for G on Sigma
  double phi1, phi1e;              // ||phi||_1, ||phi||_{1+d eps/p}
};

double general_form_rhs(const GeneralFormInputs& in) {
  const auto& ge = in.ge;
  const double n = ge.n, p = in.p, eps = in.eps, R0 = in.R0;
  const double re = ge.r * eps / p, se = ge.s * eps / p, de = ge.d * eps / p;

  const double E1 = ge.m2 / ge.m1 *
                    std::pow(3.0, n * (ge.m2 - ge.m1) / (ge.m1 * (ge.m1 + re))) *
                    std::pow(3 / (2 * R0),
                             n * ((ge.m2 + re) / (ge.m1 + re) - ge.m2 / ge.m1)) *
                    std::pow(2 * R0, n + 2) * std::pow(3.0, ge.r * (n / ge.m1 + 2 / ge.m2)) /
                    (std::pow(3.0, n + 2) * std::pow(2 * R0, ge.r * (n / ge.m1 + 2 / ge.m2)));
  const double E2 = ge.l2 / ge.l1 *
                    std::pow(3.0, (n - 1) * (ge.l2 - ge.l1) / (ge.l1 * (ge.l1 + se))) *
                    std::pow(3 / (2 * R0),
                             (n - 1) * ((ge.l2 + se) / (ge.l1 + se) - ge.l2 / ge.l1)) *
                    std::pow(2 * R0, n + 2) *
                    std::pow(3.0, ge.s * ((n - 1) / ge.l1 + 2 / ge.l2)) /
                    (std::pow(3.0, n + 2) *
                     std::pow(2 * R0, ge.s * ((n - 1) / ge.l1 + 2 / ge.l2)));

  const double lead = std::pow(in.beta, -(n + 2) * (1 + eps / p)) /
                      (p - 1 - (in.upsilon - 1) * eps);
  const double first =
      (p - 1) / std::pow(R0, (n + 2) * eps / p) *
      (std::pow(in.phi_p, p + eps) +
       std::pow(in.phi_p, p) *
           (std::pow(in.F_m, ge.r * eps / p) +
            2 * R0 / 3 * std::pow(in.G_l, ge.s * eps / p) +
            4 * R0 * R0 / 9 * std::pow(in.phi1, ge.d * eps / p)));
  const double second =
      in.upsilon * (p - 1 + eps) *
      (E1 * std::pow(in.F_me, ge.m2 + re) * std::pow(in.F_m, ge.r - ge.m2) +
       E2 * std::pow(in.G_le, ge.l2 + se) * std::pow(in.G_l, ge.s - ge.l2) +
       std::pow(3.0, n * ge.d - (n + 2)) * std::pow(2 * R0, n + 2 - n * ge.d) *
           std::pow(in.phi1e, 1 + de) * std::pow(in.phi1, ge.d - 1));
  return lead * (first + second);
}

}  // namespace

std::vector<EstimateReport> spot_check_reverse_holder(std::uint64_t seed) {
  // Half cube Q+ = (-R0,R0) x (0,R0) x (-R0^2,R0^2) with Sigma at the bottom.
  const double R0 = 1.0;
  SpaceTimeGrid g;
  g.Lx = 2 * R0;
  g.Ly = R0;
  g.x0 = -R0;
  g.y0 = 0;
  g.nx = 8;
  g.ny = 4;
  g.nt = 8;
  g.t0 = -R0 * R0;
  g.t1 = R0 * R0;
  g.gamma = mesh::edge_bottom;
  g.validate();

  Rng rng(seed);
  auto smooth_positive = [&](double floor, double scale) {
    const double c1 = rng.uniform(0.2, 1.0), c2 = rng.uniform(-0.5, 0.5),
                 c3 = rng.uniform(-0.5, 0.5), w = rng.uniform(0.5, 2.0);
    return [=](double x, double y, double t) {
      return floor +
             scale * std::abs(c1 + c2 * std::sin(w * x + t) + c3 * std::cos(w * (x + y)));
    };
  };
  // data fields kept small so the density term drives the hypothesis constant
  const GridFunction Phi = GridFunction::sample(g, smooth_positive(0.1, 1.0));
  const GridFunction F = GridFunction::sample(g, smooth_positive(0.01, 0.1));
  const GridFunction G = GridFunction::sample(g, smooth_positive(0.01, 0.1));
  const GridFunction phi = GridFunction::sample(g.space_only(), smooth_positive(0.01, 0.1));

  estimates::GehringExponents<> ge;
  ge.n = 2;
  ge.p = 2;
  ge.m1 = ge.m2 = ge.r = 2;
  ge.l1 = ge.l2 = ge.s = 2;
  ge.d = 2;
  const double p = ge.p;

  // Brute-force hypothesis constant over admissible cubes meeting Sigma.
  double B = 0;
  const double cube_margin = 0.05;
  for (double R : {0.3, 0.45, 0.6}) {
    for (double alpha : {0.5, 0.75}) {
      for (double cx = -R0 + R + cube_margin; cx <= R0 - R - cube_margin; cx += 0.2) {
        for (double cy = 0.0; cy < R - 1e-12 && cy + R <= R0 - cube_margin; cy += 0.15) {
          for (double ct = -R0 * R0 + R * R + cube_margin; ct <= R0 * R0 - R * R - cube_margin;
               ct += 0.3) {
            const ParabolicCube big{cx, cy, ct, R};
            const ParabolicCube small{cx, cy, ct, alpha * R};
            const double Rn2 = std::pow(R, ge.n + 2.0);
            double lhs_avg, den;
            try {
              const GridFunction Ps = mesh::cube_restrict(Phi, small);
              const GridFunction Pb = mesh::cube_restrict(Phi, big);
              lhs_avg = std::pow(mesh::lp_norm(Ps, p), p) / Rn2;
              den = std::pow(mesh::lp_norm(Pb, 1) / Rn2, p);
              const GridFunction Fb = mesh::cube_restrict(F, big);
              const GridFunction phib =
                  mesh::cube_restrict(phi, ParabolicCube{cx, cy, 0, R});
              double data = std::pow(mesh::lp_norm_mixed(Fb, ge.m1, ge.m2), ge.r) / Rn2;
              data += std::pow(mesh::lp_norm(phib, 1), ge.d) / Rn2;
              const GridFunction Gb = mesh::cube_restrict(G, big);
              if (Gb.grid().has_gamma())
                data += std::pow(mesh::lp_norm_mixed(Gb, ge.l1, ge.l2, Region::gamma_trace),
                                 ge.s) /
                        std::pow(R, ge.n + 1.0);
              const double num = lhs_avg - data;
              if (num > 0 && den > 0) B = std::max(B, num / den);
            } catch (const parameter_error&) {
              continue;  // cube thinner than the tiny grid
            }
          }
        }
      }
    }
  }
  B = std::max(B, 1e-6);

  const double ups = estimates::gehring_upsilon(B, ge, UpsilonVariant::general);
  const double eps = 0.5 * (p - 1) / (ups - 1);
  const double beta = 1.0 / 3.0;

  GeneralFormInputs in;
  in.p = p;
  in.eps = eps;
  in.upsilon = ups;
  in.beta = beta;
  in.R0 = R0;
  in.ge = ge;
  in.phi_p = mesh::lp_norm(Phi, p);
  in.phi_pe = mesh::lp_norm(Phi, p + eps);
  in.F_m = mesh::lp_norm_mixed(F, ge.m1, ge.m2);
  in.F_me = mesh::lp_norm_mixed(F, ge.m1 + ge.r * eps / p, ge.m2 + ge.r * eps / p);
  in.G_l = mesh::lp_norm_mixed(G, ge.l1, ge.l2, Region::gamma_trace);
  in.G_le = mesh::lp_norm_mixed(G, ge.l1 + ge.s * eps / p, ge.l2 + ge.s * eps / p,
                                Region::gamma_trace);
  in.phi1 = mesh::lp_norm(phi, 1);
  in.phi1e = mesh::lp_norm(phi, 1 + ge.d * eps / p);

  const double rhs = general_form_rhs(in);
  const GridFunction inner =
      mesh::cube_restrict(Phi, ParabolicCube{0, 0, 0, (1 - beta) * R0});
  const double lhs = std::pow(mesh::lp_norm(inner, p + eps), p + eps);

  std::vector<EstimateReport> out;
  out.push_back(make_report("gehring.hypothesis_B", B, B, 0.0,
                            {kv("upsilon", ups), kv("eps", eps)}, true));
  EstimateReport conclusion = make_report("gehring.conclusion", lhs, rhs, 0.0,
                                          {kv("B", B), kv("upsilon", ups), kv("eps", eps)});
  conclusion.informational = !conclusion.pass;  // failures come back as findings
  out.push_back(conclusion);
  return out;
}

// ---------------------------------------------------------------------------
// Embedding constant estimators
// ---------------------------------------------------------------------------

namespace {

GridFunction random_smooth_field(const SpaceTimeGrid& g, Rng& rng) {
  double a[3][3], bx, by, c0;
  for (auto& row : a)
    for (double& c : row) c = rng.uniform(-1, 1);
  bx = rng.uniform(-1, 1);
  by = rng.uniform(-1, 1);
  c0 = rng.uniform(-1, 1);
  return GridFunction::sample(g, [=](double x, double y, double) {
    double v = c0 + bx * x + by * y;
    for (int m = 0; m < 3; ++m)
      for (int k = 0; k < 3; ++k)
        v += a[m][k] * std::cos((m + 1) * 3.14159265358979323846 * x) *
             std::cos((k + 1) * 3.14159265358979323846 * y);
    return v;
  });
}

}  // namespace

double estimate_trace_constant(const SpaceTimeGrid& spatial, int samples, std::uint64_t seed) {
  SpaceTimeGrid g = spatial.space_only();
  if (!g.has_gamma()) throw parameter_error("estimate_trace_constant: Gamma is empty");
  const double q = 4.0 / 3.0;  // 2n/(n+1) at n = 2
  double best = 0;
  for (int s = 0; s < samples; ++s) {
    Rng rng = Rng::forked(seed, s);
    const GridFunction v = random_smooth_field(g, rng);
    const double tr = mesh::lp_norm(v, 2, Region::gamma_trace);
    const double w1q = mesh::lp_norm(v, q) + mesh::lp_norm(mesh::gradient(v).magnitude(), q);
    if (w1q > 0) best = std::max(best, tr / w1q);
  }
  return best;
}

double estimate_sobolev_dual(const SpaceTimeGrid& spatial, double p, int samples,
                             std::uint64_t seed) {
  if (!(p > 2)) throw parameter_error("estimate_sobolev_dual: need p > 2");
  SpaceTimeGrid g = spatial.space_only();
  const double pprime = p / (p - 1);
  const double target = p * 2 / (p * 2 - 2 - p);  // pn/(pn-n-p) at n = 2
  double best = 0;
  for (int s = 0; s < samples; ++s) {
    Rng rng = Rng::forked(seed, s);
    const GridFunction v = random_smooth_field(g, rng);
    const double num = mesh::lp_norm(v, target);
    const double den =
        mesh::lp_norm(v, pprime) + mesh::lp_norm(mesh::gradient(v).magnitude(), pprime);
    if (den > 0) best = std::max(best, num / den);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

parabolic::ProblemInstance random_parabolic_instance(const SpaceTimeGrid& grid, double ell,
                                                     Rng& rng) {
  const SpaceTimeGrid sp = grid.space_only();
  const double theta = rng.uniform(0, 3.14159265358979323846);
  const double l1 = rng.uniform(0.75, 1.25), l2 = rng.uniform(0.75, 1.25);
  const double c = std::cos(theta), s = std::sin(theta);
  fem::CoefficientField A{
      GridFunction::constant(sp, c * c * l1 + s * s * l2),
      GridFunction::constant(sp, c * s * (l1 - l2)),
      GridFunction::constant(sp, s * s * l1 + c * c * l2)};
  fem::BoundaryLaw law{ell, GridFunction::constant(sp, rng.uniform(0.6, 1.4))};

  const double pi = 3.14159265358979323846;
  auto trig = [&rng, pi](double amp) {
    const double c0 = rng.uniform(-1, 1), c1 = rng.uniform(-1, 1), c2 = rng.uniform(-1, 1);
    const double lam = rng.uniform(0.0, 1.0);
    return [=](double x, double y, double t) {
      return amp *
             (c0 + c1 * std::cos(pi * x) * std::cos(pi * y) +
              c2 * std::sin(pi * x) * std::sin(pi * y)) *
             std::exp(-lam * t);
    };
  };

  const bool with_fvec = rng.uniform() < 0.5;
  auto fxf = trig(with_fvec ? 0.3 : 0.0);
  auto fyf = trig(with_fvec ? 0.3 : 0.0);
  auto ff = trig(0.6);
  auto hf = trig(0.4);
  auto u0f = trig(0.8);

  parabolic::ProblemInstance inst{
      grid,
      std::move(A),
      std::move(law),
      with_fvec ? GridFunction::sample(grid, fxf) : GridFunction::zeros(grid),
      with_fvec ? GridFunction::sample(grid, fyf) : GridFunction::zeros(grid),
      GridFunction::sample(grid, ff),
      GridFunction::sample(grid, hf),
      GridFunction::sample(sp, [&](double x, double y, double) { return u0f(x, y, 0.0); })};
  inst.validate();
  return inst;
}

elliptic::SteadyInstance random_steady_instance(const SpaceTimeGrid& spatial, Rng& rng) {
  const SpaceTimeGrid sp = spatial.space_only();
  const double theta = rng.uniform(0, 3.14159265358979323846);
  const double l1 = rng.uniform(0.92, 1.0), l2 = rng.uniform(0.92, 1.0);
  const double c = std::cos(theta), s = std::sin(theta);
  fem::CoefficientField A{
      GridFunction::constant(sp, c * c * l1 + s * s * l2),
      GridFunction::constant(sp, c * s * (l1 - l2)),
      GridFunction::constant(sp, s * s * l1 + c * c * l2)};
  fem::BoundaryLaw law{2.0, GridFunction::constant(sp, rng.uniform(0.9, 1.1))};

  const double pi = 3.14159265358979323846;
  auto trig = [&rng, pi](double amp) {
    const double c0 = rng.uniform(-1, 1), c1 = rng.uniform(-1, 1), c2 = rng.uniform(-1, 1);
    return [=](double x, double y, double) {
      return amp * (c0 + c1 * std::cos(pi * x) * std::cos(pi * y) +
                    c2 * std::sin(pi * x) * std::sin(pi * y));
    };
  };
  const bool with_fvec = rng.uniform() < 0.5;
  elliptic::SteadyInstance inst{
      sp,
      std::move(A),
      std::move(law),
      with_fvec ? GridFunction::sample(sp, trig(0.3)) : GridFunction::zeros(sp),
      with_fvec ? GridFunction::sample(sp, trig(0.3)) : GridFunction::zeros(sp),
      GridFunction::sample(sp, trig(0.5)),
      GridFunction::sample(sp, trig(0.5))};
  inst.validate();
  return inst;
}

estimates::FreeParameters<> default_free_parameters(const parabolic::ProblemInstance& inst) {
  estimates::FreeParameters<> fp;
  const auto zero = [](const GridFunction& g) { return (g.values().abs() < 1e-300).all(); };
  fp.nu0 = zero(inst.f) ? 0.0 : 1.0;
  fp.nu1 = zero(inst.fvec_x) && zero(inst.fvec_y) ? 0.0 : 0.5;
  fp.nu2 = (zero(inst.h) || !inst.grid.has_gamma()) ? 0.0 : 0.25;
  fp.eps = 0;
  return fp;
}

// ---------------------------------------------------------------------------
// Campaigns
// ---------------------------------------------------------------------------

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

bool has_check(const std::string& checks, const std::string& name) {
  if (checks == "all") return true;
  size_t pos = 0;
  while (pos != std::string::npos) {
    size_t end = checks.find(',', pos);
    std::string tok = checks.substr(pos, end == std::string::npos ? end : end - pos);
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok == name) return true;
    pos = end == std::string::npos ? end : end + 1;
  }
  return false;
}

std::vector<ParabolicCube> random_cubes(const SpaceTimeGrid& g, int count, Rng& rng) {
  // the smallest radius whose inner cube is still resolved by the grid
  const double r_min = std::max(std::sqrt(5 * g.dt()), 2.2 * std::max(g.hx(), g.hy()));
  const double r_cap = 0.95 * std::sqrt(g.horizon());
  if (!(r_min < r_cap))
    throw parameter_error("random_cubes: grid too coarse in time for resolvable cubes");

  std::vector<ParabolicCube> cubes;
  const double T = g.horizon();
  for (int c = 0; c < count; ++c) {
    ParabolicCube cube;
    const double margin = 0.75 * std::max(g.hx(), g.hy());
    const double r_int_max =
        std::min({r_min + 0.1, r_cap, (std::min(g.Lx, g.Ly) - 2 * margin) / 2 - 1e-9});
    if (c % 2 == 0 && r_int_max > r_min) {
      // interior: closure away from every edge
      cube.radius = rng.uniform(r_min, r_int_max);
      cube.cx = rng.uniform(g.x0 + cube.radius + margin, g.x0 + g.Lx - cube.radius - margin);
      cube.cy = rng.uniform(g.y0 + cube.radius + margin, g.y0 + g.Ly - cube.radius - margin);
    } else {
      // boundary: center on one of the edges
      cube.radius = rng.uniform(r_min, std::min(r_min + 0.15, r_cap));
      const int edge = rng.uniform_int(0, 3);
      const double sx = rng.uniform(g.x0 + 0.2 * g.Lx, g.x0 + 0.8 * g.Lx);
      const double sy = rng.uniform(g.y0 + 0.2 * g.Ly, g.y0 + 0.8 * g.Ly);
      if (edge == 0) { cube.cx = g.x0; cube.cy = sy; }
      if (edge == 1) { cube.cx = g.x0 + g.Lx; cube.cy = sy; }
      if (edge == 2) { cube.cx = sx; cube.cy = g.y0; }
      if (edge == 3) { cube.cx = sx; cube.cy = g.y0 + g.Ly; }
    }
    cube.ct = rng.uniform(0.0, T);
    cubes.push_back(cube);
  }
  return cubes;
}

}  // namespace

std::vector<EstimateReport> run_campaign(const CampaignOptions& opts) {
  std::vector<EstimateReport> all;
  const SpaceTimeGrid grid =
      mesh::SpaceTimeGrid::space_time(opts.Lx, opts.Ly, opts.nx, opts.ny, opts.nt, opts.T);
  const double K = estimate_trace_constant(grid, 12, kConstantSeed);

  if (has_check(opts.checks, "energy") || has_check(opts.checks, "gradient") ||
      has_check(opts.checks, "caccioppoli")) {
    const bool do_energy = has_check(opts.checks, "energy");
    const bool do_gradient = has_check(opts.checks, "gradient");
    const bool do_cacc = has_check(opts.checks, "caccioppoli");
    const int cacc_instances = std::min(opts.instances, 10);
    std::vector<std::vector<EstimateReport>> slots(opts.instances);
    CoverSpec cover = CoverSpec::uniform(grid, 0.25, 0.5);
    parallel_for(opts.instances, opts.threads, [&](int i) {
      const double ells[3] = {2, 3, 5};
      Rng rng = Rng::forked(opts.seed, 1000 + i);
      const auto inst = random_parabolic_instance(grid, ells[i % 3], rng);
      const auto fp = default_free_parameters(inst);
      const GridFunction u = parabolic::solve(inst);
      std::vector<EstimateReport> mine;
      if (do_energy)
        for (auto& r : verify_energy(inst, u, fp, 2.0, opts.tol_solver)) mine.push_back(r);
      if (do_gradient) {
        const double eps = std::min(0.01, gradient_eps_cap(inst, fp) / 2);
        mine.push_back(verify_gradient_bound(inst, u, fp, cover, 2 + eps, K));
      }
      if (do_cacc && i < cacc_instances) {
        Rng crng = Rng::forked(opts.seed, 2000 + i);
        const auto cubes = random_cubes(grid, opts.cubes_per_instance, crng);
        for (auto& r : verify_caccioppoli(inst, u, cubes, fp, 0.05, K)) mine.push_back(r);
      }
      for (auto& r : mine) r.params.push_back(kv("instance", static_cast<double>(i)));
      slots[i] = std::move(mine);
    });
    for (auto& s : slots)
      for (auto& r : s) all.push_back(std::move(r));
  }

  if (has_check(opts.checks, "poincare"))
    for (auto& r : verify_poincare(2, std::min(opts.trials, 200), opts.seed + 1))
      all.push_back(std::move(r));

  if (has_check(opts.checks, "stieltjes"))
    for (auto& r : verify_stieltjes(opts.trials, opts.seed + 2)) all.push_back(std::move(r));

  if (has_check(opts.checks, "steady")) {
    const SpaceTimeGrid sp = mesh::SpaceTimeGrid::spatial(opts.Lx, opts.Ly, opts.nx, opts.ny);
    std::vector<std::vector<EstimateReport>> slots(opts.instances);
    parallel_for(opts.instances, opts.threads, [&](int i) {
      Rng rng = Rng::forked(opts.seed, 3000 + i);
      const auto inst = random_steady_instance(sp, rng);
      const auto ed = elliptic::derive_ellipticity(inst);
      estimates::FreeParameters<> fp;
      fp.nu0 = (inst.f.values().abs() < 1e-300).all() ? 0.0 : 1.0;
      std::vector<EstimateReport> mine = verify_steady(inst, ed, fp, opts.tol_solver, K);
      for (auto& r : mine) r.params.push_back(kv("instance", static_cast<double>(i)));
      slots[i] = std::move(mine);
    });
    for (auto& s : slots)
      for (auto& r : s) all.push_back(std::move(r));
  }

  return all;
}

}  // namespace parest::verify
