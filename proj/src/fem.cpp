#include "parest/fem.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <limits>
#include <vector>

namespace parest::fem {

namespace {

// 2x2 Gauss rule on the unit square; exact through bicubic products.
struct GaussRule {
  Real xi[4], eta[4];
  GaussRule() {
    const Real a = 0.5 - 0.5 / std::sqrt(3.0), b = 0.5 + 0.5 / std::sqrt(3.0);
    const Real gx[2] = {a, b};
    for (int q = 0; q < 4; ++q) {
      xi[q] = gx[q % 2];
      eta[q] = gx[q / 2];
    }
  }
};
const GaussRule kGauss;

inline void shape(Real xi, Real eta, Real N[4]) {
  N[0] = (1 - xi) * (1 - eta);
  N[1] = xi * (1 - eta);
  N[2] = (1 - xi) * eta;
  N[3] = xi * eta;
}

inline void shape_grad(Real xi, Real eta, Real hx, Real hy, Real dNx[4], Real dNy[4]) {
  dNx[0] = -(1 - eta) / hx;
  dNx[1] = (1 - eta) / hx;
  dNx[2] = -eta / hx;
  dNx[3] = eta / hx;
  dNy[0] = -(1 - xi) / hy;
  dNy[1] = -xi / hy;
  dNy[2] = (1 - xi) / hy;
  dNy[3] = xi / hy;
}

}  // namespace

// ---------------------------------------------------------------------------
// CoefficientField
// ---------------------------------------------------------------------------

CoefficientField CoefficientField::constant(const SpaceTimeGrid& spatial, Real c11, Real c12,
                                            Real c22) {
  SpaceTimeGrid g = spatial.space_only();
  return {GridFunction::constant(g, c11), GridFunction::constant(g, c12),
          GridFunction::constant(g, c22)};
}

std::pair<Real, Real> CoefficientField::eigenvalue_range() const {
  Real lo = std::numeric_limits<Real>::infinity(), hi = -lo;
  for (long q = 0; q < a11.values().size(); ++q) {
    const Real m = (a11.values()[q] + a22.values()[q]) / 2;
    const Real d = (a11.values()[q] - a22.values()[q]) / 2;
    const Real rad = std::sqrt(d * d + a12.values()[q] * a12.values()[q]);
    lo = std::min(lo, m - rad);
    hi = std::max(hi, m + rad);
  }
  return {lo, hi};
}

void CoefficientField::validate(Real a_lo, Real a_hi) const {
  const auto [lo, hi] = eigenvalue_range();
  const Real tol = 1e-10 * std::max(Real(1), a_hi);
  if (lo < a_lo - tol || hi > a_hi + tol)
    throw parameter_error("coefficient field violates the declared eigenvalue bounds");
}

std::pair<Real, Real> BoundaryLaw::beta_range_on_gamma() const {
  const SpaceTimeGrid& g = beta.grid();
  Real lo = std::numeric_limits<Real>::infinity(), hi = -lo;
  for (int j = 0; j < g.nsy(); ++j)
    for (int i = 0; i < g.nsx(); ++i)
      if (g.on_gamma(i, j)) {
        lo = std::min(lo, beta(0, j, i));
        hi = std::max(hi, beta(0, j, i));
      }
  if (lo > hi) {
    lo = hi = 0;  // empty Gamma
  }
  return {lo, hi};
}

void BoundaryLaw::validate(Real b_lo, Real b_hi) const {
  if (!(ell >= 2)) throw parameter_error("boundary law: need ell >= 2");
  const auto [lo, hi] = beta_range_on_gamma();
  const Real tol = 1e-10 * std::max(Real(1), b_hi);
  if (lo < b_lo - tol || hi > b_hi + tol)
    throw parameter_error("boundary coefficient violates the declared bounds");
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

Assembly::Assembly(const SpaceTimeGrid& spatial) : grid_(spatial.space_only()) {
  n_ = grid_.nodes_per_level();
  const Real hx = grid_.hx(), hy = grid_.hy(), jac = hx * hy / 4;

  Real mloc[4][4] = {};
  for (int q = 0; q < 4; ++q) {
    Real N[4];
    shape(kGauss.xi[q], kGauss.eta[q], N);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) mloc[a][b] += jac * N[a] * N[b];
  }

  std::vector<Eigen::Triplet<Real>> trips;
  trips.reserve(static_cast<size_t>(grid_.nx) * grid_.ny * 16);
  for (int cj = 0; cj < grid_.ny; ++cj)
    for (int ci = 0; ci < grid_.nx; ++ci) {
      const int loc[4] = {node(ci, cj), node(ci + 1, cj), node(ci, cj + 1),
                          node(ci + 1, cj + 1)};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) trips.emplace_back(loc[a], loc[b], mloc[a][b]);
    }
  mass_.resize(n_, n_);
  mass_.setFromTriplets(trips.begin(), trips.end());
}

SpMat Assembly::stiffness(const CoefficientField& A) const {
  const Real hx = grid_.hx(), hy = grid_.hy(), jac = hx * hy / 4;
  std::vector<Eigen::Triplet<Real>> trips;
  trips.reserve(static_cast<size_t>(grid_.nx) * grid_.ny * 16);
  for (int cj = 0; cj < grid_.ny; ++cj)
    for (int ci = 0; ci < grid_.nx; ++ci) {
      const int loc[4] = {node(ci, cj), node(ci + 1, cj), node(ci, cj + 1),
                          node(ci + 1, cj + 1)};
      // Cell value of A: mean of the corner samples.
      Real c11 = 0, c12 = 0, c22 = 0;
      for (int a = 0; a < 4; ++a) {
        c11 += A.a11.values()[loc[a]] / 4;
        c12 += A.a12.values()[loc[a]] / 4;
        c22 += A.a22.values()[loc[a]] / 4;
      }
      Real kloc[4][4] = {};
      for (int q = 0; q < 4; ++q) {
        Real dNx[4], dNy[4];
        shape_grad(kGauss.xi[q], kGauss.eta[q], hx, hy, dNx, dNy);
        for (int a = 0; a < 4; ++a) {
          const Real fx = c11 * dNx[a] + c12 * dNy[a];
          const Real fy = c12 * dNx[a] + c22 * dNy[a];
          for (int b = 0; b < 4; ++b) kloc[a][b] += jac * (fx * dNx[b] + fy * dNy[b]);
        }
      }
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) trips.emplace_back(loc[a], loc[b], kloc[a][b]);
    }
  SpMat K(n_, n_);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

SpMat Assembly::stiffness_identity() const {
  return stiffness(CoefficientField::isotropic(grid_, 1.0));
}

Vec Assembly::boundary_weights(unsigned edges) const {
  Vec w = Vec::Zero(n_);
  auto trap = [](int i, int n, Real h) { return (i == 0 || i == n) ? h / 2 : h; };
  if (edges & mesh::edge_left)
    for (int j = 0; j <= grid_.ny; ++j) w[node(0, j)] += trap(j, grid_.ny, grid_.hy());
  if (edges & mesh::edge_right)
    for (int j = 0; j <= grid_.ny; ++j) w[node(grid_.nx, j)] += trap(j, grid_.ny, grid_.hy());
  if (edges & mesh::edge_bottom)
    for (int i = 0; i <= grid_.nx; ++i) w[node(i, 0)] += trap(i, grid_.nx, grid_.hx());
  if (edges & mesh::edge_top)
    for (int i = 0; i <= grid_.nx; ++i) w[node(i, grid_.ny)] += trap(i, grid_.nx, grid_.hx());
  return w;
}

Vec Assembly::load_volume(const Eigen::Ref<const Vec>& f, const Eigen::Ref<const Vec>& fx,
                          const Eigen::Ref<const Vec>& fy) const {
  const Real hx = grid_.hx(), hy = grid_.hy(), jac = hx * hy / 4;
  Vec out = Vec::Zero(n_);
  for (int cj = 0; cj < grid_.ny; ++cj)
    for (int ci = 0; ci < grid_.nx; ++ci) {
      const int loc[4] = {node(ci, cj), node(ci + 1, cj), node(ci, cj + 1),
                          node(ci + 1, cj + 1)};
      for (int q = 0; q < 4; ++q) {
        Real N[4], dNx[4], dNy[4];
        shape(kGauss.xi[q], kGauss.eta[q], N);
        shape_grad(kGauss.xi[q], kGauss.eta[q], hx, hy, dNx, dNy);
        Real fq = 0, fxq = 0, fyq = 0;
        for (int a = 0; a < 4; ++a) {
          fq += N[a] * f[loc[a]];
          fxq += N[a] * fx[loc[a]];
          fyq += N[a] * fy[loc[a]];
        }
        for (int a = 0; a < 4; ++a)
          out[loc[a]] += jac * (fq * N[a] + fxq * dNx[a] + fyq * dNy[a]);
      }
    }
  return out;
}

Vec Assembly::load_gamma(const Eigen::Ref<const Vec>& h) const {
  return gamma_weights().cwiseProduct(h);
}

Real Assembly::grad_p_norm(const Eigen::Ref<const Vec>& v, Real p) const {
  const Real hx = grid_.hx(), hy = grid_.hy(), jac = hx * hy / 4;
  Real acc = 0;
  for (int cj = 0; cj < grid_.ny; ++cj)
    for (int ci = 0; ci < grid_.nx; ++ci) {
      const int loc[4] = {node(ci, cj), node(ci + 1, cj), node(ci, cj + 1),
                          node(ci + 1, cj + 1)};
      for (int q = 0; q < 4; ++q) {
        Real dNx[4], dNy[4];
        shape_grad(kGauss.xi[q], kGauss.eta[q], hx, hy, dNx, dNy);
        Real gx = 0, gy = 0;
        for (int a = 0; a < 4; ++a) {
          gx += dNx[a] * v[loc[a]];
          gy += dNy[a] * v[loc[a]];
        }
        acc += jac * std::pow(gx * gx + gy * gy, p / 2);
      }
    }
  return std::pow(acc, 1 / p);
}

Real Assembly::gamma_l2(const Eigen::Ref<const Vec>& v) const {
  const Vec w = gamma_weights();
  return std::sqrt(v.cwiseProduct(v).dot(w));
}

Vec cg_solve(const SpMat& A, const Vec& rhs, const Vec& guess, Real rel_tol) {
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<Real>>
      cg;
  cg.setTolerance(rel_tol);
  cg.setMaxIterations(20 * A.rows() + 200);
  cg.compute(A);
  Vec x = cg.solveWithGuess(rhs, guess);
  if (cg.info() != Eigen::Success)
    throw solver_error("conjugate gradient solve did not converge", cg.error());
  return x;
}

}  // namespace parest::fem
