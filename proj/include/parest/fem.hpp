#pragma once

// Bilinear conforming elements on the uniform rectangle grid: consistent mass,
// coefficient stiffness by 2x2 Gauss quadrature (exact for bilinear data),
// edge-trapezoid boundary weights, and per-level load vectors.  Shared by the
// parabolic and steady solvers.

#include <Eigen/Core>
#include <Eigen/Sparse>

#include "parest/estimates.hpp"
#include "parest/meshfields.hpp"

namespace parest::fem {

using mesh::GridFunction;
using mesh::Real;
using mesh::SpaceTimeGrid;
using SpMat = Eigen::SparseMatrix<Real>;
using Vec = Eigen::VectorXd;

// Symmetric 2x2 coefficient field, node-sampled on the spatial grid.
struct CoefficientField {
  GridFunction a11, a12, a22;

  static CoefficientField constant(const SpaceTimeGrid& spatial, Real c11, Real c12,
                                   Real c22);
  static CoefficientField isotropic(const SpaceTimeGrid& spatial, Real a) {
    return constant(spatial, a, 0, a);
  }

  // Extremal eigenvalues over all node samples.
  std::pair<Real, Real> eigenvalue_range() const;
  void validate(Real a_lo, Real a_hi) const;
};

// Power-type boundary law b(x,s) s = beta(x) |s|^{ell-2} s with |s| regularized
// by sqrt(s^2 + eps_reg^2) so the Newton derivative stays bounded for ell < 3.
// At ell == 2 the regularization drops out exactly.
struct BoundaryLaw {
  Real ell = 2;
  GridFunction beta;  // stationary coefficient field, read on Gamma nodes

  static constexpr Real eps_reg = 1e-12;

  Real flux(Real b, Real s) const {
    if (ell == 2) return b * s;
    const Real m2 = s * s + eps_reg * eps_reg;
    return b * std::pow(m2, (ell - 2) / 2) * s;
  }
  Real dflux(Real b, Real s) const {
    if (ell == 2) return b;
    const Real m2 = s * s + eps_reg * eps_reg;
    return b * std::pow(m2, (ell - 4) / 2) * (m2 + (ell - 2) * s * s);
  }
  std::pair<Real, Real> beta_range_on_gamma() const;
  void validate(Real b_lo, Real b_hi) const;
};

struct SolverOptions {
  Real newton_tol = 1e-10;  // absolute 2-norm of the nonlinear residual
  int newton_max = 50;
  Real linear_tol = 1e-12;  // relative tolerance of the inner CG solve
  Real damping = 1.0;

  void validate() const {
    if (!(newton_tol > 0) || !(linear_tol > 0) || newton_max < 1 || !(damping > 0) ||
        damping > 1)
      throw parameter_error("solver options: tolerances must be positive, damping in (0,1]");
  }
};

// Assembled spatial operators for one grid footprint.
class Assembly {
 public:
  explicit Assembly(const SpaceTimeGrid& spatial);

  const SpaceTimeGrid& grid() const { return grid_; }
  int dofs() const { return n_; }

  const SpMat& mass() const { return mass_; }
  SpMat stiffness(const CoefficientField& A) const;
  SpMat stiffness_identity() const;

  // Edge-trapezoid weights of the boundary integral; zero off the chosen edges.
  Vec boundary_weights(unsigned edges) const;
  Vec gamma_weights() const { return boundary_weights(grid_.gamma); }

  // Load vector of  int (f v + fvec . grad v)  for one nodal slice.
  Vec load_volume(const Eigen::Ref<const Vec>& f, const Eigen::Ref<const Vec>& fx,
                  const Eigen::Ref<const Vec>& fy) const;
  // Load vector of  int_Gamma h v  (edge trapezoid).
  Vec load_gamma(const Eigen::Ref<const Vec>& h) const;

  // Discrete Sobolev norm ||grad v||_p (element gradients at Gauss points) plus
  // the L^2 trace on Gamma; the gradient part matches the stiffness quadrature.
  Real grad_p_norm(const Eigen::Ref<const Vec>& v, Real p) const;
  Real gamma_l2(const Eigen::Ref<const Vec>& v) const;
  Real sobolev_norm(const Eigen::Ref<const Vec>& v, Real p) const {
    return grad_p_norm(v, p) + gamma_l2(v);
  }

  int node(int i, int j) const { return j * grid_.nsx() + i; }

 private:
  SpaceTimeGrid grid_;
  int n_ = 0;
  SpMat mass_;
};

// Conjugate gradients with diagonal scaling; throws solver_error on breakdown.
Vec cg_solve(const SpMat& A, const Vec& rhs, const Vec& guess, Real rel_tol);

}  // namespace parest::fem
