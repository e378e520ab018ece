#pragma once

// Uniform rectangle space-time grids and nodal fields: Lp and mixed norms by
// composite trapezoid quadrature, boundary traces, finite-difference gradients,
// even time reflection, parabolic cubes, and nonincreasing step functions with
// their Stieltjes moments.

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "parest/errors.hpp"

namespace parest::mesh {

using Real = double;
using Array = Eigen::ArrayXd;

// Edges of the rectangle; a subset marks the part Gamma carrying the
// power-type boundary law.
enum Edge : unsigned { edge_left = 1u, edge_right = 2u, edge_bottom = 4u, edge_top = 8u };
constexpr unsigned all_edges = edge_left | edge_right | edge_bottom | edge_top;

struct SpaceTimeGrid {
  Real Lx = 1, Ly = 1;   // spatial extents
  int nx = 1, ny = 1;    // cells per spatial direction (nodes = n + 1)
  int nt = 0;            // time steps; 0 marks a stationary field
  Real t0 = 0, t1 = 0;   // time interval covered by the levels
  Real x0 = 0, y0 = 0;   // spatial origin (nonzero only for cube restrictions)
  unsigned gamma = all_edges;

  static SpaceTimeGrid space_time(Real Lx, Real Ly, int nx, int ny, int nt, Real T,
                                  unsigned gamma = all_edges);
  static SpaceTimeGrid spatial(Real Lx, Real Ly, int nx, int ny, unsigned gamma = all_edges);
  SpaceTimeGrid space_only() const;  // the spatial footprint (nt = 0)

  void validate() const;

  Real hx() const { return Lx / nx; }
  Real hy() const { return Ly / ny; }
  Real dt() const { return nt > 0 ? (t1 - t0) / nt : Real(0); }
  Real horizon() const { return t1 - t0; }
  int nsx() const { return nx + 1; }
  int nsy() const { return ny + 1; }
  int levels() const { return nt + 1; }
  int nodes_per_level() const { return nsx() * nsy(); }
  Real x(int i) const { return x0 + i * hx(); }
  Real y(int j) const { return y0 + j * hy(); }
  Real t(int k) const { return nt > 0 ? t0 + k * dt() : t0; }

  bool has_gamma() const { return gamma != 0; }
  // Node (i,j) lies on an edge marked as Gamma.
  bool on_gamma(int i, int j) const;
  bool same_layout(const SpaceTimeGrid& o) const;
};

// Nodal field on a SpaceTimeGrid.  Values are stored level-major
// (level, then y-row, then x) and are immutable in spirit: queries never write.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const SpaceTimeGrid& g, Array values);

  static GridFunction zeros(const SpaceTimeGrid& g);
  static GridFunction constant(const SpaceTimeGrid& g, Real c);
  // Sample a callable (x, y, t); for stationary grids t = t0 is passed.
  static GridFunction sample(const SpaceTimeGrid& g,
                             const std::function<Real(Real, Real, Real)>& f);

  const SpaceTimeGrid& grid() const { return grid_; }
  bool stationary() const { return grid_.nt == 0; }

  Real operator()(int k, int j, int i) const { return v_[idx(k, j, i)]; }
  Real& at(int k, int j, int i) { return v_[idx(k, j, i)]; }
  const Array& values() const { return v_; }
  Array& values() { return v_; }

  Eigen::Map<const Array> level(int k) const;
  GridFunction level_field(int k) const;  // one time slice as a stationary field

  GridFunction transformed(const std::function<Real(Real)>& f) const;
  void check_finite() const;

 private:
  int idx(int k, int j, int i) const {
    return (k * grid_.nsy() + j) * grid_.nsx() + i;
  }
  SpaceTimeGrid grid_;
  Array v_;
};

struct VectorField {
  GridFunction x, y;
  GridFunction magnitude() const;
};

enum class Region { interior, gamma_trace, full_boundary };

// Composite trapezoid Lp norm over the bulk, the trace on Gamma, or the whole
// boundary; space-time fields integrate in time as well.
Real lp_norm(const GridFunction& u, Real p, Region region = Region::interior);

// Mixed norm: spatial l1 norm per level, then temporal l2 norm of the slice
// values.  Requires a space-time field.
Real lp_norm_mixed(const GridFunction& u, Real l1, Real l2,
                   Region region = Region::interior);

// Max over time levels of the spatial p-norm (a lower bound for the continuum
// essential supremum in time).
Real ess_sup_lp(const GridFunction& u, Real p);

// Signed trapezoid integral of u over the region (space-time when u has levels).
Real integrate(const GridFunction& u, Region region = Region::interior);

// Centered differences in the interior, one-sided at the boundary, per level.
VectorField gradient(const GridFunction& u);

// Weighted spatial mean per level, U(t) = (int eta^2)^{-1} int eta^2 u dx.
// eta must be stationary with support disjoint from Gamma.
std::vector<Real> weighted_mean_U(const GridFunction& u, const GridFunction& eta);

// Even reflection at both time endpoints, extending [t0, t1] to
// [t0 - T, t1 + T] with T = t1 - t0.
GridFunction time_reflect(const GridFunction& u);

// Parabolic cube: spatial square of radius R times the time window of radius
// R^2 around the center.
struct ParabolicCube {
  Real cx = 0, cy = 0, ct = 0;
  Real radius = 0;
};

// Restriction of u to the cube clipped against the grid region.  A time window
// leaving [t0, t1] is served from the even reflection.  Throws on an empty or
// sub-cell intersection.
GridFunction cube_restrict(const GridFunction& u, const ParabolicCube& cube);

// Nonincreasing right-continuous step function on [1, inf) with compact
// support: value values[i] on [breakpoints[i], breakpoints[i+1]), first
// breakpoint 1, last value 0.
struct StieltjesFn {
  std::vector<Real> breakpoints;
  std::vector<Real> values;

  void validate() const;
  Real at(Real iota) const;                       // right-continuous value
  Real tail_moment_strict(Real iota, Real q) const;  // sum of jump * tau^q over tau > iota
};

// -int_lower^inf tau^gamma dh(tau): the exact atom sum over breakpoints >= lower.
Real stieltjes_integral(const StieltjesFn& h, Real gamma, Real lower);

// CSV exchange.  Header "nx,ny,nt,Lx,Ly,T", then one line of nx+1 values per
// y-row, rows ascending in y, levels ascending in t.  Values use %.17g.
void save_csv(const GridFunction& u, std::ostream& os);
void save_csv(const GridFunction& u, const std::string& path);
GridFunction load_csv(std::istream& is);
GridFunction load_csv(const std::string& path);

}  // namespace parest::mesh
