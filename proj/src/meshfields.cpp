#include "parest/meshfields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace parest::mesh {

namespace {

Real axis_weight(int i, int n, Real h) { return (i == 0 || i == n) ? h / 2 : h; }

void format_value(std::string& line, Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpaceTimeGrid
// ---------------------------------------------------------------------------

SpaceTimeGrid SpaceTimeGrid::space_time(Real Lx, Real Ly, int nx, int ny, int nt, Real T,
                                        unsigned gamma) {
  SpaceTimeGrid g;
  g.Lx = Lx;
  g.Ly = Ly;
  g.nx = nx;
  g.ny = ny;
  g.nt = nt;
  g.t0 = 0;
  g.t1 = T;
  g.gamma = gamma;
  g.validate();
  return g;
}

SpaceTimeGrid SpaceTimeGrid::spatial(Real Lx, Real Ly, int nx, int ny, unsigned gamma) {
  SpaceTimeGrid g;
  g.Lx = Lx;
  g.Ly = Ly;
  g.nx = nx;
  g.ny = ny;
  g.gamma = gamma;
  g.validate();
  return g;
}

SpaceTimeGrid SpaceTimeGrid::space_only() const {
  SpaceTimeGrid g = *this;
  g.nt = 0;
  g.t1 = g.t0;
  return g;
}

void SpaceTimeGrid::validate() const {
  if (nx < 1 || ny < 1 || !(Lx > 0) || !(Ly > 0))
    throw parameter_error("grid: need positive spatial extents and at least one cell");
  if (nt < 0) throw parameter_error("grid: negative step count");
  if (nt > 0 && !(t1 > t0)) throw parameter_error("grid: need t1 > t0 for space-time grids");
}

bool SpaceTimeGrid::on_gamma(int i, int j) const {
  if ((gamma & edge_left) && i == 0) return true;
  if ((gamma & edge_right) && i == nx) return true;
  if ((gamma & edge_bottom) && j == 0) return true;
  if ((gamma & edge_top) && j == ny) return true;
  return false;
}

bool SpaceTimeGrid::same_layout(const SpaceTimeGrid& o) const {
  return nx == o.nx && ny == o.ny && nt == o.nt;
}

// ---------------------------------------------------------------------------
// GridFunction
// ---------------------------------------------------------------------------

GridFunction::GridFunction(const SpaceTimeGrid& g, Array values) : grid_(g), v_(std::move(values)) {
  grid_.validate();
  if (v_.size() != static_cast<long>(grid_.levels()) * grid_.nodes_per_level())
    throw parameter_error("grid function: value array does not match the grid");
}

GridFunction GridFunction::zeros(const SpaceTimeGrid& g) {
  return GridFunction(g, Array::Zero(static_cast<long>(g.levels()) * g.nodes_per_level()));
}

GridFunction GridFunction::constant(const SpaceTimeGrid& g, Real c) {
  return GridFunction(g, Array::Constant(static_cast<long>(g.levels()) * g.nodes_per_level(), c));
}

GridFunction GridFunction::sample(const SpaceTimeGrid& g,
                                  const std::function<Real(Real, Real, Real)>& f) {
  GridFunction u = zeros(g);
  for (int k = 0; k < g.levels(); ++k)
    for (int j = 0; j < g.nsy(); ++j)
      for (int i = 0; i < g.nsx(); ++i) u.at(k, j, i) = f(g.x(i), g.y(j), g.t(k));
  return u;
}

Eigen::Map<const Array> GridFunction::level(int k) const {
  const int n = grid_.nodes_per_level();
  return Eigen::Map<const Array>(v_.data() + static_cast<long>(k) * n, n);
}

GridFunction GridFunction::level_field(int k) const {
  SpaceTimeGrid g = grid_.space_only();
  g.t0 = g.t1 = grid_.t(k);
  return GridFunction(g, level(k));
}

GridFunction GridFunction::transformed(const std::function<Real(Real)>& f) const {
  GridFunction out = *this;
  for (long i = 0; i < out.v_.size(); ++i) out.v_[i] = f(out.v_[i]);
  return out;
}

void GridFunction::check_finite() const {
  if (!v_.isFinite().all()) throw parameter_error("grid function: non-finite values");
}

GridFunction VectorField::magnitude() const {
  GridFunction out = x;
  out.values() = (x.values().square() + y.values().square()).sqrt();
  return out;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

namespace {

// Sum of w(i,j) |u_k(i,j)|^p over the requested region of one level.
Real level_power_sum(const GridFunction& u, int k, Real p, Region region) {
  const SpaceTimeGrid& g = u.grid();
  Real acc = 0;
  switch (region) {
    case Region::interior: {
      for (int j = 0; j < g.nsy(); ++j) {
        const Real wy = axis_weight(j, g.ny, g.hy());
        for (int i = 0; i < g.nsx(); ++i)
          acc += wy * axis_weight(i, g.nx, g.hx()) * std::pow(std::abs(u(k, j, i)), p);
      }
      return acc;
    }
    case Region::gamma_trace:
    case Region::full_boundary: {
      const unsigned edges = region == Region::gamma_trace ? g.gamma : all_edges;
      if (edges & edge_left)
        for (int j = 0; j < g.nsy(); ++j)
          acc += axis_weight(j, g.ny, g.hy()) * std::pow(std::abs(u(k, j, 0)), p);
      if (edges & edge_right)
        for (int j = 0; j < g.nsy(); ++j)
          acc += axis_weight(j, g.ny, g.hy()) * std::pow(std::abs(u(k, j, g.nx)), p);
      if (edges & edge_bottom)
        for (int i = 0; i < g.nsx(); ++i)
          acc += axis_weight(i, g.nx, g.hx()) * std::pow(std::abs(u(k, 0, i)), p);
      if (edges & edge_top)
        for (int i = 0; i < g.nsx(); ++i)
          acc += axis_weight(i, g.nx, g.hx()) * std::pow(std::abs(u(k, g.ny, i)), p);
      return acc;
    }
  }
  return acc;
}

void check_norm_args(const GridFunction& u, Real p, Region region) {
  if (!(p >= 1)) throw parameter_error("lp_norm: need p >= 1");
  if (region == Region::gamma_trace && !u.grid().has_gamma())
    throw parameter_error("lp_norm: trace requested but Gamma is empty");
}

}  // namespace

Real lp_norm(const GridFunction& u, Real p, Region region) {
  check_norm_args(u, p, region);
  const SpaceTimeGrid& g = u.grid();
  if (u.stationary()) return std::pow(level_power_sum(u, 0, p, region), 1 / p);
  Real acc = 0;
  for (int k = 0; k < g.levels(); ++k)
    acc += axis_weight(k, g.nt, g.dt()) * level_power_sum(u, k, p, region);
  return std::pow(acc, 1 / p);
}

Real lp_norm_mixed(const GridFunction& u, Real l1, Real l2, Region region) {
  check_norm_args(u, l1, region);
  if (!(l2 >= 1)) throw parameter_error("lp_norm_mixed: need l2 >= 1");
  if (u.stationary()) throw parameter_error("lp_norm_mixed: requires a space-time field");
  const SpaceTimeGrid& g = u.grid();
  Real acc = 0;
  for (int k = 0; k < g.levels(); ++k) {
    const Real slice = std::pow(level_power_sum(u, k, l1, region), 1 / l1);
    acc += axis_weight(k, g.nt, g.dt()) * std::pow(slice, l2);
  }
  return std::pow(acc, 1 / l2);
}

Real ess_sup_lp(const GridFunction& u, Real p) {
  if (!(p >= 1)) throw parameter_error("ess_sup_lp: need p >= 1");
  Real best = 0;
  for (int k = 0; k < u.grid().levels(); ++k)
    best = std::max(best, std::pow(level_power_sum(u, k, p, Region::interior), 1 / p));
  return best;
}

namespace {

Real level_signed_sum(const GridFunction& u, int k, Region region) {
  const SpaceTimeGrid& g = u.grid();
  Real acc = 0;
  if (region == Region::interior) {
    for (int j = 0; j < g.nsy(); ++j) {
      const Real wy = axis_weight(j, g.ny, g.hy());
      for (int i = 0; i < g.nsx(); ++i)
        acc += wy * axis_weight(i, g.nx, g.hx()) * u(k, j, i);
    }
    return acc;
  }
  const unsigned edges = region == Region::gamma_trace ? g.gamma : all_edges;
  if (edges & edge_left)
    for (int j = 0; j < g.nsy(); ++j) acc += axis_weight(j, g.ny, g.hy()) * u(k, j, 0);
  if (edges & edge_right)
    for (int j = 0; j < g.nsy(); ++j) acc += axis_weight(j, g.ny, g.hy()) * u(k, j, g.nx);
  if (edges & edge_bottom)
    for (int i = 0; i < g.nsx(); ++i) acc += axis_weight(i, g.nx, g.hx()) * u(k, 0, i);
  if (edges & edge_top)
    for (int i = 0; i < g.nsx(); ++i) acc += axis_weight(i, g.nx, g.hx()) * u(k, g.ny, i);
  return acc;
}

}  // namespace

Real integrate(const GridFunction& u, Region region) {
  if (region == Region::gamma_trace && !u.grid().has_gamma())
    throw parameter_error("integrate: trace requested but Gamma is empty");
  if (u.stationary()) return level_signed_sum(u, 0, region);
  Real acc = 0;
  for (int k = 0; k < u.grid().levels(); ++k)
    acc += axis_weight(k, u.grid().nt, u.grid().dt()) * level_signed_sum(u, k, region);
  return acc;
}

// ---------------------------------------------------------------------------
// Gradient
// ---------------------------------------------------------------------------

VectorField gradient(const GridFunction& u) {
  const SpaceTimeGrid& g = u.grid();
  VectorField out{GridFunction::zeros(g), GridFunction::zeros(g)};
  const Real hx = g.hx(), hy = g.hy();
  for (int k = 0; k < g.levels(); ++k)
    for (int j = 0; j < g.nsy(); ++j)
      for (int i = 0; i < g.nsx(); ++i) {
        Real dx, dy;
        if (i == 0)
          dx = (u(k, j, 1) - u(k, j, 0)) / hx;
        else if (i == g.nx)
          dx = (u(k, j, g.nx) - u(k, j, g.nx - 1)) / hx;
        else
          dx = (u(k, j, i + 1) - u(k, j, i - 1)) / (2 * hx);
        if (j == 0)
          dy = (u(k, 1, i) - u(k, 0, i)) / hy;
        else if (j == g.ny)
          dy = (u(k, g.ny, i) - u(k, g.ny - 1, i)) / hy;
        else
          dy = (u(k, j + 1, i) - u(k, j - 1, i)) / (2 * hy);
        out.x.at(k, j, i) = dx;
        out.y.at(k, j, i) = dy;
      }
  return out;
}

// ---------------------------------------------------------------------------
// Weighted mean
// ---------------------------------------------------------------------------

std::vector<Real> weighted_mean_U(const GridFunction& u, const GridFunction& eta) {
  const SpaceTimeGrid& g = u.grid();
  if (!eta.stationary() || eta.grid().nx != g.nx || eta.grid().ny != g.ny)
    throw parameter_error("weighted_mean_U: eta must be a stationary field on the same footprint");
  const SpaceTimeGrid& ge = eta.grid();
  for (int j = 0; j < ge.nsy(); ++j)
    for (int i = 0; i < ge.nsx(); ++i)
      if (eta(0, j, i) != 0 && ge.on_gamma(i, j))
        throw parameter_error("weighted_mean_U: support of eta touches Gamma (use U = 0)");

  Real mass = 0;
  for (int j = 0; j < ge.nsy(); ++j)
    for (int i = 0; i < ge.nsx(); ++i)
      mass += axis_weight(j, ge.ny, ge.hy()) * axis_weight(i, ge.nx, ge.hx()) *
              eta(0, j, i) * eta(0, j, i);
  if (!(mass > 0)) throw parameter_error("weighted_mean_U: eta^2 has zero mass");

  std::vector<Real> out(u.grid().levels());
  for (int k = 0; k < u.grid().levels(); ++k) {
    Real acc = 0;
    for (int j = 0; j < ge.nsy(); ++j)
      for (int i = 0; i < ge.nsx(); ++i)
        acc += axis_weight(j, ge.ny, ge.hy()) * axis_weight(i, ge.nx, ge.hx()) *
               eta(0, j, i) * eta(0, j, i) * u(k, j, i);
    out[k] = acc / mass;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Time reflection
// ---------------------------------------------------------------------------

GridFunction time_reflect(const GridFunction& u) {
  if (u.stationary()) throw parameter_error("time_reflect: requires a space-time field");
  const SpaceTimeGrid& g = u.grid();
  SpaceTimeGrid rg = g;
  rg.nt = 3 * g.nt;
  rg.t0 = g.t0 - g.horizon();
  rg.t1 = g.t1 + g.horizon();
  GridFunction out = GridFunction::zeros(rg);
  const int n = g.nodes_per_level();
  for (int k = 0; k <= rg.nt; ++k) {
    int src;
    if (k <= g.nt)
      src = g.nt - k;
    else if (k <= 2 * g.nt)
      src = k - g.nt;
    else
      src = 3 * g.nt - k;
    out.values().segment(static_cast<long>(k) * n, n) = u.level(src);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cube restriction
// ---------------------------------------------------------------------------

GridFunction cube_restrict(const GridFunction& u, const ParabolicCube& cube) {
  if (!(cube.radius > 0)) throw parameter_error("cube_restrict: need a positive radius");
  const SpaceTimeGrid& g = u.grid();
  const Real R = cube.radius;

  if (!u.stationary()) {
    const Real w0 = cube.ct - R * R, w1 = cube.ct + R * R;
    if (w0 < g.t0 - 1e-12 || w1 > g.t1 + 1e-12) {
      if (w0 < g.t0 - g.horizon() || w1 > g.t1 + g.horizon())
        throw parameter_error("cube_restrict: time window exceeds even the reflected range");
      return cube_restrict(time_reflect(u), cube);
    }
  }

  const Real tol = 1e-10;
  auto clip = [&](Real lo, Real hi, Real origin, Real h, int ncells, int& i0, int& i1) {
    i0 = static_cast<int>(std::ceil((lo - origin) / h - tol));
    i1 = static_cast<int>(std::floor((hi - origin) / h + tol));
    i0 = std::max(i0, 0);
    i1 = std::min(i1, ncells);
  };

  int i0, i1, j0, j1;
  clip(cube.cx - R, cube.cx + R, g.x0, g.hx(), g.nx, i0, i1);
  clip(cube.cy - R, cube.cy + R, g.y0, g.hy(), g.ny, j0, j1);
  if (i0 > i1 || j0 > j1) throw parameter_error("cube_restrict: empty intersection");
  if (i1 - i0 < 1 || j1 - j0 < 1)
    throw parameter_error("cube_restrict: intersection thinner than one cell");

  int k0 = 0, k1 = 0;
  if (!u.stationary()) {
    clip(cube.ct - R * R, cube.ct + R * R, g.t0, g.dt(), g.nt, k0, k1);
    if (k0 > k1) throw parameter_error("cube_restrict: empty time window");
    if (k1 - k0 < 1) throw parameter_error("cube_restrict: time window thinner than one step");
  }

  SpaceTimeGrid sg;
  sg.nx = i1 - i0;
  sg.ny = j1 - j0;
  sg.Lx = sg.nx * g.hx();
  sg.Ly = sg.ny * g.hy();
  sg.x0 = g.x(i0);
  sg.y0 = g.y(j0);
  sg.nt = u.stationary() ? 0 : k1 - k0;
  sg.t0 = u.stationary() ? g.t0 : g.t(k0);
  sg.t1 = u.stationary() ? g.t0 : g.t(k1);

  // An edge of the restricted box is part of Gamma only where it coincides
  // with a Gamma edge of the parent rectangle.
  sg.gamma = 0;
  if ((g.gamma & edge_left) && i0 == 0) sg.gamma |= edge_left;
  if ((g.gamma & edge_right) && i1 == g.nx) sg.gamma |= edge_right;
  if ((g.gamma & edge_bottom) && j0 == 0) sg.gamma |= edge_bottom;
  if ((g.gamma & edge_top) && j1 == g.ny) sg.gamma |= edge_top;

  GridFunction out = GridFunction::zeros(sg);
  for (int k = 0; k <= sg.nt; ++k)
    for (int j = 0; j <= sg.ny; ++j)
      for (int i = 0; i <= sg.nx; ++i) out.at(k, j, i) = u(k0 + k, j0 + j, i0 + i);
  return out;
}

// ---------------------------------------------------------------------------
// Stieltjes step functions
// ---------------------------------------------------------------------------

void StieltjesFn::validate() const {
  if (breakpoints.empty() || breakpoints.size() != values.size())
    throw parameter_error("stieltjes: breakpoints and values must be nonempty and match");
  if (breakpoints.front() != 1)
    throw parameter_error("stieltjes: the first breakpoint must be 1");
  for (size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw parameter_error("stieltjes: breakpoints must increase");
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0)) throw parameter_error("stieltjes: values must be >= 0");
    if (i > 0 && values[i] > values[i - 1] + 1e-15)
      throw parameter_error("stieltjes: values must be nonincreasing");
  }
  if (values.back() != 0) throw parameter_error("stieltjes: the last value must be 0");
}

Real StieltjesFn::at(Real iota) const {
  if (iota < breakpoints.front()) return values.front();
  size_t i = std::upper_bound(breakpoints.begin(), breakpoints.end(), iota) -
             breakpoints.begin();
  return values[i - 1];
}

Real StieltjesFn::tail_moment_strict(Real iota, Real q) const {
  Real acc = 0;
  for (size_t i = 1; i < breakpoints.size(); ++i)
    if (breakpoints[i] > iota) acc += (values[i - 1] - values[i]) * std::pow(breakpoints[i], q);
  return acc;
}

Real stieltjes_integral(const StieltjesFn& h, Real gamma, Real lower) {
  h.validate();
  if (!(lower >= 1)) throw parameter_error("stieltjes_integral: need lower >= 1");
  Real acc = 0;
  for (size_t i = 1; i < h.breakpoints.size(); ++i)
    if (h.breakpoints[i] >= lower)
      acc += (h.values[i - 1] - h.values[i]) * std::pow(h.breakpoints[i], gamma);
  return acc;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void save_csv(const GridFunction& u, std::ostream& os) {
  const SpaceTimeGrid& g = u.grid();
  std::string line;
  line = "nx,ny,nt,Lx,Ly,T\n";
  os << line;
  line.clear();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g,%.17g\n", g.nx, g.ny, g.nt, g.Lx,
                g.Ly, g.horizon());
  os << buf;
  for (int k = 0; k < g.levels(); ++k)
    for (int j = 0; j < g.nsy(); ++j) {
      line.clear();
      for (int i = 0; i < g.nsx(); ++i) {
        if (i) line += ',';
        format_value(line, u(k, j, i));
      }
      line += '\n';
      os << line;
    }
}

void save_csv(const GridFunction& u, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw parameter_error("save_csv: cannot open " + path);
  save_csv(u, os);
}

GridFunction load_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("nx,ny,nt", 0) != 0)
    throw parse_error("load_csv: missing header");
  std::string dims;
  if (!std::getline(is, dims)) throw parse_error("load_csv: missing dimensions");
  SpaceTimeGrid g;
  Real T = 0;
  {
    std::istringstream ss(dims);
    char c;
    if (!(ss >> g.nx >> c >> g.ny >> c >> g.nt >> c >> g.Lx >> c >> g.Ly >> c >> T))
      throw parse_error("load_csv: malformed dimension line");
  }
  g.t0 = 0;
  g.t1 = g.nt > 0 ? T : 0;
  g.validate();
  GridFunction u = GridFunction::zeros(g);
  std::string line;
  for (int k = 0; k < g.levels(); ++k)
    for (int j = 0; j < g.nsy(); ++j) {
      if (!std::getline(is, line)) throw parse_error("load_csv: truncated value block");
      std::istringstream ss(line);
      for (int i = 0; i < g.nsx(); ++i) {
        char c;
        if (i && !(ss >> c)) throw parse_error("load_csv: malformed value line");
        if (!(ss >> u.at(k, j, i))) throw parse_error("load_csv: malformed value line");
      }
    }
  return u;
}

GridFunction load_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw parameter_error("load_csv: cannot open " + path);
  return load_csv(is);
}

}  // namespace parest::mesh
