#pragma once

// Flat key-value config files with [section] headers.  Coefficients and data
// are expression strings over x, y, t.  Unknown keys are rejected.

#include <cstdint>
#include <string>

#include "parest/elliptic.hpp"
#include "parest/estimates.hpp"
#include "parest/fem.hpp"
#include "parest/parabolic.hpp"

namespace parest::config {

struct RunConfig {
  // [domain]
  double Lx = 1, Ly = 1, T = 1;
  unsigned gamma = mesh::all_edges;

  // [grid]
  int nx = 16, ny = 16, nt = 32;

  // [coefficients]   expressions over x, y
  std::string a11 = "1", a12 = "0", a22 = "1";
  double ell = 2;
  std::string beta_b = "1";

  // [data]           expressions over x, y, t
  std::string f = "0", fx = "0", fy = "0", h = "0", u0 = "0";

  // [parameters]     negative marks "auto"
  double nu0 = -1, nu1 = -1, nu2 = -1, eps = -1;
  double delta = 1, beta = 0.5, cover_r = 0.25, cn = 3;
  int cover_N = 5;
  double p = 2;
  std::string variant = "standard";  // standard | b_zero

  // [solver]
  fem::SolverOptions solver;
  std::string steady_method = "monotone";  // monotone | contraction

  // [verify]
  std::string checks = "all";  // comma list of energy,caccioppoli,poincare,stieltjes,gradient,steady
  int instances = 20, cubes_per_instance = 10, trials = 1000;
  int verify_nx = 17, verify_ny = 17, verify_nt = 48;
  double tol_solver = 0.02, tol_exact = 1e-9;
  int threads = 0;  // 0 = hardware concurrency

  // [sweep]
  std::string sweep_kind;  // nu0 | mesh | epscap
  double sweep_from = 0, sweep_to = 0;
  int sweep_points = 0;

  // [run]
  std::uint64_t seed = 1;
  std::string out_dir = ".";

  static RunConfig load(const std::string& path);       // throws parse_error
  static RunConfig parse(const std::string& contents);  // throws parse_error
};

// Instance builders evaluate the config expressions on the configured grid and
// check the structural invariants.
parabolic::ProblemInstance build_parabolic_instance(const RunConfig& cfg);
elliptic::SteadyInstance build_steady_instance(const RunConfig& cfg);

// Free parameters with the auto rules applied: a nu weight is zero exactly when
// its datum vanishes on the grid, otherwise the default (nu0 = 1, nu1 = 1/2,
// nu2 = 1/4) or the configured value.
estimates::FreeParameters<> build_free_parameters(const RunConfig& cfg,
                                                  bool f_zero, bool fvec_zero, bool h_zero);

estimates::BoundVariant bound_variant(const RunConfig& cfg);

// True when the sampled field vanishes identically on the grid (drives the
// "nu is zero exactly for a vanishing datum" rule).
bool field_is_zero(const mesh::GridFunction& u);

}  // namespace parest::config
