// Command-line front end: constants tabulation, parabolic / steady solves,
// verification campaigns, and parameter sweeps.  Exit codes: 0 success,
// 1 usage or parse error, 2 infeasible parameters, 3 solver failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "parest/config.hpp"
#include "parest/elliptic.hpp"
#include "parest/estimates.hpp"
#include "parest/expr.hpp"
#include "parest/parabolic.hpp"
#include "parest/report_io.hpp"
#include "parest/verify.hpp"

namespace {

using namespace parest;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ConstantsTable {
  std::vector<std::array<std::string, 3>> rows;
  void add(const std::string& name, double value, const std::string& group) {
    rows.push_back({name, fmt(value), group});
  }
  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw parameter_error("cannot open " + path);
    os << "# constants v1\nname,value,group\n";
    for (const auto& r : rows) os << r[0] << ',' << r[1] << ',' << r[2] << "\n";
  }
};

int cmd_constants(const config::RunConfig& cfg) {
  const auto inst = config::build_parabolic_instance(cfg);
  const auto ed = parabolic::derive_ellipticity(inst);
  const auto fp = config::build_free_parameters(cfg, config::field_is_zero(inst.f),
                                                config::field_is_zero(inst.fvec_x) &&
                                                    config::field_is_zero(inst.fvec_y),
                                                config::field_is_zero(inst.h));
  const auto variant = config::bound_variant(cfg);
  const double p = cfg.p;

  ConstantsTable t;
  t.add("poincare_sobolev_n2", estimates::poincare_sobolev_constant<double>(2), "sobolev");
  t.add("poincare_sobolev_n3", estimates::poincare_sobolev_constant<double>(3), "sobolev");

  const double K = verify::estimate_trace_constant(inst.grid, 8, cfg.seed);
  t.add("trace_constant_lower_bound", K, "embedding");

  const double B_int =
      estimates::gehring_B(ed, fp.nu0, 2, estimates::CubeVariant::interior);
  const double B_bdy =
      estimates::gehring_B(ed, fp.nu0, 2, estimates::CubeVariant::boundary);
  t.add("reverse_holder_B_interior", B_int, "reverse_holder");
  t.add("reverse_holder_B_boundary", B_bdy, "reverse_holder");

  estimates::GehringExponents<> ge;  // p = (n+2)/n at n = 2, all data exponents 2
  const double ups_int =
      estimates::gehring_upsilon(B_int, ge, estimates::UpsilonVariant::interior_no_phi);
  const double ups_bdy =
      estimates::gehring_upsilon(B_bdy, ge, estimates::UpsilonVariant::no_phi);
  t.add("upsilon_interior", ups_int, "reverse_holder");
  t.add("upsilon_boundary", ups_bdy, "reverse_holder");
  t.add("eps_cap_gradient", 4.0 / (4.0 * (ups_bdy - 1)), "reverse_holder");
  t.add("covering_constant", estimates::covering_constant(2, fp, fp.eps, ups_bdy), "covering");

  const auto dn = verify::instance_data_norms(inst, p, variant, K, 1.0);
  const auto bounds = estimates::apriori_bounds(p, ed, fp, dn, inst.grid.horizon(), variant, 2);
  t.add("energy_sup_bound_G", bounds.G, "energy");
  t.add("energy_bound_E", bounds.E, "energy");
  t.add("gradient_bound_M", bounds.M, "energy");
  t.add("growth_rate_kappa", bounds.kappa, "energy");
  if (dn.f_p > 0)
    t.add("nu0_optimal",
          estimates::optimize_nu0(p, ed, dn, inst.grid.horizon(), variant, 2), "energy");

  t.add("marcinkiewicz_q1_p2_r3", estimates::marcinkiewicz_constant(2.0, 1.0, 3.0, 1.0, 1.0),
        "interpolation");
  t.add("marcinkiewicz_alpha", estimates::marcinkiewicz_alpha(2.0, 1.0, 3.0), "interpolation");

  t.add("steady_upsilon", estimates::steady_upsilon(ed, fp.nu0, 2), "steady");
  const double Mp = elliptic::estimate_Mp(inst.grid, 2.0, 8, cfg.seed);
  t.add("Mp_estimate_p2", Mp, "steady");
  try {
    const auto cd = estimates::contraction_data(ed, Mp, std::max(p, 2.0), 2);
    t.add("contraction_t", cd.t, "contraction");
    t.add("contraction_kappa", cd.kappa_c, "contraction");
    t.add("contraction_q_factor", cd.q_factor, "contraction");
    t.add("contraction_el2_mult", cd.el2_mult, "contraction");
    if (cd.necas_c) t.add("necas_c", *cd.necas_c, "contraction");
    t.add("contraction_feasible", 1, "contraction");
  } catch (const infeasible_error&) {
    t.add("contraction_feasible", 0, "contraction");
  }

  if (std::abs(ed.ell - 2.0) < 1e-12) {
    try {
      const auto lb = estimates::linear_w1p(p, ed, inst.grid.horizon(), dn, fp, 2);
      t.add("lambda_p", lb.Lambda_p, "linearized");
      t.add("linearized_grad_bound", lb.grad_bound, "linearized");
      t.add("linearized_trace_bound", lb.trace_bound, "linearized");
    } catch (const infeasible_error&) {
      t.add("lambda_p_feasible", 0, "linearized");
    }
  }

  t.write(cfg.out_dir + "/constants.csv");
  std::cout << "wrote " << cfg.out_dir << "/constants.csv (" << t.rows.size() << " rows)\n";
  return 0;
}

int cmd_solve(const config::RunConfig& cfg) {
  const auto inst = config::build_parabolic_instance(cfg);
  parabolic::SolveStats stats;
  const auto u = parabolic::solve(inst, cfg.solver, &stats);
  mesh::save_csv(u, cfg.out_dir + "/solution.csv");
  const double res = parabolic::weak_residual(inst, u);
  std::ofstream os(cfg.out_dir + "/solve_summary.csv", std::ios::binary);
  os << "# solve-summary v1\nkey,value\n";
  os << "weak_residual," << fmt(res) << "\n";
  os << "max_newton_iterations," << stats.max_newton_iterations << "\n";
  os << "max_step_residual," << fmt(stats.max_step_residual) << "\n";
  std::cout << "wrote " << cfg.out_dir << "/solution.csv (weak residual " << fmt(res) << ")\n";
  return 0;
}

int cmd_solve_steady(const config::RunConfig& cfg) {
  const auto inst = config::build_steady_instance(cfg);
  mesh::GridFunction u;
  std::ofstream os(cfg.out_dir + "/solve_steady_summary.csv", std::ios::binary);
  os << "# solve-summary v1\nkey,value\n";
  if (cfg.steady_method == "contraction") {
    const auto ed = elliptic::derive_ellipticity(inst);
    const auto res = elliptic::solve_contraction(inst, ed, cfg.solver);
    u = res.u;
    os << "iterations," << res.trace.iterations << "\n";
    os << "q_factor," << fmt(res.trace.q_factor) << "\n";
    os << "tail_ratio," << fmt(res.trace.tail_ratio()) << "\n";
  } else if (cfg.steady_method == "monotone") {
    int its = 0;
    u = elliptic::solve_monotone(inst, cfg.solver, &its);
    os << "newton_iterations," << its << "\n";
  } else {
    throw parse_error("unknown steady_method '" + cfg.steady_method + "'");
  }
  mesh::save_csv(u, cfg.out_dir + "/solution_steady.csv");
  std::cout << "wrote " << cfg.out_dir << "/solution_steady.csv\n";
  return 0;
}

int cmd_verify(const config::RunConfig& cfg) {
  verify::CampaignOptions opts;
  opts.seed = cfg.seed;
  opts.checks = cfg.checks;
  opts.instances = cfg.instances;
  opts.cubes_per_instance = cfg.cubes_per_instance;
  opts.trials = cfg.trials;
  opts.nx = cfg.verify_nx;
  opts.ny = cfg.verify_ny;
  opts.nt = cfg.verify_nt;
  opts.Lx = cfg.Lx;
  opts.Ly = cfg.Ly;
  opts.T = cfg.T;
  opts.tol_solver = cfg.tol_solver;
  opts.tol_exact = cfg.tol_exact;
  opts.threads = cfg.threads;

  const auto reports = verify::run_campaign(opts);
  report::write_reports_csv(reports, cfg.out_dir + "/reports.csv");
  report::write_summary_json(reports, "verify", cfg.seed, cfg.out_dir + "/summary.json");

  int failed = 0;
  for (const auto& r : reports)
    if (!r.informational && !r.pass) ++failed;
  std::cout << "wrote " << cfg.out_dir << "/reports.csv (" << reports.size() << " reports, "
            << failed << " failed)\n";
  return 0;
}

int cmd_sweep(const config::RunConfig& cfg) {
  if (cfg.sweep_points < 2 || !(cfg.sweep_to > cfg.sweep_from))
    throw parameter_error("sweep: need points >= 2 and to > from");
  std::vector<std::pair<double, double>> series;

  if (cfg.sweep_kind == "nu0") {
    if (!(cfg.sweep_from > 0)) throw parameter_error("sweep nu0: range must be positive");
    const auto inst = config::build_parabolic_instance(cfg);
    const auto ed = parabolic::derive_ellipticity(inst);
    auto fp = config::build_free_parameters(cfg, false, true, config::field_is_zero(inst.h));
    const auto variant = config::bound_variant(cfg);
    const auto dn = verify::instance_data_norms(inst, cfg.p, variant, 1.0, 1.0);
    if (dn.f_p == 0) throw parameter_error("sweep nu0: configured f vanishes");
    for (int i = 0; i < cfg.sweep_points; ++i) {
      const double nu0 = cfg.sweep_from *
                         std::pow(cfg.sweep_to / cfg.sweep_from,
                                  static_cast<double>(i) / (cfg.sweep_points - 1));
      fp.nu0 = nu0;
      const auto b = estimates::apriori_bounds(cfg.p, ed, fp, dn, inst.grid.horizon(), variant, 2);
      series.emplace_back(nu0, b.G * std::exp(b.kappa * inst.grid.horizon()));
    }
    report::write_series_csv("nu0", "sup_bound", series, cfg.out_dir + "/sweep_nu0.csv");
  } else if (cfg.sweep_kind == "mesh") {
    config::RunConfig c = cfg;
    int n = static_cast<int>(cfg.sweep_from);
    if (n < 2) throw parameter_error("sweep mesh: from must be >= 2");
    for (int i = 0; i < cfg.sweep_points; ++i, n *= 2) {
      c.nx = c.ny = n;
      const auto inst = config::build_parabolic_instance(c);
      const auto fp = config::build_free_parameters(c, config::field_is_zero(inst.f),
                                                    config::field_is_zero(inst.fvec_x) &&
                                                        config::field_is_zero(inst.fvec_y),
                                                    config::field_is_zero(inst.h));
      const auto u = parabolic::solve(inst, c.solver);
      const auto reports = verify::verify_energy(inst, u, fp, c.p, c.tol_solver);
      series.emplace_back(n, reports.at(0).margin);
    }
    report::write_series_csv("nx", "energy_sup_margin", series, cfg.out_dir + "/sweep_mesh.csv");
  } else if (cfg.sweep_kind == "epscap") {
    if (!(cfg.sweep_from > 1)) throw parameter_error("sweep epscap: upsilon range must be > 1");
    for (int i = 0; i < cfg.sweep_points; ++i) {
      const double ups = cfg.sweep_from *
                         std::pow(cfg.sweep_to / cfg.sweep_from,
                                  static_cast<double>(i) / (cfg.sweep_points - 1));
      const auto interval =
          estimates::epsilon_admissible(cfg.delta, std::max(cfg.p, 2.0), ups);
      series.emplace_back(ups, interval.sup);
    }
    report::write_series_csv("upsilon", "eps_cap", series, cfg.out_dir + "/sweep_epscap.csv");
  } else {
    throw parse_error("unknown sweep kind '" + cfg.sweep_kind + "'");
  }
  std::cout << "wrote sweep series (" << series.size() << " points)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit a-priori estimates and desk-scale solvers for the mixed "
               "Neumann/power-type parabolic problem"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  double tol_override = -1;
  app.add_option("--config", config_path, "config file path")->required();
  auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");
  auto* out_opt = app.add_option("--out", out_override, "override the output directory");
  auto* tol_opt = app.add_option("--tol", tol_override, "override the solver-check tolerance");
  app.fallthrough();

  const auto* c_constants = app.add_subcommand("constants", "tabulate all computed constants");
  const auto* c_solve = app.add_subcommand("solve", "run the parabolic solver");
  const auto* c_steady = app.add_subcommand("solve-steady", "run the steady solver");
  const auto* c_verify = app.add_subcommand("verify", "run the verification campaign");
  const auto* c_sweep = app.add_subcommand("sweep", "emit parameter-sweep series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    config::RunConfig cfg = config::RunConfig::load(config_path);
    if (seed_opt->count()) cfg.seed = seed_override;
    if (out_opt->count()) cfg.out_dir = out_override;
    if (tol_opt->count()) cfg.tol_solver = tol_override;
    std::filesystem::create_directories(cfg.out_dir);

    if (c_constants->parsed()) return cmd_constants(cfg);
    if (c_solve->parsed()) return cmd_solve(cfg);
    if (c_steady->parsed()) return cmd_solve_steady(cfg);
    if (c_verify->parsed()) return cmd_verify(cfg);
    if (c_sweep->parsed()) return cmd_sweep(cfg);
    return 1;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const parameter_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const infeasible_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const solver_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
