#include "parest/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "parest/expr.hpp"

namespace parest::config {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

unsigned parse_edges(const std::string& v, int line_no) {
  if (trim(v) == "none") return 0;
  unsigned mask = 0;
  std::istringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok == "left")
      mask |= mesh::edge_left;
    else if (tok == "right")
      mask |= mesh::edge_right;
    else if (tok == "bottom")
      mask |= mesh::edge_bottom;
    else if (tok == "top")
      mask |= mesh::edge_top;
    else if (tok == "all")
      mask |= mesh::all_edges;
    else
      throw parse_error("config line " + std::to_string(line_no) + ": unknown edge '" + tok + "'");
  }
  return mask;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& contents) {
  RunConfig cfg;
  std::map<std::string, std::function<void(const std::string&, int)>> keys;

  auto num = [](double& slot) {
    return [&slot](const std::string& v, int line_no) {
      try {
        size_t used = 0;
        slot = std::stod(v, &used);
        if (trim(v.substr(used)) != "") throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw parse_error("config line " + std::to_string(line_no) + ": bad number '" + v + "'");
      }
    };
  };
  auto num_or_auto = [](double& slot) {
    return [&slot](const std::string& v, int line_no) {
      if (trim(v) == "auto") {
        slot = -1;
        return;
      }
      try {
        slot = std::stod(v);
      } catch (const std::exception&) {
        throw parse_error("config line " + std::to_string(line_no) + ": bad number '" + v + "'");
      }
    };
  };
  auto integer = [](int& slot) {
    return [&slot](const std::string& v, int line_no) {
      try {
        slot = std::stoi(v);
      } catch (const std::exception&) {
        throw parse_error("config line " + std::to_string(line_no) + ": bad integer '" + v + "'");
      }
    };
  };
  auto text = [](std::string& slot) {
    return [&slot](const std::string& v, int) { slot = trim(v); };
  };

  keys["domain.Lx"] = num(cfg.Lx);
  keys["domain.Ly"] = num(cfg.Ly);
  keys["domain.T"] = num(cfg.T);
  keys["domain.gamma"] = [&cfg](const std::string& v, int ln) { cfg.gamma = parse_edges(v, ln); };
  keys["grid.nx"] = integer(cfg.nx);
  keys["grid.ny"] = integer(cfg.ny);
  keys["grid.nt"] = integer(cfg.nt);
  keys["coefficients.a11"] = text(cfg.a11);
  keys["coefficients.a12"] = text(cfg.a12);
  keys["coefficients.a22"] = text(cfg.a22);
  keys["coefficients.ell"] = num(cfg.ell);
  keys["coefficients.beta_b"] = text(cfg.beta_b);
  keys["data.f"] = text(cfg.f);
  keys["data.fx"] = text(cfg.fx);
  keys["data.fy"] = text(cfg.fy);
  keys["data.h"] = text(cfg.h);
  keys["data.u0"] = text(cfg.u0);
  keys["parameters.nu0"] = num_or_auto(cfg.nu0);
  keys["parameters.nu1"] = num_or_auto(cfg.nu1);
  keys["parameters.nu2"] = num_or_auto(cfg.nu2);
  keys["parameters.eps"] = num_or_auto(cfg.eps);
  keys["parameters.delta"] = num(cfg.delta);
  keys["parameters.beta"] = num(cfg.beta);
  keys["parameters.cover_r"] = num(cfg.cover_r);
  keys["parameters.cover_N"] = integer(cfg.cover_N);
  keys["parameters.cn"] = num(cfg.cn);
  keys["parameters.p"] = num(cfg.p);
  keys["parameters.variant"] = text(cfg.variant);
  keys["solver.newton_tol"] = num(cfg.solver.newton_tol);
  keys["solver.newton_max"] = integer(cfg.solver.newton_max);
  keys["solver.linear_tol"] = num(cfg.solver.linear_tol);
  keys["solver.damping"] = num(cfg.solver.damping);
  keys["solver.steady_method"] = text(cfg.steady_method);
  keys["verify.checks"] = text(cfg.checks);
  keys["verify.instances"] = integer(cfg.instances);
  keys["verify.cubes_per_instance"] = integer(cfg.cubes_per_instance);
  keys["verify.trials"] = integer(cfg.trials);
  keys["verify.nx"] = integer(cfg.verify_nx);
  keys["verify.ny"] = integer(cfg.verify_ny);
  keys["verify.nt"] = integer(cfg.verify_nt);
  keys["verify.tol_solver"] = num(cfg.tol_solver);
  keys["verify.tol_exact"] = num(cfg.tol_exact);
  keys["verify.threads"] = integer(cfg.threads);
  keys["sweep.kind"] = text(cfg.sweep_kind);
  keys["sweep.from"] = num(cfg.sweep_from);
  keys["sweep.to"] = num(cfg.sweep_to);
  keys["sweep.points"] = integer(cfg.sweep_points);
  keys["run.seed"] = [&cfg](const std::string& v, int ln) {
    try {
      cfg.seed = std::stoull(v);
    } catch (const std::exception&) {
      throw parse_error("config line " + std::to_string(ln) + ": bad seed '" + v + "'");
    }
  };
  keys["run.out"] = text(cfg.out_dir);

  std::istringstream in(contents);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw parse_error("config line " + std::to_string(line_no) + ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw parse_error("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = section + "." + trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end())
      throw parse_error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second(value, line_no);
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw parse_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

namespace {

mesh::GridFunction sample_expr(const mesh::SpaceTimeGrid& g, const std::string& src) {
  const expr::Expression e = expr::Expression::parse(src);
  mesh::GridFunction u = mesh::GridFunction::sample(
      g, [&e](double x, double y, double t) { return e.eval(x, y, t); });
  u.check_finite();
  return u;
}

bool essentially_zero(const mesh::GridFunction& u) {
  return (u.values().abs() < 1e-300).all();
}

}  // namespace

parabolic::ProblemInstance build_parabolic_instance(const RunConfig& cfg) {
  const mesh::SpaceTimeGrid grid =
      mesh::SpaceTimeGrid::space_time(cfg.Lx, cfg.Ly, cfg.nx, cfg.ny, cfg.nt, cfg.T, cfg.gamma);
  const mesh::SpaceTimeGrid sp = grid.space_only();
  parabolic::ProblemInstance inst{
      grid,
      fem::CoefficientField{sample_expr(sp, cfg.a11), sample_expr(sp, cfg.a12),
                            sample_expr(sp, cfg.a22)},
      fem::BoundaryLaw{cfg.ell, sample_expr(sp, cfg.beta_b)},
      sample_expr(grid, cfg.fx),
      sample_expr(grid, cfg.fy),
      sample_expr(grid, cfg.f),
      sample_expr(grid, cfg.h),
      sample_expr(sp, cfg.u0)};
  inst.validate();
  return inst;
}

elliptic::SteadyInstance build_steady_instance(const RunConfig& cfg) {
  const mesh::SpaceTimeGrid sp =
      mesh::SpaceTimeGrid::spatial(cfg.Lx, cfg.Ly, cfg.nx, cfg.ny, cfg.gamma);
  elliptic::SteadyInstance inst{
      sp,
      fem::CoefficientField{sample_expr(sp, cfg.a11), sample_expr(sp, cfg.a12),
                            sample_expr(sp, cfg.a22)},
      fem::BoundaryLaw{cfg.ell, sample_expr(sp, cfg.beta_b)},
      sample_expr(sp, cfg.fx),
      sample_expr(sp, cfg.fy),
      sample_expr(sp, cfg.f),
      sample_expr(sp, cfg.h)};
  inst.validate();
  return inst;
}

estimates::FreeParameters<> build_free_parameters(const RunConfig& cfg, bool f_zero,
                                                  bool fvec_zero, bool h_zero) {
  estimates::FreeParameters<> fp;
  fp.nu0 = cfg.nu0 >= 0 ? cfg.nu0 : (f_zero ? 0.0 : 1.0);
  fp.nu1 = cfg.nu1 >= 0 ? cfg.nu1 : (fvec_zero ? 0.0 : 0.5);
  fp.nu2 = cfg.nu2 >= 0 ? cfg.nu2 : (h_zero ? 0.0 : 0.25);
  fp.eps = cfg.eps >= 0 ? cfg.eps : 0.0;
  fp.delta = cfg.delta;
  fp.beta = cfg.beta;
  fp.cover_N = cfg.cover_N;
  fp.cover_r = cfg.cover_r;
  fp.cn = cfg.cn;
  fp.validate();
  return fp;
}

estimates::BoundVariant bound_variant(const RunConfig& cfg) {
  if (cfg.variant == "standard") return estimates::BoundVariant::standard;
  if (cfg.variant == "b_zero") return estimates::BoundVariant::b_zero;
  throw parse_error("config: unknown variant '" + cfg.variant + "'");
}

bool field_is_zero(const mesh::GridFunction& u) { return essentially_zero(u); }

}  // namespace parest::config
