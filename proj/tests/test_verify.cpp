#include <doctest.h>

#include <cmath>
#include <sstream>

#include "parest/report_io.hpp"
#include "parest/verify.hpp"

using namespace parest;
using namespace parest::mesh;
using namespace parest::verify;

namespace {

constexpr double kPi = 3.14159265358979323846;
using Fn = std::function<double(double, double, double)>;

parabolic::ProblemInstance smooth_instance(const SpaceTimeGrid& g, double ell) {
  const SpaceTimeGrid sp = g.space_only();
  const Fn f = [](double x, double y, double t) {
    return 0.6 * std::cos(kPi * x) * std::cos(kPi * y) * std::exp(-t);
  };
  const Fn h = [](double x, double y, double t) {
    return 0.4 * std::cos(kPi * x) * std::cos(kPi * y) * std::exp(-0.5 * t);
  };
  const Fn u0 = [](double x, double y, double) {
    return 0.5 * std::cos(kPi * x) * std::cos(kPi * y) + 0.2;
  };
  parabolic::ProblemInstance inst{g,
                                  fem::CoefficientField::constant(sp, 1.1, 0.05, 0.95),
                                  fem::BoundaryLaw{ell, GridFunction::constant(sp, 1.0)},
                                  GridFunction::zeros(g),
                                  GridFunction::zeros(g),
                                  GridFunction::sample(g, f),
                                  GridFunction::sample(g, h),
                                  GridFunction::sample(sp, u0)};
  inst.validate();
  return inst;
}

parabolic::ProblemInstance zero_instance(const SpaceTimeGrid& g) {
  const SpaceTimeGrid sp = g.space_only();
  parabolic::ProblemInstance inst{g,
                                  fem::CoefficientField::constant(sp, 1, 0, 1),
                                  fem::BoundaryLaw{2.0, GridFunction::constant(sp, 1.0)},
                                  GridFunction::zeros(g),
                                  GridFunction::zeros(g),
                                  GridFunction::zeros(g),
                                  GridFunction::zeros(g),
                                  GridFunction::zeros(sp)};
  return inst;
}

}  // namespace

TEST_SUITE_BEGIN("verify");

TEST_CASE("report rule: pass iff lhs <= rhs (1 + tol), margin recomputable") {
  const auto r1 = make_report("x", 1.0, 2.0, 0.0);
  CHECK(r1.pass);
  CHECK(r1.margin == doctest::Approx(0.5));
  const auto r2 = make_report("x", 2.05, 2.0, 0.02);
  CHECK(r2.pass == (2.05 <= 2.0 * 1.02));
  const auto r3 = make_report("x", 0.0, 0.0, 0.0);
  CHECK(r3.pass);
  CHECK(r3.margin == 0.0);
  const auto r4 = make_report("x", 1.0, 0.0, 0.0);
  CHECK_FALSE(r4.pass);
  CHECK(std::isinf(r4.margin));
}

TEST_CASE("cover construction validates coverage and overlap") {
  const auto g = SpaceTimeGrid::space_time(1, 1, 16, 16, 8, 1.0);
  const auto cover = CoverSpec::uniform(g, 0.25, 0.5);
  CHECK(cover.N == 5);
  CHECK(cover.r_side == doctest::Approx(0.25));
  CHECK_THROWS_AS(CoverSpec::uniform(g, 5.0, 0.5), parameter_error);  // radius cap
}

TEST_CASE("energy verification") {
  const auto g = SpaceTimeGrid::space_time(1, 1, 12, 12, 16, 0.5);
  SUBCASE("zero data: all margins zero and passing") {
    const auto inst = zero_instance(g);
    const auto u = parabolic::solve(inst);
    estimates::FreeParameters<> fp;
    fp.nu0 = fp.nu1 = fp.nu2 = 0;
    for (const auto& r : verify_energy(inst, u, fp, 2.0)) {
      CHECK(r.pass);
      CHECK(r.margin == 0.0);
    }
  }
  SUBCASE("smooth instance passes at 2% with margins in (0, 1]") {
    for (double ell : {2.0, 3.0, 5.0}) {
      const auto inst = smooth_instance(g, ell);
      const auto u = parabolic::solve(inst);
      const auto fp = default_free_parameters(inst);
      const auto reports = verify_energy(inst, u, fp, 2.0);
      CHECK(reports.size() == 3);
      for (const auto& r : reports) {
        CAPTURE(r.name);
        CAPTURE(ell);
        CHECK(r.pass);
        CHECK(r.margin > 0.0);
        CHECK(r.margin <= 1.0);
      }
    }
  }
}

TEST_CASE("caccioppoli verification") {
  const auto g = SpaceTimeGrid::space_time(1, 1, 16, 16, 48, 1.0);
  const auto inst = smooth_instance(g, 3.0);
  const auto u = parabolic::solve(inst);
  const auto fp = default_free_parameters(inst);

  SUBCASE("zero data: both sides vanish") {
    const auto z = zero_instance(g);
    const auto uz = parabolic::solve(z);
    estimates::FreeParameters<> fp0;
    fp0.nu0 = fp0.nu1 = fp0.nu2 = 0;
    const std::vector<ParabolicCube> cubes{{0.5, 0.5, 0.5, 0.35}};
    const auto reports = verify_caccioppoli(z, uz, cubes, fp0, 0.05, 1.0);
    CHECK(reports.at(0).lhs == 0.0);
    CHECK(reports.at(0).rhs == 0.0);
    CHECK(reports.at(0).pass);
  }
  SUBCASE("interior and boundary cubes pass at 5%") {
    const std::vector<ParabolicCube> cubes{
        {0.5, 0.5, 0.5, 0.36},    // interior
        {0.45, 0.55, 0.05, 0.34},  // interior, window reflected at t = 0
        {0.0, 0.5, 0.5, 0.36},    // left edge
        {0.5, 1.0, 0.95, 0.36},   // top edge, window reflected at t = T
    };
    const auto reports = verify_caccioppoli(inst, u, cubes, fp, 0.05);
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].params[1].second == "interior");
    CHECK(reports[1].params[1].second == "interior");
    CHECK(reports[2].params[1].second == "boundary");
    CHECK(reports[3].params[1].second == "boundary");
    for (const auto& r : reports) {
      CAPTURE(r.name);
      CAPTURE(r.lhs);
      CAPTURE(r.rhs);
      CHECK(r.pass);
    }
  }
  SUBCASE("shrinking the gap inflates the right-hand side") {
    // same outer cube, rhs computed with r = R/2 internally; compare against a
    // direct evaluation with a narrower ring via the estimates formula
    const auto ed = parabolic::derive_ellipticity(inst);
    estimates::CaccioppoliLocalNorms<> ln{1.0, 0.0, 0.0, 0.0};
    estimates::FreeParameters<> f0;
    f0.nu0 = f0.nu1 = f0.nu2 = 0;
    const double wide = estimates::caccioppoli_rhs(ed, f0, 0.2, 0.1, 1.0, ln);
    const double narrow = estimates::caccioppoli_rhs(ed, f0, 0.2, 0.18, 1.0, ln);
    CHECK(narrow > wide);
  }
  SUBCASE("invalid cube radius") {
    const std::vector<ParabolicCube> bad{{0.5, 0.5, 0.5, 1.5}};  // >= sqrt(T)
    CHECK_THROWS_AS(verify_caccioppoli(inst, u, bad, fp, 0.05, 1.0), parameter_error);
  }
}

TEST_CASE("poincare campaign") {
  const auto reports = verify_poincare(2, 100, 42);
  REQUIRE(reports.size() == 101);
  int violations = 0;
  for (const auto& r : reports) {
    if (r.informational) {
      CHECK_FALSE(r.pass);  // the constant witness fails by construction
      continue;
    }
    if (!r.pass) ++violations;
  }
  CHECK(violations == 0);
  CHECK_THROWS_AS(verify_poincare(3, 10, 1), parameter_error);
}

TEST_CASE("stieltjes campaign") {
  const auto reports = verify_stieltjes(800, 31);
  int violations = 0;
  for (const auto& r : reports)
    if (!r.pass) ++violations;
  CHECK(violations == 0);
  // endpoint collapse: at gamma = q the leading conclusion factor is 1
  for (double a : {1.1, 2.0, 7.5})
    for (double q : {0.5, 1.0, 2.0})
      CHECK(q / (a * q - (a - 1) * q) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gradient bound margin stays below one") {
  const auto g = SpaceTimeGrid::space_time(1, 1, 12, 12, 16, 0.5);
  const auto inst = smooth_instance(g, 2.0);
  const auto u = parabolic::solve(inst);
  const auto fp = default_free_parameters(inst);
  const auto cover = CoverSpec::uniform(g, 0.25, 0.5);
  const double eps = std::min(0.01, gradient_eps_cap(inst, fp) / 2);
  const auto r = verify_gradient_bound(inst, u, fp, cover, 2 + eps);
  CHECK(r.pass);
  CHECK(r.margin <= 1.0);
  SUBCASE("margin scales down with the data") {
    // halving data and initial value halves the solution while the bound
    // shrinks no faster than linearly, so the margin cannot grow
    auto half = inst;
    half.f.values() *= 0.5;
    half.h.values() *= 0.5;
    half.u0.values() *= 0.5;
    const auto uh = parabolic::solve(half);
    const auto rh = verify_gradient_bound(half, uh, fp, cover, 2 + eps);
    CHECK(rh.margin <= r.margin * 1.05);
  }
  SUBCASE("inadmissible exponent is rejected") {
    CHECK_THROWS_AS(verify_gradient_bound(inst, u, fp, cover, 2.5), parameter_error);
  }
  SUBCASE("homogeneous instance: zero against zero") {
    const auto z = zero_instance(g);
    const auto uz = parabolic::solve(z);
    estimates::FreeParameters<> fp0;
    fp0.nu0 = fp0.nu1 = fp0.nu2 = 0;
    const double ez = std::min(0.01, gradient_eps_cap(z, fp0) / 2);
    const auto rz = verify_gradient_bound(z, uz, fp0, cover, 2 + ez, 1.0);
    CHECK(rz.lhs == 0.0);
    CHECK(rz.rhs == 0.0);
    CHECK(rz.pass);
    CHECK(rz.margin == 0.0);
  }
}

TEST_CASE("steady verification") {
  const auto sp = SpaceTimeGrid::spatial(1, 1, 12, 12);
  Rng rng(11);
  const auto inst = random_steady_instance(sp, rng);
  const auto ed = elliptic::derive_ellipticity(inst);
  estimates::FreeParameters<> fp;
  fp.nu0 = (inst.f.values().abs() < 1e-300).all() ? 0.0 : 1.0;
  const auto reports = verify_steady(inst, ed, fp);
  REQUIRE(reports.size() >= 3);
  for (const auto& r : reports) {
    CAPTURE(r.name);
    CAPTURE(r.lhs);
    CAPTURE(r.rhs);
    if (!r.informational) CHECK(r.pass);
  }

  SUBCASE("zero data: every margin vanishes") {
    elliptic::SteadyInstance z{sp,
                               fem::CoefficientField::constant(sp, 1, 0, 1),
                               fem::BoundaryLaw{2.0, GridFunction::constant(sp, 1.0)},
                               GridFunction::zeros(sp),
                               GridFunction::zeros(sp),
                               GridFunction::zeros(sp),
                               GridFunction::zeros(sp)};
    estimates::FreeParameters<> fp0;
    fp0.nu0 = 0;
    const auto zr = verify_steady(z, elliptic::derive_ellipticity(z), fp0);
    for (const auto& r : zr)
      if (!r.informational) {
        CAPTURE(r.name);
        CHECK(r.margin == 0.0);
        CHECK(r.pass);
      }
  }
}

TEST_CASE("reverse Holder spot check runs and reports") {
  const auto reports = spot_check_reverse_holder(7);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].lhs > 0);  // a positive hypothesis constant was found
  const auto& conclusion = reports[1];
  CHECK(std::isfinite(conclusion.lhs));
  CHECK(std::isfinite(conclusion.rhs));
  WARN_MESSAGE(conclusion.pass, "reverse Holder conclusion flagged as a finding");
}

TEST_CASE("embedding constant estimators") {
  const auto sp = SpaceTimeGrid::spatial(1, 1, 16, 16);
  const double K = estimate_trace_constant(sp, 10, 5);
  CHECK(K > 0.1);
  CHECK(K < 20.0);
  const double S = estimate_sobolev_dual(sp, 2.05, 6, 5);
  CHECK(S > 0.01);
}

TEST_CASE("campaign determinism: identical seeds give byte-identical reports") {
  CampaignOptions opts;
  opts.seed = 12345;
  opts.checks = "energy,stieltjes";
  opts.instances = 3;
  opts.trials = 50;
  opts.nx = opts.ny = 9;
  opts.nt = 8;
  opts.threads = 4;
  const auto a = run_campaign(opts);
  const auto b = run_campaign(opts);
  std::ostringstream sa, sb;
  report::write_reports_csv(a, sa);
  report::write_reports_csv(b, sb);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find("energy.sup") != std::string::npos);

  // the merge order is by instance slot, so the worker count cannot matter
  opts.threads = 1;
  const auto c = run_campaign(opts);
  std::ostringstream sc;
  report::write_reports_csv(c, sc);
  CHECK(sc.str() == sa.str());
}

TEST_CASE("report csv round trip recovers every field") {
  std::vector<EstimateReport> reports;
  reports.push_back(make_report("a.b", 1.5, 2.25, 0.02, {{"p", "2"}, {"cube", "3"}}));
  reports.push_back(make_report("c.d", 0.0, 0.0, 0.0, {}, true));
  std::ostringstream os;
  report::write_reports_csv(reports, os);
  std::istringstream is(os.str());
  const auto back = report::read_reports_csv(is);
  REQUIRE(back.size() == 2);
  CHECK(back[0].name == "a.b");
  CHECK(back[0].lhs == 1.5);
  CHECK(back[0].rhs == 2.25);
  CHECK(back[0].tol == 0.02);
  CHECK(back[0].pass == reports[0].pass);
  REQUIRE(back[0].params.size() == 2);
  CHECK(back[0].params[0].first == "p");
  CHECK(back[0].params[1].second == "3");
  CHECK(back[1].informational);
}

TEST_SUITE_END();
