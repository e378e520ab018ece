#pragma once

// Randomized agreement harness between the library formulas (double) and the
// naive extended-precision transcriptions in oracle.hpp.  Shared by the unit
// suite and the acceptance runner.

#include <algorithm>
#include <cmath>

#include "oracle.hpp"
#include "parest/estimates.hpp"
#include "parest/rng.hpp"

namespace agreement {

using namespace parest;
using estimates::BoundVariant;
using estimates::CubeVariant;
using estimates::UpsilonVariant;

struct Result {
  double max_rel_err = 0;
  long evaluations = 0;
};

inline void track(Result& r, double got, long double want) {
  const double w = static_cast<double>(want);
  // relative error for normal magnitudes, absolute near zero
  const double denom = std::abs(w) > 1e-8 ? std::abs(w) : 1.0;
  r.max_rel_err = std::max(r.max_rel_err, std::abs(got - w) / denom);
  ++r.evaluations;
}

// One draw of mutually consistent random valid inputs.
struct Draw {
  estimates::EllipticityData<> ed;
  estimates::FreeParameters<> fp;
  estimates::DataNorms<> dn;
  double p, T;
  int n;

  static Draw make(Rng& rng) {
    Draw d;
    d.ed.a_lo = rng.uniform(0.3, 1.5);
    d.ed.a_hi = d.ed.a_lo + rng.uniform(0.0, 1.0);
    d.ed.b_lo = rng.uniform(0.1, 1.0);
    d.ed.b_hi = d.ed.b_lo + rng.uniform(0.0, 1.0);
    d.ed.ell = rng.uniform(2.0, 5.0);
    d.fp.nu0 = rng.uniform(0.05, 5.0);
    d.fp.nu1 = rng.uniform(0.05, 0.6);
    d.fp.nu2 = rng.uniform(0.05, 1.0 - d.fp.nu1 - 0.01);
    d.fp.eps = 0;
    d.fp.delta = rng.uniform(0.5, 2.0);
    d.fp.beta = rng.uniform(0.1, 0.9);
    d.fp.cover_N = rng.uniform_int(1, 9);
    d.fp.cover_r = rng.uniform(0.05, 1.5);
    d.fp.cn = rng.uniform(1.0, 5.0);
    d.dn.u0_p = rng.uniform(0.0, 2.0);
    d.dn.f_p = rng.uniform(0.0, 2.0);
    d.dn.fvec_p = rng.uniform(0.0, 2.0);
    d.dn.h_mixed = rng.uniform(0.0, 2.0);
    d.dn.h_p = rng.uniform(0.0, 2.0);
    d.dn.u0_2 = rng.uniform(0.0, 2.0);
    d.dn.f_2 = rng.uniform(0.0, 2.0);
    d.dn.fvec_2 = rng.uniform(0.0, 2.0);
    d.dn.h_mixed_2 = rng.uniform(0.0, 2.0);
    d.dn.omega_vol = rng.uniform(0.2, 4.0);
    d.dn.K_trace = rng.uniform(0.2, 3.0);
    d.dn.S_dual = rng.uniform(0.2, 3.0);
    d.p = rng.uniform(2.0, 4.0);
    d.T = rng.uniform(0.05, 1.5);
    d.n = rng.uniform_int(2, 4);
    return d;
  }
};

inline Result run_oracle_agreement(std::uint64_t seed, int per_op) {
  Result res;

  for (int i = 0; i < per_op; ++i) {
    Rng rng = Rng::forked(seed, i);
    Draw d = Draw::make(rng);

    // poincare_sobolev_constant
    track(res, estimates::poincare_sobolev_constant<double>(d.n), oracle::poincare_sobolev(d.n));

    // apriori_bounds, both variants
    for (int v = 0; v < 2; ++v) {
      const auto variant = v == 0 ? BoundVariant::standard : BoundVariant::b_zero;
      const auto got = estimates::apriori_bounds(d.p, d.ed, d.fp, d.dn, d.T, variant, d.n);
      long double kap, g;
      if (variant == BoundVariant::standard) {
        kap = oracle::growth_rate_standard(d.p, d.fp.nu0);
        g = oracle::sup_bound_standard(d.p, d.ed.a_lo, d.ed.b_lo, d.ed.ell, d.fp.nu0,
                                       d.dn.u0_p, d.dn.f_p, d.dn.fvec_p, d.dn.h_mixed);
      } else {
        kap = oracle::growth_rate_b_zero(d.p, d.fp.nu0);
        g = oracle::sup_bound_b_zero(d.p, d.ed.a_lo, d.fp.nu0, d.dn.u0_p, d.dn.f_p,
                                     d.dn.fvec_p, d.dn.h_mixed, d.dn.K_trace, d.dn.omega_vol,
                                     d.n);
      }
      track(res, got.kappa, kap);
      track(res, got.G, g);
      track(res, got.E, oracle::energy_bound(g, kap, d.T));

      // gradient bound: oracle rebuilds the whole chain
      const long double B =
          oracle::gehring_B_boundary(d.ed.a_lo, d.ed.a_hi, d.fp.nu0, d.n);
      const long double pn = (static_cast<long double>(d.n) + 2.0L) / d.n;
      const long double ups =
          oracle::gehring_upsilon(B, pn, 2, 2, 2, 2, 2, 2, 2, d.n, /*F+G*/ 1);
      const long double C = oracle::covering_constant(d.n, d.fp.cover_N, d.fp.cn, d.fp.cover_r,
                                                      d.fp.beta, d.fp.eps, ups);
      long double kap2, g2;
      if (variant == BoundVariant::standard) {
        kap2 = oracle::growth_rate_standard(2.0L, d.fp.nu0);
        g2 = oracle::sup_bound_standard(2.0L, d.ed.a_lo, d.ed.b_lo, d.ed.ell, d.fp.nu0,
                                        d.dn.u0_2, d.dn.f_2, d.dn.fvec_2, d.dn.h_mixed_2);
      } else {
        kap2 = oracle::growth_rate_b_zero(2.0L, d.fp.nu0);
        g2 = oracle::sup_bound_b_zero(2.0L, d.ed.a_lo, d.fp.nu0, d.dn.u0_2, d.dn.f_2,
                                      d.dn.fvec_2, d.dn.h_mixed_2, d.dn.K_trace,
                                      d.dn.omega_vol, d.n);
      }
      const long double e2 = oracle::energy_bound(g2, kap2, d.T);
      const long double root = std::sqrt(1.0L + static_cast<long double>(d.ed.a_lo));
      long double data;
      const long double fterm =
          d.dn.f_p == 0 ? 0.0L : d.dn.f_p / std::sqrt((long double)d.fp.nu0);
      if (variant == BoundVariant::standard)
        data = root * d.dn.fvec_p + fterm + root * d.dn.K_trace * d.dn.h_p;
      else
        data = root * (d.dn.fvec_p + d.dn.K_trace * d.dn.h_p) + fterm;
      const long double M =
          C * (std::sqrt(e2 / d.ed.a_lo) +
               std::pow(1.0L + ups, 1.0L / d.p) / d.ed.a_lo * data);
      track(res, got.M, M);
    }

    // gehring_B both variants
    track(res, estimates::gehring_B(d.ed, d.fp.nu0, d.n, CubeVariant::interior),
          oracle::gehring_B_interior(d.ed.a_lo, d.ed.a_hi, d.fp.nu0, d.n));
    track(res, estimates::gehring_B(d.ed, d.fp.nu0, d.n, CubeVariant::boundary),
          oracle::gehring_B_boundary(d.ed.a_lo, d.ed.a_hi, d.fp.nu0, d.n));

    // gehring_upsilon on a random admissible exponent tuple
    {
      estimates::GehringExponents<> ge;
      ge.n = d.n;
      ge.p = rng.uniform(1.2, 3.0);
      ge.m1 = rng.uniform(1.0, 2.0);
      ge.m2 = ge.m1 + rng.uniform(0.0, 1.0);
      // keep r within the admissibility window
      const double r_lo = (d.n + 2.0) / (d.n / ge.m1 + 2.0 / ge.m2);
      ge.r = std::max(ge.m2, r_lo) + rng.uniform(0.0, 0.0005);
      ge.l1 = rng.uniform(1.0, 2.0);
      ge.l2 = ge.l1 + rng.uniform(0.0, 1.0);
      const double s_lo = (d.n + 1.0) / ((d.n - 1.0) / ge.l1 + 2.0 / ge.l2);
      ge.s = std::max(ge.l2, s_lo) + rng.uniform(0.0, 0.0005);
      ge.d = (d.n + 2.0) / d.n + rng.uniform(0.0, 1.0);
      const double B = rng.uniform(0.5, 100.0);
      for (int v = 0; v < 4; ++v) {
        const auto variant = static_cast<UpsilonVariant>(v);
        track(res, estimates::gehring_upsilon(B, ge, variant),
              oracle::gehring_upsilon(B, ge.p, ge.m1, ge.m2, ge.r, ge.l1, ge.l2, ge.s, ge.d,
                                      d.n, v));
      }

      const double ups = rng.uniform(1.5, 100.0);
      track(res, estimates::epsilon_admissible(d.fp.delta, ge.p, ups).sup,
            oracle::eps_admissible_sup(d.fp.delta, ge.p, ups));
      const double eps_c = rng.uniform(0.0, 0.9) * 4.0 / ((d.n + 2.0) * (ups - 1.0));
      track(res, estimates::covering_constant(d.n, d.fp, eps_c, ups),
            oracle::covering_constant(d.n, d.fp.cover_N, d.fp.cn, d.fp.cover_r, d.fp.beta,
                                      eps_c, ups));
    }

    // caccioppoli_rhs
    {
      const double R = rng.uniform(0.2, 1.2), r = rng.uniform(0.3, 0.9) * R;
      estimates::CaccioppoliLocalNorms<> ln{rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0),
                                            rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
      track(res, estimates::caccioppoli_rhs(d.ed, d.fp, R, r, d.dn.K_trace, ln),
            oracle::caccioppoli_rhs(d.ed.a_lo, d.ed.a_hi, d.fp.nu0, d.fp.nu1, d.fp.nu2, R, r,
                                    d.dn.K_trace, ln.eta_u_minus_U_R, ln.f_R, ln.fvec_R,
                                    ln.h_R));
    }

    // higher_integrability_rhs, both variants
    {
      const double ups = rng.uniform(1.5, 50.0);
      const double eps =
          rng.uniform(0.0, 0.9) * std::min(4.0 / ((d.n + 2.0) * (ups - 1.0)), d.fp.delta);
      const double S = estimates::poincare_sobolev_constant<double>(d.n);
      const double R = rng.uniform(0.05, 0.99 / (4 * S));
      estimates::LocalGradientNorms<> ln{rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0),
                                         rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
      track(res,
            estimates::higher_integrability_rhs(CubeVariant::interior, d.ed, d.fp, R, eps, d.n,
                                                ups, ln, d.dn.K_trace),
            oracle::higher_integrability_interior(d.ed.a_lo, d.fp.nu0, d.fp.beta, R, eps, d.n,
                                                  ups, ln.grad_u_R, ln.fvec, ln.f));
      track(res,
            estimates::higher_integrability_rhs(CubeVariant::boundary, d.ed, d.fp, R, eps, d.n,
                                                ups, ln, d.dn.K_trace),
            oracle::higher_integrability_boundary(d.ed.a_lo, d.fp.nu0, d.fp.beta, R, eps, d.n,
                                                  ups, ln.grad_u_R, ln.fvec, ln.f,
                                                  d.dn.K_trace, ln.h));
    }

    // marcinkiewicz
    {
      const double q = rng.uniform(1.0, 2.0);
      const double pp = q + rng.uniform(0.1, 1.5);
      const double r = pp + rng.uniform(0.1, 2.0);
      const double T1 = rng.uniform(0.1, 3.0), T2 = rng.uniform(0.1, 3.0);
      track(res, estimates::marcinkiewicz_constant(pp, q, r, T1, T2),
            oracle::marcinkiewicz(pp, q, r, T1, T2));
      track(res, estimates::marcinkiewicz_alpha(pp, q, r), oracle::marcinkiewicz_alpha(pp, q, r));
    }

    // steady bounds
    {
      const long double ups_o = oracle::steady_upsilon(d.ed.a_lo, d.ed.a_hi, d.fp.nu0, d.n);
      track(res, estimates::steady_upsilon(d.ed, d.fp.nu0, d.n), ups_o);
      const double ups = static_cast<double>(ups_o);
      const double eps =
          rng.uniform(0.1, 0.9) * std::min(1.0, 4.0 / (d.n + 2.0)) / (ups - 1.0);
      estimates::SteadyNorms<> norms{rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0),
                                     rng.uniform(0.0, 2.0)};
      estimates::SteadyCover<> cover{rng.uniform_int(1, 9), rng.uniform(0.05, 1.0)};
      const auto sb =
          estimates::steady_state_bounds(d.ed, d.fp, d.n, cover, eps, norms, d.dn.K_trace);
      track(res, sb.rhs,
            oracle::steady_rhs(d.ed.a_lo, d.fp.nu0, d.n, cover.N, cover.r_lo, eps, ups_o,
                               d.dn.K_trace, norms.grad_u_2, norms.F_norm, norms.H_norm));
    }

    // contraction data (ell = 2)
    {
      estimates::EllipticityData<> e2 = d.ed;
      e2.ell = 2;
      const double Mp = rng.uniform(0.2, 3.0);
      const auto o = oracle::contraction(e2.a_lo, e2.a_hi, e2.b_lo, Mp, d.p, d.n);
      if (o.feasible) {
        const auto got = estimates::contraction_data(e2, Mp, d.p, d.n);
        track(res, got.t, o.t);
        track(res, got.kappa_c, o.kappa);
        track(res, got.q_factor, o.q_factor);
        track(res, got.el2_mult, o.el2_mult);
        if (d.n == 2) track(res, *got.necas_c, o.necas);
      } else {
        bool threw = false;
        try {
          (void)estimates::contraction_data(e2, Mp, d.p, d.n);
        } catch (const infeasible_error&) {
          threw = true;
        }
        if (!threw) res.max_rel_err = std::max(res.max_rel_err, 1.0);
        ++res.evaluations;
      }
    }

    // linearized operator-norm chain (oracle rebuilds Lambda_p from scratch)
    {
      estimates::EllipticityData<> unit;
      const long double kap_u = oracle::growth_rate_standard(d.p, d.fp.nu0);
      const long double g_u =
          oracle::sup_bound_standard(d.p, 1.0L, 1.0L, 2.0L, d.fp.nu0, 1, 1, 1, 1);
      const long double e_u = oracle::energy_bound(g_u, kap_u, d.T);
      const long double kap2_u = oracle::growth_rate_standard(2.0L, d.fp.nu0);
      const long double g2_u =
          oracle::sup_bound_standard(2.0L, 1.0L, 1.0L, 2.0L, d.fp.nu0, 1, 1, 1, 1);
      const long double e2_u = oracle::energy_bound(g2_u, kap2_u, d.T);
      const long double B_u = oracle::gehring_B_boundary(1.0L, 1.0L, d.fp.nu0, d.n);
      const long double pn = (static_cast<long double>(d.n) + 2.0L) / d.n;
      const long double ups_u =
          oracle::gehring_upsilon(B_u, pn, 2, 2, 2, 2, 2, 2, 2, d.n, 1);
      const long double C_u = oracle::covering_constant(d.n, d.fp.cover_N, d.fp.cn,
                                                        d.fp.cover_r, d.fp.beta, 0.0L, ups_u);
      const long double root = std::sqrt(2.0L);
      const long double M_u =
          C_u * (std::sqrt(e2_u) + std::pow(1.0L + ups_u, 1.0L / d.p) *
                                       (root + 1.0L / std::sqrt((long double)d.fp.nu0) +
                                        root * d.dn.K_trace));
      const long double lambda = M_u + e_u;

      estimates::EllipticityData<> near = unit;
      near.ell = 2;
      near.a_lo = near.a_hi = 1.0;
      near.b_lo = near.b_hi = 1.0;
      estimates::FreeParameters<> ufp = d.fp;
      ufp.eps = 0;
      const auto lb = estimates::linear_w1p(d.p, near, d.T, d.dn, ufp, d.n);
      track(res, lb.Lambda_p, lambda);
      const long double sum = (long double)d.dn.fvec_p + d.dn.f_p + d.dn.h_p;
      track(res, lb.grad_bound, lambda * sum);
      track(res, lb.trace_bound, lambda * sum);
    }
  }
  return res;
}

}  // namespace agreement
