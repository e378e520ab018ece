#pragma once

// Closed-form constants and bound formulas for the mixed Neumann / power-type
// boundary problem: energy and gradient a-priori bounds, Caccioppoli right-hand
// sides, Gehring-Giaquinta-Modica self-improvement constants, covering
// constants, and the steady-state contraction data.
//
// Everything here is a pure function of scalars.  Templates accept any
// floating-point scalar; `double` is the working type, `long double` is used by
// the cross-checking tests.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "parest/errors.hpp"

namespace parest::estimates {

using std::exp;
using std::pow;
using std::sqrt;

// ---------------------------------------------------------------------------
// Parameter records
// ---------------------------------------------------------------------------

// Structural constants of the problem class: eigenvalue bounds of the diffusion
// matrix, bounds of the boundary-law coefficient, and the law's growth exponent.
template <class S = double>
struct EllipticityData {
  S a_lo = 1;  // smallest eigenvalue bound of A (> 0)
  S a_hi = 1;  // sup-norm of A
  S b_lo = 1;  // lower coefficient bound of the boundary law (>= 0)
  S b_hi = 1;  // upper coefficient bound
  S ell = 2;   // growth exponent of the boundary law (>= 2)

  void validate() const {
    if (!(a_lo > 0) || !(a_lo <= a_hi))
      throw parameter_error("ellipticity: need 0 < a_lo <= a_hi");
    if (!(b_lo >= 0) || !(b_lo <= b_hi))
      throw parameter_error("ellipticity: need 0 <= b_lo <= b_hi");
    if (!(ell >= 2)) throw parameter_error("ellipticity: need ell >= 2");
  }
};

// Free scalars of the estimates.  nu0/nu1/nu2 are the Young-inequality weights
// tied to the data f, fvec, h; each must be 0 exactly when its datum vanishes
// identically.  The covering fields parameterize the covering constant.
template <class S = double>
struct FreeParameters {
  S nu0 = 1, nu1 = S(0.5), nu2 = S(0.25);
  S eps = 0;        // integrability gain (0 is always admissible)
  S delta = 1;      // extra data integrability
  S beta = S(0.5);  // cube shrink factor in (0,1)
  int cover_N = 5;  // covering overlap count
  S cover_r = S(0.25);  // smallest covering cube side
  S cn = 3;             // value of the degree-1 dimension polynomial c(n)

  void validate() const {
    if (!(nu0 >= 0) || !(nu1 >= 0) || !(nu2 >= 0))
      throw parameter_error("free parameters: nu weights must be >= 0");
    if (!(eps >= 0)) throw parameter_error("free parameters: eps must be >= 0");
    if (!(delta > 0)) throw parameter_error("free parameters: delta must be > 0");
    if (!(beta > 0) || !(beta < 1))
      throw parameter_error("free parameters: beta must lie in (0,1)");
    if (cover_N < 1) throw parameter_error("free parameters: cover_N must be >= 1");
    if (!(cover_r > 0)) throw parameter_error("free parameters: cover_r must be > 0");
    if (!(cn > 0)) throw parameter_error("free parameters: cn must be > 0");
  }
};

// Norms of the problem data entering the bounds.  The plain fields are taken at
// the working exponent p; the *_2 fields repeat the same quantities at exponent
// 2 (the gradient bound couples the energy bound at exponent 2 with data norms
// at exponent p; at p == 2 set them equal).
//
// h_mixed is the boundary integral of the sup-norm bound: for the standard
// variant the integral of |h|^((ell+p-2)/(ell-1)) over the lateral boundary,
// for the b_zero variant the integral of |h|^p' (p' conjugate to p).
template <class S = double>
struct DataNorms {
  S u0_p = 0;     // ||u0||_{p,Omega}
  S f_p = 0;      // ||f||_{p,Q_T}
  S fvec_p = 0;   // ||fvec||_{p,Q_T}
  S h_mixed = 0;  // boundary data integral of the sup-norm bound (see above)
  S h_p = 0;      // ||h||_{p,Sigma_T}
  S u0_2 = 0, f_2 = 0, fvec_2 = 0, h_mixed_2 = 0;  // exponent-2 counterparts
  S omega_vol = 1;  // |Omega|
  S K_trace = 1;    // trace embedding constant W^{1,2n/(n+1)} -> L^2(Gamma)
  S S_dual = 1;     // Sobolev constant of W^{1,p'} -> L^{pn/(pn-n-p)}

  void validate() const {
    const S vals[] = {u0_p, f_p, fvec_p, h_mixed, h_p, u0_2, f_2, fvec_2, h_mixed_2, omega_vol, S_dual};
    for (S v : vals)
      if (!(v >= 0)) throw parameter_error("data norms must be >= 0");
    if (!(K_trace > 0)) throw parameter_error("trace constant must be > 0");
  }
};

// Exponent tuple of the reverse Holder machinery: p for the main density, the
// mixed-norm exponents (m1,m2;r) of the volumetric datum, (l1,l2;s) of the
// surface datum, d of the time-independent datum, and the space dimension.
template <class S = double>
struct GehringExponents {
  S p = 2;
  S m1 = 2, m2 = 2, r = 2;
  S l1 = 2, l2 = 2, s = 2;
  S d = 2;
  int n = 2;
};

enum class BoundVariant { standard, b_zero };
enum class CubeVariant { interior, boundary };
enum class UpsilonVariant { general, no_phi, interior, interior_no_phi };

// ---------------------------------------------------------------------------
// Elementary constants
// ---------------------------------------------------------------------------

// Sobolev constant S_{2n/(n+2)} of the local Poincare inequality
// ||u||_2 <= S/(1-eps) ||grad u||_{2n/(n+2)} on small cubes.  At n == 2 the
// factor (n-2)^((n-2)/(2n)) is evaluated as 1 (0^0 convention).
template <class S = double>
S poincare_sobolev_constant(int n) {
  if (n < 2) throw parameter_error("poincare_sobolev_constant: need n >= 2");
  const S nn = static_cast<S>(n);
  const S pi = static_cast<S>(3.14159265358979323846264338327950288L);
  const S corner = (n == 2) ? S(1) : pow(nn - 2, (nn - 2) / (2 * nn));
  return pow(pi, S(-0.5)) * pow(nn, (2 - 3 * nn) / (2 * nn)) * corner *
         pow(std::tgamma(nn) / std::tgamma(nn / 2), 1 / nn);
}

namespace detail {

// Data quotient with the vanishing-datum rule: a term c(nu) * norm^k is defined
// as 0 when the datum vanishes, and requires nu > 0 otherwise.
template <class S>
S quot(S norm_power, S nu, const char* which) {
  if (norm_power == 0) return S(0);
  if (!(nu > 0))
    throw parameter_error(std::string("free parameter for nonzero ") + which +
                          " must be positive (zero is reserved for a vanishing datum)");
  return norm_power / nu;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gehring-Giaquinta-Modica constants
// ---------------------------------------------------------------------------

// Hypothesis constant B of the reverse Holder inequality satisfied by the
// gradient density.  The boundary variant carries the larger prefactor and the
// 19/8 bracket term produced by the flattened-boundary localization.
template <class S = double>
S gehring_B(const EllipticityData<S>& ed, S nu0, int n, CubeVariant variant) {
  ed.validate();
  if (n < 2) throw parameter_error("gehring_B: need n >= 2");
  if (!(nu0 >= 0)) throw parameter_error("gehring_B: need nu0 >= 0");
  const S nn = static_cast<S>(n);
  const S four_s = 4 * poincare_sobolev_constant<S>(n);
  const S bracket = 2 * ed.a_hi * ed.a_hi / ed.a_lo +
                    (variant == CubeVariant::interior ? S(2) : S(19) / 8) + nu0;
  const S lead = (variant == CubeVariant::interior) ? pow(S(2), 2 * (2 - 1 / nn))
                                                    : pow(S(2), 5 - 2 / nn);
  return lead / ed.a_lo * bracket * four_s * four_s;
}

// Self-improvement constant upsilon as a function of the hypothesis constant B
// and the exponent tuple.  The variant selects which data terms appear:
//   general          F + G + phi
//   no_phi           F + G
//   interior         F + phi
//   interior_no_phi  F
template <class S = double>
S gehring_upsilon(S B, const GehringExponents<S>& ge, UpsilonVariant variant) {
  if (!(B > 0)) throw parameter_error("gehring_upsilon: need B > 0");
  if (!(ge.p > 1)) throw parameter_error("gehring_upsilon: need p > 1");
  const S nn = static_cast<S>(ge.n);
  const S tol = S(1e-12);
  const bool has_g = variant == UpsilonVariant::general || variant == UpsilonVariant::no_phi;
  const bool has_phi = variant == UpsilonVariant::general || variant == UpsilonVariant::interior;

  if (!(ge.m1 >= 1) || !(ge.m2 >= ge.m1) || !(ge.r >= ge.m2) ||
      nn / ge.m1 + 2 / ge.m2 < (nn + 2) / ge.r - tol)
    throw parameter_error("gehring_upsilon: volumetric exponents violate the admissibility conditions");
  if (has_g && (!(ge.l1 >= 1) || !(ge.l2 >= ge.l1) || !(ge.s >= ge.l2) ||
                (nn - 1) / ge.l1 + 2 / ge.l2 < (nn + 1) / ge.s - tol))
    throw parameter_error("gehring_upsilon: surface exponents violate the admissibility conditions");
  if (has_phi && nn * ge.d < nn + 2 - tol)
    throw parameter_error("gehring_upsilon: need n*d >= n+2");

  const S pprime = ge.p / (ge.p - 1);
  S bracket = pow(S(2), nn + 2) * pow(pow(S(2), nn + 2) * B, 1 / ge.p) + 3 / pprime +
              pow(S(2), (nn / ge.m1 + 1 / ge.m2) * ge.r / ge.p) + pow(S(2), 2 * nn + 3);
  if (has_g) bracket += pow(S(2), ((nn - 1) / ge.l1 + 1 / ge.l2) * ge.s / ge.p);
  if (has_phi) bracket += pow(S(2), nn * ge.d / ge.p);
  return (pow(S(4), nn) + 1) * pow(bracket, ge.p);
}

// Admissible range of the integrability gain: [0, min(delta, (p-1)/(upsilon-1)))
// when the upsilon cap binds, closed at delta when delta is smaller.
enum class EpsilonBinding { delta_cap, upsilon_cap, both };

template <class S = double>
struct EpsilonInterval {
  S sup = 0;
  bool contains_sup = false;
  EpsilonBinding binding = EpsilonBinding::both;
};

template <class S = double>
EpsilonInterval<S> epsilon_admissible(S delta, S p, S upsilon) {
  if (!(upsilon > 1)) throw parameter_error("epsilon_admissible: need upsilon > 1");
  if (!(delta > 0)) throw parameter_error("epsilon_admissible: need delta > 0");
  if (!(p > 1)) throw parameter_error("epsilon_admissible: need p > 1");
  const S cap = (p - 1) / (upsilon - 1);
  EpsilonInterval<S> out;
  out.sup = std::min(delta, cap);
  out.contains_sup = delta < cap;
  out.binding = delta < cap   ? EpsilonBinding::delta_cap
                : cap < delta ? EpsilonBinding::upsilon_cap
                              : EpsilonBinding::both;
  return out;
}

// ---------------------------------------------------------------------------
// Covering constant
// ---------------------------------------------------------------------------

// C(n) = N 2^{c(n)} r^{-(n+2)/2} (2n beta^{-eps(n+2)/2} / (4-(n+2)(upsilon-1)eps))^{1/(2+eps)}
template <class S = double>
S covering_constant(int n, const FreeParameters<S>& fp, S eps, S upsilon) {
  fp.validate();
  if (n < 2) throw parameter_error("covering_constant: need n >= 2");
  if (!(eps >= 0)) throw parameter_error("covering_constant: need eps >= 0");
  const S nn = static_cast<S>(n);
  const S den = 4 - (nn + 2) * (upsilon - 1) * eps;
  if (!(den > 0))
    throw infeasible_error("covering_constant: eps too large for this upsilon (nonpositive denominator)");
  return static_cast<S>(fp.cover_N) * pow(S(2), fp.cn) * pow(fp.cover_r, -(nn + 2) / 2) *
         pow(2 * nn * pow(fp.beta, -eps * (nn + 2) / 2) / den, 1 / (2 + eps));
}

// ---------------------------------------------------------------------------
// Energy and gradient a-priori bounds
// ---------------------------------------------------------------------------

// G caps the essential sup in time of ||u||_{p,Omega}^p together with
// exp(kappa T); E = G (1 + kappa T e^{kappa T}) caps the dissipation and the
// lateral-boundary energy; M caps ||grad u||_{p,Q_T}.
template <class S = double>
struct AprioriBounds {
  S G = 0, E = 0, M = 0, kappa = 0;
};

namespace detail {

template <class S>
S growth_rate(S p, S nu0, BoundVariant variant) {
  const S nu_pow = (nu0 == 0) ? S(0) : pow(nu0, 1 / (p - 1));
  return variant == BoundVariant::standard ? p - 2 + (p - 1) * nu_pow
                                           : (p - 1) * (1 + nu_pow);
}

template <class S>
S sup_bound_G(S p, const EllipticityData<S>& ed, S nu0, S u0_p, S f_p, S fvec_p,
              S h_mixed, S K_trace, S omega_vol, int n, BoundVariant variant) {
  S g = pow(u0_p, p) + quot(pow(f_p, p), nu0, "f") +
        pow((p - 1) / ed.a_lo, p / 2) * pow(fvec_p, p);
  if (variant == BoundVariant::standard) {
    g += p * (ed.ell - 1) /
         ((ed.ell + p - 2) * pow(ed.b_lo, (p - 1) / (ed.ell - 1))) * h_mixed;
  } else {
    g += (p - 1) * (pow(p * p / (2 * ed.a_lo * (p - 1)), 1 / (p - 1)) + 1) *
         pow(K_trace, 2 / (p - 1)) * pow(omega_vol, 1 / ((p - 1) * static_cast<S>(n))) *
         h_mixed;
  }
  return g;
}

}  // namespace detail

// The three headline bounds at exponent p.  The gradient bound M couples the
// exponent-2 energy bound with the exponent-p data norms through the covering
// constant and the boundary-variant upsilon built from the same parameters.
template <class S = double>
AprioriBounds<S> apriori_bounds(S p, const EllipticityData<S>& ed,
                                const FreeParameters<S>& fp, const DataNorms<S>& dn,
                                S T, BoundVariant variant, int n = 2) {
  ed.validate();
  fp.validate();
  dn.validate();
  if (!(p >= 2)) throw parameter_error("apriori_bounds: need p >= 2");
  if (!(T > 0)) throw parameter_error("apriori_bounds: need T > 0");
  if (n < 2) throw parameter_error("apriori_bounds: need n >= 2");
  if (variant == BoundVariant::standard && ed.b_lo == 0)
    throw infeasible_error(
        "apriori_bounds: b_lo = 0 is outside the standard variant; use the b_zero variant");
  if (fp.nu0 == 0 && dn.f_p > 0)
    throw parameter_error("apriori_bounds: nu0 = 0 requires a vanishing f");

  AprioriBounds<S> out;
  out.kappa = detail::growth_rate(p, fp.nu0, variant);
  out.G = detail::sup_bound_G(p, ed, fp.nu0, dn.u0_p, dn.f_p, dn.fvec_p, dn.h_mixed,
                              dn.K_trace, dn.omega_vol, n, variant);
  out.E = out.G * (1 + out.kappa * T * exp(out.kappa * T));

  // Energy factor of the gradient bound, taken at exponent 2.
  const S kappa2 = detail::growth_rate(S(2), fp.nu0, variant);
  const S g2 = detail::sup_bound_G(S(2), ed, fp.nu0, dn.u0_2, dn.f_2, dn.fvec_2,
                                   dn.h_mixed_2, dn.K_trace, dn.omega_vol, n, variant);
  const S e2 = g2 * (1 + kappa2 * T * exp(kappa2 * T));

  const S B = gehring_B(ed, fp.nu0, n, CubeVariant::boundary);
  GehringExponents<S> ge;
  ge.n = n;
  ge.p = (static_cast<S>(n) + 2) / static_cast<S>(n);
  ge.m1 = ge.m2 = ge.r = 2;
  ge.l1 = ge.l2 = ge.s = 2;
  const S ups = gehring_upsilon(B, ge, UpsilonVariant::no_phi);
  const S C = covering_constant(n, fp, fp.eps, ups);

  const S root = sqrt(1 + ed.a_lo);
  const S f_term = (dn.f_p == 0) ? S(0) : dn.f_p / sqrt(fp.nu0);
  const S data = variant == BoundVariant::standard
                     ? root * dn.fvec_p + f_term + root * dn.K_trace * dn.h_p
                     : root * (dn.fvec_p + dn.K_trace * dn.h_p) + f_term;
  out.M = C * (sqrt(e2 / ed.a_lo) + pow(1 + ups, 1 / p) / ed.a_lo * data);
  return out;
}

// Golden-section minimizer of the sup-norm bound G * exp(kappa T) over nu0
// (the bounds never fix nu0; searched over [1e-6, 1e3] in log scale).
template <class S = double>
S optimize_nu0(S p, const EllipticityData<S>& ed, const DataNorms<S>& dn, S T,
               BoundVariant variant = BoundVariant::standard, int n = 2) {
  const S lo = std::log(S(1e-6)), hi = std::log(S(1e3));
  auto value = [&](S lognu) {
    const S nu0 = exp(lognu);
    const S g = detail::sup_bound_G(p, ed, nu0, dn.u0_p, dn.f_p, dn.fvec_p, dn.h_mixed,
                                    dn.K_trace, dn.omega_vol, n, variant);
    return g * exp(detail::growth_rate(p, nu0, variant) * T);
  };
  const S gr = (sqrt(S(5)) - 1) / 2;
  S a = lo, b = hi;
  S c = b - gr * (b - a), d = a + gr * (b - a);
  S fc = value(c), fd = value(d);
  for (int it = 0; it < 200 && b - a > S(1e-10); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = value(d);
    }
  }
  return exp((a + b) / 2);
}

// ---------------------------------------------------------------------------
// Caccioppoli right-hand side
// ---------------------------------------------------------------------------

template <class S = double>
struct CaccioppoliLocalNorms {
  S eta_u_minus_U_R = 0;  // ||eta (u - U)||_{2,Q_R(z0)}
  S f_R = 0;              // ||f||_{2,Q_R(z0)}
  S fvec_R = 0;           // ||fvec||_{2,Q_R(z0)}
  S h_R = 0;              // ||h||_{2,Sigma_R(z0)}
};

// Full right-hand side of the local Caccioppoli inequality on the cube pair
// (r, R).  The (upper) cap R < sqrt(T) is the caller's geometric obligation.
template <class S = double>
S caccioppoli_rhs(const EllipticityData<S>& ed, const FreeParameters<S>& fp, S R, S r,
                  S K_trace, const CaccioppoliLocalNorms<S>& ln) {
  ed.validate();
  fp.validate();
  if (!(r > 0) || !(r < R)) throw parameter_error("caccioppoli_rhs: need 0 < r < R");
  if (!((R - r) * (R - r) <= 2)) throw parameter_error("caccioppoli_rhs: need (R-r)^2 <= 2");
  if (!(fp.nu1 + fp.nu2 < 1)) throw parameter_error("caccioppoli_rhs: need nu1 + nu2 < 1");
  if (!(K_trace > 0)) throw parameter_error("caccioppoli_rhs: need K_trace > 0");
  for (S v : {ln.eta_u_minus_U_R, ln.f_R, ln.fvec_R, ln.h_R})
    if (!(v >= 0)) throw parameter_error("caccioppoli_rhs: local norms must be >= 0");

  S rhs = (2 * ed.a_hi * ed.a_hi / ed.a_lo + 2 + fp.nu0 + 3 * fp.nu2 / 2) *
          (2 / ((R - r) * (R - r))) * ln.eta_u_minus_U_R * ln.eta_u_minus_U_R;
  rhs += detail::quot(ln.f_R * ln.f_R, fp.nu0, "f");
  if (ln.fvec_R != 0) {
    if (!(fp.nu1 > 0))
      throw parameter_error("caccioppoli_rhs: nu1 must be positive for nonzero fvec");
    rhs += (1 / (ed.a_lo * fp.nu1) + 2) * ln.fvec_R * ln.fvec_R;
  }
  if (ln.h_R != 0) {
    if (!(fp.nu2 > 0))
      throw parameter_error("caccioppoli_rhs: nu2 must be positive for nonzero h");
    rhs += 2 * R * K_trace * K_trace / fp.nu2 * (1 / ed.a_lo + 2) * ln.h_R * ln.h_R;
  }
  return rhs;
}

// ---------------------------------------------------------------------------
// Local higher-integrability right-hand sides
// ---------------------------------------------------------------------------

template <class S = double>
struct LocalGradientNorms {
  S grad_u_R = 0;  // ||grad u||_{2,Q_R(z0)}
  S fvec = 0;      // ||fvec||_{2+eps,Q_R(z0)}
  S f = 0;         // ||f||_{2+eps,Q_R(z0)}
  S h = 0;         // ||h||_{2+eps,Sigma_R(z0)}  (boundary variant only)
};

// Right-hand side of the localized L^{2+eps} gradient estimate on Q_{(1-beta)R}.
// The geometric radius caps (distance to the boundary, the chart radius, and
// sqrt(T)) are the caller's obligation; the Sobolev cap R < (4 S_{2n/(n+2)})^{-1}
// is checked here.
template <class S = double>
S higher_integrability_rhs(CubeVariant variant, const EllipticityData<S>& ed,
                           const FreeParameters<S>& fp, S R, S eps, int n, S upsilon,
                           const LocalGradientNorms<S>& ln, S K_trace) {
  ed.validate();
  fp.validate();
  if (n < 2) throw parameter_error("higher_integrability_rhs: need n >= 2");
  if (!(R > 0)) throw parameter_error("higher_integrability_rhs: need R > 0");
  if (!(R < 1 / (4 * poincare_sobolev_constant<S>(n))))
    throw parameter_error("higher_integrability_rhs: R exceeds the Sobolev radius cap");
  if (!(eps >= 0) || eps > fp.delta)
    throw parameter_error("higher_integrability_rhs: eps outside [0, delta]");
  const S nn = static_cast<S>(n);
  const S den = 4 - (nn + 2) * (upsilon - 1) * eps;
  if (!(den > 0))
    throw parameter_error("higher_integrability_rhs: eps outside the admissible interval");

  const S q = 2 + eps;
  const S lead = pow(2 * nn * pow(fp.beta, -eps * (nn + 2) / 2) / den, 1 / q);
  const S grad_w = pow(2 * (4 + eps) / (nn * q * pow(R, eps * (nn + 2) / 2)), 1 / q);
  const S data_w =
      pow(pow(S(2), 1 + eps * (nn + 1) / 2) * eps / (nn * q) + upsilon * (4 + eps * (nn + 2)) / (2 * nn),
          1 / q);

  const S f_term = (ln.f == 0) ? S(0)
                   : variant == CubeVariant::interior
                       ? sqrt(2 / (ed.a_lo * fp.nu0)) * ln.f
                       : 2 / sqrt(ed.a_lo * fp.nu0) * ln.f;
  if (ln.f != 0 && !(fp.nu0 > 0))
    throw parameter_error("higher_integrability_rhs: nu0 must be positive for nonzero f");

  if (variant == CubeVariant::interior) {
    const S data = 2 * sqrt(1 + ed.a_lo) / ed.a_lo * ln.fvec + f_term;
    return lead * (grad_w * ln.grad_u_R + data_w * data);
  }
  const S data = 2 * sqrt(2 * (1 + ed.a_lo)) / ed.a_lo * ln.fvec + f_term;
  const S trace_w =
      pow(pow(S(2), 1 + eps * nn / 2) * eps / (nn * q * pow(R, eps / 2)) + upsilon * (4 + eps * (nn + 2)) / (2 * nn),
          1 / q);
  const S h_term = 4 / ed.a_lo * sqrt(2 * (1 + ed.a_lo)) * K_trace * ln.h;
  return lead * (grad_w * ln.grad_u_R + data_w * data + trace_w * h_term);
}

// ---------------------------------------------------------------------------
// Maximal-regularity norm of the linearized problem
// ---------------------------------------------------------------------------

template <class S = double>
struct LinearBounds {
  S Lambda_p = 0;     // operator norm bound of the linearized inverse
  S grad_bound = 0;   // resulting cap on ||grad u||_{p,Q_T}
  S trace_bound = 0;  // resulting cap on ||u||_{2,Sigma_T}
};

// Lambda_p is the (M + E)|_{ell=2} evaluation at unit coefficients and unit data
// norms; the perturbation bounds require a_lo, b_lo in (1 - 1/Lambda_p, 1].
// dn supplies the actual data norms of the instance (fvec_p, f_p, and h_p, the
// last carrying ||h||_{2,Sigma_T}) along with the domain constants.
template <class S = double>
LinearBounds<S> linear_w1p(S p, const EllipticityData<S>& ed, S T, const DataNorms<S>& dn,
                           const FreeParameters<S>& fp, int n = 2) {
  ed.validate();
  if (!(std::abs(ed.ell - 2) < S(1e-12)))
    throw parameter_error("linear_w1p: defined for ell = 2 only");

  EllipticityData<S> unit;  // a_lo = a_hi = b_lo = b_hi = 1, ell = 2
  DataNorms<S> unit_dn = dn;
  unit_dn.u0_p = unit_dn.f_p = unit_dn.fvec_p = unit_dn.h_mixed = unit_dn.h_p = 1;
  unit_dn.u0_2 = unit_dn.f_2 = unit_dn.fvec_2 = unit_dn.h_mixed_2 = 1;
  FreeParameters<S> ufp = fp;
  if (!(ufp.nu0 > 0)) throw parameter_error("linear_w1p: need nu0 > 0");
  const AprioriBounds<S> unit_bounds =
      apriori_bounds(p, unit, ufp, unit_dn, T, BoundVariant::standard, n);

  LinearBounds<S> out;
  out.Lambda_p = unit_bounds.M + unit_bounds.E;
  const S den_a = 1 - out.Lambda_p * (1 - ed.a_lo);
  const S den_b = 1 - out.Lambda_p * (1 - ed.b_lo);
  if (!(den_a > 0) || !(den_b > 0))
    throw infeasible_error("linear_w1p: coefficient bounds too far from 1 for this Lambda_p");
  const S data = dn.fvec_p + dn.f_p + dn.h_p;
  out.grad_bound = out.Lambda_p * data / den_a;
  out.trace_bound = out.Lambda_p * data / den_b;
  return out;
}

// ---------------------------------------------------------------------------
// Interpolation constant
// ---------------------------------------------------------------------------

template <class S = double>
S marcinkiewicz_alpha(S p, S q, S r) {
  if (!(1 <= q) || !(q < p) || !(p < r))
    throw parameter_error("marcinkiewicz: need 1 <= q < p < r");
  return (1 / p - 1 / r) / (1 / q - 1 / r);
}

// 2 (p/(p-q) + p/(r-p))^{1/p} T1^alpha T2^{1-alpha} with 1/p = alpha/q + (1-alpha)/r.
template <class S = double>
S marcinkiewicz_constant(S p, S q, S r, S T1, S T2) {
  const S alpha = marcinkiewicz_alpha(p, q, r);
  if (!(T1 > 0) || !(T2 > 0)) throw parameter_error("marcinkiewicz: need T1, T2 > 0");
  return 2 * pow(p / (p - q) + p / (r - p), 1 / p) * pow(T1, alpha) * pow(T2, 1 - alpha);
}

// ---------------------------------------------------------------------------
// Steady-state bounds
// ---------------------------------------------------------------------------

template <class S = double>
struct SteadyCover {
  int N = 5;       // covering overlap count of the spatial cover
  S r_lo = S(0.25);  // smallest covering cube side
};

template <class S = double>
struct SteadyNorms {
  S grad_u_2 = 0;  // ||grad u||_{2,Omega}
  S F_norm = 0;    // || sqrt((2/a_lo + 2)|fvec|^2 + |f|^2/nu0) ||_{2+eps,Omega}
  S H_norm = 0;    // ||h||_{2+eps,Gamma}
};

template <class S = double>
struct SteadyBounds {
  S upsilon_s = 0;   // steady self-improvement constant
  S rhs = 0;         // full right-hand side bounding ||grad u||_{2+eps,Omega}^{2+eps}
  S F_mult = 0;      // scalar turning F_norm into the weighted volumetric datum
  S H_mult = 0;      // scalar turning |h| into the weighted surface datum
};

template <class S = double>
S steady_upsilon(const EllipticityData<S>& ed, S nu0, int n) {
  ed.validate();
  if (n < 2) throw parameter_error("steady_upsilon: need n >= 2");
  const S nn = static_cast<S>(n);
  const S root = sqrt(pow(4 * ed.a_hi / ed.a_lo, S(2)) + (4 + nu0) / ed.a_lo);
  return (pow(S(8), nn) + 1) * pow(S(2), 6 * nn) * (root + 1) * (root + 1);
}

template <class S = double>
SteadyBounds<S> steady_state_bounds(const EllipticityData<S>& ed, const FreeParameters<S>& fp,
                                    int n, const SteadyCover<S>& cover, S eps,
                                    const SteadyNorms<S>& norms, S K_trace) {
  ed.validate();
  fp.validate();
  if (cover.N < 1 || !(cover.r_lo > 0))
    throw parameter_error("steady_state_bounds: invalid cover parameters");
  if (!(K_trace > 0)) throw parameter_error("steady_state_bounds: need K_trace > 0");
  const S nn = static_cast<S>(n);

  SteadyBounds<S> out;
  out.upsilon_s = steady_upsilon(ed, fp.nu0, n);
  if (!(eps > 0) || !(eps < 1 / (out.upsilon_s - 1)))
    throw parameter_error("steady_state_bounds: eps outside (0, 1/(upsilon-1))");
  const S den = 4 - (nn + 2) * (out.upsilon_s - 1) * eps;
  if (!(den > 0))
    throw infeasible_error("steady_state_bounds: nonpositive covering denominator");

  out.F_mult = 1 / sqrt(ed.a_lo);
  out.H_mult = 2 * sqrt(2 + pow(S(2), -1 / nn) * ed.a_lo) / ed.a_lo * K_trace;

  const S q = 2 + eps;
  const S ups_w = out.upsilon_s * (4 + (nn + 2) * eps);
  out.rhs = pow(S(2), nn * (1 + eps / 2)) * static_cast<S>(cover.N) / den *
            (pow(8 / pow(cover.r_lo, nn), eps / 2) * 4 * pow(norms.grad_u_2, q) +
             (pow(S(2), 2 + 3 * eps / 2) + ups_w) * pow(out.F_mult * norms.F_norm, q) +
             (4 + ups_w) * pow(out.H_mult * norms.H_norm, q));
  return out;
}

// ---------------------------------------------------------------------------
// Contraction data of the steady fixed-point solve (ell = 2)
// ---------------------------------------------------------------------------

template <class S = double>
struct ContractionData {
  S t = 0;         // scaling of the preconditioned iteration, a_lo / a_hi^2
  S kappa_c = 0;   // perturbation size
  S q_factor = 0;  // contraction factor of the fixed-point map
  S el2_mult = 0;  // multiplier of the data norms in the W^{1,p} bound
  std::optional<S> necas_c;  // vector p-norm equivalence constant (n = 2 only)
};

template <class S = double>
ContractionData<S> contraction_data(const EllipticityData<S>& ed, S Mp, S p, int n) {
  ed.validate();
  if (!(std::abs(ed.ell - 2) < S(1e-12)))
    throw parameter_error("contraction_data: defined for ell = 2 only");
  if (!(Mp > 0)) throw parameter_error("contraction_data: need Mp > 0");
  if (!(p >= 2)) throw parameter_error("contraction_data: need p >= 2");

  ContractionData<S> out;
  out.t = ed.a_lo / (ed.a_hi * ed.a_hi);
  const S ratio = ed.a_lo / ed.a_hi;
  out.kappa_c = std::max(sqrt(std::max(ed.a_hi * ed.a_hi - ed.a_lo * ed.a_lo, S(0))),
                         std::abs(ed.a_hi - ed.a_lo * ed.b_lo / ed.a_hi));
  out.q_factor = Mp * std::max(sqrt(std::max(1 - ratio * ratio, S(0))),
                               std::abs(1 - ed.a_lo * ed.b_lo / (ed.a_hi * ed.a_hi)));
  if (n == 2) out.necas_c = pow(S(2), S(0.5) - 1 / p);
  if (!(ed.a_hi / Mp > out.kappa_c))
    throw infeasible_error("contraction_data: perturbation too large for this Mp (a_hi/Mp <= kappa)");
  out.el2_mult = Mp * ed.a_lo / (ed.a_hi - out.kappa_c * Mp);
  return out;
}

}  // namespace parest::estimates
