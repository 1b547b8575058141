#pragma once

#include "taxis/sensitivity.hpp"

#include <functional>

namespace taxis {

/// Closed-form model ingredients for the taxis system
///   du/dt = div(grad u - c(u,v) grad v),   c(u,v) = chi(u,v) u
///   dv/dt = lap v - v + u
/// together with the truncation machinery (cut-offs at levels n and l,
/// the coupled functional F and its derivatives, the threshold M*, and
/// the coefficient bundle) that the certificate evaluations are built on.
struct ModelSpec {
  Sensitivity chi = Sensitivity::constant(1.0);
  double a = 3.0;            // exponent on the u cut-off, > 2
  double b = 3.0;            // exponent on the v cut-off, > 2
  int n = 1;                 // u cut-off level
  int l = 1;                 // v cut-off level
  double M0 = 0.0;           // additive constant in F (the certificate M)
  int k = 4;                 // regularization index, > max(n,l)
  double plateau_width = 1.0; // taper width of the C^2 cut-off

  bool operator==(const ModelSpec&) const = default;
};

/// sigma(u,v) stands for "sensitivity times u" (c or c_k).
using Sigma = std::function<double(double, double)>;

/// (threshold - x)_+ .
double cutoff(double x, double threshold);

/// C^2 quintic plateau: 1 on [0,k], 0 on [k+w,inf), monotone quintic
/// smoothstep in between (zero first and second derivatives at both
/// ends of the taper).
double zeta_plateau(double x, double k, double w);

/// c(u,v) = chi(u,v)*u.  Negative inputs are rejected.
double c_eval(const ModelSpec& spec, double u, double v);

/// c_k(u,v) = zeta_k(u) zeta_k(v) c(u,v): compactly supported C^2
/// regularization equal to c exactly on [0,k]^2 and zero outside
/// [0,k+w]^2.
double c_regularized(const ModelSpec& spec, double u, double v);

Sigma make_sigma_c(const ModelSpec& spec);
Sigma make_sigma_ck(const ModelSpec& spec);

/// F(u,v) = (M0 + ubar^a) vbar^b.
double f_eval(const ModelSpec& spec, double u, double v);

struct FDerivs {
  double Fu, Fv, Fuu, Fuv, Fvv;
};

/// Closed-form derivatives of F up to order two.
FDerivs f_derivs(const ModelSpec& spec, double u, double v);

/// Threshold M*[sigma](n,l): (1/4) ab/((a-1)(b-1)) times the maximum of
///   (a-1)^2/b^2 sigma^2 ubar^{a-2} vbar^2 + 4 (a+b-1)/(ab) ubar^a
/// over [0,n]x[0,l].  The maximum is located on a dense lattice and then
/// polished by local search so the returned value is accurate to near
/// machine precision; a Richardson-refined lattice estimate is kept for
/// diagnostics.
struct MStarResult {
  double value = 0.0;
  double lattice_max = 0.0;       // prefactor * best lattice value
  double richardson = 0.0;        // prefactor * extrapolated lattice max
  int lattice_intervals = 0;
};

MStarResult m_star_detailed(double a, double b, int n, int l,
                            const Sigma& sigma);
double m_star(double a, double b, int n, int l, const Sigma& sigma);
double m_star(const ModelSpec& spec, const Sigma& sigma);

/// Discriminant of the gradient quadratic form,
///   D[sigma](u,v) = (a-1)^2/b^2 sigma^2 ubar^{a-2} vbar^2
///                 + 4 (a+b-1)/(ab) ubar^a - 4 (a-1)(b-1)/(ab) M0.
double discriminant(const ModelSpec& spec, const Sigma& sigma, double u,
                    double v);

struct CoefficientBundle {
  double B1, B2, B4, Bnew, B5;
  double D;
};

/// Coefficients of the regrouped evolution identity.  m_star_value must
/// be M*[sigma](n,l) for the same sigma (pass it in; it is grid-searched
/// and therefore not recomputed per point).
CoefficientBundle b_coefficients(const ModelSpec& spec, const Sigma& sigma,
                                 double u, double v, double m_star_value);

/// Validation used by the config layer; returns human-readable problems.
std::vector<std::string> validate_model_spec(const ModelSpec& spec);

} // namespace taxis
