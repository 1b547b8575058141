#include "taxis/certify.hpp"

#include "taxis/mesh_ops.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace taxis {

std::string to_string(CertificateReport::Verdict v) {
  switch (v) {
    case CertificateReport::Verdict::Pass: return "pass";
    case CertificateReport::Verdict::Fail: return "fail";
    case CertificateReport::Verdict::NotApplicable: return "not_applicable";
  }
  return "?";
}

namespace {

using Verdict = CertificateReport::Verdict;

std::string spec_metadata(const ModelSpec& s, const std::string& extra = {}) {
  std::ostringstream os;
  os << "a=" << s.a << " b=" << s.b << " n=" << s.n << " l=" << s.l
     << " M=" << s.M0 << " k=" << s.k;
  if (!extra.empty()) os << ' ' << extra;
  return os.str();
}

// Trapezoidal weights on the snapshot times.
std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t j = 0; j + 1 < t.size(); ++j) {
    const double half = 0.5 * (t[j + 1] - t[j]);
    w[j] += half;
    w[j + 1] += half;
  }
  return w;
}

// Derived per-snapshot fields entering the variational clauses.  sigma
// is the Def-3.1 coefficient c(u,v); every occurrence is multiplied by
// a positive power of the u cut-off, so values beyond the cut-off range
// never contribute.
struct DerivedFields {
  ScalarField F;          // (M + ub^a) vb^b
  ScalarField react;      // b (M + ub^a) vb^{b-1} (-v + u)
  ScalarField ub_half;    // ub^{a/2}
  ScalarField quad_mid;   // (1/b) ub^{a/2-1} (2b ub - (a-1) c vb)
  ScalarField quad_yy;    // (1/b) ((b-1)(M+ub^a) - a c ub^{a-1} vb)
  FaceField X;            // grad(ub^{a/2} vb^{b/2})
  FaceField Y;            // grad vb^{b/2}
  FaceField Z;            // X - ub^{a/2} Y (face-averaged weight)
  FaceField flux;         // (grad(ub^a vb^b) - ub^a grad vb^b) + fc grad vb^b
  FaceField grad_v;

  DerivedFields(const Grid& g)
      : F(g), react(g), ub_half(g), quad_mid(g), quad_yy(g), X(g), Y(g), Z(g),
        flux(g), grad_v(g) {}
};

DerivedFields make_derived(const SimState& state, const ModelSpec& spec,
                           const Sigma& sigma) {
  const Grid& g = state.u.grid();
  const double a = spec.a, b = spec.b, M = spec.M0;
  DerivedFields d(g);
  ScalarField prod_half(g), prod_ab(g), vb_half(g), vb_b(g), ub_a(g),
      flux_coef(g);
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    const double u = state.u[i];
    const double v = state.v[i];
    const double ub = cutoff(u, spec.n);
    const double vb = cutoff(v, spec.l);
    const double c = sigma(u, v);
    const double uba = std::pow(ub, a);
    const double vbb = std::pow(vb, b);
    const double ubh = std::pow(ub, 0.5 * a);
    const double vbh = std::pow(vb, 0.5 * b);
    d.F[i] = (M + uba) * vbb;
    d.react[i] = b * (M + uba) * std::pow(vb, b - 1.0) * (-v + u);
    d.ub_half[i] = ubh;
    d.quad_mid[i] =
        std::pow(ub, 0.5 * a - 1.0) * (2.0 * b * ub - (a - 1.0) * c * vb) / b;
    d.quad_yy[i] =
        ((b - 1.0) * (M + uba) - a * c * std::pow(ub, a - 1.0) * vb) / b;
    flux_coef[i] = (b * (M + uba) - a * c * std::pow(ub, a - 1.0) * vb) / b;
    prod_half[i] = ubh * vbh;
    prod_ab[i] = uba * vbb;
    vb_half[i] = vbh;
    vb_b[i] = vbb;
    ub_a[i] = uba;
  }
  d.X = gradient_neumann(prod_half);
  d.Y = gradient_neumann(vb_half);
  d.grad_v = gradient_neumann(state.v);

  const FaceField Yb = gradient_neumann(vb_b);
  const FaceField Gab = gradient_neumann(prod_ab);
  const FaceField ubh_f = face_average(d.ub_half);
  const FaceField uba_f = face_average(ub_a);
  const FaceField fc_f = face_average(flux_coef);
  d.Z = d.X;
  d.flux = Gab;
  for (int axis = 0; axis < g.dim(); ++axis) {
    auto& z = d.Z.comp(axis);
    const auto& y = d.Y.comp(axis);
    const auto& uh = ubh_f.comp(axis);
    for (std::size_t f = 0; f < z.size(); ++f) z[f] -= uh[f] * y[f];
    auto& fl = d.flux.comp(axis);
    const auto& yb = Yb.comp(axis);
    const auto& ua = uba_f.comp(axis);
    const auto& fc = fc_f.comp(axis);
    for (std::size_t f = 0; f < fl.size(); ++f)
      fl[f] += (fc[f] - ua[f]) * yb[f];
  }
  return d;
}

// int_Omega of a face-quadratic expression against a cellwise test
// function averaged onto faces:  sum over interior faces of
// (A_f B_f w_f) phi_f vol.
double face_quad_phi(const FaceField& A, const FaceField& B,
                     const ScalarField* weight, const ScalarField& phi) {
  const Grid& g = A.grid();
  const int nx = g.nx(), ny = g.ny();
  double sum = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int i = 1; i < nx; ++i) {
      const std::size_t f = A.xface(i, iy);
      double term = A.comp(0)[f] * B.comp(0)[f];
      if (weight)
        term *= 0.5 * (weight->at(i - 1, iy) + weight->at(i, iy));
      sum += term * 0.5 * (phi.at(i - 1, iy) + phi.at(i, iy));
    }
  if (g.dim() == 2)
    for (int j = 1; j < ny; ++j)
      for (int ix = 0; ix < nx; ++ix) {
        const std::size_t f = A.yface(ix, j);
        double term = A.comp(1)[f] * B.comp(1)[f];
        if (weight)
          term *= 0.5 * (weight->at(ix, j - 1) + weight->at(ix, j));
        sum += term * 0.5 * (phi.at(ix, j - 1) + phi.at(ix, j));
      }
  return sum * g.cell_volume();
}

// sum over interior faces of F_f (discrete grad phi)_f vol.
double flux_against_grad_phi(const FaceField& F, const ScalarField& phi) {
  const Grid& g = F.grid();
  const int nx = g.nx(), ny = g.ny();
  const double inv_hx = 1.0 / g.spacing(0);
  double sum = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int i = 1; i < nx; ++i)
      sum += F.comp(0)[F.xface(i, iy)] *
             (phi.at(i, iy) - phi.at(i - 1, iy)) * inv_hx;
  if (g.dim() == 2) {
    const double inv_hy = 1.0 / g.spacing(1);
    for (int j = 1; j < ny; ++j)
      for (int ix = 0; ix < nx; ++ix)
        sum += F.comp(1)[F.yface(ix, j)] *
               (phi.at(ix, j) - phi.at(ix, j - 1)) * inv_hy;
  }
  return sum * g.cell_volume();
}

struct PhiSeries {
  std::vector<double> A;    // int F phi
  std::vector<double> rhs;  // full supersolution right-hand side
  std::vector<double> B;    // int v phi
  std::vector<double> rhs_v; // -int grad v . grad phi + int (-v+u) phi
};

// Per-snapshot integrals for one spatial test function.
void accumulate_phi(const DerivedFields& d, const SimState& state,
                    const ModelSpec& spec, const ScalarField& phi,
                    PhiSeries& out) {
  const double a = spec.a, b = spec.b;
  const double quad =
      (a - 1.0) / a * face_quad_phi(d.Z, d.Z, nullptr, phi) +
      face_quad_phi(d.Z, d.Y, &d.quad_mid, phi) +
      face_quad_phi(d.Y, d.Y, &d.quad_yy, phi);
  const double flux_term = flux_against_grad_phi(d.flux, phi);
  const double react_term = integrate_product(d.react, phi);
  out.rhs.push_back(-4.0 * quad - flux_term - react_term);
  out.A.push_back(integrate_product(d.F, phi));

  ScalarField minus_v_plus_u(state.u.grid());
  for (std::size_t i = 0; i < state.u.size(); ++i)
    minus_v_plus_u[i] = -state.v[i] + state.u[i];
  out.rhs_v.push_back(-flux_against_grad_phi(d.grad_v, phi) +
                      integrate_product(minus_v_plus_u, phi));
  out.B.push_back(integrate_product(state.v, phi));
}

struct TolScales {
  double h2 = 0.0, dt = 0.0, snap2 = 0.0;
  double umax = 0.0, vmax = 0.0;
};

TolScales tolerance_scales(const Trajectory& traj) {
  TolScales s;
  const Grid& g = traj.grid();
  double h = g.spacing(0);
  if (g.dim() == 2) h = std::max(h, g.spacing(1));
  s.h2 = h * h;
  s.dt = traj.dt;
  const double gap = traj.max_snapshot_gap();
  s.snap2 = gap * gap;
  for (const SeriesRow& row : traj.series) s.umax = std::max(s.umax, row.max_u);
  for (const SimState& snap : traj.snapshots)
    s.vmax = std::max(s.vmax, snap.v.max());
  return s;
}

double phi_sup(const SpatialTest& phi, const Grid& g) {
  double m = 0.0;
  for (int iy = 0; iy < std::max(g.ny(), 1); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix)
      m = std::max(m, std::abs(phi.eval(g.center(0, ix),
                                        g.dim() == 2 ? g.center(1, iy) : 0.0)));
  return m;
}

void check_pair_preconditions(const Trajectory& traj,
                              const CertifyOptions& opt) {
  if (traj.snapshots.size() < 3)
    throw std::invalid_argument("certify: need at least 3 snapshots");
  if (traj.final_time() + 1e-12 < opt.T_support)
    throw std::invalid_argument(
        "certify: trajectory ends before the test-function support");
  if (traj.max_snapshot_gap() > opt.T_support / 64.0 + 1e-12)
    throw std::invalid_argument(
        "certify: snapshot cadence too coarse for T_support (Nyquist guard)");
}

struct PairEvaluation {
  double lhs_super = 0.0, rhs_super = 0.0;
  double lhs_veq = 0.0, rhs_veq = 0.0;
};

PairEvaluation evaluate_pair(const Trajectory& traj, const PhiSeries& series,
                             const TemporalTest& psi,
                             const std::vector<double>& mu_term) {
  std::vector<double> times;
  for (const SimState& s : traj.snapshots) times.push_back(s.t);
  const std::vector<double> w = trapezoid_weights(times);

  PairEvaluation ev;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double p = psi.eval(times[j]);
    const double dp = psi.deriv(times[j]);
    ev.lhs_super += -w[j] * dp * series.A[j];
    ev.rhs_super += w[j] * p * series.rhs[j];
    ev.lhs_veq += -w[j] * dp * series.B[j];
    ev.rhs_veq += w[j] * p * (series.rhs_v[j] +
                              (mu_term.empty() ? 0.0 : mu_term[j]));
  }
  ev.lhs_super += -psi.eval(0.0) * series.A[0];
  ev.lhs_veq += -psi.eval(0.0) * series.B[0];
  return ev;
}

} // namespace

CertificateReport supersolution_residual(const Trajectory& traj,
                                         const TestPair& pair,
                                         const CertifyOptions& opt) {
  if (!pair.nonneg)
    throw std::invalid_argument(
        "supersolution_residual: requires a nonnegative test pair");
  check_pair_preconditions(traj, opt);
  const ModelSpec& spec = traj.spec;
  const Sigma sigma = make_sigma_c(spec);
  const ScalarField phi = pair.phi.sample(traj.grid());

  PhiSeries series;
  for (const SimState& snap : traj.snapshots) {
    const DerivedFields d = make_derived(snap, spec, sigma);
    accumulate_phi(d, snap, spec, phi, series);
  }
  const PairEvaluation ev = evaluate_pair(traj, series, pair.psi, {});

  const TolScales s = tolerance_scales(traj);
  const double scale = (spec.M0 + std::pow(spec.n, spec.a)) *
                       std::pow(spec.l, spec.b) *
                       traj.grid().domain_volume() *
                       std::max(1.0, opt.T_support) *
                       std::max(1.0, phi_sup(pair.phi, traj.grid()));
  CertificateReport rep;
  rep.clause = "superu[" + pair.id + "]";
  rep.lhs = ev.lhs_super;
  rep.rhs = ev.rhs_super;
  rep.residual = ev.lhs_super - ev.rhs_super;
  rep.tolerance = opt.c_super * (s.h2 + s.dt + s.snap2) * scale;
  rep.verdict = rep.residual <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
  rep.metadata = spec_metadata(spec, "pair=" + pair.id);
  return rep;
}

CertificateReport v_equation_residual(const Trajectory& traj,
                                      const DefectEstimate* mu,
                                      const TestPair& pair,
                                      const CertifyOptions& opt) {
  check_pair_preconditions(traj, opt);
  const ModelSpec& spec = traj.spec;
  const Sigma sigma = make_sigma_c(spec);
  const ScalarField phi = pair.phi.sample(traj.grid());

  PhiSeries series;
  std::vector<double> mu_term;
  for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
    const SimState& snap = traj.snapshots[j];
    const DerivedFields d = make_derived(snap, spec, sigma);
    accumulate_phi(d, snap, spec, phi, series);
    if (mu) {
      double m = integrate_product(mu->density[j], phi);
      for (const auto& [cell, mass] : mu->atoms[j]) m += phi[cell] * mass;
      mu_term.push_back(m);
    }
  }
  const PairEvaluation ev = evaluate_pair(traj, series, pair.psi, mu_term);

  const TolScales s = tolerance_scales(traj);
  const double scale = (1.0 + s.umax + s.vmax) * traj.grid().domain_volume() *
                       std::max(1.0, opt.T_support) *
                       std::max(1.0, phi_sup(pair.phi, traj.grid()));
  CertificateReport rep;
  rep.clause = "superv[" + pair.id + "]";
  rep.lhs = ev.lhs_veq;
  rep.rhs = ev.rhs_veq;
  rep.residual = ev.lhs_veq - ev.rhs_veq;
  rep.tolerance = opt.c_veq * (s.h2 + s.dt + s.snap2) * scale;
  rep.verdict =
      std::abs(rep.residual) <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
  rep.metadata = spec_metadata(spec, "pair=" + pair.id);
  return rep;
}

CertificateReport mass_identity_check(const Trajectory& traj,
                                      const DefectEstimate* mu) {
  const double mass0 = traj.initial_mass_u();
  double worst = 0.0;
  double unc = 0.0;
  for (std::size_t j = 0; j < traj.series.size(); ++j) {
    const double mu_j = mu ? mu->mu_total[j] : 0.0;
    const double mass_j =
        mu ? mu->regular_mass[j] : traj.series[j].mass_u;
    worst = std::max(worst, std::abs(mass_j + mu_j - mass0));
    if (mu) unc = std::max(unc, mu->uncertainty[j]);
  }
  CertificateReport rep;
  rep.clause = "massu0";
  rep.lhs = worst;
  rep.rhs = 0.0;
  rep.residual = worst;
  rep.tolerance = unc + 1e-10 * (1.0 + std::abs(mass0));
  rep.verdict = worst <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
  rep.metadata = spec_metadata(traj.spec);
  return rep;
}

CertificateReport dissipation_check(const Trajectory& traj,
                                    const CertifyOptions& opt) {
  const ModelSpec& spec = traj.spec;
  const double b = spec.b;
  const double M_diss = traj.M_dissipation;
  const double C_B = b * (M_diss + std::pow(spec.n, spec.a)) *
                     std::pow(spec.l, spec.b);
  const double volume = traj.grid().domain_volume();
  const double T = traj.final_time();

  std::vector<double> times;
  for (const SeriesRow& r : traj.series) times.push_back(r.t);
  const std::vector<double> w = trapezoid_weights(times);
  double diss = 0.0;
  for (std::size_t j = 0; j < traj.series.size(); ++j)
    diss += w[j] * (traj.series[j].dissipation_1 + traj.series[j].dissipation_2);

  const TolScales s = tolerance_scales(traj);
  const double scale =
      (C_B * volume + traj.series.front().F_integral) * std::max(1.0, T);

  CertificateReport rep;
  rep.clause = "est1";
  rep.lhs = traj.series.back().F_integral + diss;
  rep.rhs = traj.series.front().F_integral + C_B * volume * T;
  rep.residual = rep.lhs - rep.rhs;
  rep.tolerance = opt.c_diss * (s.h2 + s.dt + s.snap2) * scale;
  rep.verdict = rep.residual <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
  rep.metadata =
      spec_metadata(spec, "M_diss=" + std::to_string(M_diss));
  return rep;
}

CertificateReport v_lower_bound_check(const Trajectory& traj) {
  const double min_v0 = traj.snapshots.front().v.min();
  double worst = std::numeric_limits<double>::infinity();
  for (const SeriesRow& row : traj.series)
    worst = std::min(worst, row.min_v - std::exp(-row.t) * min_v0);
  CertificateReport rep;
  rep.clause = "estvmin";
  rep.lhs = -worst;
  rep.rhs = 0.0;
  rep.residual = -worst;
  rep.tolerance = 1e-10;
  rep.verdict = rep.residual <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
  rep.metadata = spec_metadata(traj.spec);
  return rep;
}

CertificateReport v_mass_bound_check(const Trajectory& traj) {
  const double mu0 = traj.series.front().mass_u;
  const double mv0 = traj.series.front().mass_v;
  double worst = -std::numeric_limits<double>::infinity();
  for (const SeriesRow& row : traj.series) {
    const double bound = (1.0 - std::exp(-row.t)) * mu0 +
                         std::exp(-row.t) * mv0 +
                         (1e-8 + 2.0 * traj.dt * mu0);
    worst = std::max(worst, row.mass_v - bound);
  }
  CertificateReport rep;
  rep.clause = "massve";
  rep.lhs = worst;
  rep.rhs = 0.0;
  rep.residual = worst;
  rep.tolerance = 0.0;
  rep.verdict = rep.residual <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
  rep.metadata = spec_metadata(traj.spec);
  return rep;
}

std::vector<CertificateReport> boundary_trace_check(const Trajectory& traj,
                                                    const TemporalTest& psi) {
  const Grid& g = traj.grid();
  const ModelSpec& spec = traj.spec;
  const Sigma sigma = make_sigma_c(spec);

  std::vector<double> times;
  for (const SimState& s : traj.snapshots) times.push_back(s.t);
  const std::vector<double> w = trapezoid_weights(times);

  FaceField flux_int(g), gradv_int(g);
  for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
    const double pw = w[j] * psi.eval(times[j]);
    if (pw == 0.0) continue;
    DerivedFields d = make_derived(traj.snapshots[j], spec, sigma);
    d.flux *= pw;
    flux_int += d.flux;
    d.grad_v *= pw;
    gradv_int += d.grad_v;
  }

  // boundary-sensitive test functions: constants and ramps
  std::vector<ScalarField> phis;
  {
    ScalarField one(g, 1.0);
    phis.push_back(one);
    ScalarField rx(g);
    rx.fill_from([&](double x, double) { return x / g.extent(0); });
    phis.push_back(rx);
    ScalarField rx2(g);
    rx2.fill_from([&](double x, double) { return 1.0 - x / g.extent(0); });
    phis.push_back(rx2);
    if (g.dim() == 2) {
      ScalarField ry(g);
      ry.fill_from([&](double, double y) { return y / g.extent(1); });
      phis.push_back(ry);
    }
  }

  auto trace_report = [&](const char* clause, const FaceField& F) {
    const ScalarField divF = divergence(F);
    double fscale = 1.0;
    for (int axis = 0; axis < g.dim(); ++axis)
      for (double x : F.comp(axis)) fscale = std::max(fscale, std::abs(x));
    double worst = 0.0;
    for (const ScalarField& phi : phis)
      worst = std::max(worst, std::abs(gauss_green_residual(F, divF, phi)));
    CertificateReport rep;
    rep.clause = clause;
    rep.lhs = worst;
    rep.rhs = 0.0;
    rep.residual = worst;
    rep.tolerance = 1e-12 * static_cast<double>(g.num_cells()) * fscale;
    rep.verdict = worst <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
    rep.metadata = spec_metadata(spec, "psi=" + psi.name);
    return rep;
  };

  return {trace_report("prweakbc", flux_int),
          trace_report("vweakbc", gradv_int)};
}

std::vector<CertificateReport> classical_consistency(const Trajectory& traj,
                                                     const CertifyOptions& opt) {
  const ModelSpec& spec = traj.spec;
  const TolScales s = tolerance_scales(traj);

  bool smooth = true;
  for (const SeriesRow& row : traj.series)
    if (!(row.max_u < spec.n)) smooth = false;
  for (const SimState& snap : traj.snapshots)
    if (!(snap.v.max() < spec.l)) smooth = false;

  if (!smooth) {
    CertificateReport rep;
    rep.clause = "classical";
    rep.verdict = Verdict::NotApplicable;
    rep.metadata =
        spec_metadata(spec, "precondition max_u<n, max_v<l not met");
    return {rep};
  }

  std::vector<CertificateReport> out;

  // (i) vanishing defect: the mass identity pins the total density.
  {
    const double mass0 = traj.initial_mass_u();
    double xi = 0.0;
    for (const SeriesRow& row : traj.series)
      xi = std::max(xi, std::abs(mass0 - row.mass_u));
    CertificateReport rep;
    rep.clause = "classical_xi";
    rep.lhs = xi;
    rep.rhs = 0.0;
    rep.residual = xi;
    rep.tolerance = 1e-10 * (1.0 + std::abs(mass0));
    rep.verdict = xi <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
    rep.metadata = spec_metadata(spec);
    out.push_back(rep);
  }

  // (ii) two-sided saturation of the supersolution inequality.
  {
    double worst = 0.0;
    double tol = 0.0;
    for (const TestPair& pair : test_library(traj.grid(), opt.T_support)) {
      if (!pair.nonneg) continue;
      CertificateReport r = supersolution_residual(traj, pair, opt);
      worst = std::max(worst, std::abs(r.residual));
      tol = std::max(tol, r.tolerance);
    }
    CertificateReport rep;
    rep.clause = "classical_saturation";
    rep.lhs = worst;
    rep.rhs = 0.0;
    rep.residual = worst;
    rep.tolerance = tol;
    rep.verdict = worst <= tol ? Verdict::Pass : Verdict::Fail;
    rep.metadata = spec_metadata(spec);
    out.push_back(rep);
  }

  // (iii) pointwise strong-form residuals against the centered operator.
  {
    const Grid& g = traj.grid();
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < traj.snapshots.size(); ++j) {
      const SimState& s0 = traj.snapshots[j];
      const SimState& s1 = traj.snapshots[j + 1];
      const double dt_snap = s1.t - s0.t;
      ScalarField u_mid(g), v_mid(g), c_mid(g);
      for (std::size_t i = 0; i < u_mid.size(); ++i) {
        u_mid[i] = 0.5 * (s0.u[i] + s1.u[i]);
        v_mid[i] = 0.5 * (s0.v[i] + s1.v[i]);
        c_mid[i] = c_regularized(spec, u_mid[i], v_mid[i]);
      }
      FaceField Fu = gradient_neumann(u_mid);
      const FaceField Gv = gradient_neumann(v_mid);
      const FaceField cf = face_average(c_mid);
      for (int axis = 0; axis < g.dim(); ++axis) {
        auto& fu = Fu.comp(axis);
        const auto& gv = Gv.comp(axis);
        const auto& cc = cf.comp(axis);
        for (std::size_t f = 0; f < fu.size(); ++f) fu[f] -= cc[f] * gv[f];
      }
      Fu.zero_boundary_faces();
      const ScalarField div_u = divergence(Fu);
      const ScalarField lap_v = laplacian_neumann(v_mid);
      for (std::size_t i = 0; i < u_mid.size(); ++i) {
        const double ru = (s1.u[i] - s0.u[i]) / dt_snap - div_u[i];
        const double rv = (s1.v[i] - s0.v[i]) / dt_snap -
                          (lap_v[i] - v_mid[i] + u_mid[i]);
        worst = std::max(worst, std::max(std::abs(ru), std::abs(rv)));
      }
    }
    double chi_max = 0.0;
    for (int i = 0; i <= 40; ++i)
      for (int j = 0; j <= 40; ++j)
        chi_max = std::max(chi_max,
                           std::abs(spec.chi.eval(s.umax * i / 40.0,
                                                  s.vmax * j / 40.0)));
    const double scale = (1.0 + s.umax + s.vmax) * (1.0 + chi_max);
    CertificateReport rep;
    rep.clause = "classical_strong";
    rep.lhs = worst;
    rep.rhs = 0.0;
    rep.residual = worst;
    rep.tolerance = opt.c_strong * (s.h2 + s.dt) * scale;
    rep.verdict = worst <= rep.tolerance ? Verdict::Pass : Verdict::Fail;
    rep.metadata = spec_metadata(spec);
    out.push_back(rep);
  }
  return out;
}

std::vector<CertificateReport> certify_trajectory(const Trajectory& traj,
                                                  const DefectEstimate* mu,
                                                  const CertifyOptions& opt) {
  const std::vector<TestPair> pairs = test_library(traj.grid(), opt.T_support);

  int threads = opt.threads;
  if (threads <= 0) {
    if (const char* env = std::getenv("TAXIS_THREADS"))
      threads = std::atoi(env);
    if (threads <= 0)
      threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }

  // pair clauses evaluate concurrently; everything lands in fixed slots
  std::vector<CertificateReport> super_reports(pairs.size());
  std::vector<CertificateReport> veq_reports(pairs.size());
  std::vector<char> has_super(pairs.size(), 0);
  {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= pairs.size()) return;
        if (pairs[i].nonneg) {
          super_reports[i] = supersolution_residual(traj, pairs[i], opt);
          has_super[i] = 1;
        }
        veq_reports[i] = v_equation_residual(traj, mu, pairs[i], opt);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();
  }

  std::vector<CertificateReport> out;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (has_super[i]) out.push_back(super_reports[i]);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    out.push_back(veq_reports[i]);
  out.push_back(mass_identity_check(traj, mu));
  out.push_back(v_mass_bound_check(traj));
  out.push_back(v_lower_bound_check(traj));
  out.push_back(dissipation_check(traj, opt));
  for (CertificateReport& r :
       boundary_trace_check(traj, temporal_test_library(opt.T_support)[1]))
    out.push_back(std::move(r));
  for (CertificateReport& r : classical_consistency(traj, opt))
    out.push_back(std::move(r));
  return out;
}

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
} // namespace

void write_certificates_csv(const std::string& path,
                            const std::vector<CertificateReport>& reports) {
  std::ofstream os(path, std::ios::trunc);
  if (!os)
    throw std::runtime_error("write_certificates_csv: cannot open " + path);
  os << "clause,lhs,rhs,residual,tolerance,verdict\n";
  for (const CertificateReport& r : reports)
    os << r.clause << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ','
       << fmt(r.residual) << ',' << fmt(r.tolerance) << ','
       << to_string(r.verdict) << '\n';
}

std::string certificates_summary(const std::vector<CertificateReport>& reports) {
  std::ostringstream os;
  std::size_t pass = 0, fail = 0, na = 0;
  for (const CertificateReport& r : reports) {
    switch (r.verdict) {
      case Verdict::Pass: ++pass; break;
      case Verdict::Fail: ++fail; break;
      case Verdict::NotApplicable: ++na; break;
    }
  }
  os << "certificates: " << pass << " passed, " << fail << " failed, " << na
     << " not applicable\n";
  for (const CertificateReport& r : reports) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-34s %-14s residual=%-12.4g tol=%-12.4g\n",
                  r.clause.c_str(), to_string(r.verdict).c_str(), r.residual,
                  r.tolerance);
    os << line;
  }
  return os.str();
}

} // namespace taxis
