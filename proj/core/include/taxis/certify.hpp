#pragma once

#include "taxis/defect.hpp"
#include "taxis/test_functions.hpp"

#include <string>
#include <vector>

namespace taxis {

struct CertificateReport {
  enum class Verdict { Pass, Fail, NotApplicable };
  std::string clause;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0; // lhs - rhs
  double tolerance = 0.0;
  Verdict verdict = Verdict::NotApplicable;
  std::string metadata;

  bool passed() const { return verdict == Verdict::Pass; }
  bool failed() const { return verdict == Verdict::Fail; }
};

std::string to_string(CertificateReport::Verdict v);

/// Calibration constants for the discretization-aware tolerances.  They
/// are fixed once against the manufactured-solution suite and never
/// tuned per run; every tolerance is an explicit function of
/// (h, dt, dt_snap) scaled by the natural magnitude of the clause.
struct CertifyOptions {
  double T_support = 1.0;
  double c_super = 12.0;
  double c_veq = 4.0;
  double c_diss = 4.0;
  double c_strong = 5.0; // strong-form factor: 5 (h^2 + dt) scale
  int threads = 0;       // 0: use TAXIS_THREADS or hardware concurrency
};

/// Variational inequality for the coupled functional.  Inequality
/// clause: pass iff residual <= tolerance.  Requires a nonneg pair, a
/// snapshot cadence finer than T_support/64, and a trajectory covering
/// [0, T_support].
CertificateReport supersolution_residual(const Trajectory& traj,
                                         const TestPair& pair,
                                         const CertifyOptions& opt);

/// Weak form of the v-equation with the measure term; equality clause:
/// pass iff |residual| <= tolerance.  mu may be null (zero measure).
CertificateReport v_equation_residual(const Trajectory& traj,
                                      const DefectEstimate* mu,
                                      const TestPair& pair,
                                      const CertifyOptions& opt);

/// mass_u(t) + mu_total(t) = mass_u(0) at every snapshot.
CertificateReport mass_identity_check(const Trajectory& traj,
                                      const DefectEstimate* mu);

/// Integral dissipation estimate with M0 = M*[c_k]+1: the final
/// functional plus the accumulated gradient integrals stay below the
/// initial functional plus the coefficient-bound budget.
CertificateReport dissipation_check(const Trajectory& traj,
                                    const CertifyOptions& opt);

/// min_v(t) >= e^{-t} min(v0) - 1e-10 at every snapshot.
CertificateReport v_lower_bound_check(const Trajectory& traj);

/// mass_v(t) <= (1-e^{-t}) mass_u(0) + e^{-t} mass_v(0) + slack.
CertificateReport v_mass_bound_check(const Trajectory& traj);

/// Weak normal-trace identities: the time-integrated flux fields are
/// built with zero boundary faces, so the discrete Gauss-Green pairing
/// must vanish to roundoff against boundary-sensitive test functions.
std::vector<CertificateReport> boundary_trace_check(const Trajectory& traj,
                                                    const TemporalTest& psi);

/// Classical-consistency chain on smooth trajectories (max_u < n and
/// max_v < l throughout): vanishing defect, two-sided saturation of the
/// supersolution inequality, and small strong-form residuals.  Reports
/// NotApplicable when the smoothness precondition fails.
std::vector<CertificateReport> classical_consistency(const Trajectory& traj,
                                                     const CertifyOptions& opt);

/// The full clause suite for one trajectory (used by the pipeline).
std::vector<CertificateReport> certify_trajectory(const Trajectory& traj,
                                                  const DefectEstimate* mu,
                                                  const CertifyOptions& opt);

void write_certificates_csv(const std::string& path,
                            const std::vector<CertificateReport>& reports);
std::string certificates_summary(const std::vector<CertificateReport>& reports);

// --- manufactured chain-rule identity -----------------------------------

/// Smooth space-time fields for the evolution-identity residual; values
/// must stay strictly inside (0,n)x(0,l).
struct ManufacturedPair {
  std::function<double(double, double, double)> u; // (x, y, t)
  std::function<double(double, double, double)> v;
};

/// Max-norm residual of the regrouped evolution identity on one grid,
/// with the time derivative substituted from the spatial operators.
double chain_rule_residual(const ModelSpec& spec, const Sigma& sigma,
                           const Grid& grid, const ManufacturedPair& fields,
                           double t);

struct ConvergenceTable {
  std::vector<int> cells;
  std::vector<double> residuals;
  std::vector<double> orders; // log2(r_i / r_{i+1})
};

ConvergenceTable chain_rule_convergence(const ModelSpec& spec,
                                        const Sigma& sigma,
                                        const ManufacturedPair& fields,
                                        double t, int dim,
                                        const std::vector<int>& cell_counts,
                                        double extent);

} // namespace taxis
