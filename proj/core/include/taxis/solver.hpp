#pragma once

#include "taxis/field.hpp"
#include "taxis/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace taxis {

struct SimState {
  double t = 0.0;
  ScalarField u;
  ScalarField v;
};

/// Time-step control for the semi-implicit upwind scheme.  dt is halved
/// whenever the advective CFL number would exceed cfl_target (or a
/// positivity check trips), up to max_halvings per step; it is never
/// raised again mid-run.
struct StepControl {
  double dt = 1e-3;
  double cfl_target = 0.5;
  int max_halvings = 20;
  bool enforce_positivity = true;
  bool check_conservation = true;
};

/// Optional manufactured source terms; evaluated at cell centers and the
/// old time level.  Used by the verification suite, not by production
/// configs.  Mass conservation checks are skipped when sources are set.
struct SourceTerms {
  std::function<double(double, double, double)> su; // (x, y, t)
  std::function<double(double, double, double)> sv;
};

struct SeriesRow {
  double t = 0.0;
  double mass_u = 0.0;
  double mass_v = 0.0;
  double min_v = 0.0;
  double max_u = 0.0;
  double F_integral = 0.0;
  double dissipation_1 = 0.0; // 4 (a-1)/a |grad(ub^{a/2} vb^{b/2}) + B1 grad vb^{b/2}|^2
  double dissipation_2 = 0.0; // 4 (b-1)/b |grad vb^{b/2}|^2
};

struct Trajectory {
  ModelSpec spec;
  std::vector<SimState> snapshots;
  std::vector<SeriesRow> series;
  double dt = 0.0; // configured step size of the producing run
  bool blowup_suspected = false;
  double blowup_ceiling = 0.0;
  double m_star_ck = 0.0;   // M*[c_k](n,l) used in the series columns
  double M_dissipation = 0.0; // m_star_ck + 1
  bool has_sources = false;

  const Grid& grid() const { return snapshots.front().u.grid(); }
  double final_time() const { return snapshots.back().t; }
  double initial_mass_u() const { return series.front().mass_u; }
  double max_snapshot_gap() const;
};

/// Initial-data profiles.  All profiles must be strictly positive.
struct ProfileSpec {
  enum class Kind { Constant, Gaussian, Cosine };
  Kind kind = Kind::Constant;
  double value = 1.0;     // constant level
  double mass = 1.0;      // gaussian: target total mass
  double sigma = 0.1;     // gaussian width
  double center_x = 0.5;
  double center_y = 0.5;
  double floor = 1e-6;    // gaussian floor
  double offset = 1.0;    // cosine offset
  double amplitude = 0.0; // cosine amplitude, |amplitude| < offset
  int mode_x = 1;
  int mode_y = 0;
  double min_mass = 0.0;  // if > 0, scale up so the discrete mass >= min_mass
};

ScalarField make_profile(const Grid& grid, const ProfileSpec& p);

/// State at t=0 from strictly positive profiles; the v profile is scaled
/// up when min_mass is set so its discrete mass dominates the requested
/// one.  Nonpositive profiles are rejected.
SimState init_data(const Grid& grid, const ProfileSpec& u_profile,
                   const ProfileSpec& v_profile);

struct StepResult {
  SimState state;
  double dt_used = 0.0;
  int halvings = 0;
  double cfl = 0.0;
};

/// One semi-implicit step:
///   v: backward Euler on lap v - v + u (direct tridiagonal solves;
///      Douglas factorization in 2D),
///   u: explicit upwind chemotactic flux c_k(u,v) grad v with face
///      velocities, then implicit diffusion.
/// The update conserves the discrete u-mass to roundoff and is an
/// M-matrix update, so nonnegative states stay nonnegative.
StepResult step(const SimState& state, const ModelSpec& spec,
                const StepControl& ctl, const SourceTerms* sources = nullptr);

struct RunSchedule {
  double t_final = 1.0;
  double snapshot_dt = 0.0;        // 0: snapshots only at 0 and t_final
  double blowup_ceiling = 0.0;     // 0: 1e6 * initial max_u
};

Trajectory run(const SimState& initial, const ModelSpec& spec,
               const StepControl& ctl, const RunSchedule& schedule,
               const SourceTerms* sources = nullptr);

/// Diagnostics row (masses, extrema, dissipation integrals) for a state.
SeriesRow compute_series_row(const SimState& state, const ModelSpec& spec,
                             double m_star_ck);

struct VLowerBoundReport {
  bool applicable = false;
  double min_margin_analytic = 0.0; // min over [tau,T] of min_v(t) - e^{-t} min v0
  double min_margin_reference = 0.0; // vs a u==0 comparison run
};

/// Lower-bound check for v on [tau,T]: the analytic floor e^{-t} min(v0)
/// and a u==0 reference run as discrete comparison subsolution.
VLowerBoundReport check_v_lower_bound(const Trajectory& traj, double tau,
                                      double T);

/// Snapshot order reversed and times remapped to T - t; the negative
/// control for the dissipation certificate.
Trajectory reverse_trajectory(const Trajectory& traj);

// --- persistence (series CSV + TAXF snapshots + plain-text manifest) ---

void save_trajectory(const std::string& dir, const Trajectory& traj,
                     bool write_fields = true);
Trajectory load_trajectory(const std::string& dir);
void write_series_csv(const std::string& path,
                      const std::vector<SeriesRow>& series);
std::vector<SeriesRow> read_series_csv(const std::string& path);

} // namespace taxis
