#pragma once

#include "taxis/solver.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace taxis {

/// Defect-measure estimate extracted from a sequence of runs with
/// increasing regularization index k on a shared grid and schedule.
/// mu is represented as a cellwise density plus a list of atoms; the
/// decomposition is scaled so integrate(density) + sum(atoms) equals
/// mu_total at every sample time.  regular_mass is the mass of the
/// finest run with the estimated defect removed, so that
/// regular_mass(t) + mu_total(t) = mass_u(0) holds by construction.
struct DefectEstimate {
  double threshold = 0.0;
  double mass0 = 0.0; // finest-run initial mass
  std::vector<double> times;
  std::vector<double> mu_total;
  std::vector<double> uncertainty;
  std::vector<double> regular_mass;
  std::vector<ScalarField> density;
  std::vector<std::vector<std::pair<std::size_t, double>>> atoms;

  std::size_t size() const { return times.size(); }
  /// mu_total at time t (exact match against the sample times).
  double mu_at(double t) const;
  double uncertainty_at(double t) const;
  /// Zero measure on the given schedule.
  static DefectEstimate zero(const Trajectory& traj);
};

/// int (u - threshold)_+ dx : the concentration proxy.
double excess_mass(const ScalarField& u, double threshold);

/// Richardson extrapolation in 1/k of the excess masses across the runs
/// (>= 3 runs, identical grid and schedule, strictly increasing k).
/// The uncertainty is the difference of the last two extrapolants.
DefectEstimate estimate_defect(const std::vector<const Trajectory*>& k_runs,
                               double threshold);

DefectEstimate estimate_defect(const std::vector<Trajectory>& k_runs,
                               double threshold);

struct BlowupReport {
  bool suspected = false;
  double t_onset = 0.0;                  // only meaningful when suspected
  double max_log_slope = 0.0;
  std::vector<std::pair<double, double>> growth_curve; // (t, max_u)
  std::vector<std::size_t> concentration_cells;
};

/// Suspects blow-up when max_u crosses the ceiling or its trailing
/// log-slope exceeds rate_threshold (e-folds per unit time).
BlowupReport detect_blowup(const Trajectory& traj, double ceiling,
                           double window, double rate_threshold = 25.0);

std::string blowup_summary(const BlowupReport& report);

void write_defect_csv(const std::string& path, const DefectEstimate& est);
void write_atoms_csv(const std::string& path, const DefectEstimate& est);

} // namespace taxis
