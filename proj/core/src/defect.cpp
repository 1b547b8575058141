#include "taxis/defect.hpp"

#include "taxis/mesh_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace taxis {

double DefectEstimate::mu_at(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-12 * (1.0 + std::abs(t)))
      return mu_total[i];
  throw std::invalid_argument("DefectEstimate::mu_at: no sample at t");
}

double DefectEstimate::uncertainty_at(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-12 * (1.0 + std::abs(t)))
      return uncertainty[i];
  throw std::invalid_argument("DefectEstimate::uncertainty_at: no sample at t");
}

DefectEstimate DefectEstimate::zero(const Trajectory& traj) {
  DefectEstimate est;
  est.mass0 = traj.initial_mass_u();
  for (const SeriesRow& row : traj.series) {
    est.times.push_back(row.t);
    est.mu_total.push_back(0.0);
    est.uncertainty.push_back(0.0);
    est.regular_mass.push_back(row.mass_u);
    est.density.emplace_back(traj.grid(), 0.0);
    est.atoms.emplace_back();
  }
  return est;
}

double excess_mass(const ScalarField& u, double threshold) {
  const double vol = u.grid().cell_volume();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    sum += std::max(u[i] - threshold, 0.0);
  return sum * vol;
}

DefectEstimate estimate_defect(const std::vector<const Trajectory*>& k_runs,
                               double threshold) {
  if (k_runs.size() < 3)
    throw std::invalid_argument("estimate_defect: need at least 3 runs");
  for (std::size_t i = 1; i < k_runs.size(); ++i) {
    if (!(k_runs[i]->spec.k > k_runs[i - 1]->spec.k))
      throw std::invalid_argument(
          "estimate_defect: regularization indices must increase");
    if (!(k_runs[i]->grid() == k_runs[0]->grid()))
      throw std::invalid_argument("estimate_defect: runs must share the grid");
    if (k_runs[i]->snapshots.size() != k_runs[0]->snapshots.size())
      throw std::invalid_argument(
          "estimate_defect: runs must share the snapshot schedule");
  }
  const Trajectory& finest = *k_runs.back();
  const Grid& grid = finest.grid();
  const double vol = grid.cell_volume();
  const std::size_t n_snap = finest.snapshots.size();

  DefectEstimate est;
  est.threshold = threshold;
  est.mass0 = finest.initial_mass_u();

  for (std::size_t j = 0; j < n_snap; ++j) {
    const double t = finest.snapshots[j].t;
    std::vector<double> k_values, excesses;
    for (const Trajectory* traj : k_runs) {
      k_values.push_back(static_cast<double>(traj->spec.k));
      excesses.push_back(excess_mass(traj->snapshots[j].u, threshold));
    }
    // Richardson in 1/k: eliminate the c/k correction pairwise.
    std::vector<double> extrapolants;
    for (std::size_t i = 0; i + 1 < excesses.size(); ++i) {
      const double k1 = k_values[i], k2 = k_values[i + 1];
      extrapolants.push_back((k2 * excesses[i + 1] - k1 * excesses[i]) /
                             (k2 - k1));
    }
    double mu = extrapolants.back();
    double unc =
        std::abs(extrapolants.back() - extrapolants[extrapolants.size() - 2]);
    // Clamp into the physically admissible range and absorb the shift.
    const double clamped = std::clamp(mu, 0.0, est.mass0);
    unc += std::abs(mu - clamped);
    mu = clamped;

    est.times.push_back(t);
    est.mu_total.push_back(mu);
    est.uncertainty.push_back(unc);

    // Decompose the finest run's excess profile: atoms where a single
    // cell dominates its neighborhood's defect mass, smooth density for
    // the rest; both scaled so they sum to mu exactly.
    const ScalarField& u = finest.snapshots[j].u;
    ScalarField excess_cells(grid, 0.0);
    double excess_total = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) {
      const double e = std::max(u[c] - threshold, 0.0) * vol;
      excess_cells[c] = e;
      excess_total += e;
    }
    ScalarField density(grid, 0.0);
    std::vector<std::pair<std::size_t, double>> atoms;
    if (excess_total > 0.0 && mu > 0.0) {
      const double scale = mu / excess_total;
      const int nx = grid.nx(), ny = grid.ny();
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
          const std::size_t c = grid.index(ix, iy);
          if (excess_cells[c] <= 0.0) continue;
          double local = 0.0;
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              const int jx = ix + dx, jy = iy + dy;
              if (jx < 0 || jy < 0 || jx >= nx || jy >= ny) continue;
              local += excess_cells[grid.index(jx, jy)];
            }
          if (excess_cells[c] >= 0.9 * local)
            atoms.emplace_back(c, excess_cells[c] * scale);
          else
            density[c] = excess_cells[c] * scale / vol;
        }
    }
    est.density.push_back(std::move(density));
    est.atoms.push_back(std::move(atoms));
    est.regular_mass.push_back(finest.series[j].mass_u - mu);
  }
  return est;
}

DefectEstimate estimate_defect(const std::vector<Trajectory>& k_runs,
                               double threshold) {
  std::vector<const Trajectory*> ptrs;
  for (const Trajectory& t : k_runs) ptrs.push_back(&t);
  return estimate_defect(ptrs, threshold);
}

BlowupReport detect_blowup(const Trajectory& traj, double ceiling,
                           double window, double rate_threshold) {
  BlowupReport report;
  for (const SeriesRow& row : traj.series)
    report.growth_curve.emplace_back(row.t, row.max_u);

  for (std::size_t r = 0; r < report.growth_curve.size(); ++r) {
    const auto [t, m] = report.growth_curve[r];
    if (m > ceiling) {
      report.suspected = true;
      report.t_onset = t;
      break;
    }
    // trailing log-slope over the window
    for (std::size_t q = 0; q < r; ++q) {
      const auto [tq, mq] = report.growth_curve[q];
      if (t - tq > window || !(mq > 0.0) || !(m > 0.0)) continue;
      if (t - tq <= 0.0) continue;
      const double slope = (std::log(m) - std::log(mq)) / (t - tq);
      report.max_log_slope = std::max(report.max_log_slope, slope);
      if (slope > rate_threshold) {
        report.suspected = true;
        report.t_onset = t;
        break;
      }
    }
    if (report.suspected) break;
  }

  const ScalarField& u_fin = traj.snapshots.back().u;
  const double peak = u_fin.max();
  for (std::size_t c = 0; c < u_fin.size(); ++c)
    if (u_fin[c] >= 0.5 * peak) report.concentration_cells.push_back(c);
  return report;
}

std::string blowup_summary(const BlowupReport& report) {
  std::ostringstream os;
  os << "blowup_suspected: " << (report.suspected ? "yes" : "no") << '\n';
  if (report.suspected) os << "t_onset: " << report.t_onset << '\n';
  os << "max_log_slope: " << report.max_log_slope << '\n';
  if (!report.growth_curve.empty())
    os << "max_u_final: " << report.growth_curve.back().second << '\n';
  os << "concentration_cells: " << report.concentration_cells.size() << '\n';
  return os.str();
}

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
} // namespace

void write_defect_csv(const std::string& path, const DefectEstimate& est) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("write_defect_csv: cannot open " + path);
  os << "t,mu_total,uncertainty,n_atoms\n";
  for (std::size_t i = 0; i < est.size(); ++i)
    os << fmt(est.times[i]) << ',' << fmt(est.mu_total[i]) << ','
       << fmt(est.uncertainty[i]) << ',' << est.atoms[i].size() << '\n';
}

void write_atoms_csv(const std::string& path, const DefectEstimate& est) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("write_atoms_csv: cannot open " + path);
  os << "t,cell,mass\n";
  for (std::size_t i = 0; i < est.size(); ++i)
    for (const auto& [cell, mass] : est.atoms[i])
      os << fmt(est.times[i]) << ',' << cell << ',' << fmt(mass) << '\n';
}

} // namespace taxis
