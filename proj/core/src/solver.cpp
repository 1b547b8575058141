#include "taxis/solver.hpp"

#include "taxis/mesh_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace taxis {

namespace {

// Direct solver for (c I - gamma Delta_1d) x = rhs on a line of m cells
// with zero-flux ends.  The matrix is a symmetric tridiagonal M-matrix;
// Thomas elimination with nonpositive off-diagonals keeps nonnegative
// right-hand sides nonnegative through both sweeps.
class TridiagNeumann {
public:
  void factor(int m, double c, double gamma_over_h2) {
    m_ = m;
    off_ = -gamma_over_h2;
    diag_.resize(m);
    w_.resize(m);
    double prev = c + gamma_over_h2;
    diag_[0] = prev;
    w_[0] = 0.0;
    for (int i = 1; i < m; ++i) {
      const double b = (i == m - 1) ? c + gamma_over_h2 : c + 2.0 * gamma_over_h2;
      const double w = off_ / prev;
      w_[i] = w;
      prev = b - w * off_;
      if (!(prev > 0.0))
        throw std::runtime_error("TridiagNeumann: lost diagonal dominance");
      diag_[i] = prev;
    }
  }

  void solve(double* x, std::ptrdiff_t stride) const {
    for (int i = 1; i < m_; ++i)
      x[i * stride] -= w_[i] * x[(i - 1) * stride];
    x[(m_ - 1) * stride] /= diag_[m_ - 1];
    for (int i = m_ - 2; i >= 0; --i)
      x[i * stride] = (x[i * stride] - off_ * x[(i + 1) * stride]) / diag_[i];
  }

private:
  int m_ = 0;
  double off_ = 0.0;
  std::vector<double> diag_;
  std::vector<double> w_;
};

// (c I - gamma Delta) solve; exact in 1D, Douglas-factored
// (c)(I - (gamma/c) Dxx)(I - (gamma/c) Dyy) in 2D.  Every factor has
// unit column sums, so the solve preserves sums exactly in real
// arithmetic, and each sweep is positivity-preserving.
void helmholtz_solve(ScalarField& x, double c, double gamma) {
  const Grid& g = x.grid();
  const int nx = g.nx(), ny = g.ny();
  const double beta = gamma / c;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] /= c;
  TridiagNeumann tx;
  tx.factor(nx, 1.0, beta / (g.spacing(0) * g.spacing(0)));
  for (int iy = 0; iy < ny; ++iy) tx.solve(&x.at(0, iy), 1);
  if (g.dim() == 2) {
    TridiagNeumann ty;
    ty.factor(ny, 1.0, beta / (g.spacing(1) * g.spacing(1)));
    for (int ix = 0; ix < nx; ++ix) ty.solve(&x.at(ix, 0), nx);
  }
}

// chi-part of the regularized flux coefficient: c_k(u,v)/u extended by
// continuity, used as the face velocity multiplier.
double zeta_chi(const ModelSpec& spec, double u, double v) {
  u = std::max(u, 0.0);
  v = std::max(v, 0.0);
  const double zu = zeta_plateau(u, spec.k, spec.plateau_width);
  if (zu == 0.0) return 0.0;
  const double zv = zeta_plateau(v, spec.k, spec.plateau_width);
  if (zv == 0.0) return 0.0;
  return zu * zv * spec.chi.eval(u, v);
}

struct AdvectionFluxes {
  FaceField flux;      // upwind chemotactic flux c_k(u,v) dv/dn per face
  double max_out_rate; // max over cells of the outgoing velocity sum / h
};

AdvectionFluxes advective_fluxes(const ScalarField& u, const ScalarField& v,
                                 const ModelSpec& spec) {
  const Grid& g = u.grid();
  AdvectionFluxes out{FaceField(g), 0.0};
  const int nx = g.nx(), ny = g.ny();
  const double inv_hx = 1.0 / g.spacing(0);
  const double inv_hy = g.dim() == 2 ? 1.0 / g.spacing(1) : 0.0;
  ScalarField out_rate(g);

  for (int iy = 0; iy < ny; ++iy)
    for (int i = 1; i < nx; ++i) {
      const double grad = (v.at(i, iy) - v.at(i - 1, iy)) * inv_hx;
      const double uf = 0.5 * (u.at(i - 1, iy) + u.at(i, iy));
      const double vf = 0.5 * (v.at(i - 1, iy) + v.at(i, iy));
      const double w = zeta_chi(spec, uf, vf) * grad;
      const double up = w >= 0.0 ? u.at(i - 1, iy) : u.at(i, iy);
      out.flux.comp(0)[out.flux.xface(i, iy)] = w * up;
      if (w >= 0.0)
        out_rate.at(i - 1, iy) += w * inv_hx;
      else
        out_rate.at(i, iy) -= w * inv_hx;
    }
  if (g.dim() == 2)
    for (int j = 1; j < ny; ++j)
      for (int ix = 0; ix < nx; ++ix) {
        const double grad = (v.at(ix, j) - v.at(ix, j - 1)) * inv_hy;
        const double uf = 0.5 * (u.at(ix, j - 1) + u.at(ix, j));
        const double vf = 0.5 * (v.at(ix, j - 1) + v.at(ix, j));
        const double w = zeta_chi(spec, uf, vf) * grad;
        const double up = w >= 0.0 ? u.at(ix, j - 1) : u.at(ix, j);
        out.flux.comp(1)[out.flux.yface(ix, j)] = w * up;
        if (w >= 0.0)
          out_rate.at(ix, j - 1) += w * inv_hy;
        else
          out_rate.at(ix, j) -= w * inv_hy;
      }
  out.max_out_rate = out_rate.max();
  return out;
}

} // namespace

ScalarField make_profile(const Grid& grid, const ProfileSpec& p) {
  ScalarField f(grid);
  switch (p.kind) {
    case ProfileSpec::Kind::Constant:
      f.fill_from([&](double, double) { return p.value; });
      break;
    case ProfileSpec::Kind::Gaussian: {
      const int d = grid.dim();
      const double norm =
          std::pow(2.0 * std::numbers::pi * p.sigma * p.sigma, 0.5 * d);
      const double amp = (p.mass - p.floor * grid.domain_volume()) / norm;
      if (!(amp > 0.0))
        throw std::invalid_argument(
            "make_profile: gaussian mass too small for the requested floor");
      const double inv2s2 = 1.0 / (2.0 * p.sigma * p.sigma);
      f.fill_from([&](double x, double y) {
        const double dx = x - p.center_x;
        const double dy = d == 2 ? y - p.center_y : 0.0;
        return p.floor + amp * std::exp(-(dx * dx + dy * dy) * inv2s2);
      });
      break;
    }
    case ProfileSpec::Kind::Cosine: {
      if (!(p.offset > std::abs(p.amplitude)))
        throw std::invalid_argument(
            "make_profile: cosine profile needs offset > |amplitude|");
      const double kx = p.mode_x * std::numbers::pi / grid.extent(0);
      const double ky = grid.dim() == 2 && p.mode_y > 0
                            ? p.mode_y * std::numbers::pi / grid.extent(1)
                            : 0.0;
      f.fill_from([&](double x, double y) {
        double m = std::cos(kx * x);
        if (ky > 0.0) m *= std::cos(ky * y);
        return p.offset + p.amplitude * m;
      });
      break;
    }
  }
  if (p.min_mass > 0.0) {
    const double mass = integrate(f);
    if (mass < p.min_mass) {
      const double s = p.min_mass / mass;
      for (std::size_t i = 0; i < f.size(); ++i) f[i] *= s;
    }
  }
  return f;
}

SimState init_data(const Grid& grid, const ProfileSpec& u_profile,
                   const ProfileSpec& v_profile) {
  SimState s{0.0, make_profile(grid, u_profile), make_profile(grid, v_profile)};
  if (!(s.u.min() > 0.0) || !(s.v.min() > 0.0))
    throw std::invalid_argument("init_data: profiles must be strictly positive");
  return s;
}

StepResult step(const SimState& state, const ModelSpec& spec,
                const StepControl& ctl, const SourceTerms* sources) {
  const Grid& g = state.u.grid();
  if (!(ctl.dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  const bool strict_v = state.v.min() > 0.0;

  double dt = ctl.dt;
  for (int attempt = 0; attempt <= ctl.max_halvings; ++attempt, dt *= 0.5) {
    // v first: backward Euler on lap v - v + u with the old u.
    ScalarField v_new = state.v;
    for (std::size_t i = 0; i < v_new.size(); ++i)
      v_new[i] += dt * state.u[i];
    if (sources && sources->sv) {
      ScalarField sv(g);
      sv.fill_from([&](double x, double y) { return sources->sv(x, y, state.t); });
      for (std::size_t i = 0; i < v_new.size(); ++i) v_new[i] += dt * sv[i];
    }
    helmholtz_solve(v_new, 1.0 + dt, dt);

    const AdvectionFluxes adv = advective_fluxes(state.u, v_new, spec);
    const double cfl = dt * adv.max_out_rate;
    if (cfl > ctl.cfl_target) continue;

    ScalarField u_new = state.u;
    {
      const ScalarField div = divergence(adv.flux);
      for (std::size_t i = 0; i < u_new.size(); ++i) u_new[i] -= dt * div[i];
    }
    if (sources && sources->su) {
      ScalarField su(g);
      su.fill_from([&](double x, double y) { return sources->su(x, y, state.t); });
      for (std::size_t i = 0; i < u_new.size(); ++i) u_new[i] += dt * su[i];
    }
    if (ctl.enforce_positivity && u_new.min() < 0.0) continue;
    helmholtz_solve(u_new, 1.0, dt);

    if (!u_new.all_finite() || !v_new.all_finite())
      throw std::runtime_error("step: non-finite state (linear solve failed)");
    if (ctl.enforce_positivity) {
      if (u_new.min() < 0.0)
        throw std::runtime_error("step: positivity of u lost");
      if (strict_v ? !(v_new.min() > 0.0) : v_new.min() < 0.0)
        throw std::runtime_error("step: positivity of v lost");
    }
    return StepResult{SimState{state.t + dt, std::move(u_new), std::move(v_new)},
                      dt, attempt, cfl};
  }
  throw std::runtime_error("step: dt halving exhausted (CFL or positivity)");
}

SeriesRow compute_series_row(const SimState& state, const ModelSpec& spec,
                             double m_star_ck) {
  const Grid& g = state.u.grid();
  ModelSpec diss = spec;
  diss.M0 = m_star_ck + 1.0;
  const Sigma sigma = make_sigma_ck(diss);

  SeriesRow row;
  row.t = state.t;
  row.mass_u = integrate(state.u);
  row.mass_v = integrate(state.v);
  row.min_v = state.v.min();
  row.max_u = state.u.max();

  const double a = spec.a, b = spec.b;
  ScalarField prod_half(g), vb_half(g), B1(g), Fcell(g);
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      const double u = state.u.at(ix, iy);
      const double v = state.v.at(ix, iy);
      const double ub = cutoff(u, spec.n);
      const double vb = cutoff(v, spec.l);
      const double uh = std::pow(ub, 0.5 * a);
      const double vh = std::pow(vb, 0.5 * b);
      prod_half.at(ix, iy) = uh * vh;
      vb_half.at(ix, iy) = vh;
      B1.at(ix, iy) = b_coefficients(diss, sigma, u, v, m_star_ck).B1;
      Fcell.at(ix, iy) = f_eval(diss, u, v);
    }
  row.F_integral = integrate(Fcell);

  const FaceField X = gradient_neumann(prod_half);
  const FaceField Y = gradient_neumann(vb_half);
  const FaceField B1f = face_average(B1);
  double diss1 = 0.0;
  {
    // |X + B1 Y|^2 accumulated per interior face
    const int nx = g.nx(), ny = g.ny();
    for (int iy = 0; iy < ny; ++iy)
      for (int i = 1; i < nx; ++i) {
        const std::size_t f = X.xface(i, iy);
        const double z = X.comp(0)[f] + B1f.comp(0)[f] * Y.comp(0)[f];
        diss1 += z * z;
      }
    if (g.dim() == 2)
      for (int j = 1; j < ny; ++j)
        for (int ix = 0; ix < nx; ++ix) {
          const std::size_t f = X.yface(ix, j);
          const double z = X.comp(1)[f] + B1f.comp(1)[f] * Y.comp(1)[f];
          diss1 += z * z;
        }
    diss1 *= g.cell_volume();
  }
  row.dissipation_1 = 4.0 * (a - 1.0) / a * diss1;
  row.dissipation_2 = 4.0 * (b - 1.0) / b * face_inner_product(Y, Y);
  return row;
}

Trajectory run(const SimState& initial, const ModelSpec& spec,
               const StepControl& ctl, const RunSchedule& schedule,
               const SourceTerms* sources) {
  if (schedule.t_final < 0.0)
    throw std::invalid_argument("run: t_final must be >= 0");
  Trajectory traj;
  traj.spec = spec;
  traj.dt = ctl.dt;
  traj.has_sources = sources != nullptr;
  traj.m_star_ck = m_star(spec, make_sigma_ck(spec));
  traj.M_dissipation = traj.m_star_ck + 1.0;
  traj.blowup_ceiling = schedule.blowup_ceiling > 0.0
                            ? schedule.blowup_ceiling
                            : 1e6 * initial.u.max();

  traj.snapshots.push_back(initial);
  traj.series.push_back(compute_series_row(initial, spec, traj.m_star_ck));

  const double mass0 = traj.series.front().mass_u;
  const double snap_dt =
      schedule.snapshot_dt > 0.0 ? schedule.snapshot_dt : schedule.t_final;
  long snap_index = 1;
  auto snap_time = [&](long i) {
    return std::min(i * snap_dt, schedule.t_final);
  };

  SimState state = initial;
  StepControl step_ctl = ctl;
  const double t_eps = 1e-12 * std::max(schedule.t_final, 1.0);

  while (state.t < schedule.t_final - t_eps) {
    const double next_snap = snap_time(snap_index);
    StepControl this_ctl = step_ctl;
    this_ctl.dt = std::min(step_ctl.dt, next_snap - state.t);
    StepResult r = step(state, spec, this_ctl, sources);
    if (r.halvings > 0)
      step_ctl.dt = std::min(step_ctl.dt, r.dt_used);
    state = std::move(r.state);

    if (ctl.check_conservation && !sources) {
      const double drift = std::abs(integrate(state.u) - mass0);
      if (drift > 1e-10 * std::max(std::abs(mass0), 1.0))
        throw std::runtime_error("run: discrete u-mass drifted");
    }

    const double max_u = state.u.max();
    if (max_u > traj.blowup_ceiling) {
      traj.blowup_suspected = true;
      traj.snapshots.push_back(state);
      traj.series.push_back(compute_series_row(state, spec, traj.m_star_ck));
      return traj;
    }
    if (state.t >= next_snap - t_eps) {
      state.t = next_snap; // land exactly on the schedule
      traj.snapshots.push_back(state);
      traj.series.push_back(compute_series_row(state, spec, traj.m_star_ck));
      ++snap_index;
    }
  }
  return traj;
}

VLowerBoundReport check_v_lower_bound(const Trajectory& traj, double tau,
                                      double T) {
  VLowerBoundReport report;
  if (!(tau < T)) return report; // empty interval: nothing to check
  report.applicable = true;

  const ScalarField& v0 = traj.snapshots.front().v;
  const double min_v0 = v0.min();

  // analytic floor e^{-t} min(v0)
  double margin_an = std::numeric_limits<double>::infinity();
  for (const SeriesRow& row : traj.series)
    if (row.t >= tau && row.t <= T)
      margin_an = std::min(margin_an, row.min_v - std::exp(-row.t) * min_v0);
  report.min_margin_analytic = margin_an;

  // u == 0 reference run: pure decay-diffusion subsolution, stepped to
  // the same snapshot times.
  ScalarField vref = v0;
  ScalarField zero(v0.grid(), 0.0);
  double margin_ref = std::numeric_limits<double>::infinity();
  double t_prev = traj.snapshots.front().t;
  for (std::size_t s = 1; s < traj.snapshots.size(); ++s) {
    const double t_next = traj.snapshots[s].t;
    double t = t_prev;
    // march with the trajectory's snapshot spacing subdivided finely
    const int substeps = 32;
    const double dt = (t_next - t_prev) / substeps;
    for (int q = 0; q < substeps; ++q) {
      helmholtz_solve(vref, 1.0 + dt, dt);
      t += dt;
    }
    if (t_next >= tau && t_next <= T) {
      double worst = std::numeric_limits<double>::infinity();
      const ScalarField& v = traj.snapshots[s].v;
      for (std::size_t i = 0; i < v.size(); ++i)
        worst = std::min(worst, v[i] - vref[i]);
      margin_ref = std::min(margin_ref, worst);
    }
    t_prev = t_next;
  }
  report.min_margin_reference = margin_ref;
  return report;
}

double Trajectory::max_snapshot_gap() const {
  double gap = 0.0;
  for (std::size_t i = 1; i < snapshots.size(); ++i)
    gap = std::max(gap, snapshots[i].t - snapshots[i - 1].t);
  return gap;
}

Trajectory reverse_trajectory(const Trajectory& traj) {
  Trajectory rev = traj;
  const double T = traj.final_time();
  const std::size_t n = traj.snapshots.size();
  for (std::size_t i = 0; i < n; ++i) {
    rev.snapshots[i] = traj.snapshots[n - 1 - i];
    rev.snapshots[i].t = T - traj.snapshots[n - 1 - i].t;
  }
  for (std::size_t i = 0; i < n; ++i) {
    rev.series[i] = traj.series[n - 1 - i];
    rev.series[i].t = T - traj.series[n - 1 - i].t;
  }
  return rev;
}

} // namespace taxis
