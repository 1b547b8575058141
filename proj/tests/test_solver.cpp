#include "doctest.h"

#include "taxis/mesh_ops.hpp"
#include "taxis/solver.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace taxis;

namespace {
constexpr double kPi = std::numbers::pi;

ModelSpec spec_chi(double chi0, int n = 4, int l = 4) {
  ModelSpec s;
  s.chi = Sensitivity::constant(chi0);
  s.a = 3.0;
  s.b = 3.0;
  s.n = n;
  s.l = l;
  s.M0 = 0.0;
  s.k = 4 * std::max(n, l);
  return s;
}

SimState constant_state(const Grid& g, double u0, double v0) {
  return SimState{0.0, ScalarField(g, u0), ScalarField(g, v0)};
}

} // namespace

TEST_CASE("constant state is an exact fixed point") {
  Grid g(2, {1.0, 1.0}, {16, 16});
  SimState s = constant_state(g, 0.8, 0.8);
  ModelSpec spec = spec_chi(1.5);
  StepControl ctl;
  ctl.dt = 0.05;
  SimState cur = s;
  for (int i = 0; i < 20; ++i) cur = step(cur, spec, ctl).state;
  for (std::size_t i = 0; i < cur.u.size(); ++i) {
    CHECK(cur.u[i] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(cur.v[i] == doctest::Approx(0.8).epsilon(1e-13));
  }
}

TEST_CASE("u==0: discrete v-mass follows the backward-Euler decay exactly") {
  Grid g(1, {2.0, 1.0}, {64, 1});
  SimState s{0.0, ScalarField(g, 0.0), ScalarField(g, 1.3)};
  ModelSpec spec = spec_chi(1.0);
  StepControl ctl;
  ctl.dt = 0.01;
  const double m0 = integrate(s.v);
  SimState cur = s;
  double expected = m0;
  for (int j = 1; j <= 200; ++j) {
    cur = step(cur, spec, ctl).state;
    expected /= (1.0 + ctl.dt);
    CHECK(integrate(cur.v) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(integrate(cur.u) == 0.0);
    // continuum comparison with the stated slack
    const double t = cur.t;
    CHECK(std::abs(integrate(cur.v) - std::exp(-t) * m0) <=
          ctl.dt * t * m0 + 1e-12);
  }
}

TEST_CASE("u-mass conserved to roundoff across steps (1D and 2D)") {
  for (int dim = 1; dim <= 2; ++dim) {
    Grid g = dim == 1 ? Grid(1, {1.0, 1.0}, {96, 1})
                      : Grid(2, {1.0, 1.0}, {32, 32});
    ProfileSpec up;
    up.kind = ProfileSpec::Kind::Cosine;
    up.offset = 1.0;
    up.amplitude = 0.6;
    up.mode_x = 1;
    up.mode_y = dim == 2 ? 1 : 0;
    ProfileSpec vp;
    vp.kind = ProfileSpec::Kind::Cosine;
    vp.offset = 0.8;
    vp.amplitude = -0.4;
    vp.mode_x = 1;
    SimState s = init_data(g, up, vp);
    ModelSpec spec = spec_chi(2.0);
    StepControl ctl;
    ctl.dt = 2e-3;
    const double m0 = integrate(s.u);
    SimState cur = s;
    for (int j = 0; j < 400; ++j) {
      cur = step(cur, spec, ctl).state;
      CHECK(std::abs(integrate(cur.u) - m0) <= 1e-12 * m0);
      CHECK(cur.u.min() >= 0.0);
      CHECK(cur.v.min() > 0.0);
    }
  }
}

TEST_CASE("chi==0: pure heat decay of a cosine mode") {
  Grid g(1, {1.0, 1.0}, {128, 1});
  ProfileSpec up;
  up.kind = ProfileSpec::Kind::Cosine;
  up.offset = 1.0;
  up.amplitude = 0.5;
  ProfileSpec vp;
  vp.kind = ProfileSpec::Kind::Constant;
  vp.value = 1.0;
  SimState s0 = init_data(g, up, vp);
  ModelSpec spec = spec_chi(0.0);
  StepControl ctl;
  ctl.dt = 1e-4;
  RunSchedule sched{0.25, 0.05, 0.0};
  Trajectory traj = run(s0, spec, ctl, sched);
  const double lam = kPi * kPi;
  for (const SimState& snap : traj.snapshots) {
    double err = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      const double x = g.center(0, i);
      const double exact =
          1.0 + 0.5 * std::exp(-lam * snap.t) * std::cos(kPi * x);
      err = std::max(err, std::abs(snap.u[g.index(i, 0)] - exact));
    }
    const double h = g.spacing(0);
    // dt error ~ lam^2 t dt / 2, h error ~ lam^2 h^2 t / 12, amplitude 0.5
    const double tol =
        0.5 * snap.t * lam * lam * (0.5 * ctl.dt + h * h / 12.0) * 1.5 + 1e-12;
    CHECK(err <= tol);
  }
}

TEST_CASE("v-mass bound holds with the discrete slack") {
  struct Cfg {
    double u0, v0;
  };
  const Cfg cfgs[] = {{1.0, 0.2}, {0.5, 1.5}, {2.0, 2.0}};
  for (const Cfg& c : cfgs) {
    Grid g(1, {1.0, 1.0}, {64, 1});
    ProfileSpec up;
    up.kind = ProfileSpec::Kind::Cosine;
    up.offset = c.u0;
    up.amplitude = 0.3 * c.u0;
    ProfileSpec vp;
    vp.kind = ProfileSpec::Kind::Cosine;
    vp.offset = c.v0;
    vp.amplitude = -0.2 * c.v0;
    SimState s0 = init_data(g, up, vp);
    ModelSpec spec = spec_chi(1.0);
    StepControl ctl;
    ctl.dt = 5e-3;
    Trajectory traj = run(s0, spec, ctl, RunSchedule{2.0, 0.25, 0.0});
    const double mu0 = traj.series.front().mass_u;
    const double mv0 = traj.series.front().mass_v;
    for (const SeriesRow& row : traj.series) {
      const double bound = (1.0 - std::exp(-row.t)) * mu0 +
                           std::exp(-row.t) * mv0 +
                           (1e-8 + 2.0 * ctl.dt * mu0);
      CHECK(row.mass_v <= bound);
    }
  }
}

TEST_CASE("doubling the regularization index leaves resolved runs unchanged") {
  Grid g(1, {1.0, 1.0}, {48, 1});
  ProfileSpec up;
  up.kind = ProfileSpec::Kind::Cosine;
  up.offset = 1.2;
  up.amplitude = 0.5;
  ProfileSpec vp;
  vp.kind = ProfileSpec::Kind::Cosine;
  vp.offset = 1.0;
  vp.amplitude = 0.4;
  SimState s0 = init_data(g, up, vp);
  ModelSpec spec8 = spec_chi(1.0, 2, 2);
  spec8.k = 8;
  ModelSpec spec16 = spec8;
  spec16.k = 16;
  StepControl ctl;
  ctl.dt = 1e-3;
  RunSchedule sched{0.5, 0.1, 0.0};
  Trajectory t8 = run(s0, spec8, ctl, sched);
  Trajectory t16 = run(s0, spec16, ctl, sched);
  REQUIRE(t8.snapshots.size() == t16.snapshots.size());
  CHECK(t8.series.back().max_u < 8.0);
  for (std::size_t s = 0; s < t8.snapshots.size(); ++s)
    for (std::size_t i = 0; i < t8.snapshots[s].u.size(); ++i) {
      CHECK(t8.snapshots[s].u[i] == t16.snapshots[s].u[i]); // bitwise
      CHECK(t8.snapshots[s].v[i] == t16.snapshots[s].v[i]);
    }
}

TEST_CASE("manufactured solution with sources: order 2 in h when chi==0") {
  // u* = 2 + 0.5 cos(pi x) e^{-t}, v* = 1.5 + 0.25 cos(pi x) e^{-t}
  auto u_exact = [](double x, double t) {
    return 2.0 + 0.5 * std::cos(kPi * x) * std::exp(-t);
  };
  auto v_exact = [](double x, double t) {
    return 1.5 + 0.25 * std::cos(kPi * x) * std::exp(-t);
  };
  SourceTerms src;
  src.su = [](double x, double, double t) {
    return 0.5 * (kPi * kPi - 1.0) * std::cos(kPi * x) * std::exp(-t);
  };
  src.sv = [](double x, double, double t) {
    return (0.25 * kPi * kPi - 0.5) * std::cos(kPi * x) * std::exp(-t) - 0.5;
  };
  ModelSpec spec = spec_chi(0.0);
  const double T = 0.2;
  double errs[3];
  for (int level = 0; level < 3; ++level) {
    const int n = 32 << level;
    Grid g(1, {1.0, 1.0}, {n, 1});
    ScalarField u0(g), v0(g);
    u0.fill_from([&](double x, double) { return u_exact(x, 0.0); });
    v0.fill_from([&](double x, double) { return v_exact(x, 0.0); });
    StepControl ctl;
    const double h = g.spacing(0);
    ctl.dt = 0.25 * h * h;
    ctl.check_conservation = false;
    Trajectory traj =
        run(SimState{0.0, u0, v0}, spec, ctl, RunSchedule{T, T, 0.0}, &src);
    const SimState& fin = traj.snapshots.back();
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = g.center(0, i);
      e = std::max(e, std::abs(fin.u[i] - u_exact(x, fin.t)));
      e = std::max(e, std::abs(fin.v[i] - v_exact(x, fin.t)));
    }
    errs[level] = e;
  }
  CHECK(std::log2(errs[0] / errs[1]) >= 1.9);
  CHECK(std::log2(errs[1] / errs[2]) >= 1.9);
}

TEST_CASE("manufactured solution: order 1 in dt") {
  auto u_exact = [](double x, double t) {
    return 2.0 + 0.5 * std::cos(kPi * x) * std::exp(-t);
  };
  auto v_exact = [](double x, double t) {
    return 1.5 + 0.25 * std::cos(kPi * x) * std::exp(-t);
  };
  SourceTerms src;
  src.su = [](double x, double, double t) {
    return 0.5 * (kPi * kPi - 1.0) * std::cos(kPi * x) * std::exp(-t);
  };
  src.sv = [](double x, double, double t) {
    return (0.25 * kPi * kPi - 0.5) * std::cos(kPi * x) * std::exp(-t) - 0.5;
  };
  ModelSpec spec = spec_chi(0.0);
  const double T = 0.2;
  Grid g(1, {1.0, 1.0}, {256, 1});
  ScalarField u0(g), v0(g);
  u0.fill_from([&](double x, double) { return u_exact(x, 0.0); });
  v0.fill_from([&](double x, double) { return v_exact(x, 0.0); });
  double errs[4];
  for (int level = 0; level < 4; ++level) {
    StepControl ctl;
    ctl.dt = 0.02 / (1 << level);
    ctl.check_conservation = false;
    Trajectory traj =
        run(SimState{0.0, u0, v0}, spec, ctl, RunSchedule{T, T, 0.0}, &src);
    const SimState& fin = traj.snapshots.back();
    double e = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      const double x = g.center(0, i);
      e = std::max(e, std::abs(fin.u[i] - u_exact(x, fin.t)));
      e = std::max(e, std::abs(fin.v[i] - v_exact(x, fin.t)));
    }
    errs[level] = e;
  }
  // subtract the fixed spatial floor via successive differences
  const double r1 = (errs[0] - errs[1]) / (errs[1] - errs[2]);
  const double r2 = (errs[1] - errs[2]) / (errs[2] - errs[3]);
  CHECK(std::log2(r1) >= 0.9);
  CHECK(std::log2(r2) >= 0.9);
}

TEST_CASE("manufactured solution with advection: first order in h") {
  const double chi0 = 0.3;
  auto u_exact = [](double x, double t) {
    return 2.0 + 0.5 * std::cos(kPi * x) * std::exp(-t);
  };
  auto v_exact = [](double x, double t) {
    return 1.5 + 0.25 * std::cos(kPi * x) * std::exp(-t);
  };
  SourceTerms src;
  src.su = [chi0](double x, double, double t) {
    const double A = 0.5 * std::exp(-t), B = 0.25 * std::exp(-t);
    const double c = std::cos(kPi * x), s = std::sin(kPi * x);
    // d/dx of chi0 * u* * dv*/dx added to the chi==0 source
    const double adv =
        chi0 * (-B * kPi * kPi) * (-A * s * s + (2.0 + A * c) * c);
    return 0.5 * (kPi * kPi - 1.0) * c * std::exp(-t) + adv;
  };
  src.sv = [](double x, double, double t) {
    return (0.25 * kPi * kPi - 0.5) * std::cos(kPi * x) * std::exp(-t) - 0.5;
  };
  ModelSpec spec = spec_chi(chi0);
  const double T = 0.2;
  double errs[3];
  for (int level = 0; level < 3; ++level) {
    const int n = 64 << level;
    Grid g(1, {1.0, 1.0}, {n, 1});
    ScalarField u0(g), v0(g);
    u0.fill_from([&](double x, double) { return u_exact(x, 0.0); });
    v0.fill_from([&](double x, double) { return v_exact(x, 0.0); });
    StepControl ctl;
    ctl.dt = 0.1 * g.spacing(0) * g.spacing(0);
    ctl.check_conservation = false;
    Trajectory traj =
        run(SimState{0.0, u0, v0}, spec, ctl, RunSchedule{T, T, 0.0}, &src);
    const SimState& fin = traj.snapshots.back();
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      e = std::max(e, std::abs(fin.u[i] - u_exact(g.center(0, i), fin.t)));
    errs[level] = e;
  }
  CHECK(std::log2(errs[0] / errs[1]) >= 0.85);
  CHECK(std::log2(errs[1] / errs[2]) >= 0.85);
}

TEST_CASE("init_data: profiles, masses, scaling, rejection") {
  Grid g(2, {1.0, 1.0}, {128, 128});
  ProfileSpec up;
  up.kind = ProfileSpec::Kind::Constant;
  up.value = 1.0;
  ProfileSpec vp = up;
  SimState s = init_data(g, up, vp);
  CHECK(integrate(s.u) == doctest::Approx(1.0).epsilon(1e-13));

  ProfileSpec gp;
  gp.kind = ProfileSpec::Kind::Gaussian;
  gp.mass = 2.5;
  gp.sigma = 0.07;
  gp.center_x = 0.5;
  gp.center_y = 0.5;
  gp.floor = 1e-6;
  ScalarField gauss = make_profile(g, gp);
  CHECK(std::abs(integrate(gauss) - gp.mass) <= 1e-3 * gp.mass);

  // v scaled so its discrete mass dominates the requested one
  ProfileSpec vs = gp;
  vs.min_mass = 3.0;
  ScalarField scaled = make_profile(g, vs);
  CHECK(integrate(scaled) >= 3.0);

  ProfileSpec bad;
  bad.kind = ProfileSpec::Kind::Cosine;
  bad.offset = 0.5;
  bad.amplitude = 0.9;
  CHECK_THROWS(init_data(g, bad, vp));
}

TEST_CASE("zero-length schedule yields only the initial snapshot") {
  Grid g(1, {1.0, 1.0}, {32, 1});
  SimState s = constant_state(g, 1.0, 1.0);
  Trajectory traj = run(s, spec_chi(1.0), StepControl{}, RunSchedule{0.0, 0.0, 0.0});
  CHECK(traj.snapshots.size() == 1);
  CHECK(traj.series.size() == 1);
  CHECK(!traj.blowup_suspected);
}

TEST_CASE("blow-up ceiling truncates the run and flags it") {
  Grid g(1, {1.0, 1.0}, {64, 1});
  ProfileSpec up;
  up.kind = ProfileSpec::Kind::Gaussian;
  up.mass = 6.0;
  up.sigma = 0.05;
  up.center_x = 0.5;
  up.floor = 1e-4;
  ProfileSpec vp = up;
  vp.min_mass = 0.0;
  SimState s0 = init_data(g, up, vp);
  ModelSpec spec = spec_chi(8.0, 64, 64);
  spec.k = 1 << 20; // effectively unregularized
  StepControl ctl;
  ctl.dt = 1e-4;
  RunSchedule sched{2.0, 0.5, s0.u.max() * 1.2};
  Trajectory traj = run(s0, spec, ctl, sched);
  CHECK(traj.blowup_suspected);
  CHECK(traj.final_time() < 2.0);
  CHECK(traj.series.back().max_u > sched.blowup_ceiling);
}

TEST_CASE("cfl halving engages for aggressive dt and stays monotone") {
  Grid g(1, {1.0, 1.0}, {64, 1});
  ProfileSpec up;
  up.kind = ProfileSpec::Kind::Cosine;
  up.offset = 1.5;
  up.amplitude = 1.0;
  ProfileSpec vp;
  vp.kind = ProfileSpec::Kind::Cosine;
  vp.offset = 1.5;
  vp.amplitude = -1.2;
  SimState s0 = init_data(g, up, vp);
  ModelSpec spec = spec_chi(6.0);
  StepControl ctl;
  ctl.dt = 0.05; // far beyond the advective CFL
  StepResult r = step(s0, spec, ctl);
  CHECK(r.halvings > 0);
  CHECK(r.dt_used < ctl.dt);
  CHECK(r.cfl <= ctl.cfl_target);
  const double m0 = integrate(s0.u);
  CHECK(integrate(r.state.u) == doctest::Approx(m0).epsilon(1e-12));
}

TEST_CASE("v lower bound: analytic floor and reference comparison") {
  Grid g(1, {1.0, 1.0}, {64, 1});
  ProfileSpec up;
  up.kind = ProfileSpec::Kind::Cosine;
  up.offset = 1.0;
  up.amplitude = 0.5;
  ProfileSpec vp;
  vp.kind = ProfileSpec::Kind::Constant;
  vp.value = 0.7;
  SimState s0 = init_data(g, up, vp);
  ModelSpec spec = spec_chi(0.5);
  StepControl ctl;
  ctl.dt = 2e-3;
  Trajectory traj = run(s0, spec, ctl, RunSchedule{1.0, 0.1, 0.0});
  VLowerBoundReport rep = check_v_lower_bound(traj, 0.1, 1.0);
  CHECK(rep.applicable);
  CHECK(rep.min_margin_analytic >= -1e-10);

  // larger u can only raise v: margins improve on a paired run
  ProfileSpec up_big = up;
  up_big.offset = 3.0;
  up_big.amplitude = 1.0;
  Trajectory big = run(init_data(g, up_big, vp), spec, ctl,
                       RunSchedule{1.0, 0.1, 0.0});
  VLowerBoundReport rep_big = check_v_lower_bound(big, 0.1, 1.0);
  CHECK(rep_big.min_margin_analytic > rep.min_margin_analytic);

  VLowerBoundReport empty = check_v_lower_bound(traj, 0.5, 0.5);
  CHECK(!empty.applicable);
}

TEST_CASE("trajectory io round trip") {
  Grid g(1, {1.0, 1.0}, {32, 1});
  SimState s0 = constant_state(g, 1.0, 0.5);
  Trajectory traj =
      run(s0, spec_chi(1.0), StepControl{1e-3}, RunSchedule{0.1, 0.02, 0.0});
  const std::string dir =
      (std::filesystem::temp_directory_path() / "taxis_traj_test").string();
  save_trajectory(dir, traj);
  Trajectory back = load_trajectory(dir);
  REQUIRE(back.snapshots.size() == traj.snapshots.size());
  REQUIRE(back.series.size() == traj.series.size());
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    CHECK(back.snapshots[s].t == traj.snapshots[s].t);
    for (std::size_t i = 0; i < traj.snapshots[s].u.size(); ++i) {
      CHECK(back.snapshots[s].u[i] == traj.snapshots[s].u[i]);
      CHECK(back.snapshots[s].v[i] == traj.snapshots[s].v[i]);
    }
  }
  for (std::size_t r = 0; r < traj.series.size(); ++r)
    CHECK(back.series[r].mass_u == traj.series[r].mass_u);
  std::filesystem::remove_all(dir);
}
