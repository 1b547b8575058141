#include "taxis/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace taxis {

double cutoff(double x, double threshold) {
  return std::max(threshold - x, 0.0);
}

double zeta_plateau(double x, double k, double w) {
  if (x <= k) return 1.0;
  if (x >= k + w) return 0.0;
  const double s = (x - k) / w;
  // quintic smoothstep, zero slope and curvature at both taper ends
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double c_eval(const ModelSpec& spec, double u, double v) {
  if (u < 0.0 || v < 0.0)
    throw std::invalid_argument("c_eval: negative state values rejected");
  return spec.chi.eval(u, v) * u;
}

double c_regularized(const ModelSpec& spec, double u, double v) {
  u = std::max(u, 0.0);
  v = std::max(v, 0.0);
  const double zu = zeta_plateau(u, spec.k, spec.plateau_width);
  if (zu == 0.0) return 0.0;
  const double zv = zeta_plateau(v, spec.k, spec.plateau_width);
  if (zv == 0.0) return 0.0;
  return zu * zv * spec.chi.eval(u, v) * u;
}

Sigma make_sigma_c(const ModelSpec& spec) {
  return [spec](double u, double v) {
    return spec.chi.eval(std::max(u, 0.0), v < 0.0 ? 0.0 : v) * std::max(u, 0.0);
  };
}

Sigma make_sigma_ck(const ModelSpec& spec) {
  return [spec](double u, double v) { return c_regularized(spec, u, v); };
}

double f_eval(const ModelSpec& spec, double u, double v) {
  const double ub = cutoff(u, spec.n);
  const double vb = cutoff(v, spec.l);
  return (spec.M0 + std::pow(ub, spec.a)) * std::pow(vb, spec.b);
}

FDerivs f_derivs(const ModelSpec& spec, double u, double v) {
  const double a = spec.a, b = spec.b;
  const double ub = cutoff(u, spec.n);
  const double vb = cutoff(v, spec.l);
  const double ub_a = std::pow(ub, a);
  const double ub_am1 = std::pow(ub, a - 1.0);
  const double ub_am2 = std::pow(ub, a - 2.0);
  const double vb_b = std::pow(vb, b);
  const double vb_bm1 = std::pow(vb, b - 1.0);
  const double vb_bm2 = std::pow(vb, b - 2.0);
  FDerivs d;
  d.Fu = -a * ub_am1 * vb_b;
  d.Fv = -b * (spec.M0 + ub_a) * vb_bm1;
  d.Fuu = a * (a - 1.0) * ub_am2 * vb_b;
  d.Fuv = a * b * ub_am1 * vb_bm1;
  d.Fvv = b * (b - 1.0) * (spec.M0 + ub_a) * vb_bm2;
  return d;
}

namespace {

// Inner expression of the M* maximization (before the prefactor).
double mstar_inner(double a, double b, int n, int l, const Sigma& sigma,
                   double u, double v) {
  const double ub = cutoff(u, n);
  const double vb = cutoff(v, l);
  const double s = sigma(u, v);
  const double c1 = (a - 1.0) * (a - 1.0) / (b * b);
  const double c2 = 4.0 * (a + b - 1.0) / (a * b);
  return c1 * s * s * std::pow(ub, a - 2.0) * vb * vb +
         c2 * std::pow(ub, a);
}

// Golden-section maximization of f on [lo,hi].
template <typename F>
double golden_max(const F& f, double lo, double hi, int iters,
                  double* arg_out) {
  const double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  if (f1 >= f2) {
    if (arg_out) *arg_out = x1;
    return f1;
  }
  if (arg_out) *arg_out = x2;
  return f2;
}

struct Candidate {
  double u, v, value;
};

} // namespace

MStarResult m_star_detailed(double a, double b, int n, int l,
                            const Sigma& sigma) {
  if (a < 2.0 || b < 2.0)
    throw std::invalid_argument("m_star: requires a,b >= 2");
  if (n < 1 || l < 1)
    throw std::invalid_argument("m_star: requires n,l >= 1");

  auto inner = [&](double u, double v) {
    return mstar_inner(a, b, n, l, sigma, u, v);
  };

  // Nested lattice scans; the final level supplies polish seeds and the
  // last two levels a Richardson estimate of the lattice limit.
  const int levels[] = {64, 128, 256};
  double level_max[3] = {0, 0, 0};
  std::vector<Candidate> seeds;
  for (int li = 0; li < 3; ++li) {
    const int N = levels[li];
    const double hu = static_cast<double>(n) / N;
    const double hv = static_cast<double>(l) / N;
    double best = -1.0;
    std::vector<std::vector<double>> vals(
        N + 1, std::vector<double>(N + 1, 0.0));
    for (int j = 0; j <= N; ++j)
      for (int i = 0; i <= N; ++i) {
        const double w = inner(i * hu, j * hv);
        vals[j][i] = w;
        best = std::max(best, w);
      }
    level_max[li] = best;
    if (li == 2) {
      // local lattice maxima become polish seeds (top few by value)
      for (int j = 0; j <= N; ++j)
        for (int i = 0; i <= N; ++i) {
          const double w = vals[j][i];
          bool is_peak = true;
          for (int dj = -1; dj <= 1 && is_peak; ++dj)
            for (int di = -1; di <= 1; ++di) {
              const int ii = i + di, jj = j + dj;
              if (ii < 0 || jj < 0 || ii > N || jj > N) continue;
              if (vals[jj][ii] > w) {
                is_peak = false;
                break;
              }
            }
          if (is_peak) seeds.push_back({i * hu, j * hv, w});
        }
      std::sort(seeds.begin(), seeds.end(),
                [](const Candidate& x, const Candidate& y) {
                  return x.value > y.value;
                });
      if (seeds.size() > 4) seeds.resize(4);
    }
  }

  // Coordinate-wise golden-section polish around each seed.
  const int N = levels[2];
  const double hu = static_cast<double>(n) / N;
  const double hv = static_cast<double>(l) / N;
  double polished = level_max[2];
  for (const Candidate& seed : seeds) {
    double u = seed.u, v = seed.v;
    double wu = 2.0 * hu, wv = 2.0 * hv;
    double value = seed.value;
    for (int round = 0; round < 60; ++round) {
      double ubest;
      value = golden_max(
          [&](double x) { return inner(x, v); },
          std::max(0.0, u - wu), std::min(static_cast<double>(n), u + wu), 40,
          &ubest);
      u = ubest;
      double vbest;
      value = golden_max(
          [&](double y) { return inner(u, y); },
          std::max(0.0, v - wv), std::min(static_cast<double>(l), v + wv), 40,
          &vbest);
      v = vbest;
      wu *= 0.5;
      wv *= 0.5;
      if (wu < 1e-16 * n && wv < 1e-16 * l) break;
    }
    polished = std::max(polished, value);
    // the seed itself is a valid lattice value; never regress below it
    polished = std::max(polished, seed.value);
  }

  const double pref = 0.25 * a * b / ((a - 1.0) * (b - 1.0));
  MStarResult r;
  r.value = pref * polished;
  r.lattice_max = pref * level_max[2];
  r.richardson =
      pref * (level_max[2] + (level_max[2] - level_max[1]) / 3.0);
  r.lattice_intervals = N;
  return r;
}

double m_star(double a, double b, int n, int l, const Sigma& sigma) {
  return m_star_detailed(a, b, n, l, sigma).value;
}

double m_star(const ModelSpec& spec, const Sigma& sigma) {
  return m_star(spec.a, spec.b, spec.n, spec.l, sigma);
}

double discriminant(const ModelSpec& spec, const Sigma& sigma, double u,
                    double v) {
  const double a = spec.a, b = spec.b;
  const double ub = cutoff(u, spec.n);
  const double vb = cutoff(v, spec.l);
  const double s = sigma(u, v);
  return (a - 1.0) * (a - 1.0) / (b * b) * s * s * std::pow(ub, a - 2.0) * vb *
             vb +
         4.0 * (a + b - 1.0) / (a * b) * std::pow(ub, a) -
         4.0 * (a - 1.0) * (b - 1.0) / (a * b) * spec.M0;
}

CoefficientBundle b_coefficients(const ModelSpec& spec, const Sigma& sigma,
                                 double u, double v, double m_star_value) {
  const double a = spec.a, b = spec.b;
  const double ub = cutoff(u, spec.n);
  const double vb = cutoff(v, spec.l);
  const double s = sigma(u, v);
  const double ub_a = std::pow(ub, a);
  const double ub_am1 = std::pow(ub, a - 1.0);
  const double vb_bm1 = std::pow(vb, b - 1.0);
  CoefficientBundle c{};
  c.D = discriminant(spec, sigma, u, v);
  c.B1 = -std::pow(ub, 0.5 * a) +
         0.5 * a / ((a - 1.0) * b) * std::pow(ub, 0.5 * a - 1.0) *
             (2.0 * b * ub - (a - 1.0) * s * vb);
  c.B2 = -a / (a - 1.0) * c.D -
         4.0 * (b - 1.0) / b * (spec.M0 - m_star_value);
  c.B4 = -ub_a + (b * (spec.M0 + ub_a) - a * s * ub_am1 * vb) / b;
  c.B5 = b * (spec.M0 + ub_a) * vb_bm1;
  c.Bnew = c.B5 * v;
  return c;
}

std::vector<std::string> validate_model_spec(const ModelSpec& spec) {
  std::vector<std::string> problems;
  if (!(spec.a > 2.0))
    problems.push_back("model.a must be > 2 (got " + std::to_string(spec.a) +
                       ")");
  if (!(spec.b > 2.0))
    problems.push_back("model.b must be > 2 (got " + std::to_string(spec.b) +
                       ")");
  if (spec.n < 1) problems.push_back("model.n must be a positive integer");
  if (spec.l < 1) problems.push_back("model.l must be a positive integer");
  if (spec.M0 < 0.0) problems.push_back("model.M must be >= 0");
  if (spec.k < 1) problems.push_back("model.k must be a positive integer");
  if (spec.k <= std::max(spec.n, spec.l))
    problems.push_back("model.k must exceed max(n,l)");
  if (!(spec.plateau_width > 0.0))
    problems.push_back("model.plateau_width must be > 0");
  return problems;
}

} // namespace taxis
