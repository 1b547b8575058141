#include "taxis/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace taxis {

Sensitivity Sensitivity::constant(double chi0) {
  Sensitivity s;
  s.kind_ = Kind::Constant;
  s.chi0_ = chi0;
  return s;
}

Sensitivity Sensitivity::rational(double chi0, double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0)
    throw std::invalid_argument(
        "Sensitivity::rational: alpha and beta must be >= 0");
  Sensitivity s;
  s.kind_ = Kind::Rational;
  s.chi0_ = chi0;
  s.alpha_ = alpha;
  s.beta_ = beta;
  return s;
}

Sensitivity Sensitivity::tabulated(double u_max, double v_max, int nu, int nv,
                                   std::vector<double> values) {
  if (nu < 2 || nv < 2)
    throw std::invalid_argument("Sensitivity::tabulated: need >= 2 knots per axis");
  if (!(u_max > 0.0) || !(v_max > 0.0))
    throw std::invalid_argument("Sensitivity::tabulated: knot ranges must be positive");
  if (values.size() != static_cast<std::size_t>(nu) * nv)
    throw std::invalid_argument("Sensitivity::tabulated: table size != nu*nv");
  Sensitivity s;
  s.kind_ = Kind::Tabulated;
  s.u_max_ = u_max;
  s.v_max_ = v_max;
  s.nu_ = nu;
  s.nv_ = nv;
  s.table_ = std::move(values);
  return s;
}

namespace {

// Catmull-Rom through p1..p2 with neighbors p0, p3; t in [0,1].
double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  const double a0 = 2.0 * p1;
  const double a1 = p2 - p0;
  const double a2 = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
  const double a3 = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
  return 0.5 * (a0 + t * (a1 + t * (a2 + t * a3)));
}

} // namespace

double Sensitivity::eval(double u, double v) const {
  switch (kind_) {
    case Kind::Constant:
      return chi0_;
    case Kind::Rational:
      return chi0_ / ((1.0 + alpha_ * u) * (1.0 + beta_ * v));
    case Kind::Tabulated: {
      const double hu = u_max_ / (nu_ - 1);
      const double hv = v_max_ / (nv_ - 1);
      const double su = std::clamp(u, 0.0, u_max_) / hu;
      const double sv = std::clamp(v, 0.0, v_max_) / hv;
      int iu = std::min(static_cast<int>(su), nu_ - 2);
      int iv = std::min(static_cast<int>(sv), nv_ - 2);
      const double tu = su - iu;
      const double tv = sv - iv;
      auto knot = [&](int i, int j) {
        i = std::clamp(i, 0, nu_ - 1);
        j = std::clamp(j, 0, nv_ - 1);
        return table_[static_cast<std::size_t>(j) * nu_ + i];
      };
      double rows[4];
      for (int dj = -1; dj <= 2; ++dj)
        rows[dj + 1] = catmull_rom(knot(iu - 1, iv + dj), knot(iu, iv + dj),
                                   knot(iu + 1, iv + dj), knot(iu + 2, iv + dj),
                                   tu);
      const double value = catmull_rom(rows[0], rows[1], rows[2], rows[3], tv);
      return std::max(value, 0.0);
    }
  }
  return 0.0;
}

std::string to_string(Sensitivity::Kind kind) {
  switch (kind) {
    case Sensitivity::Kind::Constant: return "constant";
    case Sensitivity::Kind::Rational: return "rational";
    case Sensitivity::Kind::Tabulated: return "tabulated";
  }
  return "?";
}

} // namespace taxis
