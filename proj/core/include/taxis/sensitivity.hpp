#pragma once

#include <string>
#include <vector>

namespace taxis {

/// Chemotactic sensitivity chi(u,v), continuous on [0,inf)^2.
///
/// Three kinds are supported:
///   constant   chi0
///   rational   chi0 / ((1+alpha*u)(1+beta*v)), alpha,beta >= 0
///   tabulated  bicubic (Catmull-Rom) interpolation of a user table on
///              uniform knots over [0,u_max]x[0,v_max]; coordinates are
///              clamped to the table and the value is clamped at zero.
///
/// chi0 may be negative (chemorepellent) for the closed-form kinds.
class Sensitivity {
public:
  enum class Kind { Constant, Rational, Tabulated };

  static Sensitivity constant(double chi0);
  static Sensitivity rational(double chi0, double alpha, double beta);
  static Sensitivity tabulated(double u_max, double v_max, int nu, int nv,
                               std::vector<double> values);

  double eval(double u, double v) const;

  Kind kind() const { return kind_; }
  double chi0() const { return chi0_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double table_u_max() const { return u_max_; }
  double table_v_max() const { return v_max_; }
  int table_nu() const { return nu_; }
  int table_nv() const { return nv_; }
  const std::vector<double>& table() const { return table_; }

  bool operator==(const Sensitivity&) const = default;

private:
  Sensitivity() = default;
  Kind kind_ = Kind::Constant;
  double chi0_ = 1.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double u_max_ = 1.0;
  double v_max_ = 1.0;
  int nu_ = 0;
  int nv_ = 0;
  std::vector<double> table_;
};

std::string to_string(Sensitivity::Kind kind);

} // namespace taxis
