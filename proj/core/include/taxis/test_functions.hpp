#pragma once

#include "taxis/field.hpp"

#include <functional>
#include <string>
#include <vector>

namespace taxis {

/// Spatial test function on the closed box, with analytic gradient.
struct SpatialTest {
  std::string name;
  bool nonneg = false;
  std::function<double(double, double)> eval;
  std::function<double(double, double)> grad_x;
  std::function<double(double, double)> grad_y;

  ScalarField sample(const Grid& grid) const;
};

/// Temporal test function with compact support in [0, T_support).
struct TemporalTest {
  std::string name;
  double T_support = 1.0;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
};

struct TestPair {
  SpatialTest phi;
  TemporalTest psi;
  bool nonneg = false; // both factors nonnegative
  std::string id;
};

/// Fixed library: phi in {1, shifted cos modes up to order 3, bumps,
/// raw cos modes}, psi in {C^inf bump, (1-t/T)_+^2, plateau-then-decay}.
/// All psi have psi(0) = 1 > 0.  Pairs with both factors nonnegative are
/// flagged; the library always contains at least 12 such pairs.
std::vector<TestPair> test_library(const Grid& grid, double T_support);

std::vector<SpatialTest> spatial_test_library(const Grid& grid);
std::vector<TemporalTest> temporal_test_library(double T_support);

} // namespace taxis
