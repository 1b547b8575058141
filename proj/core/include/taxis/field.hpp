#pragma once

#include "taxis/grid.hpp"

#include <functional>
#include <vector>

namespace taxis {

/// Cell-averaged scalar quantity on a Grid.  Values are stored row-major
/// (x fastest), one double per cell.
class ScalarField {
public:
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(int ix, int iy) { return values_[grid_.index(ix, iy)]; }
  double at(int ix, int iy) const { return values_[grid_.index(ix, iy)]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double min() const;
  double max() const;
  bool all_finite() const;

  /// Fill from a function of the cell-center coordinates (y passed as 0
  /// in 1D).
  void fill_from(const std::function<double(double, double)>& f);

  /// New field with f applied cellwise.
  ScalarField map(const std::function<double(double)>& f) const;

private:
  Grid grid_;
  std::vector<double> values_;
};

/// Face-centered (staggered) vector quantity: component d lives on the
/// faces orthogonal to axis d.  In 1D only component 0 exists.  Boundary
/// faces produced by the zero-flux operators carry exactly zero.
class FaceField {
public:
  explicit FaceField(const Grid& grid);

  const Grid& grid() const { return grid_; }
  int num_axes() const { return grid_.dim(); }

  std::vector<double>& comp(int axis) { return comp_[axis]; }
  const std::vector<double>& comp(int axis) const { return comp_[axis]; }

  // x-faces: (nx+1) per row, ny rows; y-faces: nx per row, ny+1 rows.
  std::size_t xface(int i, int iy) const {
    return static_cast<std::size_t>(iy) * (grid_.nx() + 1) + i;
  }
  std::size_t yface(int ix, int j) const {
    return static_cast<std::size_t>(j) * grid_.nx() + ix;
  }

  bool all_finite() const;
  bool boundary_faces_zero() const;
  /// Forces the domain-boundary faces of every component to zero.
  void zero_boundary_faces();

  FaceField& operator+=(const FaceField& other);
  FaceField& operator*=(double s);

private:
  Grid grid_;
  std::array<std::vector<double>, 2> comp_;
};

} // namespace taxis
