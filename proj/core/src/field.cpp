#include "taxis/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace taxis {

ScalarField::ScalarField(const Grid& grid, double fill)
    : grid_(grid), values_(grid.num_cells(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.num_cells())
    throw std::invalid_argument("ScalarField: value count != cell count");
}

double ScalarField::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

double ScalarField::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

bool ScalarField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

void ScalarField::fill_from(const std::function<double(double, double)>& f) {
  for (int iy = 0; iy < grid_.ny(); ++iy) {
    const double y = grid_.dim() == 2 ? grid_.center(1, iy) : 0.0;
    for (int ix = 0; ix < grid_.nx(); ++ix)
      values_[grid_.index(ix, iy)] = f(grid_.center(0, ix), y);
  }
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
  ScalarField out(grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = f(values_[i]);
  return out;
}

FaceField::FaceField(const Grid& grid) : grid_(grid) {
  comp_[0].assign(static_cast<std::size_t>(grid.nx() + 1) * grid.ny(), 0.0);
  if (grid.dim() == 2)
    comp_[1].assign(static_cast<std::size_t>(grid.nx()) * (grid.ny() + 1), 0.0);
}

bool FaceField::all_finite() const {
  for (int d = 0; d < num_axes(); ++d)
    for (double v : comp_[d])
      if (!std::isfinite(v)) return false;
  return true;
}

bool FaceField::boundary_faces_zero() const {
  const int nx = grid_.nx(), ny = grid_.ny();
  for (int iy = 0; iy < ny; ++iy)
    if (comp_[0][xface(0, iy)] != 0.0 || comp_[0][xface(nx, iy)] != 0.0)
      return false;
  if (grid_.dim() == 2)
    for (int ix = 0; ix < nx; ++ix)
      if (comp_[1][yface(ix, 0)] != 0.0 || comp_[1][yface(ix, ny)] != 0.0)
        return false;
  return true;
}

void FaceField::zero_boundary_faces() {
  const int nx = grid_.nx(), ny = grid_.ny();
  for (int iy = 0; iy < ny; ++iy) {
    comp_[0][xface(0, iy)] = 0.0;
    comp_[0][xface(nx, iy)] = 0.0;
  }
  if (grid_.dim() == 2)
    for (int ix = 0; ix < nx; ++ix) {
      comp_[1][yface(ix, 0)] = 0.0;
      comp_[1][yface(ix, ny)] = 0.0;
    }
}

FaceField& FaceField::operator+=(const FaceField& other) {
  for (int d = 0; d < num_axes(); ++d)
    for (std::size_t i = 0; i < comp_[d].size(); ++i)
      comp_[d][i] += other.comp_[d][i];
  return *this;
}

FaceField& FaceField::operator*=(double s) {
  for (int d = 0; d < num_axes(); ++d)
    for (double& v : comp_[d]) v *= s;
  return *this;
}

} // namespace taxis
