#pragma once

#include <array>
#include <cstdint>
#include <cstddef>

namespace taxis {

/// Uniform cell-centered grid on an axis-aligned box with zero-flux walls.
///
/// 1D grids are stored as a degenerate 2D grid with a single row so that
/// all loops can run over both axes uniformly.  Cell (ix,iy) has its
/// center at ((ix+1/2)*hx, (iy+1/2)*hy).
class Grid {
public:
  /// Build from physical extents; spacing is extents/cells per axis.
  Grid(int dim, std::array<double, 2> extents, std::array<int, 2> cells);

  /// Build from per-axis spacing (snapshot files store spacing, not
  /// extents).  The stored spacing is kept verbatim so that a
  /// read-write cycle is bit-exact.
  static Grid from_spacing(int dim, std::array<int, 2> cells,
                           std::array<double, 2> spacing);

  int dim() const { return dim_; }
  int nx() const { return cells_[0]; }
  int ny() const { return cells_[1]; }
  int cells(int axis) const { return cells_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double extent(int axis) const { return extents_[axis]; }

  std::size_t num_cells() const {
    return static_cast<std::size_t>(cells_[0]) * cells_[1];
  }
  double cell_volume() const {
    return dim_ == 1 ? spacing_[0] : spacing_[0] * spacing_[1];
  }
  double domain_volume() const {
    return dim_ == 1 ? extents_[0] : extents_[0] * extents_[1];
  }

  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * cells_[0] + ix;
  }
  double center(int axis, int i) const {
    return (i + 0.5) * spacing_[axis];
  }

  bool operator==(const Grid& other) const = default;

private:
  Grid() = default;
  int dim_ = 1;
  std::array<double, 2> extents_{1.0, 1.0};
  std::array<int, 2> cells_{1, 1};
  std::array<double, 2> spacing_{1.0, 1.0};
};

} // namespace taxis
