#include "taxis/grid.hpp"

#include <stdexcept>

namespace taxis {

Grid::Grid(int dim, std::array<double, 2> extents, std::array<int, 2> cells) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("Grid: dim must be 1 or 2");
  if (dim == 1) {
    cells[1] = 1;
    extents[1] = 1.0;
  }
  for (int d = 0; d < dim; ++d) {
    if (cells[d] < 2)
      throw std::invalid_argument("Grid: need at least 2 cells per axis");
    if (!(extents[d] > 0.0))
      throw std::invalid_argument("Grid: extents must be positive");
  }
  if (static_cast<long>(cells[0]) * cells[1] < 4)
    throw std::invalid_argument("Grid: need at least 4 cells in total");
  dim_ = dim;
  extents_ = extents;
  cells_ = cells;
  spacing_ = {extents[0] / cells[0], dim == 2 ? extents[1] / cells[1] : 1.0};
}

Grid Grid::from_spacing(int dim, std::array<int, 2> cells,
                        std::array<double, 2> spacing) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("Grid: dim must be 1 or 2");
  if (dim == 1) {
    cells[1] = 1;
    spacing[1] = 1.0;
  }
  Grid g;
  g.dim_ = dim;
  g.cells_ = cells;
  g.spacing_ = spacing;
  g.extents_ = {spacing[0] * cells[0], dim == 2 ? spacing[1] * cells[1] : 1.0};
  for (int d = 0; d < dim; ++d) {
    if (cells[d] < 2)
      throw std::invalid_argument("Grid: need at least 2 cells per axis");
    if (!(spacing[d] > 0.0))
      throw std::invalid_argument("Grid: spacing must be positive");
  }
  if (static_cast<long>(cells[0]) * cells[1] < 4)
    throw std::invalid_argument("Grid: need at least 4 cells in total");
  return g;
}

} // namespace taxis
