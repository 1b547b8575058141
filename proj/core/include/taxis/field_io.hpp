#pragma once

#include "taxis/field.hpp"

#include <string>

namespace taxis {

// Snapshot format: little-endian binary
//   magic   "TAXF"
//   version u32 (currently 1)
//   dim     u32
//   cells   u32 per axis
//   spacing f64 per axis
//   values  f64, row-major, one per cell
// Round trips are bit-exact: spacing is written verbatim from the grid.

void write_field(const std::string& path, const ScalarField& f);
ScalarField read_field(const std::string& path);

} // namespace taxis
