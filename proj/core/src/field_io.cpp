#include "taxis/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "snapshot format requires a little-endian host");

namespace taxis {

namespace {
constexpr char kMagic[4] = {'T', 'A', 'X', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
} // namespace

void write_field(const std::string& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  const Grid& g = f.grid();
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(g.dim()));
  for (int d = 0; d < g.dim(); ++d)
    put_u32(os, static_cast<std::uint32_t>(g.cells(d)));
  for (int d = 0; d < g.dim(); ++d) put_f64(os, g.spacing(d));
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write_field: write failed on " + path);
}

ScalarField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  const std::uint32_t version = get_u32(is);
  if (version != kVersion)
    throw std::runtime_error("read_field: unsupported version in " + path);
  const int dim = static_cast<int>(get_u32(is));
  if (dim != 1 && dim != 2)
    throw std::runtime_error("read_field: bad dim in " + path);
  std::array<int, 2> cells{1, 1};
  for (int d = 0; d < dim; ++d) cells[d] = static_cast<int>(get_u32(is));
  std::array<double, 2> spacing{1.0, 1.0};
  for (int d = 0; d < dim; ++d) spacing[d] = get_f64(is);
  Grid g = Grid::from_spacing(dim, cells, spacing);
  std::vector<double> values(g.num_cells());
  is.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_field: truncated file " + path);
  return ScalarField(g, std::move(values));
}

} // namespace taxis
