#include "taxis/field_io.hpp"
#include "taxis/mesh_ops.hpp"
#include "taxis/solver.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace taxis {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

void write_series_csv(const std::string& path,
                      const std::vector<SeriesRow>& series) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("write_series_csv: cannot open " + path);
  os << "t,mass_u,mass_v,min_v,max_u,F_integral,dissipation_1,dissipation_2\n";
  for (const SeriesRow& r : series)
    os << fmt(r.t) << ',' << fmt(r.mass_u) << ',' << fmt(r.mass_v) << ','
       << fmt(r.min_v) << ',' << fmt(r.max_u) << ',' << fmt(r.F_integral)
       << ',' << fmt(r.dissipation_1) << ',' << fmt(r.dissipation_2) << '\n';
}

std::vector<SeriesRow> read_series_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_series_csv: cannot open " + path);
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("read_series_csv: empty file " + path);
  std::vector<SeriesRow> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    SeriesRow r;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &r.t,
                    &r.mass_u, &r.mass_v, &r.min_v, &r.max_u, &r.F_integral,
                    &r.dissipation_1, &r.dissipation_2) != 8)
      throw std::runtime_error("read_series_csv: malformed row: " + line);
    out.push_back(r);
  }
  return out;
}

void save_trajectory(const std::string& dir, const Trajectory& traj,
                     bool write_fields) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_series_csv(dir + "/series.csv", traj.series);

  std::ofstream man(dir + "/snapshots.manifest", std::ios::trunc);
  if (!man)
    throw std::runtime_error("save_trajectory: cannot open manifest in " + dir);
  man << "dt " << fmt(traj.dt) << '\n';
  man << "blowup_suspected " << (traj.blowup_suspected ? 1 : 0) << '\n';
  man << "blowup_ceiling " << fmt(traj.blowup_ceiling) << '\n';
  man << "m_star_ck " << fmt(traj.m_star_ck) << '\n';
  man << "has_sources " << (traj.has_sources ? 1 : 0) << '\n';
  man << "snapshots " << traj.snapshots.size() << '\n';
  if (write_fields) {
    char name[64];
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      std::snprintf(name, sizeof name, "snap_%06zu", i);
      const std::string u_file = std::string(name) + "_u.field";
      const std::string v_file = std::string(name) + "_v.field";
      write_field(dir + "/" + u_file, traj.snapshots[i].u);
      write_field(dir + "/" + v_file, traj.snapshots[i].v);
      man << i << ' ' << fmt(traj.snapshots[i].t) << ' ' << u_file << ' '
          << v_file << '\n';
    }
  }
}

Trajectory load_trajectory(const std::string& dir) {
  std::ifstream man(dir + "/snapshots.manifest");
  if (!man)
    throw std::runtime_error("load_trajectory: no snapshots.manifest in " +
                             dir);
  Trajectory traj;
  std::string key;
  int flag = 0;
  std::size_t count = 0;
  man >> key >> traj.dt;
  man >> key >> flag;
  traj.blowup_suspected = flag != 0;
  man >> key >> traj.blowup_ceiling;
  man >> key >> traj.m_star_ck;
  traj.M_dissipation = traj.m_star_ck + 1.0;
  man >> key >> flag;
  traj.has_sources = flag != 0;
  man >> key >> count;
  traj.snapshots.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t idx;
    double t;
    std::string u_file, v_file;
    if (!(man >> idx >> t >> u_file >> v_file))
      throw std::runtime_error("load_trajectory: truncated manifest in " + dir);
    SimState s{t, read_field(dir + "/" + u_file),
               read_field(dir + "/" + v_file)};
    traj.snapshots.push_back(std::move(s));
  }
  if (traj.snapshots.empty())
    throw std::runtime_error("load_trajectory: no snapshots in " + dir);
  traj.series = read_series_csv(dir + "/series.csv");
  return traj;
}

} // namespace taxis
