#include "ow/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "ow/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "OWF1 writer assumes a little-endian host");

namespace ow {

namespace {
template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
}  // namespace

void write_owf1(const std::string& path, const SchrodingerField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("write_owf1: cannot open " + path);
  os.write("OWF1", 4);
  put<std::uint32_t>(os, std::uint32_t(f.grid.dims));
  for (int a = 0; a < f.grid.dims; ++a) put<std::uint32_t>(os, std::uint32_t(f.grid.n[a]));
  for (int a = 0; a < f.grid.dims; ++a) {
    put<double>(os, f.grid.lo[a]);
    put<double>(os, f.grid.hi[a]);
  }
  put<double>(os, f.time);
  put<double>(os, f.hbar);
  put<double>(os, f.mass);
  os.write(reinterpret_cast<const char*>(f.phi_r.data()),
           std::streamsize(f.phi_r.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(f.phi_c.data()),
           std::streamsize(f.phi_c.size() * sizeof(double)));
}

SchrodingerField read_owf1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw config_error("read_owf1: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, "OWF1", 4) != 0) throw config_error("read_owf1: bad magic");
  const auto dims = get<std::uint32_t>(is);
  if (dims != 1 && dims != 2) throw config_error("read_owf1: dims must be 1 or 2");
  std::uint32_t n[2] = {1, 1};
  for (std::uint32_t a = 0; a < dims; ++a) n[a] = get<std::uint32_t>(is);
  double lo[2] = {0, 0}, hi[2] = {0, 0};
  for (std::uint32_t a = 0; a < dims; ++a) {
    lo[a] = get<double>(is);
    hi[a] = get<double>(is);
  }
  SchrodingerField f;
  f.grid = dims == 1 ? Grid::line(lo[0], hi[0], n[0])
                     : Grid::plane(lo[0], hi[0], n[0], lo[1], hi[1], n[1]);
  f.time = get<double>(is);
  f.hbar = get<double>(is);
  f.mass = get<double>(is);
  f.phi_r.resize(f.grid.size());
  f.phi_c.resize(f.grid.size());
  is.read(reinterpret_cast<char*>(f.phi_r.data()),
          std::streamsize(f.phi_r.size() * sizeof(double)));
  is.read(reinterpret_cast<char*>(f.phi_c.data()),
          std::streamsize(f.phi_c.size() * sizeof(double)));
  if (!is) throw config_error("read_owf1: truncated file");
  return f;
}

void write_observable_csv(const std::string& path,
                          const std::vector<ObservableRecord>& series, int dims) {
  std::ofstream os(path);
  if (!os) throw config_error("write_observable_csv: cannot open " + path);
  os << "time,norm,energy,q_mean,p_mean,continuity_residual\n";
  os << std::setprecision(17);
  for (const auto& r : series) {
    os << r.time << ',' << r.norm << ',' << r.energy << ',';
    if (dims == 1)
      os << r.position_mean[0] << ',' << r.momentum_mean[0];
    else
      os << r.position_mean[0] << ';' << r.position_mean[1] << ',' << r.momentum_mean[0]
         << ';' << r.momentum_mean[1];
    os << ',' << r.continuity_residual << '\n';
  }
}

}  // namespace ow
