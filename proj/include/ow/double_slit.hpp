#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ow/field.hpp"
#include "ow/potential.hpp"
#include "ow/stats.hpp"

namespace ow {

struct DoubleSlitConfig {
  Grid grid;                       // 2D
  Potential potential;             // double_slit_mask (or one slit closed)
  std::array<double, 2> q0{0, 0};  // incident packet center
  std::array<double, 2> p0{0, 0};
  std::array<double, 2> gamma_r{0.1, 0.02};  // real packet exponents per axis
  double hbar = 1.0;
  double mass = 1.0;
  double dt = 1e-3;
  std::size_t n_steps = 2000;
  std::size_t n_paths = 0;
  double detect_x = 0.0;     // detection line x = detect_x
  std::size_t bins = 64;     // fringe histogram bins over the y-extent
  double absorb_fraction = 0.08;
  std::uint64_t seed = 0;
  std::size_t save_every = 50;  // recorded field snapshots (outputs only)
};

struct DoubleSlitResult {
  std::vector<double> spot_y;          // first-crossing y per detected path
  std::vector<std::uint64_t> spot_id;  // stream ids of detected paths
  Histogram fringe;                    // counts over y bins at the detection line
  std::vector<double> reference;       // time-integrated |psi|^2 at the line, per bin center
  std::vector<SchrodingerField> snapshots;
  std::size_t n_detected = 0;
};

// Propagates the incident packet through the mask while advancing all paths
// inline (drift refreshed every step), and bins first crossings of the
// detection line against the grid reference profile.
DoubleSlitResult double_slit_run(const DoubleSlitConfig& cfg);

void write_spots_csv(const std::string& path, const DoubleSlitResult& r);
void write_fringe_csv(const std::string& path, const DoubleSlitResult& r);

}  // namespace ow
