#pragma once

#include <string>
#include <vector>

#include "ow/field.hpp"
#include "ow/observables.hpp"

namespace ow {

// OWF1, the raw little-endian snapshot format:
//   "OWF1" | u32 dims | u32 n_points[dims] | f64 extent_min,extent_max per axis
//   | f64 time | f64 hbar | f64 mass | f64 phi_r[N] | f64 phi_c[N]
void write_owf1(const std::string& path, const SchrodingerField& f);
SchrodingerField read_owf1(const std::string& path);

// CSV header: time,norm,energy,q_mean,p_mean,continuity_residual
void write_observable_csv(const std::string& path, const std::vector<ObservableRecord>& series,
                          int dims);

}  // namespace ow
