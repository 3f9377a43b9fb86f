#pragma once

#include <array>
#include <vector>

#include "ow/field.hpp"
#include "ow/potential.hpp"

namespace ow {

struct ObservableRecord {
  double time = 0.0;
  double norm = 0.0;
  double energy = 0.0;
  std::array<double, 2> position_mean{0.0, 0.0};
  std::array<double, 2> momentum_mean{0.0, 0.0};
  double continuity_residual = 0.0;
};

// Vector field on the grid: one array per axis, plus a low-density mask
// where quotient observables are left undefined.
struct VectorField {
  std::array<std::vector<double>, 2> comp;
  std::vector<unsigned char> masked;  // empty when no masking applies
};

// Spectral derivative along `axis` of a periodic real array.
std::vector<double> gradient_spectral(const Grid& g, const std::vector<double>& fvals, int axis);
// 4th-order centered stencil with periodic wrap (used for masked/windowed fields).
std::vector<double> gradient_fd4(const Grid& g, const std::vector<double>& fvals, int axis);

double rho_floor(const SchrodingerField& f);

std::vector<double> density(const SchrodingerField& f);

// j = (hbar/m) (phi_r grad phi_c - phi_c grad phi_r)
VectorField flux(const SchrodingerField& f, bool spectral = true);

// v = j / rho, masked (not extrapolated) where rho < 1e-12 * max(rho)
VectorField local_velocity(const SchrodingerField& f, bool spectral = true);

// E_local = Re[(H psi)/psi], masked like local_velocity
struct MaskedScalarField {
  std::vector<double> value;
  std::vector<unsigned char> masked;
};
MaskedScalarField local_energy(const SchrodingerField& f, const Potential& v);

double mean_position(const SchrodingerField& f, int axis);
double mean_momentum(const SchrodingerField& f, int axis);
double mean_energy(const SchrodingerField& f, const Potential& v);

// (d<q>/dt estimate, d<p>/dt estimate, -<grad V>), the first two centered
// finite differences across one split step of size dt.
struct EhrenfestRates {
  std::array<double, 2> dq_dt{0.0, 0.0};
  std::array<double, 2> dp_dt{0.0, 0.0};
  std::array<double, 2> minus_grad_v{0.0, 0.0};
};
EhrenfestRates ehrenfest_rates(const SchrodingerField& f, const Potential& v, double dt);

// L2 norm over the grid of d(rho)/dt + div j between two consecutive
// snapshots (midpoint flux); second order in the snapshot spacing.
double continuity_residual(const SchrodingerField& f0, const SchrodingerField& f1);

// Three-term decomposition of the flux of psi = R1 e^{iS1/hbar} + R2 e^{iS2/hbar}
// (1D arrays on a common grid): direct + sine cross + cosine cross terms,
// which sum to flux(psi) componentwise.
struct FluxDecomposition {
  std::vector<double> direct;
  std::vector<double> cross_sin;
  std::vector<double> cross_cos;
};
FluxDecomposition two_packet_flux_decomposition(const Grid& g, const std::vector<double>& R1,
                                                const std::vector<double>& S1,
                                                const std::vector<double>& R2,
                                                const std::vector<double>& S2, double hbar,
                                                double mass);

ObservableRecord observe(const SchrodingerField& f, const Potential& v);

}  // namespace ow
