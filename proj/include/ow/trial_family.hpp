#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "ow/potential.hpp"

namespace ow {

// A point on the parameter manifold: paired coordinates (u_i, v_i).
struct ParameterState {
  std::vector<double> u;
  std::vector<double> v;
  double time = 0.0;
};

// Trial Schrodinger function psi(q; u, v) with the functionals the flows
// need: <psi|H|psi>, its u/v gradients, and the parameter-space fluxes
// j_u = -hbar Im<psi|dpsi/du>, j_v likewise. Closed forms for the Gaussian
// families under free/harmonic potentials; grid quadrature otherwise.
class TrialFamily {
 public:
  virtual ~TrialFamily() = default;

  virtual std::string name() const = 0;
  virtual std::size_t n_pairs() const = 0;
  // true when <H> = T(v) + U(u), enabling leapfrog flows
  virtual bool separable_energy() const = 0;

  virtual double energy(const ParameterState& s) const = 0;
  virtual std::vector<double> denergy_du(const ParameterState& s) const = 0;
  virtual std::vector<double> denergy_dv(const ParameterState& s) const = 0;
  virtual std::vector<double> flux_u(const ParameterState& s) const = 0;
  virtual std::vector<double> flux_v(const ParameterState& s) const = 0;
  // Fluxes scaled by each packet's population share (identical to
  // flux_u/flux_v for single-packet families); the dynamical-pair condition
  // and the flux defect are stated in these, so that far-separated packets
  // reproduce the single-packet values.
  virtual std::vector<double> pair_flux_u(const ParameterState& s) const { return flux_u(s); }
  virtual std::vector<double> pair_flux_v(const ParameterState& s) const { return flux_v(s); }

  // Normalized psi at q (used by quadrature cross-checks).
  virtual std::complex<double> evaluate(const ParameterState& s, double q) const = 0;
  // Extent that contains all packets with < 1e-12 tails.
  virtual std::pair<double, double> quad_domain(const ParameterState& s) const = 0;

  // 2048-point grid quadrature versions of the functionals (oracle path).
  double energy_quadrature(const ParameterState& s) const;
  std::vector<double> flux_u_quadrature(const ParameterState& s) const;
  std::vector<double> flux_v_quadrature(const ParameterState& s) const;
  // iħ<psi|psidot> by direct quadrature for the given parameter velocities.
  double flux_functional_quadrature(const ParameterState& s, const std::vector<double>& du_dt,
                                    const std::vector<double>& dv_dt) const;

  // Throws if analytic gradients/fluxes disagree with central finite
  // differences (step 1e-5) beyond rel_tol.
  void validate_gradients(const ParameterState& s, double rel_tol = 1e-4) const;

  const Potential& potential() const { return potential_; }
  double hbar() const { return hbar_; }
  double mass() const { return mass_; }

 protected:
  TrialFamily(Potential pot, double hbar, double mass)
      : potential_(std::move(pot)), hbar_(hbar), mass_(mass) {}
  Potential potential_;
  double hbar_, mass_;
};

// psi = N exp(-alpha (q-u)^2 + i v (q-u)/hbar), alpha fixed. (u, v) is a
// dynamical pair: j_u = v, j_v = 0.
std::unique_ptr<TrialFamily> make_coherent_family(double alpha, Potential pot,
                                                  double hbar = 1.0, double mass = 1.0);

// psi = N (1 + skew (q-u)) exp(-alpha (q-u)^2 + i v (q-u)/hbar); the linear
// prefactor breaks the pair property (j_v != 0).
std::unique_ptr<TrialFamily> make_skewed_family(double alpha, double skew, Potential pot,
                                                double hbar = 1.0, double mass = 1.0);

// psi = N sum_j exp(-alpha_j (q-u_j)^2 + i v_j (q-u_j)/hbar), two pairs.
std::unique_ptr<TrialFamily> make_two_gaussian_family(double alpha1, double alpha2,
                                                      Potential pot, double hbar = 1.0,
                                                      double mass = 1.0);

}  // namespace ow
