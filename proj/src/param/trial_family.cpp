#include "ow/trial_family.hpp"

#include <cmath>

#include "ow/errors.hpp"

namespace ow {

namespace {

constexpr std::size_t kQuadPoints = 2048;

struct QuadGrid {
  double lo, dx;
  std::size_t n;
  double q(std::size_t i) const { return lo + (double(i) + 0.5) * dx; }
};

QuadGrid quad_grid(const std::pair<double, double>& domain) {
  QuadGrid g;
  g.n = kQuadPoints;
  g.lo = domain.first;
  g.dx = (domain.second - domain.first) / double(g.n);
  return g;
}

}  // namespace

double TrialFamily::energy_quadrature(const ParameterState& s) const {
  const auto g = quad_grid(quad_domain(s));
  // <T> via |psi'|^2 (centered differences), <V> via direct sum.
  std::vector<std::complex<double>> psi(g.n);
  for (std::size_t i = 0; i < g.n; ++i) psi[i] = evaluate(s, g.q(i));
  double t_num = 0.0, v_num = 0.0, nrm = 0.0;
  for (std::size_t i = 2; i + 2 < g.n; ++i) {
    const auto dpsi = (-psi[i + 2] + 8.0 * psi[i + 1] - 8.0 * psi[i - 1] + psi[i - 2]) /
                      (12.0 * g.dx);
    t_num += std::norm(dpsi);
  }
  for (std::size_t i = 0; i < g.n; ++i) {
    v_num += potential_.value1d(g.q(i)) * std::norm(psi[i]);
    nrm += std::norm(psi[i]);
  }
  if (std::norm(psi.front()) + std::norm(psi.back()) > 1e-12 * nrm / double(g.n))
    throw domain_error("energy_quadrature: quadrature tail check failed");
  return (hbar_ * hbar_ / (2.0 * mass_) * t_num + v_num) / nrm;
}

std::vector<double> TrialFamily::flux_u_quadrature(const ParameterState& s) const {
  const auto g = quad_grid(quad_domain(s));
  std::vector<double> out(n_pairs(), 0.0);
  const double h = 1e-6;
  for (std::size_t k = 0; k < n_pairs(); ++k) {
    ParameterState sp = s, sm = s;
    sp.u[k] += h;
    sm.u[k] -= h;
    double im = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      const auto psi = evaluate(s, g.q(i));
      const auto dpsi = (evaluate(sp, g.q(i)) - evaluate(sm, g.q(i))) / (2.0 * h);
      im += (std::conj(psi) * dpsi).imag();
      nrm += std::norm(psi);
    }
    out[k] = -hbar_ * im / nrm;
  }
  return out;
}

std::vector<double> TrialFamily::flux_v_quadrature(const ParameterState& s) const {
  const auto g = quad_grid(quad_domain(s));
  std::vector<double> out(n_pairs(), 0.0);
  const double h = 1e-6;
  for (std::size_t k = 0; k < n_pairs(); ++k) {
    ParameterState sp = s, sm = s;
    sp.v[k] += h;
    sm.v[k] -= h;
    double im = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      const auto psi = evaluate(s, g.q(i));
      const auto dpsi = (evaluate(sp, g.q(i)) - evaluate(sm, g.q(i))) / (2.0 * h);
      im += (std::conj(psi) * dpsi).imag();
      nrm += std::norm(psi);
    }
    out[k] = -hbar_ * im / nrm;
  }
  return out;
}

double TrialFamily::flux_functional_quadrature(const ParameterState& s,
                                               const std::vector<double>& du_dt,
                                               const std::vector<double>& dv_dt) const {
  // ihbar <psi|psidot> with psidot = sum_k (du_k dpsi/du_k + dv_k dpsi/dv_k).
  // <psi|psidot> is purely imaginary for a normalized family, so the value
  // is -hbar Im<psi|psidot>.
  const auto g = quad_grid(quad_domain(s));
  const double h = 1e-6;
  double im = 0.0, nrm = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const auto psi = evaluate(s, g.q(i));
    std::complex<double> psidot = 0.0;
    for (std::size_t k = 0; k < n_pairs(); ++k) {
      ParameterState sp = s, sm = s;
      sp.u[k] += h;
      sm.u[k] -= h;
      psidot += du_dt[k] * (evaluate(sp, g.q(i)) - evaluate(sm, g.q(i))) / (2.0 * h);
      sp = s;
      sm = s;
      sp.v[k] += h;
      sm.v[k] -= h;
      psidot += dv_dt[k] * (evaluate(sp, g.q(i)) - evaluate(sm, g.q(i))) / (2.0 * h);
    }
    im += (std::conj(psi) * psidot).imag();
    nrm += std::norm(psi);
  }
  return -hbar_ * im / nrm;
}

void TrialFamily::validate_gradients(const ParameterState& s, double rel_tol) const {
  const double h = 1e-5;
  const auto du = denergy_du(s);
  const auto dv = denergy_dv(s);
  const double scale = std::max(1.0, std::abs(energy(s)));
  for (std::size_t k = 0; k < n_pairs(); ++k) {
    ParameterState sp = s, sm = s;
    sp.u[k] += h;
    sm.u[k] -= h;
    const double fd_u = (energy(sp) - energy(sm)) / (2.0 * h);
    if (std::abs(fd_u - du[k]) > rel_tol * std::max(scale, std::abs(fd_u)))
      throw domain_error(name() + ": gradient validation failed on u[" + std::to_string(k) +
                         "]");
    sp = s;
    sm = s;
    sp.v[k] += h;
    sm.v[k] -= h;
    const double fd_v = (energy(sp) - energy(sm)) / (2.0 * h);
    if (std::abs(fd_v - dv[k]) > rel_tol * std::max(scale, std::abs(fd_v)))
      throw domain_error(name() + ": gradient validation failed on v[" + std::to_string(k) +
                         "]");
  }
}

// ---------------------------------------------------------------------------
// Coherent family

namespace {

class CoherentFamily final : public TrialFamily {
 public:
  CoherentFamily(double alpha, Potential pot, double hbar, double mass)
      : TrialFamily(std::move(pot), hbar, mass), alpha_(alpha) {}

  std::string name() const override { return "coherent_state"; }
  std::size_t n_pairs() const override { return 1; }
  bool separable_energy() const override { return true; }

  double energy(const ParameterState& s) const override {
    return kinetic(s.v[0]) + potential_mean(s.u[0]);
  }
  std::vector<double> denergy_du(const ParameterState& s) const override {
    return {potential_mean_grad(s.u[0])};
  }
  std::vector<double> denergy_dv(const ParameterState& s) const override {
    return {s.v[0] / mass_};
  }
  std::vector<double> flux_u(const ParameterState& s) const override { return {s.v[0]}; }
  std::vector<double> flux_v(const ParameterState&) const override { return {0.0}; }

  std::complex<double> evaluate(const ParameterState& s, double q) const override {
    const double x = q - s.u[0];
    const double norm = std::pow(2.0 * alpha_ / M_PI, 0.25);
    return norm * std::exp(std::complex<double>(-alpha_ * x * x, s.v[0] * x / hbar_));
  }
  std::pair<double, double> quad_domain(const ParameterState& s) const override {
    const double w = 8.0 / std::sqrt(alpha_);
    return {s.u[0] - w, s.u[0] + w};
  }

 private:
  double kinetic(double v) const {
    return (v * v + hbar_ * hbar_ * alpha_) / (2.0 * mass_);
  }
  double potential_mean(double u) const {
    switch (potential_.kind()) {
      case Potential::Kind::free:
        return 0.0;
      case Potential::Kind::harmonic: {
        const double w = potential_.omega();
        // <V> = 1/2 m w^2 (u^2 + <x^2>), <x^2> = 1/(4 alpha)
        return 0.5 * mass_ * w * w * (u * u + 1.0 / (4.0 * alpha_));
      }
      default: {
        // quadrature over rho(q - u)
        const double width = 8.0 / std::sqrt(alpha_);
        const std::size_t n = kQuadPoints;
        const double dx = 2.0 * width / double(n);
        double s = 0.0, nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = -width + (double(i) + 0.5) * dx;
          const double rho = std::exp(-2.0 * alpha_ * x * x);
          s += potential_.value1d(u + x) * rho;
          nrm += rho;
        }
        return s / nrm;
      }
    }
  }
  double potential_mean_grad(double u) const {
    switch (potential_.kind()) {
      case Potential::Kind::free:
        return 0.0;
      case Potential::Kind::harmonic: {
        const double w = potential_.omega();
        return mass_ * w * w * u;
      }
      default: {
        const double width = 8.0 / std::sqrt(alpha_);
        const std::size_t n = kQuadPoints;
        const double dx = 2.0 * width / double(n);
        double s = 0.0, nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = -width + (double(i) + 0.5) * dx;
          const double rho = std::exp(-2.0 * alpha_ * x * x);
          s += potential_.grad({u + x, 0.0}, 1, 0) * rho;
          nrm += rho;
        }
        return s / nrm;
      }
    }
  }

  double alpha_;
};

// ---------------------------------------------------------------------------
// Skewed family: N (1 + skew x) exp(-alpha x^2 + i v x / hbar), x = q - u.

class SkewedFamily final : public TrialFamily {
 public:
  SkewedFamily(double alpha, double skew, Potential pot, double hbar, double mass)
      : TrialFamily(std::move(pot), hbar, mass), alpha_(alpha), skew_(skew) {
    xbar_ = (skew_ / (2.0 * alpha_)) / denom();
    x2bar_ = (1.0 / (4.0 * alpha_) + 3.0 * skew_ * skew_ / (16.0 * alpha_ * alpha_)) / denom();
  }

  std::string name() const override { return "skewed_gaussian"; }
  std::size_t n_pairs() const override { return 1; }
  bool separable_energy() const override { return true; }

  double energy(const ParameterState& s) const override {
    const double t =
        (s.v[0] * s.v[0] + hbar_ * hbar_ * (alpha_ + 0.75 * skew_ * skew_) / denom()) /
        (2.0 * mass_);
    return t + potential_mean(s.u[0]);
  }
  std::vector<double> denergy_du(const ParameterState& s) const override {
    return {potential_mean_grad(s.u[0])};
  }
  std::vector<double> denergy_dv(const ParameterState& s) const override {
    return {s.v[0] / mass_};
  }
  std::vector<double> flux_u(const ParameterState& s) const override { return {s.v[0]}; }
  std::vector<double> flux_v(const ParameterState&) const override { return {-xbar_}; }

  std::complex<double> evaluate(const ParameterState& s, double q) const override {
    const double x = q - s.u[0];
    const double n2 = std::sqrt(M_PI / (2.0 * alpha_)) * denom();
    return (1.0 + skew_ * x) / std::sqrt(n2) *
           std::exp(std::complex<double>(-alpha_ * x * x, s.v[0] * x / hbar_));
  }
  std::pair<double, double> quad_domain(const ParameterState& s) const override {
    const double w = 9.0 / std::sqrt(alpha_);
    return {s.u[0] - w, s.u[0] + w};
  }

 private:
  double denom() const { return 1.0 + skew_ * skew_ / (4.0 * alpha_); }

  double potential_mean(double u) const {
    switch (potential_.kind()) {
      case Potential::Kind::free:
        return 0.0;
      case Potential::Kind::harmonic: {
        const double w = potential_.omega();
        return 0.5 * mass_ * w * w * (u * u + 2.0 * u * xbar_ + x2bar_);
      }
      default:
        return quad_v(u, false);
    }
  }
  double potential_mean_grad(double u) const {
    switch (potential_.kind()) {
      case Potential::Kind::free:
        return 0.0;
      case Potential::Kind::harmonic: {
        const double w = potential_.omega();
        return mass_ * w * w * (u + xbar_);
      }
      default:
        return quad_v(u, true);
    }
  }
  double quad_v(double u, bool gradient) const {
    const double width = 9.0 / std::sqrt(alpha_);
    const std::size_t n = kQuadPoints;
    const double dx = 2.0 * width / double(n);
    double s = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = -width + (double(i) + 0.5) * dx;
      const double a = 1.0 + skew_ * x;
      const double rho = a * a * std::exp(-2.0 * alpha_ * x * x);
      s += (gradient ? potential_.grad({u + x, 0.0}, 1, 0) : potential_.value1d(u + x)) * rho;
      nrm += rho;
    }
    return s / nrm;
  }

  double alpha_, skew_, xbar_, x2bar_;
};

// ---------------------------------------------------------------------------
// Two-Gaussian family.

// Complex Gaussian integral bundle for exp(-A q^2 + B q + C):
// S0 = integral, S1 = integral of q, S2 = integral of q^2.
struct GaussianMoments {
  std::complex<double> s0, s1, s2;
};

GaussianMoments moments(double a, std::complex<double> b, std::complex<double> c) {
  GaussianMoments m;
  m.s0 = std::sqrt(M_PI / a) * std::exp(b * b / (4.0 * a) + c);
  m.s1 = m.s0 * b / (2.0 * a);
  m.s2 = m.s0 * (b * b / (4.0 * a * a) + 1.0 / (2.0 * a));
  return m;
}

class TwoGaussianFamily final : public TrialFamily {
 public:
  TwoGaussianFamily(double a1, double a2, Potential pot, double hbar, double mass)
      : TrialFamily(std::move(pot), hbar, mass), alpha_{a1, a2} {
    if (potential_.kind() != Potential::Kind::free &&
        potential_.kind() != Potential::Kind::harmonic)
      throw config_error("two_gaussian_sum: closed forms require a free or harmonic potential");
  }

  std::string name() const override { return "two_gaussian_sum"; }
  std::size_t n_pairs() const override { return 2; }
  bool separable_energy() const override { return false; }

  double energy(const ParameterState& s) const override {
    std::complex<double> nrm = 0.0, kin = 0.0, pot = 0.0;
    accumulate(s, nrm, kin, pot, nullptr, nullptr);
    return ((hbar_ * hbar_ / (2.0 * mass_)) * kin.real() + pot.real()) / nrm.real();
  }

  std::vector<double> denergy_du(const ParameterState& s) const override {
    return fd_gradient(s, true);
  }
  std::vector<double> denergy_dv(const ParameterState& s) const override {
    return fd_gradient(s, false);
  }

  std::vector<double> flux_u(const ParameterState& s) const override {
    return fluxes(s, false).first;
  }
  std::vector<double> flux_v(const ParameterState& s) const override {
    return fluxes(s, false).second;
  }
  std::vector<double> pair_flux_u(const ParameterState& s) const override {
    return fluxes(s, true).first;
  }
  std::vector<double> pair_flux_v(const ParameterState& s) const override {
    return fluxes(s, true).second;
  }

  // Raw fluxes -hbar Im<psi|dpsi/d.> / <psi|psi>; the pair-normalized form
  // divides by each packet's population share.
  std::pair<std::vector<double>, std::vector<double>> fluxes(const ParameterState& s,
                                                             bool per_share) const {
    std::vector<double> ju(2, 0.0), jv(2, 0.0);
    std::complex<double> nrm = 0.0, kin, pot;
    std::array<std::complex<double>, 2> su{}, sv{};
    std::array<double, 2> share{};
    accumulate(s, nrm, kin, pot, &su, &sv, &share);
    for (int k = 0; k < 2; ++k) {
      const double w = per_share ? share[k] : nrm.real();
      ju[k] = -hbar_ * su[k].imag() / w;
      jv[k] = -hbar_ * sv[k].imag() / w;
    }
    return {ju, jv};
  }

  std::complex<double> evaluate(const ParameterState& s, double q) const override {
    std::complex<double> nrm = 0.0, kin, pot;
    accumulate(s, nrm, kin, pot, nullptr, nullptr);
    std::complex<double> g = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double x = q - s.u[j];
      g += std::exp(std::complex<double>(-alpha_[j] * x * x, s.v[j] * x / hbar_));
    }
    return g / std::sqrt(nrm.real());
  }

  std::pair<double, double> quad_domain(const ParameterState& s) const override {
    const double w1 = 8.0 / std::sqrt(alpha_[0]), w2 = 8.0 / std::sqrt(alpha_[1]);
    return {std::min(s.u[0] - w1, s.u[1] - w2), std::max(s.u[0] + w1, s.u[1] + w2)};
  }

 private:
  // Sums over packet pairs (i,j): norm, kinetic numerator -<d2>, potential
  // numerator <V> (free/harmonic), and optionally <psi|dpsi/du_k>,
  // <psi|dpsi/dv_k> numerators.
  void accumulate(const ParameterState& s, std::complex<double>& nrm,
                  std::complex<double>& kin, std::complex<double>& pot,
                  std::array<std::complex<double>, 2>* du,
                  std::array<std::complex<double>, 2>* dv,
                  std::array<double, 2>* share = nullptr) const {
    nrm = kin = pot = 0.0;
    const double womega = potential_.kind() == Potential::Kind::harmonic
                              ? potential_.omega()
                              : 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double ai = alpha_[i], aj = alpha_[j];
        const double ui = s.u[i], uj = s.u[j];
        const double vi = s.v[i], vj = s.v[j];
        const double a = ai + aj;
        const std::complex<double> b(2.0 * ai * ui + 2.0 * aj * uj, (vj - vi) / hbar_);
        const std::complex<double> c(-ai * ui * ui - aj * uj * uj,
                                     (vi * ui - vj * uj) / hbar_);
        const auto m = moments(a, b, c);
        nrm += m.s0;
        // -conj(g_i) d2 g_j
        const std::complex<double> ivj(0.0, vj / hbar_);
        const auto x1 = m.s1 - uj * m.s0;            // <(q-u_j)>
        const auto x2 = m.s2 - 2.0 * uj * m.s1 + uj * uj * m.s0;
        kin += -(4.0 * aj * aj * x2 - 4.0 * aj * ivj * x1 +
                 (ivj * ivj - 2.0 * aj) * m.s0);
        if (womega > 0.0) pot += 0.5 * mass_ * womega * womega * m.s2;
        if (du) {
          // conj(g_i) dg_j/du_j contributes only to the j slot
          (*du)[j] += 2.0 * aj * x1 - ivj * m.s0;
          (*dv)[j] += std::complex<double>(0.0, 1.0 / hbar_) * x1;
        }
        if (share) {
          (*share)[j] += 0.5 * m.s0.real();
          (*share)[i] += 0.5 * m.s0.real();
        }
      }
    }
  }

  std::vector<double> fd_gradient(const ParameterState& s, bool wrt_u) const {
    std::vector<double> out(2, 0.0);
    const double h = 1e-6;
    for (int k = 0; k < 2; ++k) {
      ParameterState sp = s, sm = s;
      (wrt_u ? sp.u[k] : sp.v[k]) += h;
      (wrt_u ? sm.u[k] : sm.v[k]) -= h;
      out[k] = (energy(sp) - energy(sm)) / (2.0 * h);
    }
    return out;
  }

  std::array<double, 2> alpha_;
};

}  // namespace

std::unique_ptr<TrialFamily> make_coherent_family(double alpha, Potential pot, double hbar,
                                                  double mass) {
  return std::make_unique<CoherentFamily>(alpha, std::move(pot), hbar, mass);
}

std::unique_ptr<TrialFamily> make_skewed_family(double alpha, double skew, Potential pot,
                                                double hbar, double mass) {
  return std::make_unique<SkewedFamily>(alpha, skew, std::move(pot), hbar, mass);
}

std::unique_ptr<TrialFamily> make_two_gaussian_family(double alpha1, double alpha2,
                                                      Potential pot, double hbar, double mass) {
  return std::make_unique<TwoGaussianFamily>(alpha1, alpha2, std::move(pot), hbar, mass);
}

}  // namespace ow
