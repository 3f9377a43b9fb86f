#include "ow/potential.hpp"

#include <cmath>

#include "ow/errors.hpp"

namespace ow {

Potential Potential::free_space() { return Potential{}; }

Potential Potential::harmonic(double omega, double center, double mass) {
  Potential v;
  v.kind_ = Kind::harmonic;
  v.p0_ = omega;
  v.p1_ = center;
  v.p2_ = mass;
  return v;
}

Potential Potential::gaussian_barrier(double height, double width, double center) {
  if (!std::isfinite(height)) throw config_error("potential: barrier height must be finite");
  Potential v;
  v.kind_ = Kind::gaussian_barrier;
  v.p0_ = height;
  v.p1_ = width;
  v.p2_ = center;
  return v;
}

Potential Potential::eckart(double height, double width) {
  if (!std::isfinite(height)) throw config_error("potential: barrier height must be finite");
  Potential v;
  v.kind_ = Kind::eckart;
  v.p0_ = height;
  v.p1_ = width;
  return v;
}

Potential Potential::double_slit_mask(double wall_x, double thickness,
                                      std::array<double, 2> slit_centers,
                                      std::array<double, 2> slit_widths, double height) {
  if (!std::isfinite(height)) throw config_error("potential: wall height must be finite");
  Potential v;
  v.kind_ = Kind::double_slit_mask;
  v.p0_ = height;
  v.p1_ = thickness;
  v.p2_ = wall_x;
  v.slit_centers_ = slit_centers;
  v.slit_widths_ = slit_widths;
  return v;
}

Potential Potential::sampled(Grid grid, std::vector<double> values) {
  if (values.size() != grid.size())
    throw config_error("potential: sampled array length must match grid");
  Potential v;
  v.kind_ = Kind::sampled;
  v.sample_grid_ = grid;
  v.samples_ = std::move(values);
  return v;
}

std::string Potential::name() const {
  switch (kind_) {
    case Kind::free: return "free";
    case Kind::harmonic: return "harmonic";
    case Kind::gaussian_barrier: return "gaussian_barrier";
    case Kind::eckart: return "eckart";
    case Kind::double_slit_mask: return "double_slit_mask";
    case Kind::sampled: return "sampled";
  }
  return "?";
}

double Potential::value(const std::array<double, 2>& q, int dims) const {
  switch (kind_) {
    case Kind::free:
      return 0.0;
    case Kind::harmonic: {
      double r2 = (q[0] - p1_) * (q[0] - p1_);
      if (dims == 2) r2 += (q[1] - p1_) * (q[1] - p1_);
      return 0.5 * p2_ * p0_ * p0_ * r2;
    }
    case Kind::gaussian_barrier: {
      const double dx = q[0] - p2_;
      return p0_ * std::exp(-dx * dx / (2.0 * p1_ * p1_));
    }
    case Kind::eckart: {
      const double c = std::cosh(q[0] / p1_);
      return p0_ / (c * c);
    }
    case Kind::double_slit_mask: {
      if (std::abs(q[0] - p2_) > 0.5 * p1_) return 0.0;
      for (int s = 0; s < 2; ++s)
        if (std::abs(q[1] - slit_centers_[s]) < 0.5 * slit_widths_[s]) return 0.0;
      return p0_;
    }
    case Kind::sampled: {
      // Nearest-node lookup; the sampled variant exists for tabulated runs.
      const auto& g = sample_grid_;
      std::size_t ix = std::size_t(std::llround((q[0] - g.lo[0]) / g.spacing(0)));
      ix = std::min(ix, g.n[0] - 1);
      if (g.dims == 1) return samples_[ix];
      std::size_t iy = std::size_t(std::llround((q[1] - g.lo[1]) / g.spacing(1)));
      iy = std::min(iy, g.n[1] - 1);
      return samples_[g.index(ix, iy)];
    }
  }
  return 0.0;
}

double Potential::grad(const std::array<double, 2>& q, int dims, int axis) const {
  switch (kind_) {
    case Kind::free:
      return 0.0;
    case Kind::harmonic:
      return p2_ * p0_ * p0_ * (q[axis] - p1_);
    case Kind::gaussian_barrier: {
      if (axis != 0) return 0.0;
      const double dx = q[0] - p2_;
      return -p0_ * dx / (p1_ * p1_) * std::exp(-dx * dx / (2.0 * p1_ * p1_));
    }
    case Kind::eckart: {
      if (axis != 0) return 0.0;
      const double x = q[0] / p1_;
      return -2.0 * p0_ * std::tanh(x) / (std::cosh(x) * std::cosh(x)) / p1_;
    }
    default: {
      // Centered difference on a small step for masks and tabulated data.
      const double h = 1e-5;
      auto qp = q, qm = q;
      qp[axis] += h;
      qm[axis] -= h;
      return (value(qp, dims) - value(qm, dims)) / (2.0 * h);
    }
  }
}

double Potential::second(double q) const {
  switch (kind_) {
    case Kind::free:
      return 0.0;
    case Kind::harmonic:
      return p2_ * p0_ * p0_;
    case Kind::gaussian_barrier: {
      const double w2 = p1_ * p1_;
      const double dx = q - p2_;
      return p0_ * (dx * dx / w2 - 1.0) / w2 * std::exp(-dx * dx / (2.0 * w2));
    }
    default: {
      const double h = 1e-4;
      return (value1d(q + h) - 2.0 * value1d(q) + value1d(q - h)) / (h * h);
    }
  }
}

double Potential::fourth(double q) const {
  switch (kind_) {
    case Kind::free:
    case Kind::harmonic:
      return 0.0;
    case Kind::gaussian_barrier: {
      const double w2 = p1_ * p1_;
      const double u = (q - p2_) * (q - p2_) / w2;
      return p0_ * (u * u - 6.0 * u + 3.0) / (w2 * w2) * std::exp(-u / 2.0);
    }
    default: {
      const double h = 1e-3;
      return (value1d(q + 2 * h) - 4.0 * value1d(q + h) + 6.0 * value1d(q) -
              4.0 * value1d(q - h) + value1d(q - 2 * h)) /
             (h * h * h * h);
    }
  }
}

std::vector<double> Potential::tabulate(const Grid& g) const {
  std::vector<double> out(g.size());
  if (g.dims == 1) {
    for (std::size_t i = 0; i < g.n[0]; ++i) out[i] = value({g.coord(0, i), 0.0}, 1);
  } else {
    for (std::size_t ix = 0; ix < g.n[0]; ++ix)
      for (std::size_t iy = 0; iy < g.n[1]; ++iy)
        out[g.index(ix, iy)] = value({g.coord(0, ix), g.coord(1, iy)}, 2);
  }
  return out;
}

}  // namespace ow
