#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "actionnet/jets.hpp"
#include "actionnet/network.hpp"

namespace actionnet {

struct GravityParams {
  double m = 1.0;
  double g = 10.0;
  void validate() const;
};

struct OpticsParams {
  double n1 = 1.0;
  double n2 = 1.5;
  double c = 1.0;          // propagation speed constant; scales the action only
  double interface_x = 0.0;
  void validate() const;
};

struct FilmParams {
  double sigma = 1.0;  // surface tension
  double p = 0.0;      // pressure difference across the film
  void validate() const;
};

// L(x, y, y') for a path problem, evaluable on plain reals and on duals
// seeded on (y, y') so its partials with respect to the state come from one
// evaluation. Constructed from a single generic callable.
class Lagrangian1D {
 public:
  template <class Fn>
  explicit Lagrangian1D(Fn fn)
      : real_([fn](double x, double y, double yp) { return fn(x, y, yp); }),
        dual_([fn](const Jet<2>& x, const Jet<2>& y, const Jet<2>& yp) { return fn(x, y, yp); }) {
  }

  double operator()(double x, double y, double y_dx) const { return real_(x, y, y_dx); }
  Jet<2> operator()(const Jet<2>& x, const Jet<2>& y, const Jet<2>& y_dx) const {
    return dual_(x, y, y_dx);
  }

  // Evaluate on the output jet of a path: L(x, y(x), y'(x)).
  double at(double x, const Jet1& y) const { return real_(x, y.v, y.d[0]); }

 private:
  std::function<double(double, double, double)> real_;
  std::function<Jet<2>(const Jet<2>&, const Jet<2>&, const Jet<2>&)> dual_;
};

// L(x, y, z, dz/dx, dz/dy) for a surface problem.
class Lagrangian2D {
 public:
  template <class Fn>
  explicit Lagrangian2D(Fn fn)
      : real_([fn](double x, double y, double z, double zx, double zy) {
          return fn(x, y, z, zx, zy);
        }),
        dual_([fn](const Jet<3>& x, const Jet<3>& y, const Jet<3>& z, const Jet<3>& zx,
                   const Jet<3>& zy) { return fn(x, y, z, zx, zy); }) {}

  double operator()(double x, double y, double z, double z_dx, double z_dy) const {
    return real_(x, y, z, z_dx, z_dy);
  }
  Jet<3> operator()(const Jet<3>& x, const Jet<3>& y, const Jet<3>& z, const Jet<3>& z_dx,
                    const Jet<3>& z_dy) const {
    return dual_(x, y, z, z_dx, z_dy);
  }

  double at(double x, double y, const Jet2& z) const { return real_(x, y, z.v, z.d[0], z.d[1]); }

 private:
  std::function<double(double, double, double, double, double)> real_;
  std::function<Jet<3>(const Jet<3>&, const Jet<3>&, const Jet<3>&, const Jet<3>&, const Jet<3>&)>
      dual_;
};

// L = 1/2 m x'^2 - m g x  (time is the abscissa, height the ordinate).
Lagrangian1D lagrangian_gravity(const GravityParams& params);

// L = n(x)/c * sqrt(1 + y'^2), with n piecewise: n1 left of the interface,
// n2 right of it, the left value at the interface itself.
Lagrangian1D lagrangian_optics(const OpticsParams& params);

// L = 2 sigma sqrt(1 + z_x^2 + z_y^2) - p z.
Lagrangian2D lagrangian_film(const FilmParams& params);

// Integration domain plus its sampling scheme. The midpoint grid is
// deterministic; uniform-random draws i.i.d. points and is reseedable for
// per-step resampling.
struct Domain {
  enum class Kind { Interval, UnitDisk };
  enum class Sampling { MidpointGrid, UniformRandom };

  Kind kind = Kind::Interval;
  double a = 0.0, b = 1.0;  // interval bounds (ignored for the disk)
  int sample_count = 64;
  Sampling sampling = Sampling::MidpointGrid;
  std::uint64_t seed = 0;

  void validate() const;
  double measure() const;  // b - a, or pi for the unit disk
};

struct Sample {
  double x = 0.0;
  double y = 0.0;  // unused for intervals
  double weight = 0.0;
};

// Interval + midpoint grid: N cell midpoints, weight (b-a)/N each.
// Interval + uniform random: N i.i.d. points, same weight.
// Unit disk + uniform random: N area-uniform points (r = sqrt(u)), weight
// pi/N each.
// Unit disk + midpoint grid: an equal-area polar grid (midpoints in r^2 and
// angle); the count is rounded up to a full n_r x n_az grid, every cell
// weighted pi/count.
std::vector<Sample> sample_domain(const Domain& domain);
std::vector<Sample> sample_domain(const Domain& domain, std::mt19937_64& rng);

// Quadrature estimate of the action: sum_i w_i L(x_i, Y(x_i), Y'(x_i)).
double action_estimate(const Lagrangian1D& lagrangian, const Mlp& net,
                       std::span<const double> params, std::span<const Sample> samples);
double action_estimate(const Lagrangian2D& lagrangian, const Mlp& net,
                       std::span<const double> params, std::span<const Sample> samples);

// Same estimate for an arbitrary path given as x -> (y, y'); used by the
// oracle cross-checks.
double action_estimate(const Lagrangian1D& lagrangian, const std::function<Jet1(double)>& path,
                       std::span<const Sample> samples);

}  // namespace actionnet
