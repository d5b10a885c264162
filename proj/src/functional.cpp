#include "actionnet/functional.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace actionnet {

namespace {

inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void GravityParams::validate() const {
  if (!(m > 0.0)) throw std::invalid_argument("GravityParams: m must be > 0");
  if (!(g >= 0.0)) throw std::invalid_argument("GravityParams: g must be >= 0");
}

void OpticsParams::validate() const {
  if (!(n1 >= 1.0) || !(n2 >= 1.0))
    throw std::invalid_argument("OpticsParams: refractive indices must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("OpticsParams: c must be > 0");
}

void FilmParams::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("FilmParams: sigma must be > 0");
}

Lagrangian1D lagrangian_gravity(const GravityParams& params) {
  params.validate();
  const double m = params.m, g = params.g;
  return Lagrangian1D([m, g](const auto& /*t*/, const auto& x, const auto& x_dot) {
    return 0.5 * m * square(x_dot) - m * g * x;
  });
}

Lagrangian1D lagrangian_optics(const OpticsParams& params) {
  params.validate();
  const double n1 = params.n1, n2 = params.n2, c = params.c;
  const double interface_x = params.interface_x;
  return Lagrangian1D([=](const auto& x, const auto& /*y*/, const auto& y_dx) {
    const double n = value_of(x) <= interface_x ? n1 : n2;
    return (n / c) * sqrt(1.0 + square(y_dx));
  });
}

Lagrangian2D lagrangian_film(const FilmParams& params) {
  params.validate();
  const double sigma = params.sigma, p = params.p;
  return Lagrangian2D(
      [sigma, p](const auto& /*x*/, const auto& /*y*/, const auto& z, const auto& z_dx,
                 const auto& z_dy) {
        return 2.0 * sigma * sqrt(1.0 + square(z_dx) + square(z_dy)) - p * z;
      });
}

void Domain::validate() const {
  if (kind == Kind::Interval && !(a < b))
    throw std::invalid_argument("Domain: interval requires a < b");
  if (sample_count < 2) throw std::invalid_argument("Domain: sample_count must be >= 2");
}

double Domain::measure() const {
  return kind == Kind::Interval ? b - a : std::numbers::pi;
}

std::vector<Sample> sample_domain(const Domain& domain) {
  std::mt19937_64 rng(domain.seed);
  return sample_domain(domain, rng);
}

std::vector<Sample> sample_domain(const Domain& domain, std::mt19937_64& rng) {
  domain.validate();
  const int n = domain.sample_count;
  std::vector<Sample> samples;

  if (domain.kind == Domain::Kind::Interval) {
    const double w = (domain.b - domain.a) / n;
    samples.resize(n);
    if (domain.sampling == Domain::Sampling::MidpointGrid) {
      for (int i = 0; i < n; ++i) {
        samples[i].x = domain.a + (domain.b - domain.a) * (i + 0.5) / n;
        samples[i].weight = w;
      }
    } else {
      for (int i = 0; i < n; ++i) {
        samples[i].x = domain.a + (domain.b - domain.a) * unit_draw(rng);
        samples[i].weight = w;
      }
    }
    return samples;
  }

  // Unit disk.
  if (domain.sampling == Domain::Sampling::UniformRandom) {
    const double w = std::numbers::pi / n;
    samples.resize(n);
    for (int i = 0; i < n; ++i) {
      const double r = std::sqrt(unit_draw(rng));
      const double theta = 2.0 * std::numbers::pi * unit_draw(rng);
      samples[i].x = r * std::cos(theta);
      samples[i].y = r * std::sin(theta);
      samples[i].weight = w;
    }
    return samples;
  }

  // Equal-area polar grid: cells uniform in r^2 and angle, sampled at their
  // midpoints. Count rounds up to the nearest full grid.
  const int n_r = std::max(1, static_cast<int>(std::lround(std::sqrt(n) / 2.0)));
  const int n_az = (n + n_r - 1) / n_r;
  const int count = n_r * n_az;
  const double w = std::numbers::pi / count;
  samples.reserve(count);
  for (int j = 0; j < n_r; ++j) {
    const double r = std::sqrt((j + 0.5) / n_r);
    for (int k = 0; k < n_az; ++k) {
      const double theta = 2.0 * std::numbers::pi * (k + 0.5) / n_az;
      samples.push_back({r * std::cos(theta), r * std::sin(theta), w});
    }
  }
  return samples;
}

double action_estimate(const Lagrangian1D& lagrangian, const Mlp& net,
                       std::span<const double> params, std::span<const Sample> samples) {
  double total = 0.0;
  for (const Sample& s : samples) total += s.weight * lagrangian.at(s.x, net.eval1(params, s.x));
  return total;
}

double action_estimate(const Lagrangian2D& lagrangian, const Mlp& net,
                       std::span<const double> params, std::span<const Sample> samples) {
  double total = 0.0;
  for (const Sample& s : samples)
    total += s.weight * lagrangian.at(s.x, s.y, net.eval2(params, s.x, s.y));
  return total;
}

double action_estimate(const Lagrangian1D& lagrangian, const std::function<Jet1(double)>& path,
                       std::span<const Sample> samples) {
  double total = 0.0;
  for (const Sample& s : samples) total += s.weight * lagrangian.at(s.x, path(s.x));
  return total;
}

}  // namespace actionnet
