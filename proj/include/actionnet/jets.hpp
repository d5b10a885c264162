#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace actionnet {

// Thrown when jet arithmetic is evaluated outside an operation's domain
// (division by zero, sqrt of a non-positive value). Carries the offending
// input value for diagnostics.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, double offending_input)
      : std::runtime_error(what), offending_(offending_input) {}
  double offending_input() const noexcept { return offending_; }

 private:
  double offending_;
};

// A value together with its first partial derivatives with respect to N
// inputs. Arithmetic propagates each partial channel by the chain rule, so
// any expression built from the operations below carries exact first
// derivatives of its value.
//
// The same type serves two roles: Jet<1>/Jet<2> carry derivatives with
// respect to domain coordinates (y'(x), dz/dx, dz/dy), and the wider
// instantiations carry partials of a Lagrangian with respect to the state
// it is evaluated at.
template <int N>
struct Jet {
  static_assert(N >= 1);

  double v = 0.0;
  std::array<double, N> d{};

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: constant lift, zero partials
  constexpr Jet(double value, const std::array<double, N>& partials) : v(value), d(partials) {}

  Jet operator-() const {
    Jet r(-v);
    for (int i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    if (o.v == 0.0) throw EvalError("jet division by zero", o.v);
    for (int i = 0; i < N; ++i) d[i] = (d[i] * o.v - v * o.d[i]) / (o.v * o.v);
    v /= o.v;
    return *this;
  }

  Jet& operator+=(double c) {
    v += c;
    return *this;
  }
  Jet& operator-=(double c) {
    v -= c;
    return *this;
  }
  Jet& operator*=(double c) {
    v *= c;
    for (int i = 0; i < N; ++i) d[i] *= c;
    return *this;
  }
  Jet& operator/=(double c) {
    if (c == 0.0) throw EvalError("jet division by zero", c);
    v /= c;
    for (int i = 0; i < N; ++i) d[i] /= c;
    return *this;
  }
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;

// Scalar value of either a jet or a plain double; lets generic code branch
// on magnitudes without touching the derivative channels.
constexpr double value_of(double x) { return x; }
template <int N>
constexpr double value_of(const Jet<N>& x) {
  return x.v;
}

template <int N>
constexpr Jet<N> lift_const(double c) {
  return Jet<N>(c);
}

// The identity function of input `axis`: value x, unit derivative on that
// channel, zero elsewhere.
template <int N>
Jet<N> seed_input(double x, int axis = 0) {
  if (axis < 0 || axis >= N)
    throw std::invalid_argument("seed_input: axis " + std::to_string(axis) +
                                " out of range for Jet<" + std::to_string(N) + ">");
  Jet<N> j(x);
  j.d[axis] = 1.0;
  return j;
}

template <int N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) {
  return a += b;
}
template <int N>
Jet<N> operator+(Jet<N> a, double b) {
  return a += b;
}
template <int N>
Jet<N> operator+(double a, Jet<N> b) {
  return b += a;
}

template <int N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) {
  return a -= b;
}
template <int N>
Jet<N> operator-(Jet<N> a, double b) {
  return a -= b;
}
template <int N>
Jet<N> operator-(double a, const Jet<N>& b) {
  Jet<N> r(-b);
  r.v += a;
  return r;
}

template <int N>
Jet<N> operator*(Jet<N> a, const Jet<N>& b) {
  return a *= b;
}
template <int N>
Jet<N> operator*(Jet<N> a, double b) {
  return a *= b;
}
template <int N>
Jet<N> operator*(double a, Jet<N> b) {
  return b *= a;
}

template <int N>
Jet<N> operator/(Jet<N> a, const Jet<N>& b) {
  return a /= b;
}
template <int N>
Jet<N> operator/(Jet<N> a, double b) {
  return a /= b;
}
template <int N>
Jet<N> operator/(double a, const Jet<N>& b) {
  return Jet<N>(a) /= b;
}

template <int N>
Jet<N> square(const Jet<N>& a) {
  Jet<N> r(a.v * a.v);
  for (int i = 0; i < N; ++i) r.d[i] = 2.0 * a.v * a.d[i];
  return r;
}

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  if (!(a.v > 0.0)) throw EvalError("jet sqrt of non-positive value", a.v);
  const double s = std::sqrt(a.v);
  Jet<N> r(s);
  const double ds = 0.5 / s;
  for (int i = 0; i < N; ++i) r.d[i] = ds * a.d[i];
  return r;
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
  const double e = std::exp(a.v);
  Jet<N> r(e);
  for (int i = 0; i < N; ++i) r.d[i] = e * a.d[i];
  return r;
}

template <int N>
Jet<N> tanh(const Jet<N>& a) {
  const double t = std::tanh(a.v);
  Jet<N> r(t);
  const double dt = 1.0 - t * t;
  for (int i = 0; i < N; ++i) r.d[i] = dt * a.d[i];
  return r;
}

}  // namespace actionnet
