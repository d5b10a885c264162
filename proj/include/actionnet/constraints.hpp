#pragma once

#include <functional>
#include <span>
#include <vector>

#include "actionnet/network.hpp"

namespace actionnet {

// Pins the value of one path network at one domain location.
struct PointConstraint {
  int network = 0;  // index of the path network the constraint applies to
  double location = 0.0;
  double target = 0.0;
};

// How the constraint forces are represented. Point constraints each get one
// plain trainable scalar; a continuous boundary gets a small network over
// the boundary parameter (the angle, for the unit circle).
struct ForceModel {
  enum class Kind { Scalars, Network };
  Kind kind = Kind::Scalars;
  NetworkSpec net{};        // Network kind only; input_dim must be 1
  int boundary_samples = 64;  // quadrature angles on the boundary circle
};

// Two path networks tied together at one interior location by a single
// shared force: the same signed term enters both minimization objectives and
// the maximization objective, which realizes the equal-and-opposite pair
// through the opposing gradients on the two networks.
struct InterfaceJoint {
  double location = 0.0;
};

// target(theta) on the boundary circle; the demos use the constant 0.
using BoundaryTarget = std::function<double(double)>;

// sum_i F_i * (Y(loc_i) - target_i). Bilinear in the forces and the
// violations; differentiable with respect to both the network and the force
// parameters.
double constraint_term(std::span<const double> forces,
                       std::span<const PointConstraint> constraints,
                       std::span<const Mlp> nets, std::span<const ParamVector> params);

// Current violations Y(loc_i) - target_i, one per constraint.
std::vector<double> constraint_violations(std::span<const PointConstraint> constraints,
                                          std::span<const Mlp> nets,
                                          std::span<const ParamVector> params);

// force * (Y1(loc) - Y2(loc)).
double interface_term(double force, const InterfaceJoint& joint, const Mlp& y1,
                      std::span<const double> p1, const Mlp& y2, std::span<const double> p2);

// Midpoint-offset uniform angles: theta_j = 2 pi (j + 1/2) / count.
std::vector<double> boundary_angles(int count);

// (2 pi / M) * sum_j F(theta_j) * (Z(cos theta_j, sin theta_j) - target(theta_j)).
double boundary_term_continuous(const Mlp& force_net, std::span<const double> force_params,
                                const Mlp& surface, std::span<const double> surface_params,
                                int angle_count, const BoundaryTarget& target);

}  // namespace actionnet
