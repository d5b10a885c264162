#include "actionnet/constraints.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace actionnet {

std::vector<double> constraint_violations(std::span<const PointConstraint> constraints,
                                          std::span<const Mlp> nets,
                                          std::span<const ParamVector> params) {
  std::vector<double> violations;
  violations.reserve(constraints.size());
  for (const PointConstraint& c : constraints) {
    if (c.network < 0 || c.network >= static_cast<int>(nets.size()))
      throw std::invalid_argument("constraint references a nonexistent network");
    violations.push_back(nets[c.network].value1(params[c.network], c.location) - c.target);
  }
  return violations;
}

double constraint_term(std::span<const double> forces,
                       std::span<const PointConstraint> constraints,
                       std::span<const Mlp> nets, std::span<const ParamVector> params) {
  if (forces.size() != constraints.size())
    throw std::invalid_argument("constraint_term: one force per constraint required");
  double total = 0.0;
  const auto violations = constraint_violations(constraints, nets, params);
  for (std::size_t i = 0; i < constraints.size(); ++i) total += forces[i] * violations[i];
  return total;
}

double interface_term(double force, const InterfaceJoint& joint, const Mlp& y1,
                      std::span<const double> p1, const Mlp& y2, std::span<const double> p2) {
  return force * (y1.value1(p1, joint.location) - y2.value1(p2, joint.location));
}

std::vector<double> boundary_angles(int count) {
  if (count < 3) throw std::invalid_argument("boundary_angles: need at least 3 angles");
  std::vector<double> angles(count);
  for (int j = 0; j < count; ++j) angles[j] = 2.0 * std::numbers::pi * (j + 0.5) / count;
  return angles;
}

double boundary_term_continuous(const Mlp& force_net, std::span<const double> force_params,
                                const Mlp& surface, std::span<const double> surface_params,
                                int angle_count, const BoundaryTarget& target) {
  const auto angles = boundary_angles(angle_count);
  const double w = 2.0 * std::numbers::pi / angle_count;
  double total = 0.0;
  for (double theta : angles) {
    const double violation =
        surface.value2(surface_params, std::cos(theta), std::sin(theta)) -
        (target ? target(theta) : 0.0);
    total += w * force_net.value1(force_params, theta) * violation;
  }
  return total;
}

}  // namespace actionnet
