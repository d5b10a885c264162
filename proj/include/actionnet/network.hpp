#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "actionnet/jets.hpp"

namespace actionnet {

// Activations restricted to smooth (at least C2) functions: the training
// gradient differentiates the network's input derivative with respect to the
// weights, which requires a twice-differentiable nonlinearity.
enum class Activation { Tanh, Softplus };

Activation activation_from_name(std::string_view name);
std::string_view activation_name(Activation a);

struct NetworkSpec {
  int input_dim = 1;  // 1 or 2
  std::vector<int> hidden = {32, 32, 32};
  int output_dim = 1;
  Activation activation = Activation::Tanh;
  std::uint64_t init_seed = 0;

  void validate() const;  // throws std::invalid_argument
  std::size_t param_count() const;
  std::vector<int> layer_dims() const;  // [input, hidden..., output]

  bool operator==(const NetworkSpec&) const = default;
};

// Flat parameter storage. Order: layer by layer from input to output; within
// a layer the weight matrix first (row-major, rows = output units, columns =
// input units), then the biases. Checkpoints rely on this order.
using ParamVector = std::vector<double>;

// Weights uniform on [-sqrt(3/fan_in), sqrt(3/fan_in)] (variance 1/fan_in),
// biases zero. Fully determined by spec.init_seed; the generator consumes one
// draw per weight in storage order, so the result is platform-independent.
ParamVector init_params(const NetworkSpec& spec);

// Affine map from physical coordinates to [-1, 1] per axis, applied before
// the first layer. Keeps tanh pre-activations in a trainable range whatever
// the physical units are. Constraint locations go through the same map.
struct InputMap {
  std::array<double, 2> lo{-1.0, -1.0};
  std::array<double, 2> hi{1.0, 1.0};

  static InputMap interval(double a, double b) {
    InputMap m;
    m.lo[0] = a;
    m.hi[0] = b;
    return m;
  }

  double to_unit(int axis, double x) const {
    return (2.0 * x - lo[axis] - hi[axis]) / (hi[axis] - lo[axis]);
  }
  // d(unit)/d(physical); the jet seed for that axis.
  double scale(int axis) const { return 2.0 / (hi[axis] - lo[axis]); }
};

// Objective contributions tied to a single evaluation point of one network.
// The callable sees the point and the network output as dual scalars seeded
// on (y, y') -- respectively (z, dz/dx, dz/dy) in 2D -- so a single
// evaluation yields the term value and its partials with respect to the
// network output jet. An objective is a weighted sum of such terms; its
// exact parameter gradient follows by the chain rule through the network.
struct Term1 {
  double x = 0.0;
  double weight = 1.0;
  std::function<Jet<2>(const Jet<2>& x, const Jet<2>& y, const Jet<2>& y_dx)> fn;
};

struct Term2 {
  double x = 0.0;
  double y = 0.0;
  double weight = 1.0;
  std::function<Jet<3>(const Jet<3>& x, const Jet<3>& y, const Jet<3>& z, const Jet<3>& z_dx,
                       const Jet<3>& z_dy)>
      fn;
};

// A fully-connected feedforward network with smooth activations and a linear
// output layer, evaluable on plain reals or on jets carrying derivatives
// with respect to the (physical) inputs. Parameters are passed in
// explicitly; the class holds only the architecture and the input map, so
// evaluation is const and safe to run concurrently.
class Mlp {
 public:
  explicit Mlp(NetworkSpec spec, InputMap map = {});

  const NetworkSpec& spec() const { return spec_; }
  const InputMap& input_map() const { return map_; }
  std::size_t param_count() const { return spec_.param_count(); }
  ParamVector init_params() const { return actionnet::init_params(spec_); }

  // Plain forward evaluation at a physical point (scalar output).
  double value(std::span<const double> params, std::span<const double> x) const;
  double value1(std::span<const double> params, double x) const;
  double value2(std::span<const double> params, double x, double y) const;

  // Forward pass carrying input derivatives. The value channel performs the
  // same arithmetic as value(), so the two agree bit-for-bit.
  Jet1 eval1(std::span<const double> params, double x) const;
  Jet2 eval2(std::span<const double> params, double x, double y) const;

  // Cached forward state for one evaluation, reused by backprop. Reusable
  // across calls to avoid reallocation; one instance per thread.
  struct Trace {
    int channels = -1;
    std::vector<std::vector<double>> inputs;    // jets entering each affine layer
    std::vector<std::vector<double>> preacts;   // jets leaving each affine layer
  };

  Jet1 eval1(std::span<const double> params, double x, Trace& trace) const;
  Jet2 eval2(std::span<const double> params, double x, double y, Trace& trace) const;

  // Reverse pass: accumulates into `grad` the parameter gradient of the
  // scalar  v_bar * Y + sum_k d_bar[k] * (dY/dx_k)  for the traced
  // evaluation. `grad` must have param_count() entries.
  void backprop(std::span<const double> params, const Trace& trace, double v_bar,
                std::span<const double> d_bar, std::span<double> grad) const;

 private:
  struct Layer {
    int in = 0, out = 0;
    std::size_t w_off = 0, b_off = 0;
  };

  void forward_generic(std::span<const double> params, const double* xs, int channels,
                       Trace* trace, double* out) const;

  NetworkSpec spec_;
  InputMap map_;
  std::vector<Layer> layers_;
};

// Value of a sum of pointwise terms (1D network).
double objective_value(const Mlp& net, std::span<const double> params,
                       std::span<const Term1> terms);
double objective_value(const Mlp& net, std::span<const double> params,
                       std::span<const Term2> terms);

// Value plus exact parameter gradient, accumulated into `grad`.
double objective_value_and_grad(const Mlp& net, std::span<const double> params,
                                std::span<const Term1> terms, std::span<double> grad);
double objective_value_and_grad(const Mlp& net, std::span<const double> params,
                                std::span<const Term2> terms, std::span<double> grad);

// Exact gradient of a pointwise-term objective with respect to every
// parameter, as a fresh vector.
ParamVector grad_params(const Mlp& net, std::span<const double> params,
                        std::span<const Term1> terms);
ParamVector grad_params(const Mlp& net, std::span<const double> params,
                        std::span<const Term2> terms);

// Checkpoint I/O: a flat text dump of the spec plus the parameters in
// storage order, using hex floats so round-trips are bit-exact.
void save_checkpoint(const std::filesystem::path& path, const NetworkSpec& spec,
                     const ParamVector& params);
std::pair<NetworkSpec, ParamVector> load_checkpoint(const std::filesystem::path& path);

}  // namespace actionnet
