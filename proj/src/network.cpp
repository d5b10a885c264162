#include "actionnet/network.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace actionnet {

Activation activation_from_name(std::string_view name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "softplus") return Activation::Softplus;
  throw std::invalid_argument("unknown activation '" + std::string(name) +
                              "' (supported: tanh, softplus)");
}

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Tanh:
      return "tanh";
    case Activation::Softplus:
      return "softplus";
  }
  return "?";
}

namespace {

inline double act(Activation a, double x) {
  switch (a) {
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Softplus:
      return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  }
  return 0.0;
}

inline double act_d(Activation a, double x) {
  switch (a) {
    case Activation::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::Softplus:
      return 1.0 / (1.0 + std::exp(-x));
  }
  return 0.0;
}

inline double act_dd(Activation a, double x) {
  switch (a) {
    case Activation::Tanh: {
      const double t = std::tanh(x);
      return -2.0 * t * (1.0 - t * t);
    }
    case Activation::Softplus: {
      const double s = 1.0 / (1.0 + std::exp(-x));
      return s * (1.0 - s);
    }
  }
  return 0.0;
}

// Uniform in [0, 1) from the top 53 bits of the generator output; identical
// across platforms for a given seed, unlike std::uniform_real_distribution.
inline double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void NetworkSpec::validate() const {
  if (input_dim != 1 && input_dim != 2)
    throw std::invalid_argument("NetworkSpec: input_dim must be 1 or 2");
  if (hidden.empty()) throw std::invalid_argument("NetworkSpec: hidden layer list is empty");
  for (int w : hidden)
    if (w < 1) throw std::invalid_argument("NetworkSpec: hidden widths must be >= 1");
  if (output_dim < 1) throw std::invalid_argument("NetworkSpec: output_dim must be >= 1");
}

std::vector<int> NetworkSpec::layer_dims() const {
  std::vector<int> dims;
  dims.reserve(hidden.size() + 2);
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(output_dim);
  return dims;
}

std::size_t NetworkSpec::param_count() const {
  const auto dims = layer_dims();
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l)
    n += static_cast<std::size_t>(dims[l]) * dims[l + 1] + dims[l + 1];
  return n;
}

ParamVector init_params(const NetworkSpec& spec) {
  spec.validate();
  const auto dims = spec.layer_dims();
  ParamVector p(spec.param_count(), 0.0);
  std::mt19937_64 rng(spec.init_seed);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = dims[l], out = dims[l + 1];
    const double bound = std::sqrt(3.0 / in);  // variance 1/fan_in
    for (int i = 0; i < in * out; ++i) p[off + i] = bound * (2.0 * next_unit(rng) - 1.0);
    off += static_cast<std::size_t>(in) * out;
    off += out;  // biases stay zero
  }
  return p;
}

Mlp::Mlp(NetworkSpec spec, InputMap map) : spec_(std::move(spec)), map_(map) {
  spec_.validate();
  if (spec_.output_dim != 1)
    throw std::invalid_argument("Mlp: evaluation requires output_dim == 1");
  const auto dims = spec_.layer_dims();
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer layer;
    layer.in = dims[l];
    layer.out = dims[l + 1];
    layer.w_off = off;
    off += static_cast<std::size_t>(layer.in) * layer.out;
    layer.b_off = off;
    off += layer.out;
    layers_.push_back(layer);
  }
}

// Shared kernel for plain and jet evaluation. Each unit is a packet of
// 1 + channels doubles: the value followed by the derivative channels. The
// value channel performs the same operation sequence for every channel
// count, which keeps value() and eval*() bit-identical.
void Mlp::forward_generic(std::span<const double> params, const double* xs, int channels,
                          Trace* trace, double* out) const {
  if (params.size() != param_count())
    throw std::invalid_argument("Mlp: parameter vector has wrong length");
  const int stride = 1 + channels;
  const std::size_t nlayers = layers_.size();

  if (trace) {
    trace->channels = channels;
    trace->inputs.resize(nlayers);
    trace->preacts.resize(nlayers);
  }

  std::vector<double> cur(static_cast<std::size_t>(spec_.input_dim) * stride, 0.0);
  for (int axis = 0; axis < spec_.input_dim; ++axis) {
    cur[static_cast<std::size_t>(axis) * stride] = map_.to_unit(axis, xs[axis]);
    if (axis < channels) cur[static_cast<std::size_t>(axis) * stride + 1 + axis] = map_.scale(axis);
  }

  std::vector<double> nxt;
  for (std::size_t l = 0; l < nlayers; ++l) {
    const Layer& layer = layers_[l];
    if (trace) trace->inputs[l] = cur;
    nxt.assign(static_cast<std::size_t>(layer.out) * stride, 0.0);
    const double* w = params.data() + layer.w_off;
    const double* b = params.data() + layer.b_off;
    for (int o = 0; o < layer.out; ++o) {
      double* unit = nxt.data() + static_cast<std::size_t>(o) * stride;
      unit[0] = b[o];
      const double* wrow = w + static_cast<std::size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) {
        const double* src = cur.data() + static_cast<std::size_t>(i) * stride;
        const double wij = wrow[i];
        for (int c = 0; c < stride; ++c) unit[c] += wij * src[c];
      }
    }
    if (trace) trace->preacts[l] = nxt;
    if (l + 1 < nlayers) {
      for (int o = 0; o < layer.out; ++o) {
        double* unit = nxt.data() + static_cast<std::size_t>(o) * stride;
        const double a = unit[0];
        unit[0] = act(spec_.activation, a);
        if (channels > 0) {
          const double da = act_d(spec_.activation, a);
          for (int c = 1; c < stride; ++c) unit[c] *= da;
        }
      }
    }
    cur.swap(nxt);
  }
  for (int c = 0; c < stride; ++c) out[c] = cur[c];
}

double Mlp::value(std::span<const double> params, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != spec_.input_dim)
    throw std::invalid_argument("Mlp: point dimension does not match input_dim");
  double out = 0.0;
  forward_generic(params, x.data(), 0, nullptr, &out);
  return out;
}

double Mlp::value1(std::span<const double> params, double x) const {
  return value(params, std::span<const double>(&x, 1));
}

double Mlp::value2(std::span<const double> params, double x, double y) const {
  const std::array<double, 2> pt{x, y};
  return value(params, pt);
}

Jet1 Mlp::eval1(std::span<const double> params, double x) const {
  if (spec_.input_dim != 1) throw std::invalid_argument("Mlp: eval1 requires input_dim == 1");
  double out[2];
  forward_generic(params, &x, 1, nullptr, out);
  Jet1 j(out[0]);
  j.d[0] = out[1];
  return j;
}

Jet2 Mlp::eval2(std::span<const double> params, double x, double y) const {
  if (spec_.input_dim != 2) throw std::invalid_argument("Mlp: eval2 requires input_dim == 2");
  const std::array<double, 2> pt{x, y};
  double out[3];
  forward_generic(params, pt.data(), 2, nullptr, out);
  Jet2 j(out[0]);
  j.d[0] = out[1];
  j.d[1] = out[2];
  return j;
}

Jet1 Mlp::eval1(std::span<const double> params, double x, Trace& trace) const {
  if (spec_.input_dim != 1) throw std::invalid_argument("Mlp: eval1 requires input_dim == 1");
  double out[2];
  forward_generic(params, &x, 1, &trace, out);
  Jet1 j(out[0]);
  j.d[0] = out[1];
  return j;
}

Jet2 Mlp::eval2(std::span<const double> params, double x, double y, Trace& trace) const {
  if (spec_.input_dim != 2) throw std::invalid_argument("Mlp: eval2 requires input_dim == 2");
  const std::array<double, 2> pt{x, y};
  double out[3];
  forward_generic(params, pt.data(), 2, &trace, out);
  Jet2 j(out[0]);
  j.d[0] = out[1];
  j.d[1] = out[2];
  return j;
}

// Reverse pass through the traced forward evaluation. The forward pass maps
// parameters to an output jet (value plus derivative channels); this
// accumulates the gradient of  v_bar * value + sum_k d_bar[k] * channel_k
// with respect to every weight and bias. Differentiating the derivative
// channels brings in the activation's second derivative.
void Mlp::backprop(std::span<const double> params, const Trace& trace, double v_bar,
                   std::span<const double> d_bar, std::span<double> grad) const {
  if (params.size() != param_count() || grad.size() != param_count())
    throw std::invalid_argument("Mlp::backprop: parameter/gradient length mismatch");
  const int channels = trace.channels;
  if (channels < 0 || static_cast<int>(d_bar.size()) != channels)
    throw std::invalid_argument("Mlp::backprop: adjoint does not match trace channels");
  const int stride = 1 + channels;

  std::vector<double> hbar(stride);
  hbar[0] = v_bar;
  for (int c = 0; c < channels; ++c) hbar[1 + c] = d_bar[c];

  std::vector<double> abar, prev;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const Layer& layer = layers_[li];
    const std::vector<double>& input = trace.inputs[li];
    const std::vector<double>& preact = trace.preacts[li];

    abar.assign(static_cast<std::size_t>(layer.out) * stride, 0.0);
    const bool activated = li + 1 < layers_.size();
    for (int o = 0; o < layer.out; ++o) {
      const double* hb = hbar.data() + static_cast<std::size_t>(o) * stride;
      double* ab = abar.data() + static_cast<std::size_t>(o) * stride;
      if (activated) {
        const double a = preact[static_cast<std::size_t>(o) * stride];
        const double da = act_d(spec_.activation, a);
        const double dda = act_dd(spec_.activation, a);
        double acc = hb[0] * da;
        for (int c = 0; c < channels; ++c)
          acc += hb[1 + c] * dda * preact[static_cast<std::size_t>(o) * stride + 1 + c];
        ab[0] = acc;
        for (int c = 0; c < channels; ++c) ab[1 + c] = hb[1 + c] * da;
      } else {
        for (int c = 0; c < stride; ++c) ab[c] = hb[c];
      }
    }

    const double* w = params.data() + layer.w_off;
    double* gw = grad.data() + layer.w_off;
    double* gb = grad.data() + layer.b_off;
    prev.assign(static_cast<std::size_t>(layer.in) * stride, 0.0);
    for (int o = 0; o < layer.out; ++o) {
      const double* ab = abar.data() + static_cast<std::size_t>(o) * stride;
      gb[o] += ab[0];
      const double* wrow = w + static_cast<std::size_t>(o) * layer.in;
      double* gwrow = gw + static_cast<std::size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) {
        const double* h = input.data() + static_cast<std::size_t>(i) * stride;
        double acc = ab[0] * h[0];
        for (int c = 1; c < stride; ++c) acc += ab[c] * h[c];
        gwrow[i] += acc;
        double* pb = prev.data() + static_cast<std::size_t>(i) * stride;
        const double wij = wrow[i];
        for (int c = 0; c < stride; ++c) pb[c] += wij * ab[c];
      }
    }
    hbar.swap(prev);
  }
}

namespace {

// Seeds for the dual evaluation of a pointwise term: the network output
// components become independent dual variables.
inline void seed_term1(const Jet1& yj, double x, Jet<2>& xd, Jet<2>& yd, Jet<2>& ydx) {
  xd = Jet<2>(x);
  yd = Jet<2>(yj.v);
  yd.d[0] = 1.0;
  ydx = Jet<2>(yj.d[0]);
  ydx.d[1] = 1.0;
}

inline void seed_term2(const Jet2& zj, double x, double y, Jet<3>& xd, Jet<3>& yd, Jet<3>& zd,
                       Jet<3>& zdx, Jet<3>& zdy) {
  xd = Jet<3>(x);
  yd = Jet<3>(y);
  zd = Jet<3>(zj.v);
  zd.d[0] = 1.0;
  zdx = Jet<3>(zj.d[0]);
  zdx.d[1] = 1.0;
  zdy = Jet<3>(zj.d[1]);
  zdy.d[2] = 1.0;
}

}  // namespace

double objective_value(const Mlp& net, std::span<const double> params,
                       std::span<const Term1> terms) {
  double total = 0.0;
  Jet<2> xd, yd, ydx;
  for (const Term1& t : terms) {
    const Jet1 yj = net.eval1(params, t.x);
    seed_term1(yj, t.x, xd, yd, ydx);
    total += t.weight * t.fn(xd, yd, ydx).v;
  }
  return total;
}

double objective_value(const Mlp& net, std::span<const double> params,
                       std::span<const Term2> terms) {
  double total = 0.0;
  Jet<3> xd, yd, zd, zdx, zdy;
  for (const Term2& t : terms) {
    const Jet2 zj = net.eval2(params, t.x, t.y);
    seed_term2(zj, t.x, t.y, xd, yd, zd, zdx, zdy);
    total += t.weight * t.fn(xd, yd, zd, zdx, zdy).v;
  }
  return total;
}

double objective_value_and_grad(const Mlp& net, std::span<const double> params,
                                std::span<const Term1> terms, std::span<double> grad) {
  double total = 0.0;
  Mlp::Trace trace;
  Jet<2> xd, yd, ydx;
  for (const Term1& t : terms) {
    const Jet1 yj = net.eval1(params, t.x, trace);
    seed_term1(yj, t.x, xd, yd, ydx);
    const Jet<2> r = t.fn(xd, yd, ydx);
    total += t.weight * r.v;
    const double d_bar = t.weight * r.d[1];
    net.backprop(params, trace, t.weight * r.d[0], std::span<const double>(&d_bar, 1), grad);
  }
  return total;
}

double objective_value_and_grad(const Mlp& net, std::span<const double> params,
                                std::span<const Term2> terms, std::span<double> grad) {
  double total = 0.0;
  Mlp::Trace trace;
  Jet<3> xd, yd, zd, zdx, zdy;
  for (const Term2& t : terms) {
    const Jet2 zj = net.eval2(params, t.x, t.y, trace);
    seed_term2(zj, t.x, t.y, xd, yd, zd, zdx, zdy);
    const Jet<3> r = t.fn(xd, yd, zd, zdx, zdy);
    total += t.weight * r.v;
    const std::array<double, 2> d_bar{t.weight * r.d[1], t.weight * r.d[2]};
    net.backprop(params, trace, t.weight * r.d[0], d_bar, grad);
  }
  return total;
}

ParamVector grad_params(const Mlp& net, std::span<const double> params,
                        std::span<const Term1> terms) {
  ParamVector grad(net.param_count(), 0.0);
  objective_value_and_grad(net, params, terms, grad);
  return grad;
}

ParamVector grad_params(const Mlp& net, std::span<const double> params,
                        std::span<const Term2> terms) {
  ParamVector grad(net.param_count(), 0.0);
  objective_value_and_grad(net, params, terms, grad);
  return grad;
}

void save_checkpoint(const std::filesystem::path& path, const NetworkSpec& spec,
                     const ParamVector& params) {
  if (params.size() != spec.param_count())
    throw std::invalid_argument("save_checkpoint: parameter vector length does not match spec");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path.string());
  out << "actionnet-checkpoint v1\n";
  out << "input_dim " << spec.input_dim << "\n";
  out << "hidden";
  for (int w : spec.hidden) out << " " << w;
  out << "\n";
  out << "output_dim " << spec.output_dim << "\n";
  out << "activation " << activation_name(spec.activation) << "\n";
  out << "init_seed " << spec.init_seed << "\n";
  out << "params " << params.size() << "\n";
  char buf[64];
  for (double p : params) {
    std::snprintf(buf, sizeof(buf), "%a", p);
    out << buf << "\n";
  }
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path.string());
}

std::pair<NetworkSpec, ParamVector> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "actionnet-checkpoint v1")
    throw std::runtime_error("load_checkpoint: bad header in " + path.string());

  NetworkSpec spec;
  spec.hidden.clear();
  std::size_t count = 0;
  std::string key;
  while (in >> key) {
    if (key == "input_dim") {
      in >> spec.input_dim;
    } else if (key == "hidden") {
      std::getline(in, line);
      std::istringstream ss(line);
      int w;
      while (ss >> w) spec.hidden.push_back(w);
    } else if (key == "output_dim") {
      in >> spec.output_dim;
    } else if (key == "activation") {
      std::string name;
      in >> name;
      spec.activation = activation_from_name(name);
    } else if (key == "init_seed") {
      in >> spec.init_seed;
    } else if (key == "params") {
      in >> count;
      break;
    } else {
      throw std::runtime_error("load_checkpoint: unknown field '" + key + "'");
    }
    if (!in) throw std::runtime_error("load_checkpoint: malformed value for '" + key + "'");
  }
  spec.validate();
  if (count != spec.param_count())
    throw std::runtime_error("load_checkpoint: parameter count does not match spec");

  ParamVector params;
  params.reserve(count);
  std::string tok;
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> tok)) throw std::runtime_error("load_checkpoint: truncated parameter list");
    params.push_back(std::strtod(tok.c_str(), nullptr));
  }
  return {spec, params};
}

}  // namespace actionnet
