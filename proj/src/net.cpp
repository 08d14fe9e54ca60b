#include "sirpinn/net.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sirpinn/errors.hpp"

// glibc's libmvec ships SIMD variants of tanh; declaring the scalar entry
// point as an OpenMP simd function lets the vectorizer call them without
// -ffast-math (which would break the isfinite-based training guards).
#if defined(__GLIBC__) && defined(__GNUC__) && defined(__x86_64__) && \
    defined(_OPENMP)
#pragma omp declare simd notinbranch
extern "C" double vec_tanh(double) noexcept __asm__("tanh");
#else
static inline double vec_tanh(double z) noexcept { return std::tanh(z); }
#endif

namespace sirpinn {

void NetworkConfig::validate() const {
  if (input_dim != 1)
    throw ConfigError("network input_dim must be 1 (normalized time)");
  if (output_dim != 2 && output_dim != 3)
    throw ConfigError("network output_dim must be 2 or 3");
  if (hidden_layers < 1) throw ConfigError("network needs hidden_layers >= 1");
  if (hidden_width < 1) throw ConfigError("network needs hidden_width >= 1");
}

Network::Network(const NetworkConfig& config) : config_(config) {
  config_.validate();

  int in = config_.input_dim;
  std::size_t off = 0;
  for (int l = 0; l < config_.hidden_layers + 1; ++l) {
    const bool last = l == config_.hidden_layers;
    Layer ly;
    ly.in = in;
    ly.out = last ? config_.output_dim : config_.hidden_width;
    ly.w = off;
    off += static_cast<std::size_t>(ly.out) * ly.in;
    ly.b = off;
    off += ly.out;
    layers_.push_back(ly);
    in = ly.out;
  }
  net_params_ = off;
  params_.assign(net_params_, 0.0);

  // mt19937_64 with the 53-bit mantissa trick instead of
  // uniform_real_distribution: the latter is implementation-defined,
  // and seeded runs must be reproducible across standard libraries.
  std::mt19937_64 eng(config_.seed);
  auto uniform01 = [&eng]() { return (eng() >> 11) * 0x1.0p-53; };
  for (const Layer& ly : layers_) {
    const double limit = std::sqrt(6.0 / (ly.in + ly.out));
    double* w = params_.data() + ly.w;
    const std::size_t n = static_cast<std::size_t>(ly.out) * ly.in;
    for (std::size_t k = 0; k < n; ++k)
      w[k] = (2.0 * uniform01() - 1.0) * limit;
    // biases stay zero
  }
}

int Network::add_scalar(const std::string& name, double value) {
  if (!std::isfinite(value))
    throw ConfigError("trainable scalar '" + name + "' must start finite");
  scalar_names_.push_back(name);
  params_.push_back(value);
  return static_cast<int>(scalar_names_.size()) - 1;
}

double Network::scalar(int slot) const {
  if (slot < 0 || slot >= num_scalars())
    throw InternalError("scalar slot out of range");
  return params_[net_params_ + slot];
}

void Network::set_scalar(int slot, double value) {
  if (slot < 0 || slot >= num_scalars())
    throw InternalError("scalar slot out of range");
  params_[net_params_ + slot] = value;
}

std::span<const double> Network::scalars() const {
  return std::span<const double>(params_).subspan(net_params_);
}

int Network::max_width() const {
  return std::max({config_.input_dim, config_.hidden_width, config_.output_dim});
}

NetWorkspace::NetWorkspace(const Network& net)
    : num_hidden_(net.config().hidden_layers), width_(net.max_width()) {
  store_.assign(static_cast<std::size_t>(num_hidden_ + 1) * 2 * width_, 0.0);
  scratch_.assign(static_cast<std::size_t>(4) * width_, 0.0);
}

std::span<double> NetWorkspace::act(int layer) {
  return {store_.data() + static_cast<std::size_t>(layer) * 2 * width_,
          static_cast<std::size_t>(width_)};
}

std::span<double> NetWorkspace::act_dot(int layer) {
  return {store_.data() + static_cast<std::size_t>(layer) * 2 * width_ + width_,
          static_cast<std::size_t>(width_)};
}

std::span<const double> NetWorkspace::act(int layer) const {
  return {store_.data() + static_cast<std::size_t>(layer) * 2 * width_,
          static_cast<std::size_t>(width_)};
}

std::span<const double> NetWorkspace::act_dot(int layer) const {
  return {store_.data() + static_cast<std::size_t>(layer) * 2 * width_ + width_,
          static_cast<std::size_t>(width_)};
}

std::span<double> NetWorkspace::scratch(int which) {
  return {scratch_.data() + static_cast<std::size_t>(which) * width_,
          static_cast<std::size_t>(width_)};
}

NetOutputs net_forward(const Network& net, double t, NetWorkspace& ws) {
  if (!std::isfinite(t)) throw InputError("net_forward: non-finite time");
  const auto p = net.params();
  const auto& layers = net.layers();
  const bool use_tanh = net.config().activation == Activation::kTanh;

  ws.act(0)[0] = t;
  NetOutputs out;
  out.n = net.config().output_dim;
  double* zbuf = ws.scratch(0).data();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Network::Layer& ly = layers[l];
    const double* W = p.data() + ly.w;
    const double* b = p.data() + ly.b;
    const double* a_in = ws.act(static_cast<int>(l)).data();
    const bool last = l + 1 == layers.size();
    double* z_out = last ? out.y : zbuf;
    for (int i = 0; i < ly.out; ++i) {
      const double* w = W + static_cast<std::size_t>(i) * ly.in;
      double z = b[i];
#pragma omp simd reduction(+ : z)
      for (int j = 0; j < ly.in; ++j) z += w[j] * a_in[j];
      z_out[i] = z;
    }
    if (last) break;
    double* a_out = ws.act(static_cast<int>(l) + 1).data();
    if (use_tanh) {
#pragma omp simd
      for (int i = 0; i < ly.out; ++i) a_out[i] = vec_tanh(zbuf[i]);
    } else {
#pragma omp simd
      for (int i = 0; i < ly.out; ++i)
        a_out[i] = zbuf[i] > 0.0 ? zbuf[i] : 0.0;
    }
  }
  return out;
}

NetOutputs net_forward_tangent(const Network& net, double t, NetWorkspace& ws) {
  if (!std::isfinite(t)) throw InputError("net_forward: non-finite time");
  const auto p = net.params();
  const auto& layers = net.layers();
  const bool use_tanh = net.config().activation == Activation::kTanh;

  ws.act(0)[0] = t;
  ws.act_dot(0)[0] = 1.0;  // d(input)/dt
  NetOutputs out;
  out.n = net.config().output_dim;
  double* zbuf = ws.scratch(0).data();
  double* zdbuf = ws.scratch(1).data();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Network::Layer& ly = layers[l];
    const double* W = p.data() + ly.w;
    const double* b = p.data() + ly.b;
    const double* a_in = ws.act(static_cast<int>(l)).data();
    const double* ad_in = ws.act_dot(static_cast<int>(l)).data();
    const bool last = l + 1 == layers.size();
    double* z_out = last ? out.y : zbuf;
    double* zd_out = last ? out.dy : zdbuf;
    // four output rows per pass so a_in/ad_in loads are shared
    int i = 0;
    for (; i + 4 <= ly.out; i += 4) {
      const double* w0 = W + static_cast<std::size_t>(i + 0) * ly.in;
      const double* w1 = W + static_cast<std::size_t>(i + 1) * ly.in;
      const double* w2 = W + static_cast<std::size_t>(i + 2) * ly.in;
      const double* w3 = W + static_cast<std::size_t>(i + 3) * ly.in;
      double z0 = b[i + 0], z1 = b[i + 1], z2 = b[i + 2], z3 = b[i + 3];
      double d0 = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
#pragma omp simd reduction(+ : z0, z1, z2, z3, d0, d1, d2, d3)
      for (int j = 0; j < ly.in; ++j) {
        const double aj = a_in[j];
        const double dj = ad_in[j];
        z0 += w0[j] * aj;
        d0 += w0[j] * dj;
        z1 += w1[j] * aj;
        d1 += w1[j] * dj;
        z2 += w2[j] * aj;
        d2 += w2[j] * dj;
        z3 += w3[j] * aj;
        d3 += w3[j] * dj;
      }
      z_out[i + 0] = z0;
      z_out[i + 1] = z1;
      z_out[i + 2] = z2;
      z_out[i + 3] = z3;
      zd_out[i + 0] = d0;
      zd_out[i + 1] = d1;
      zd_out[i + 2] = d2;
      zd_out[i + 3] = d3;
    }
    for (; i < ly.out; ++i) {
      const double* w = W + static_cast<std::size_t>(i) * ly.in;
      double z = b[i];
      double zd = 0.0;
#pragma omp simd reduction(+ : z, zd)
      for (int j = 0; j < ly.in; ++j) {
        z += w[j] * a_in[j];
        zd += w[j] * ad_in[j];
      }
      z_out[i] = z;
      zd_out[i] = zd;
    }
    if (last) break;
    double* a_out = ws.act(static_cast<int>(l) + 1).data();
    double* ad_out = ws.act_dot(static_cast<int>(l) + 1).data();
    if (use_tanh) {
#pragma omp simd
      for (int k = 0; k < ly.out; ++k) {
        const double a = vec_tanh(zbuf[k]);
        a_out[k] = a;
        ad_out[k] = (1.0 - a * a) * zdbuf[k];
      }
    } else {
#pragma omp simd
      for (int k = 0; k < ly.out; ++k) {
        const double on = zbuf[k] > 0.0 ? 1.0 : 0.0;  // subgradient 0 at kink
        a_out[k] = on * zbuf[k];
        ad_out[k] = on * zdbuf[k];
      }
    }
  }
  return out;
}

// Reverse pass over the combined value+tangent graph. For an activation
// a = phi(z), adot = phi'(z) * zdot the adjoints are
//   zbar    = phi'(z) * abar + phi''(z) * zdot * adotbar
//   zdotbar = phi'(z) * adotbar
// and for tanh, phi''(z)*zdot = -2*a*adot, so stored (a, adot) suffice.
void net_backward(const Network& net, double /*t*/, NetWorkspace& ws,
                  std::span<const double> y_bar, std::span<const double> dy_bar,
                  std::span<double> grad) {
  const auto p = net.params();
  const auto& layers = net.layers();
  const bool use_tanh = net.config().activation == Activation::kTanh;
  const int n_out = net.config().output_dim;
  if (static_cast<int>(y_bar.size()) < n_out ||
      static_cast<int>(dy_bar.size()) < n_out)
    throw InternalError("net_backward: adjoint seeds shorter than output_dim");
  if (grad.size() < net.net_param_count())
    throw InternalError("net_backward: gradient buffer too small");

  auto zbar = ws.scratch(0);
  auto zdbar = ws.scratch(1);
  auto abar = ws.scratch(2);
  auto adbar = ws.scratch(3);

  // output layer is linear: z adjoints are the seeds themselves
  std::copy(y_bar.begin(), y_bar.begin() + n_out, zbar.begin());
  std::copy(dy_bar.begin(), dy_bar.begin() + n_out, zdbar.begin());

  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const Network::Layer& ly = layers[l];
    const double* W = p.data() + ly.w;
    const double* a_in = ws.act(l).data();
    const double* ad_in = ws.act_dot(l).data();
    double* gw = grad.data() + ly.w;
    double* gb = grad.data() + ly.b;

    std::fill(abar.begin(), abar.begin() + ly.in, 0.0);
    std::fill(adbar.begin(), adbar.begin() + ly.in, 0.0);
    double* ab = abar.data();
    double* adb = adbar.data();
    // four output rows per pass: a_in/ad_in loads and the abar/adbar
    // read-modify-write streams are shared across the rows
    int i = 0;
    for (; i + 4 <= ly.out; i += 4) {
      const double zb0 = zbar[i + 0], zb1 = zbar[i + 1];
      const double zb2 = zbar[i + 2], zb3 = zbar[i + 3];
      const double zd0 = zdbar[i + 0], zd1 = zdbar[i + 1];
      const double zd2 = zdbar[i + 2], zd3 = zdbar[i + 3];
      const double* w0 = W + static_cast<std::size_t>(i + 0) * ly.in;
      const double* w1 = W + static_cast<std::size_t>(i + 1) * ly.in;
      const double* w2 = W + static_cast<std::size_t>(i + 2) * ly.in;
      const double* w3 = W + static_cast<std::size_t>(i + 3) * ly.in;
      double* g0 = gw + static_cast<std::size_t>(i + 0) * ly.in;
      double* g1 = gw + static_cast<std::size_t>(i + 1) * ly.in;
      double* g2 = gw + static_cast<std::size_t>(i + 2) * ly.in;
      double* g3 = gw + static_cast<std::size_t>(i + 3) * ly.in;
#pragma omp simd
      for (int j = 0; j < ly.in; ++j) {
        const double aj = a_in[j];
        const double dj = ad_in[j];
        g0[j] += zb0 * aj + zd0 * dj;
        g1[j] += zb1 * aj + zd1 * dj;
        g2[j] += zb2 * aj + zd2 * dj;
        g3[j] += zb3 * aj + zd3 * dj;
        ab[j] += w0[j] * zb0 + w1[j] * zb1 + w2[j] * zb2 + w3[j] * zb3;
        adb[j] += w0[j] * zd0 + w1[j] * zd1 + w2[j] * zd2 + w3[j] * zd3;
      }
      gb[i + 0] += zb0;
      gb[i + 1] += zb1;
      gb[i + 2] += zb2;
      gb[i + 3] += zb3;
    }
    for (; i < ly.out; ++i) {
      const double zb = zbar[i];
      const double zdb = zdbar[i];
      const double* w = W + static_cast<std::size_t>(i) * ly.in;
      double* g = gw + static_cast<std::size_t>(i) * ly.in;
#pragma omp simd
      for (int j = 0; j < ly.in; ++j) {
        g[j] += zb * a_in[j] + zdb * ad_in[j];
        ab[j] += w[j] * zb;
        adb[j] += w[j] * zdb;
      }
      gb[i] += zb;
    }
    if (l == 0) break;

    // pull adjoints through the previous layer's activation
    const double* a = a_in;
    const double* ad = ad_in;
    if (use_tanh) {
      for (int i = 0; i < ly.in; ++i) {
        const double phi1 = 1.0 - a[i] * a[i];
        zbar[i] = phi1 * abar[i] - 2.0 * a[i] * ad[i] * adbar[i];
        zdbar[i] = phi1 * adbar[i];
      }
    } else {
      for (int i = 0; i < ly.in; ++i) {
        const double on = a[i] > 0.0 ? 1.0 : 0.0;
        zbar[i] = on * abar[i];
        zdbar[i] = on * adbar[i];
      }
    }
  }
}

}  // namespace sirpinn
