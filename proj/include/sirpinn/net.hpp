#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sirpinn {

enum class Activation { kTanh, kRelu };

struct NetworkConfig {
  int input_dim = 1;  // normalized time
  int output_dim = 3;
  int hidden_layers = 7;
  int hidden_width = 20;
  Activation activation = Activation::kTanh;
  std::uint64_t seed = 0;

  // throws ConfigError on bad dimensions
  void validate() const;
};

/// Feed-forward network with every trainable quantity in one flat vector:
/// per layer the row-major weight matrix then the bias, layers in order,
/// and any registered extra scalars (rate latents etc.) at the tail. The
/// flat layout is what lets the optimizer treat weights and latents
/// uniformly and keeps gradient buffers trivially shaped.
class Network {
 public:
  struct Layer {
    int in = 0;
    int out = 0;
    std::size_t w = 0;  // offset of W (row-major, out x in)
    std::size_t b = 0;  // offset of bias
  };

  // Seeded init: Glorot-uniform weights in +-sqrt(6/(fan_in+fan_out)),
  // zero biases. Two constructions with the same config are identical.
  explicit Network(const NetworkConfig& config);

  const NetworkConfig& config() const { return config_; }
  const std::vector<Layer>& layers() const { return layers_; }

  // total trainable count including extra scalars
  std::size_t size() const { return params_.size(); }
  std::size_t net_param_count() const { return net_params_; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  // Register a named trainable scalar; returns its slot. Must happen
  // before training starts so gradient shapes stay fixed.
  int add_scalar(const std::string& name, double value);
  int num_scalars() const { return static_cast<int>(scalar_names_.size()); }
  std::size_t scalar_offset() const { return net_params_; }
  double scalar(int slot) const;
  void set_scalar(int slot, double value);
  const std::vector<std::string>& scalar_names() const { return scalar_names_; }

  // view of the scalar tail of params
  std::span<const double> scalars() const;

  int max_width() const;

 private:
  NetworkConfig config_;
  std::vector<Layer> layers_;
  std::vector<double> params_;
  std::size_t net_params_ = 0;
  std::vector<std::string> scalar_names_;
};

/// Outputs of one evaluation: values and exact d/dt tangents.
/// Only the first `n` entries are meaningful.
struct NetOutputs {
  double y[3] = {0, 0, 0};
  double dy[3] = {0, 0, 0};
  int n = 0;
};

/// Per-thread scratch for forward/tangent/backward passes. Holds the
/// stored activations the backward pass needs; reusable across points.
class NetWorkspace {
 public:
  explicit NetWorkspace(const Network& net);

  std::span<double> act(int layer);        // post-activation a_l
  std::span<double> act_dot(int layer);    // da_l/dt
  std::span<const double> act(int layer) const;
  std::span<const double> act_dot(int layer) const;
  std::span<double> scratch(int which);    // 4 adjoint scratch vectors

  int num_hidden() const { return num_hidden_; }

 private:
  int num_hidden_ = 0;
  int width_ = 0;
  std::vector<double> store_;    // a and a_dot per hidden layer
  std::vector<double> scratch_;  // adjoint buffers
};

/// Plain evaluation at normalized time t. Throws InputError on non-finite t.
NetOutputs net_forward(const Network& net, double t, NetWorkspace& ws);

/// Evaluation plus exact time derivative via tangent propagation
/// (d/dt seeded with 1 at the input). For relu the derivative at a kink
/// uses the 0 subgradient. Fills the workspace for a later backward pass.
NetOutputs net_forward_tangent(const Network& net, double t, NetWorkspace& ws);

/// Accumulate into `grad` the exact parameter gradient of a scalar loss
/// whose adjoint seeds at this point are y_bar (d loss/d y) and dy_bar
/// (d loss/d dy). Requires the workspace state left by net_forward_tangent
/// for the same (net, t). grad covers the network part of the flat vector;
/// scalar-tail gradients are the caller's business.
void net_backward(const Network& net, double t, NetWorkspace& ws,
                  std::span<const double> y_bar, std::span<const double> dy_bar,
                  std::span<double> grad);

}  // namespace sirpinn
