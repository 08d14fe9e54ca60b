#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sirpinn/net.hpp"

namespace sirpinn {

/// What one collocation point contributes to the loss and to the adjoint
/// seeds of the backward pass. y_bar/dy_bar are d(weighted point loss)
/// w.r.t. the network outputs and their time derivatives; scalar_bar are
/// the direct gradients w.r.t. the network's extra scalars (rate latents).
/// data_term / physics_term report the point's share of the two loss
/// components with all weights and averaging already applied.
struct PointSeeds {
  std::array<double, 3> y_bar{};
  std::array<double, 3> dy_bar{};
  std::array<double, 4> scalar_bar{};
  double data_term = 0.0;
  double physics_term = 0.0;
};

using PointFn = std::function<PointSeeds(int k, const NetOutputs& out)>;

/// Full-batch loss + gradient accumulation over a fixed set of collocation
/// times. Points are processed in blocks of 16; every block writes its
/// partial sums into its own buffer and the buffers are reduced in block
/// order, so the result is bit-identical no matter how many OpenMP threads
/// run the block loop. accumulate_serial is the plain one-point-at-a-time
/// loop kept as the reference implementation.
class LossKernel {
 public:
  static constexpr int kBlock = 16;

  struct Result {
    double data_loss = 0.0;
    double physics_loss = 0.0;
  };

  LossKernel(const Network& net, std::vector<double> times);

  const std::vector<double>& times() const { return times_; }

  // grad must span net.size(); it is zeroed here first.
  Result accumulate(const Network& net, const PointFn& fn,
                    std::span<double> grad);
  Result accumulate_serial(const Network& net, const PointFn& fn,
                           std::span<double> grad);
  // loss only, no backward pass
  Result evaluate(const Network& net, const PointFn& fn);

 private:
  std::vector<double> times_;
  int num_blocks_ = 0;
  std::size_t param_count_ = 0;
  std::vector<double> block_grad_;           // num_blocks x param_count
  std::vector<LossKernel::Result> block_loss_;
  std::vector<NetWorkspace> workspaces_;     // one per OpenMP thread
};

}  // namespace sirpinn
