#include "sirpinn/grad.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sirpinn/errors.hpp"

namespace sirpinn {

namespace {

int thread_pool_size() {
#ifdef _OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return 1;
#endif
}

int thread_index() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

// one point: forward+tangent, loss seeds, backward into grad
LossKernel::Result run_point(const Network& net, const PointFn& fn, int k,
                             double t, NetWorkspace& ws,
                             std::span<double> grad) {
  const NetOutputs out = net_forward_tangent(net, t, ws);
  const PointSeeds seeds = fn(k, out);
  net_backward(net, t, ws, seeds.y_bar, seeds.dy_bar, grad);
  const std::size_t tail = net.scalar_offset();
  for (int s = 0; s < net.num_scalars(); ++s)
    grad[tail + s] += seeds.scalar_bar[s];
  return {seeds.data_term, seeds.physics_term};
}

}  // namespace

LossKernel::LossKernel(const Network& net, std::vector<double> times)
    : times_(std::move(times)), param_count_(net.size()) {
  if (times_.empty()) throw InputError("loss kernel needs at least one point");
  num_blocks_ = static_cast<int>((times_.size() + kBlock - 1) / kBlock);
  block_grad_.assign(static_cast<std::size_t>(num_blocks_) * param_count_, 0.0);
  block_loss_.assign(num_blocks_, Result{});
  workspaces_.reserve(thread_pool_size());
  for (int i = 0; i < thread_pool_size(); ++i) workspaces_.emplace_back(net);
}

LossKernel::Result LossKernel::accumulate(const Network& net, const PointFn& fn,
                                          std::span<double> grad) {
  if (net.size() != param_count_)
    throw InternalError("loss kernel bound to a different parameter count");
  if (grad.size() != param_count_)
    throw InternalError("gradient buffer size mismatch");

  const int n = static_cast<int>(times_.size());
  const int pool = static_cast<int>(workspaces_.size());
  (void)pool;
#pragma omp parallel for schedule(static) num_threads(pool)
  for (int b = 0; b < num_blocks_; ++b) {
    NetWorkspace& ws = workspaces_[thread_index()];
    std::span<double> bg(block_grad_.data() + b * param_count_, param_count_);
    std::fill(bg.begin(), bg.end(), 0.0);
    Result acc;
    const int hi = std::min(n, (b + 1) * kBlock);
    for (int k = b * kBlock; k < hi; ++k) {
      const Result r = run_point(net, fn, k, times_[k], ws, bg);
      acc.data_loss += r.data_loss;
      acc.physics_loss += r.physics_loss;
    }
    block_loss_[b] = acc;
  }

  // fixed-order reduction: the only float summation whose order could
  // otherwise depend on the thread count
  std::fill(grad.begin(), grad.end(), 0.0);
  Result total;
  for (int b = 0; b < num_blocks_; ++b) {
    const double* bg = block_grad_.data() + b * param_count_;
#pragma omp simd
    for (std::size_t i = 0; i < param_count_; ++i) grad[i] += bg[i];
    total.data_loss += block_loss_[b].data_loss;
    total.physics_loss += block_loss_[b].physics_loss;
  }
  return total;
}

LossKernel::Result LossKernel::accumulate_serial(const Network& net,
                                                 const PointFn& fn,
                                                 std::span<double> grad) {
  if (grad.size() != net.size())
    throw InternalError("gradient buffer size mismatch");
  std::fill(grad.begin(), grad.end(), 0.0);
  NetWorkspace& ws = workspaces_.front();
  Result total;
  for (int k = 0; k < static_cast<int>(times_.size()); ++k) {
    const Result r = run_point(net, fn, k, times_[k], ws, grad);
    total.data_loss += r.data_loss;
    total.physics_loss += r.physics_loss;
  }
  return total;
}

LossKernel::Result LossKernel::evaluate(const Network& net, const PointFn& fn) {
  NetWorkspace& ws = workspaces_.front();
  Result total;
  for (int k = 0; k < static_cast<int>(times_.size()); ++k) {
    const NetOutputs out = net_forward_tangent(net, times_[k], ws);
    const PointSeeds seeds = fn(k, out);
    total.data_loss += seeds.data_term;
    total.physics_loss += seeds.physics_term;
  }
  return total;
}

}  // namespace sirpinn
