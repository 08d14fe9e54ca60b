#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sirpinn {

/// Adam with bias correction, defaults (0.9, 0.999, 1e-8).
class Adam {
 public:
  explicit Adam(std::size_t n, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);

  void step(std::span<double> params, std::span<const double> grad, double lr);

  long steps() const { return step_; }

 private:
  double beta1_, beta2_, eps_;
  long step_ = 0;
  std::vector<double> m_, v_;
};

/// Polynomial decay: initial_lr * (1 - iter/total)^power.
/// Throws InputError when iter > total.
double poly_lr(long iter, long total, double initial_lr, double power);

/// Shared training knobs for both inverse solvers.
struct TrainConfig {
  long iterations = 10000;
  double initial_lr = 1e-3;
  double lr_schedule_power = 1.0;
  double data_loss_weight = 1.0;     // w0
  double physics_loss_weight = 1.0;  // w1
  long stage1_iterations = 0;        // 0 = single-stage

  void validate() const;  // throws ConfigError
};

}  // namespace sirpinn
