#include "sirpinn/optim.hpp"

#include <cmath>

#include "sirpinn/errors.hpp"

namespace sirpinn {

Adam::Adam(std::size_t n, double beta1, double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad,
                double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw InternalError("adam: parameter/gradient shape mismatch");
  ++step_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  double* m = m_.data();
  double* v = v_.data();
#pragma omp simd
  for (std::size_t i = 0; i < m_.size(); ++i) {
    const double g = grad[i];
    m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
    v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
    params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
  }
}

double poly_lr(long iter, long total, double initial_lr, double power) {
  if (iter > total) throw InputError("poly_lr: iter exceeds schedule total");
  const double frac = 1.0 - static_cast<double>(iter) / static_cast<double>(total);
  return initial_lr * std::pow(frac, power);
}

void TrainConfig::validate() const {
  if (iterations < 1) throw ConfigError("train config: iterations must be >= 1");
  if (!(initial_lr > 0.0)) throw ConfigError("train config: initial_lr <= 0");
  if (!(lr_schedule_power > 0.0))
    throw ConfigError("train config: lr_schedule_power <= 0");
  if (data_loss_weight < 0.0 || physics_loss_weight < 0.0)
    throw ConfigError("train config: negative loss weight");
  if (stage1_iterations < 0 || stage1_iterations > iterations)
    throw ConfigError("train config: stage1_iterations outside [0, iterations]");
}

}  // namespace sirpinn
