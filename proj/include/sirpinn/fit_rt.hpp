#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sirpinn/grad.hpp"
#include "sirpinn/net.hpp"
#include "sirpinn/pipeline.hpp"
#include "sirpinn/sir.hpp"

namespace sirpinn {

/// Two-stage Rt estimation setup. The network has two heads: scaled
/// infections Is and the reproduction number Rt; alpha stays fixed.
struct RtFitConfig {
  double alpha = 1.0 / 14;
  double w0 = 1e2;   // data weight, stage 2
  double w1 = 1e-6;  // physics weight, stage 2
  long stage1_iters = 30000;
  long stage2_iters = 20000;
  long window_t0 = 0;  // day indices into the dataset, inclusive
  long window_tf = -1; // -1 = last day
  double rt_init = 1.0;
  double initial_lr = 1e-3;
  double lr_power = 1.0;

  void validate() const;  // throws ConfigError
};

struct RtSummary {
  long days_above_one = 0;  // strict rt > 1 count
  double peak_rt = 0.0;
  double alpha_used = 0.0;
};

struct RtFitResult {
  RtSeries series;
  RtSummary summary;
  double stage1_data_loss = 0.0;  // L_data right after stage 1
  double final_data_loss = 0.0;
  double final_physics_loss = 0.0;
  std::vector<double> loss_history;  // stage-1 entries then stage-2 entries
  std::uint64_t seed = 0;
  bool degenerate = false;  // window had no observed infections
};

/// Mean squared error on the scaled infected series only.
double rt_data_loss(std::span<const double> pred_I,
                    std::span<const double> obs_I);

/// Squared reduced-model residual summed over collocation points, in
/// normalized window time. Head 0 = Is, head 1 = Rt; Rt never appears in
/// the data loss.
double rt_physics_loss(const Network& net, std::span<const double> times_norm,
                       double alpha, double t0, double tf);

/// Stage 1 fits the Is head alone on the data loss; then rt_init is added
/// to the Rt head's output bias; stage 2 minimizes w0*L_data + w1*L_physics
/// with a restarted learning-rate schedule. Returns the Rt series read off
/// the trained head on each observation day.
RtFitResult fit_rt(const RegionDataset& dataset, const RtFitConfig& config,
                   const NetworkConfig& net_config);

RtSummary summarize_rt(const RtSeries& series);

/// Stage-2 composite per-point loss exposed for gradient tests.
PointFn make_rt_point_loss(std::vector<double> obs_I, double alpha, double t0,
                           double tf, double w0, double w1);

}  // namespace sirpinn
