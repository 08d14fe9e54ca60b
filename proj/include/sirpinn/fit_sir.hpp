#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sirpinn/grad.hpp"
#include "sirpinn/net.hpp"
#include "sirpinn/optim.hpp"
#include "sirpinn/pipeline.hpp"

namespace sirpinn {

/// tanh squashing keeps the trainable rates inside (-1, 1) per day.
double constrain_rate(double raw);

/// How observed counts map into training units: s = S/N, i = I/c, r = R/c.
/// N alone would push I and R to ~1e-5 for realistic outbreaks, starving
/// the rate latents of gradient; scaling I and R by the observed peak keeps
/// every loss term O(1) while leaving the i'/r' equations form-invariant.
struct SirScaling {
  double N = 1.0;
  double c = 1.0;       // max observed I over the window (1 if degenerate)
  double t0 = 0.0;      // window in days
  double tf = 1.0;

  double window() const { return tf - t0; }
};

/// Mean over days of the summed squared compartment errors, both series in
/// training units. Throws InputError on length mismatch or empty input.
double sir_data_loss(const std::vector<std::array<double, 3>>& pred,
                     const std::vector<std::array<double, 3>>& obs);

/// Sum over collocation points of the three squared ODE residuals, in
/// training units with day-unit time derivatives:
///   rs = s' + (c/N) b s i,  ri = i' - b s i + a i,  rr = r' - a i
/// with a = tanh(raw_alpha), b = tanh(raw_beta).
double sir_physics_loss(const Network& net,
                        std::span<const double> times_norm, double raw_alpha,
                        double raw_beta, const SirScaling& scaling);

struct SirFitResult {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double final_data_loss = 0.0;
  double final_physics_loss = 0.0;
  std::vector<double> loss_history;  // weighted total, one entry per iteration
  std::uint64_t seed = 0;
  bool degenerate = false;     // no epidemic in the data; rates unidentifiable
  bool negative_rate = false;  // reported, never clamped
};

/// Full-batch PINN fit of (alpha, beta) on one region. The collocation grid
/// is the observation days. Throws TrainingError (with iteration and both
/// loss components) as soon as the loss stops being finite.
SirFitResult fit_sir(const RegionDataset& dataset,
                     const NetworkConfig& net_config,
                     const TrainConfig& train_config);

/// The per-point loss used by fit_sir, exposed so tests can drive the
/// gradient kernel directly. obs is in training units; raw rate values are
/// read from the network's scalar slots (0 = raw_alpha, 1 = raw_beta).
PointFn make_sir_point_loss(const Network& net,
                            std::vector<std::array<double, 3>> obs,
                            SirScaling scaling, double w0, double w1);

}  // namespace sirpinn
