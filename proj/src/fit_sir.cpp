#include "sirpinn/fit_sir.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sirpinn/errors.hpp"

namespace sirpinn {

double constrain_rate(double raw) {
  if (!std::isfinite(raw)) throw InputError("constrain_rate: non-finite raw");
  return std::tanh(raw);
}

double sir_data_loss(const std::vector<std::array<double, 3>>& pred,
                     const std::vector<std::array<double, 3>>& obs) {
  if (pred.size() != obs.size())
    throw InputError("sir_data_loss: length mismatch");
  if (pred.empty()) throw InputError("sir_data_loss: empty series");
  double acc = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    for (int j = 0; j < 3; ++j) {
      const double e = pred[k][j] - obs[k][j];
      acc += e * e;
    }
  }
  return acc / static_cast<double>(pred.size());
}

double sir_physics_loss(const Network& net,
                        std::span<const double> times_norm, double raw_alpha,
                        double raw_beta, const SirScaling& scaling) {
  const double a = constrain_rate(raw_alpha);
  const double b = constrain_rate(raw_beta);
  const double k_sn = scaling.c / scaling.N;
  const double inv_win = 1.0 / scaling.window();

  NetWorkspace ws(net);
  double acc = 0.0;
  for (const double t : times_norm) {
    const NetOutputs out = net_forward_tangent(net, t, ws);
    const double s = out.y[0];
    const double i = out.y[1];
    const double rs = out.dy[0] * inv_win + k_sn * b * s * i;
    const double ri = out.dy[1] * inv_win - b * s * i + a * i;
    const double rr = out.dy[2] * inv_win - a * i;
    acc += rs * rs + ri * ri + rr * rr;
  }
  return acc;
}

PointFn make_sir_point_loss(const Network& net,
                            std::vector<std::array<double, 3>> obs,
                            SirScaling scaling, double w0, double w1) {
  const Network* net_p = &net;
  const double inv_t = 1.0 / static_cast<double>(obs.size());
  const double k_sn = scaling.c / scaling.N;
  const double inv_win = 1.0 / scaling.window();

  return [net_p, obs = std::move(obs), inv_t, k_sn, inv_win, w0,
          w1](int k, const NetOutputs& out) {
    PointSeeds seeds;

    // data: mean over days of the summed squared compartment errors
    double sq = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double e = out.y[j] - obs[k][j];
      sq += e * e;
      seeds.y_bar[j] = w0 * 2.0 * e * inv_t;
    }
    seeds.data_term = sq * inv_t;

    // physics: day-unit residuals of the scaled ODE system
    const double a = std::tanh(net_p->scalar(0));
    const double b = std::tanh(net_p->scalar(1));
    const double s = out.y[0];
    const double i = out.y[1];
    const double rs = out.dy[0] * inv_win + k_sn * b * s * i;
    const double ri = out.dy[1] * inv_win - b * s * i + a * i;
    const double rr = out.dy[2] * inv_win - a * i;
    seeds.physics_term = rs * rs + ri * ri + rr * rr;

    seeds.y_bar[0] += w1 * 2.0 * (rs * k_sn * b * i - ri * b * i);
    seeds.y_bar[1] +=
        w1 * 2.0 * (rs * k_sn * b * s + ri * (a - b * s) - rr * a);
    seeds.dy_bar[0] = w1 * 2.0 * rs * inv_win;
    seeds.dy_bar[1] = w1 * 2.0 * ri * inv_win;
    seeds.dy_bar[2] = w1 * 2.0 * rr * inv_win;
    seeds.scalar_bar[0] = w1 * 2.0 * (ri - rr) * i * (1.0 - a * a);
    seeds.scalar_bar[1] =
        w1 * 2.0 * (rs * k_sn - ri) * s * i * (1.0 - b * b);
    return seeds;
  };
}

SirFitResult fit_sir(const RegionDataset& dataset,
                     const NetworkConfig& net_config,
                     const TrainConfig& train_config) {
  dataset.validate();
  net_config.validate();
  train_config.validate();
  if (net_config.output_dim != 3)
    throw ConfigError("fit_sir: network must have 3 outputs (S, I, R)");
  if (train_config.stage1_iterations != 0)
    throw ConfigError("fit_sir: single-stage training, stage1_iterations = 0");
  const std::size_t T = dataset.series.size();
  if (T < 2) throw InputError("fit_sir: need at least two observation days");

  SirFitResult result;
  SirScaling scaling;
  scaling.N = dataset.N;
  scaling.t0 = 0.0;
  scaling.tf = static_cast<double>(T - 1);
  scaling.c = *std::max_element(dataset.series.I.begin(),
                                dataset.series.I.end());
  if (!(scaling.c > 0.0)) {
    scaling.c = 1.0;
    result.degenerate = true;
  }

  std::vector<std::array<double, 3>> obs(T);
  std::vector<double> times(T);
  for (std::size_t k = 0; k < T; ++k) {
    obs[k] = {dataset.series.S[k] / scaling.N, dataset.series.I[k] / scaling.c,
              dataset.series.R[k] / scaling.c};
    times[k] = static_cast<double>(k) / scaling.window();
  }

  Network net(net_config);
  const double raw0 = std::atanh(0.1);
  net.add_scalar("raw_alpha", raw0);
  net.add_scalar("raw_beta", raw0);

  const double w0 = train_config.data_loss_weight;
  const double w1 = train_config.physics_loss_weight;
  LossKernel kernel(net, times);
  const PointFn fn = make_sir_point_loss(net, std::move(obs), scaling, w0, w1);

  Adam adam(net.size());
  std::vector<double> grad(net.size());
  result.seed = net_config.seed;
  result.loss_history.reserve(train_config.iterations);
  for (long it = 0; it < train_config.iterations; ++it) {
    const double lr = poly_lr(it, train_config.iterations,
                              train_config.initial_lr,
                              train_config.lr_schedule_power);
    const LossKernel::Result r = kernel.accumulate(net, fn, grad);
    const double total = w0 * r.data_loss + w1 * r.physics_loss;
    if (!std::isfinite(total))
      throw TrainingError("fit_sir: non-finite loss at iteration " +
                          std::to_string(it) + " (data=" +
                          std::to_string(r.data_loss) + ", physics=" +
                          std::to_string(r.physics_loss) + ")");
    result.loss_history.push_back(total);
    adam.step(net.params(), grad, lr);
  }

  const LossKernel::Result fin = kernel.evaluate(net, fn);
  result.final_data_loss = fin.data_loss;
  result.final_physics_loss = fin.physics_loss;
  result.alpha_hat = std::tanh(net.scalar(0));
  result.beta_hat = std::tanh(net.scalar(1));
  result.negative_rate = result.alpha_hat < 0.0 || result.beta_hat < 0.0;
  return result;
}

}  // namespace sirpinn
