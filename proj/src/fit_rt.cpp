#include "sirpinn/fit_rt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sirpinn/errors.hpp"
#include "sirpinn/optim.hpp"

namespace sirpinn {

void RtFitConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("rt config: alpha must be positive");
  if (w0 < 0.0 || w1 < 0.0) throw ConfigError("rt config: negative weight");
  if (stage1_iters < 1 || stage2_iters < 1)
    throw ConfigError("rt config: bad stage iteration counts");
  if (window_t0 < 0) throw ConfigError("rt config: window_t0 negative");
  if (window_tf != -1 && window_tf <= window_t0)
    throw ConfigError("rt config: window empty");
  if (!(initial_lr > 0.0) || !(lr_power > 0.0))
    throw ConfigError("rt config: bad learning-rate settings");
}

double rt_data_loss(std::span<const double> pred_I,
                    std::span<const double> obs_I) {
  if (pred_I.size() != obs_I.size())
    throw InputError("rt_data_loss: length mismatch");
  if (pred_I.empty()) throw InputError("rt_data_loss: empty series");
  double acc = 0.0;
  for (std::size_t k = 0; k < pred_I.size(); ++k) {
    const double e = pred_I[k] - obs_I[k];
    acc += e * e;
  }
  return acc / static_cast<double>(pred_I.size());
}

double rt_physics_loss(const Network& net, std::span<const double> times_norm,
                       double alpha, double t0, double tf) {
  NetWorkspace ws(net);
  double acc = 0.0;
  for (const double t : times_norm) {
    const NetOutputs out = net_forward_tangent(net, t, ws);
    const double r =
        reduced_residual(out.dy[0], alpha, t0, tf, out.y[1], out.y[0]);
    acc += r * r;
  }
  return acc;
}

PointFn make_rt_point_loss(std::vector<double> obs_I, double alpha, double t0,
                           double tf, double w0, double w1) {
  const double inv_t = 1.0 / static_cast<double>(obs_I.size());
  const double A = alpha * (tf - t0);
  return [obs = std::move(obs_I), inv_t, A, w0, w1](int k,
                                                    const NetOutputs& out) {
    PointSeeds seeds;
    const double e = out.y[0] - obs[k];
    seeds.data_term = e * e * inv_t;
    seeds.y_bar[0] = w0 * 2.0 * e * inv_t;

    const double is = out.y[0];
    const double rt = out.y[1];
    const double r = out.dy[0] - A * (rt - 1.0) * is;
    seeds.physics_term = r * r;
    seeds.y_bar[0] += w1 * 2.0 * r * (-A * (rt - 1.0));
    seeds.y_bar[1] = w1 * 2.0 * r * (-A * is);
    seeds.dy_bar[0] = w1 * 2.0 * r;
    return seeds;
  };
}

RtFitResult fit_rt(const RegionDataset& dataset, const RtFitConfig& config,
                   const NetworkConfig& net_config) {
  dataset.validate();
  config.validate();
  net_config.validate();
  if (net_config.output_dim != 2)
    throw ConfigError("fit_rt: network must have 2 outputs (Is, Rt)");

  const long n = static_cast<long>(dataset.series.size());
  const long t0 = config.window_t0;
  const long tf = config.window_tf == -1 ? n - 1 : config.window_tf;
  if (t0 >= n || tf >= n || tf <= t0)
    throw InputError("fit_rt: window outside the dataset");
  const long W = tf - t0 + 1;

  RtFitResult result;
  result.seed = net_config.seed;

  double c = 0.0;
  for (long k = t0; k <= tf; ++k)
    c = std::max(c, dataset.series.I[static_cast<std::size_t>(k)]);
  if (!(c > 0.0)) {
    c = 1.0;
    result.degenerate = true;
  }

  std::vector<double> obs(W), times(W);
  for (long k = 0; k < W; ++k) {
    obs[k] = dataset.series.I[static_cast<std::size_t>(t0 + k)] / c;
    times[k] = static_cast<double>(k) / static_cast<double>(tf - t0);
  }

  Network net(net_config);
  LossKernel kernel(net, times);
  std::vector<double> grad(net.size());
  result.loss_history.reserve(config.stage1_iters + config.stage2_iters);

  // stage 1: plain data loss on the Is head
  const PointFn fn1 = make_rt_point_loss(obs, config.alpha, 0.0, 1.0, 1.0, 0.0);
  {
    Adam adam(net.size());
    for (long it = 0; it < config.stage1_iters; ++it) {
      const double lr =
          poly_lr(it, config.stage1_iters, config.initial_lr, config.lr_power);
      const LossKernel::Result r = kernel.accumulate(net, fn1, grad);
      if (!std::isfinite(r.data_loss))
        throw TrainingError("fit_rt: non-finite loss at stage 1 iteration " +
                            std::to_string(it));
      result.loss_history.push_back(r.data_loss);
      adam.step(net.params(), grad, lr);
    }
  }
  result.stage1_data_loss = kernel.evaluate(net, fn1).data_loss;

  // shift the Rt head to the configured starting level
  const Network::Layer& out_layer = net.layers().back();
  net.params()[out_layer.b + 1] += config.rt_init;

  // stage 2: composite loss, schedule restarted
  const PointFn fn2 = make_rt_point_loss(obs, config.alpha, 0.0,
                                         static_cast<double>(tf - t0),
                                         config.w0, config.w1);
  {
    Adam adam(net.size());
    for (long it = 0; it < config.stage2_iters; ++it) {
      const double lr =
          poly_lr(it, config.stage2_iters, config.initial_lr, config.lr_power);
      const LossKernel::Result r = kernel.accumulate(net, fn2, grad);
      const double total = config.w0 * r.data_loss + config.w1 * r.physics_loss;
      if (!std::isfinite(total))
        throw TrainingError("fit_rt: non-finite loss at stage 2 iteration " +
                            std::to_string(it) + " (data=" +
                            std::to_string(r.data_loss) + ", physics=" +
                            std::to_string(r.physics_loss) + ")");
      result.loss_history.push_back(total);
      adam.step(net.params(), grad, lr);
    }
  }

  const LossKernel::Result fin = kernel.evaluate(net, fn2);
  result.final_data_loss = fin.data_loss;
  result.final_physics_loss = fin.physics_loss;

  NetWorkspace ws(net);
  result.series.alpha_used = config.alpha;
  for (long k = 0; k < W; ++k) {
    const NetOutputs out = net_forward(net, times[k], ws);
    result.series.t.push_back(static_cast<double>(t0 + k));
    result.series.rt.push_back(out.y[1]);
  }
  result.summary = summarize_rt(result.series);
  return result;
}

RtSummary summarize_rt(const RtSeries& series) {
  if (series.rt.empty()) throw InputError("summarize_rt: empty series");
  RtSummary s;
  s.alpha_used = series.alpha_used;
  s.peak_rt = series.rt.front();
  for (const double v : series.rt) {
    if (v > 1.0) ++s.days_above_one;
    s.peak_rt = std::max(s.peak_rt, v);
  }
  return s;
}

}  // namespace sirpinn
