// Gradient-kernel benchmark: per-parameter dual-number forward mode vs the
// serial reverse-mode kernel vs the blocked (OpenMP-ready) kernel, on the
// network size the training loop actually uses.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sirpinn/dual.hpp"
#include "sirpinn/fit_sir.hpp"
#include "sirpinn/grad.hpp"
#include "sirpinn/net.hpp"

using namespace sirpinn;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double checksum(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += std::abs(x);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  int hidden = 12, width = 64, points = 36, reps = 50;
  if (argc > 1) hidden = std::atoi(argv[1]);
  if (argc > 2) width = std::atoi(argv[2]);
  if (argc > 3) points = std::atoi(argv[3]);
  if (argc > 4) reps = std::atoi(argv[4]);

  NetworkConfig nc;
  nc.output_dim = 3;
  nc.hidden_layers = hidden;
  nc.hidden_width = width;
  nc.activation = Activation::kTanh;
  nc.seed = 1;
  Network net(nc);
  net.add_scalar("raw_alpha", std::atanh(0.1));
  net.add_scalar("raw_beta", std::atanh(0.1));

  std::vector<double> times;
  std::vector<std::array<double, 3>> obs;
  for (int k = 0; k < points; ++k) {
    const double t = points > 1 ? k / double(points - 1) : 0.0;
    times.push_back(t);
    obs.push_back({1.0 - 0.05 * t, 0.2 + 0.6 * t, 0.2 * t});
  }
  SirScaling sc;
  sc.N = 7e7;
  sc.c = 3600.0;
  sc.t0 = 0.0;
  sc.tf = points - 1;
  const PointFn fn = make_sir_point_loss(net, obs, sc, 10.0, 1.0);

  std::printf("network: %d hidden x %d, %zu parameters, %d collocation points\n",
              hidden, width, net.size(), points);
#ifdef _OPENMP
  std::printf("openmp: %d thread(s)\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled\n");
#endif

  LossKernel kernel(net, times);
  std::vector<double> grad(net.size());

  // warm-up + correctness anchor
  kernel.accumulate_serial(net, fn, grad);
  const double serial_sum = checksum(grad);

  double t0 = now_s();
  for (int r = 0; r < reps; ++r) kernel.accumulate_serial(net, fn, grad);
  const double serial_dt = (now_s() - t0) / reps;
  std::printf("serial reverse kernel:   %9.3f ms/step  (checksum %.6e)\n",
              serial_dt * 1e3, checksum(grad));

  t0 = now_s();
  for (int r = 0; r < reps; ++r) kernel.accumulate(net, fn, grad);
  const double blocked_dt = (now_s() - t0) / reps;
  std::printf("blocked reverse kernel:  %9.3f ms/step  (checksum %.6e)\n",
              blocked_dt * 1e3, checksum(grad));
  std::printf("blocked vs serial: %.2fx\n", serial_dt / blocked_dt);

  // dual-number forward mode costs one pass per parameter; time a slice and
  // extrapolate so the benchmark stays runnable at full network size
  const std::size_t slice = std::min<std::size_t>(net.size(), 256);
  Dual y[3], dy[3];
  double sink = 0.0;
  t0 = now_s();
  for (std::size_t p = 0; p < slice; ++p) {
    for (const double t : times) {
      dual_forward_tangent(net, t, p, y, dy);
      sink += y[0].v + dy[0].d;
    }
  }
  const double dual_dt = (now_s() - t0) / slice * net.size();
  std::printf("dual-number reference:   %9.3f ms/step  (extrapolated from %zu "
              "of %zu parameters; sink %.3e)\n",
              dual_dt * 1e3, slice, net.size(), sink);
  std::printf("reverse vs dual speedup: %.0fx\n", dual_dt / blocked_dt);

  // keep the checksum comparison honest
  std::vector<double> blocked(net.size());
  kernel.accumulate(net, fn, blocked);
  std::printf("serial/blocked checksum delta: %.3e\n",
              std::abs(serial_sum - checksum(blocked)));
  return 0;
}
