#pragma once

#include <vector>

namespace sirpinn {

/// Post-constraint epidemic rates per day plus population size.
struct SirParams {
  double alpha = 0.0;  // recovery rate; 1/alpha = mean infectious period
  double beta = 0.0;   // transmission rate
  double N = 0.0;

  void validate() const;  // throws InputError on invariant violations
};

/// Daily S/I/R counts on a uniform 1-day grid.
struct CompartmentSeries {
  std::vector<double> t;  // day indices
  std::vector<double> S, I, R;
  double N = 0.0;

  std::size_t size() const { return t.size(); }
};

/// Per-day effective reproduction number estimate.
struct RtSeries {
  std::vector<double> t;
  std::vector<double> rt;
  double alpha_used = 0.0;
};

/// Window/scale bookkeeping for the reduced model: I(t) = c * Is(ts),
/// ts = (t - t0)/(tf - t0), with a fixed recovery rate.
struct ReducedScaling {
  double t0 = 0.0;
  double tf = 1.0;
  double c = 1.0;
  double alpha = 0.0;
};

/// Classical RK4 on dS/dt = -beta*S*I/N, dI/dt = beta*S*I/N - alpha*I,
/// dR/dt = alpha*I. Returns samples at whole days 0..days.
/// S+I+R is conserved to rounding at every sample.
CompartmentSeries sir_rk4_simulate(const SirParams& params, double s0,
                                   double i0, double r0, int days,
                                   int steps_per_day);

/// Rt = (beta/alpha) * (S/N). Throws InputError on alpha <= 0 or S outside
/// [0, N].
double effective_reproduction(double beta, double alpha, double S, double N);

/// Residual of the reduced model dIs/dts = alpha*(tf-t0)*(rt-1)*Is,
/// everything in normalized window time.
double reduced_residual(double dIs_dts, double alpha, double t0, double tf,
                        double rt, double Is);

/// Analytic reduced-model solution for constant rt (test oracle):
/// Is0 * exp(alpha*(tf-t0)*(rt_const-1)*ts).
double reduced_closed_form(double rt_const, double alpha, double t0, double tf,
                           double Is0, double ts);

}  // namespace sirpinn
