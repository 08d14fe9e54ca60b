#include "sirpinn/sir.hpp"

#include <cmath>

#include "sirpinn/errors.hpp"

namespace sirpinn {

void SirParams::validate() const {
  if (!(N > 0.0)) throw InputError("SIR params: population must be positive");
  if (!(alpha >= 0.0) || !(beta >= 0.0))
    throw InputError("SIR params: rates must be nonnegative");
}

namespace {

struct State {
  double s, i, r;
};

State rhs(const State& x, double alpha, double beta, double inv_n) {
  const double infect = beta * x.s * x.i * inv_n;
  const double recover = alpha * x.i;
  return {-infect, infect - recover, recover};
}

}  // namespace

CompartmentSeries sir_rk4_simulate(const SirParams& params, double s0,
                                   double i0, double r0, int days,
                                   int steps_per_day) {
  params.validate();
  if (s0 < 0.0 || i0 < 0.0 || r0 < 0.0)
    throw InputError("simulate: negative initial compartment");
  if (std::abs(s0 + i0 + r0 - params.N) > 1e-9 * params.N)
    throw InputError("simulate: initial compartments do not sum to N");
  if (days < 1) throw InputError("simulate: days must be >= 1");
  if (steps_per_day < 1) throw InputError("simulate: steps_per_day must be >= 1");

  const double h = 1.0 / steps_per_day;
  const double inv_n = 1.0 / params.N;

  CompartmentSeries out;
  out.N = params.N;
  out.t.reserve(days + 1);
  out.S.reserve(days + 1);
  out.I.reserve(days + 1);
  out.R.reserve(days + 1);

  State x{s0, i0, r0};
  auto record = [&out](int day, const State& s) {
    out.t.push_back(day);
    out.S.push_back(s.s);
    out.I.push_back(s.i);
    out.R.push_back(s.r);
  };
  record(0, x);

  for (int day = 1; day <= days; ++day) {
    for (int step = 0; step < steps_per_day; ++step) {
      const State k1 = rhs(x, params.alpha, params.beta, inv_n);
      const State x2{x.s + 0.5 * h * k1.s, x.i + 0.5 * h * k1.i,
                     x.r + 0.5 * h * k1.r};
      const State k2 = rhs(x2, params.alpha, params.beta, inv_n);
      const State x3{x.s + 0.5 * h * k2.s, x.i + 0.5 * h * k2.i,
                     x.r + 0.5 * h * k2.r};
      const State k3 = rhs(x3, params.alpha, params.beta, inv_n);
      const State x4{x.s + h * k3.s, x.i + h * k3.i, x.r + h * k3.r};
      const State k4 = rhs(x4, params.alpha, params.beta, inv_n);
      x.s += h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
      x.i += h / 6.0 * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i);
      x.r += h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
    }
    record(day, x);
  }
  return out;
}

double effective_reproduction(double beta, double alpha, double S, double N) {
  if (!(alpha > 0.0))
    throw InputError("effective_reproduction: alpha must be positive");
  if (S < 0.0 || S > N)
    throw InputError("effective_reproduction: S outside [0, N]");
  return beta / alpha * (S / N);
}

double reduced_residual(double dIs_dts, double alpha, double t0, double tf,
                        double rt, double Is) {
  return dIs_dts - alpha * (tf - t0) * (rt - 1.0) * Is;
}

double reduced_closed_form(double rt_const, double alpha, double t0, double tf,
                           double Is0, double ts) {
  return Is0 * std::exp(alpha * (tf - t0) * (rt_const - 1.0) * ts);
}

}  // namespace sirpinn
