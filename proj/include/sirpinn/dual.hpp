#pragma once

#include <cmath>
#include <cstddef>

#include "sirpinn/net.hpp"

namespace sirpinn {

/// First-order dual number: v carries the value, d carries d(v)/d(theta_k)
/// for whichever single parameter was seeded. Used as the slow, independent
/// gradient reference: run the whole forward+tangent computation once per
/// parameter with that parameter's dual part seeded to 1.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit by design
  Dual(double value, double dot) : v(value), d(dot) {}
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
inline Dual operator/(Dual a, Dual b) {
  const double inv = 1.0 / b.v;
  return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
}
inline Dual& operator+=(Dual& a, Dual b) { return a = a + b; }

inline Dual tanh(Dual x) {
  const double t = std::tanh(x.v);
  return {t, (1.0 - t * t) * x.d};
}
inline Dual relu(Dual x) { return x.v > 0.0 ? x : Dual{0.0, 0.0}; }

/// Forward + time-tangent pass in dual arithmetic with d/d(params[seeded])
/// tracked. Writes output values/time-derivatives (with their parameter
/// sensitivities) for the network's outputs. Exact, O(params) per full
/// gradient — test and benchmark reference only.
void dual_forward_tangent(const Network& net, double t, std::size_t seeded,
                          Dual y[3], Dual dy[3]);

}  // namespace sirpinn
