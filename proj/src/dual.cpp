#include "sirpinn/dual.hpp"

#include <vector>

namespace sirpinn {

void dual_forward_tangent(const Network& net, double t, std::size_t seeded,
                          Dual y[3], Dual dy[3]) {
  const auto p = net.params();
  const bool use_tanh = net.config().activation == Activation::kTanh;
  const int width = net.max_width();

  std::vector<Dual> a(width), ad(width), za(width), zad(width);
  a[0] = Dual(t);
  ad[0] = Dual(1.0);

  auto param = [&](std::size_t idx) {
    return Dual(p[idx], idx == seeded ? 1.0 : 0.0);
  };

  const auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Network::Layer& ly = layers[l];
    const bool last = l + 1 == layers.size();
    for (int i = 0; i < ly.out; ++i) {
      Dual z = param(ly.b + i);
      Dual zd;
      for (int j = 0; j < ly.in; ++j) {
        const Dual w = param(ly.w + static_cast<std::size_t>(i) * ly.in + j);
        z += w * a[j];
        zd += w * ad[j];
      }
      if (last) {
        y[i] = z;
        dy[i] = zd;
      } else if (use_tanh) {
        const Dual s = tanh(z);
        za[i] = s;
        zad[i] = (Dual(1.0) - s * s) * zd;
      } else {
        const bool on = z.v > 0.0;
        za[i] = on ? z : Dual();
        zad[i] = on ? zd : Dual();
      }
    }
    if (!last) {
      std::swap(a, za);
      std::swap(ad, zad);
    }
  }
}

}  // namespace sirpinn
