#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "sirpinn/errors.hpp"
#include "sirpinn/net.hpp"

using namespace sirpinn;

namespace {

NetworkConfig small_tanh(std::uint64_t seed = 3) {
  NetworkConfig cfg;
  cfg.output_dim = 3;
  cfg.hidden_layers = 2;
  cfg.hidden_width = 8;
  cfg.activation = Activation::kTanh;
  cfg.seed = seed;
  return cfg;
}

// relu net that is affine on t > -b1: relu(t + b1) has slope 1 there, so
// the composite w2*(t + b1) + b2 realizes any single linear layer exactly
Network affine_net(double w, double b) {
  NetworkConfig cfg;
  cfg.output_dim = 2;
  cfg.hidden_layers = 1;
  cfg.hidden_width = 1;
  cfg.activation = Activation::kRelu;
  Network net(cfg);
  auto p = net.params();
  const auto& l0 = net.layers()[0];
  const auto& l1 = net.layers()[1];
  p[l0.w] = 1.0;
  p[l0.b] = 10.0;  // keeps the preactivation positive for |t| < 10
  p[l1.w] = w;     // head 0
  p[l1.w + 1] = 0.0;
  p[l1.b] = b - w * 10.0;
  p[l1.b + 1] = 0.0;
  return net;
}

}  // namespace

TEST_CASE("network config validation") {
  NetworkConfig cfg = small_tanh();
  CHECK_NOTHROW(cfg.validate());
  cfg.hidden_layers = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_tanh();
  cfg.output_dim = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_tanh();
  cfg.hidden_width = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_tanh();
  cfg.input_dim = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("seeded init is reproducible and Glorot-bounded") {
  NetworkConfig cfg = small_tanh(7);
  Network a(cfg), b(cfg);
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.params().data(), b.params().data(),
                    a.size() * sizeof(double)) == 0);

  Network c(small_tanh(8));
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.params()[i] != c.params()[i]) differs = true;
  CHECK(differs);

  for (const auto& ly : a.layers()) {
    const double limit = std::sqrt(6.0 / (ly.in + ly.out));
    for (int i = 0; i < ly.out * ly.in; ++i)
      CHECK(std::abs(a.params()[ly.w + i]) <= limit);
    for (int i = 0; i < ly.out; ++i) CHECK(a.params()[ly.b + i] == 0.0);
  }
}

TEST_CASE("parameter count for the 7x20 architecture") {
  NetworkConfig cfg;
  cfg.output_dim = 3;
  cfg.hidden_layers = 7;
  cfg.hidden_width = 20;
  Network net(cfg);
  // 1->20: 40, six 20->20: 2520, 20->3: 63
  CHECK(net.size() == 2623);
  CHECK(net.net_param_count() == 2623);
}

TEST_CASE("extra scalars live at the parameter tail") {
  Network net(small_tanh());
  const std::size_t base = net.size();
  const int slot_a = net.add_scalar("raw_alpha", 0.25);
  const int slot_b = net.add_scalar("raw_beta", -0.5);
  CHECK(net.size() == base + 2);
  CHECK(net.scalar(slot_a) == 0.25);
  CHECK(net.scalar(slot_b) == -0.5);
  CHECK(net.params()[base] == 0.25);
  net.set_scalar(slot_b, 0.125);
  CHECK(net.params()[base + 1] == 0.125);
  CHECK_THROWS_AS(net.scalar(2), InternalError);
  CHECK_THROWS_AS(net.add_scalar("bad", NAN), ConfigError);
}

TEST_CASE("zero-weight network outputs zero") {
  Network net(small_tanh());
  std::fill(net.params().begin(), net.params().end(), 0.0);
  NetWorkspace ws(net);
  const NetOutputs out = net_forward(net, 0.37, ws);
  for (int j = 0; j < out.n; ++j) CHECK(out.y[j] == 0.0);
}

TEST_CASE("forward is pure") {
  Network net(small_tanh());
  NetWorkspace ws(net);
  const NetOutputs a = net_forward(net, 0.6, ws);
  const NetOutputs b = net_forward(net, 0.6, ws);
  for (int j = 0; j < a.n; ++j) CHECK(a.y[j] == b.y[j]);
  CHECK_THROWS_AS(net_forward(net, NAN, ws), InputError);
}

TEST_CASE("affine relu net evaluates and differentiates exactly") {
  Network net = affine_net(2.0, 1.0);
  NetWorkspace ws(net);
  const NetOutputs out = net_forward_tangent(net, 0.5, ws);
  CHECK(out.y[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(out.dy[0] == 2.0);  // exact for affine maps

  Network net3 = affine_net(3.0, -4.0);
  NetWorkspace ws3(net3);
  for (const double t : {-0.2, 0.0, 0.4, 0.9}) {
    const NetOutputs o = net_forward_tangent(net3, t, ws3);
    CHECK(o.dy[0] == 3.0);
    CHECK(o.y[0] == doctest::Approx(3.0 * t - 4.0).epsilon(1e-14));
  }
}

TEST_CASE("tangent matches central differences on a tanh net") {
  Network net(small_tanh(11));
  NetWorkspace ws(net);
  const double h = 1e-5;
  for (const double t : {0.1, 0.45, 0.8}) {
    const NetOutputs mid = net_forward_tangent(net, t, ws);
    const NetOutputs plus = net_forward(net, t + h, ws);
    const NetOutputs minus = net_forward(net, t - h, ws);
    for (int j = 0; j < 3; ++j) {
      const double fd = (plus.y[j] - minus.y[j]) / (2.0 * h);
      CHECK(mid.dy[j] ==
            doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("tangent matches central differences on a kink-free relu stretch") {
  NetworkConfig cfg = small_tanh(5);
  cfg.activation = Activation::kRelu;
  Network net(cfg);
  NetWorkspace ws(net);
  const double t = 0.3;
  const double h = 1e-7;
  const NetOutputs mid = net_forward_tangent(net, t, ws);
  const NetOutputs plus = net_forward(net, t + h, ws);
  const NetOutputs minus = net_forward(net, t - h, ws);
  for (int j = 0; j < 3; ++j) {
    // relu nets are piecewise affine in t, so away from kinks the central
    // difference is exact up to floating-point cancellation
    const double fd = (plus.y[j] - minus.y[j]) / (2.0 * h);
    CHECK(mid.dy[j] == doctest::Approx(fd).epsilon(1e-8));
  }
}
