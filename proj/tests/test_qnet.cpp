#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include <celltune/qnet.hpp>

using namespace celltune;

namespace {

//! two-unit toy network with hand-pickable weights
qnet toy_net() {
  qnet net;
  net.num_arms = 2;
  net.hidden = 2;
  net.w1 = {1.0, 0.0, 0.0, 1.0};
  net.b1 = {0.0, 0.0};
  net.w2 = {1.0, 0.0, 0.0, 1.0};
  net.b2 = {0.0, 0.0};
  net.w3 = {2.0, 0.0, 0.0, 3.0};
  net.b3 = {0.5, -0.5};
  return net;
}

//! mean squared error of the taken actions, the quantity train steps report
double batch_loss(const qnet& net, const std::vector<transition>& batch) {
  double loss = 0.0;
  for (const transition& tr : batch) {
    const double diff = qnet_forward(net, tr.state)[tr.action] - tr.target;
    loss += diff * diff / static_cast<double>(batch.size());
  }
  return loss;
}

std::vector<double*> all_params(qnet& net) {
  std::vector<double*> ptrs;
  for (auto* vec : {&net.w1, &net.b1, &net.w2, &net.b2, &net.w3, &net.b3}) {
    for (double& v : *vec) {
      ptrs.push_back(&v);
    }
  }
  return ptrs;
}

} // namespace

TEST_CASE("forward pass matches a hand computation") {
  const qnet net = toy_net();

  const auto q1 = qnet_forward(net, {1.0, 0.0});
  REQUIRE(q1[0] == Catch::Approx(2.5));
  REQUIRE(q1[1] == Catch::Approx(-0.5));

  // the negative input is clipped by the first rectifier
  const auto q2 = qnet_forward(net, {-1.0, 2.0});
  REQUIRE(q2[0] == Catch::Approx(0.5));
  REQUIRE(q2[1] == Catch::Approx(5.5));
}

TEST_CASE("zeroed parameters give a zero output") {
  rng r(5);
  qnet net = make_qnet(4, 8, r);
  for (double* p : all_params(net)) {
    *p = 0.0;
  }
  for (double q : qnet_forward(net, {1.0, 0.0, 1.0, 1.0})) {
    REQUIRE(q == 0.0);
  }
}

TEST_CASE("forward rejects a wrong-width state") {
  const qnet net = toy_net();
  REQUIRE_THROWS_AS(qnet_forward(net, {1.0, 0.0, 0.0}), shape_mismatch);
}

TEST_CASE("initialization stays within the fan-in bound") {
  rng r(6);
  const qnet net = make_qnet(4, 16, r);
  for (double v : net.w1) REQUIRE(std::abs(v) <= 1.0 / 2.0);
  for (double v : net.w2) REQUIRE(std::abs(v) <= 0.25);
  for (double v : net.w3) REQUIRE(std::abs(v) <= 0.25);
  for (double v : net.b1) REQUIRE(v == 0.0);
  for (double v : net.b2) REQUIRE(v == 0.0);
  for (double v : net.b3) REQUIRE(v == 0.0);
}

TEST_CASE("bellman target discounts the best next value") {
  REQUIRE(dqn_target(-0.8, {-1.0, -1.3}, 0.9, false) == Catch::Approx(-1.7));
  REQUIRE(dqn_target(-1.2, {5.0, 5.0}, 0.9, true) == -1.2);
  REQUIRE(dqn_target(-0.3, {4.0, 2.0}, 0.0, false) == Catch::Approx(-0.3));
}

TEST_CASE("double target prices the online choice with the target net") {
  // the online net prefers arm 2, the target net values it at -0.4
  REQUIRE(ddqn_target(-0.6, {0.1, 0.2, 0.9}, {-0.1, -0.2, -0.4}, 0.5, false) ==
          Catch::Approx(-0.8));
  REQUIRE(ddqn_target(-0.6, {0.1, 0.2, 0.9}, {-0.1, -0.2, -0.4}, 0.5, true) == -0.6);

  // a tied online argmax resolves to the lowest index
  REQUIRE(ddqn_target(0.0, {0.5, 0.5}, {1.0, 2.0}, 1.0, false) == Catch::Approx(1.0));

  // identical networks collapse onto the plain bellman target
  rng r(8);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> q(4);
    for (double& v : q) v = r.next_double() * 4.0 - 2.0;
    const double reward = r.next_double() - 1.0;
    REQUIRE(ddqn_target(reward, q, q, 0.99, false) ==
            Catch::Approx(dqn_target(reward, q, 0.99, false)));
  }
}

TEST_CASE("training on the current prediction is a fixed point") {
  qnet net = toy_net();
  const qnet before = net;
  const double current = qnet_forward(net, {1.0, 0.0})[0];

  const double loss = qnet_train_step(net, {{{1.0, 0.0}, 0, current}}, 1e-3);
  REQUIRE(loss == 0.0);
  REQUIRE(net.w1 == before.w1);
  REQUIRE(net.w2 == before.w2);
  REQUIRE(net.w3 == before.w3);
  REQUIRE(net.b1 == before.b1);
  REQUIRE(net.b2 == before.b2);
  REQUIRE(net.b3 == before.b3);
}

TEST_CASE("a zero learning rate reports loss without moving") {
  qnet net = toy_net();
  const qnet before = net;

  // prediction 2.5 against target 1.5 leaves squared error 1
  const double loss = qnet_train_step(net, {{{1.0, 0.0}, 0, 1.5}}, 0.0);
  REQUIRE(loss == Catch::Approx(1.0));
  REQUIRE(net.w1 == before.w1);
  REQUIRE(net.w3 == before.w3);
}

TEST_CASE("backpropagation agrees with central finite differences") {
  rng r(42);
  qnet net = make_qnet(3, 4, r);
  std::vector<transition> batch;
  batch.push_back({{1.0, 0.0, 1.0}, 0, -1.2});
  batch.push_back({{0.0, 1.0, 0.0}, 2, -0.4});

  // recover the analytic gradient from one small step
  const double lr = 1e-3;
  qnet stepped = net;
  qnet_train_step(stepped, batch, lr);

  qnet probe = net;
  const auto params = all_params(probe);
  qnet base = net;
  const auto base_params = all_params(base);
  qnet after = stepped;
  const auto after_params = all_params(after);

  const double h = 1e-5;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double analytic = (*base_params[i] - *after_params[i]) / lr;
    const double saved = *params[i];
    *params[i] = saved + h;
    const double up = batch_loss(probe, batch);
    *params[i] = saved - h;
    const double down = batch_loss(probe, batch);
    *params[i] = saved;
    const double fd = (up - down) / (2.0 * h);

    if (std::abs(analytic) > 1e-6) {
      REQUIRE(std::abs(fd - analytic) / std::abs(analytic) < 1e-4);
    } else {
      REQUIRE(std::abs(fd - analytic) < 1e-8);
    }
  }
}

TEST_CASE("repeated training strictly reduces the loss") {
  qnet net = toy_net();
  const std::vector<transition> batch = {{{1.0, 0.0}, 0, -1.5}};

  double previous = qnet_train_step(net, batch, 1e-3);
  for (int step = 0; step < 30; ++step) {
    const double loss = qnet_train_step(net, batch, 1e-3);
    REQUIRE(loss < previous);
    previous = loss;
  }
}

TEST_CASE("non-finite gradients are refused") {
  qnet net = toy_net();
  net.w3[0] = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(qnet_train_step(net, {{{1.0, 0.0}, 0, -1.0}}, 1e-3),
                    non_finite_gradient);
}

TEST_CASE("soft update blends toward the online network") {
  rng r(9);
  const qnet online = make_qnet(2, 3, r);
  qnet target = make_qnet(2, 3, r);

  SECTION("tau one copies") {
    soft_update(online, target, 1.0);
    REQUIRE(target.w1 == online.w1);
    REQUIRE(target.b3 == online.b3);
  }
  SECTION("tau zero freezes") {
    const qnet before = target;
    soft_update(online, target, 0.0);
    REQUIRE(target.w1 == before.w1);
    REQUIRE(target.b3 == before.b3);
  }
  SECTION("midpoint") {
    qnet a = online;
    qnet b = online;
    for (double* p : all_params(a)) *p = 0.0;
    for (double* p : all_params(b)) *p = 2.0;
    soft_update(b, a, 0.5);
    for (double* p : all_params(a)) REQUIRE(*p == Catch::Approx(1.0));
  }
  SECTION("each parameter contracts by exactly one minus tau") {
    qnet onl_copy = online;
    qnet prev_copy = target;
    const double tau = 0.25;
    soft_update(online, target, tau);
    const auto onl = all_params(onl_copy);
    const auto prev = all_params(prev_copy);
    const auto next = all_params(target);
    for (std::size_t i = 0; i < next.size(); ++i) {
      REQUIRE(std::abs(*next[i] - *onl[i]) ==
              Catch::Approx((1.0 - tau) * std::abs(*prev[i] - *onl[i])).margin(1e-12));
    }
  }
}

TEST_CASE("soft update rejects mismatched shapes") {
  rng r(10);
  const qnet online = make_qnet(2, 3, r);
  qnet target = make_qnet(2, 4, r);
  REQUIRE_THROWS_AS(soft_update(online, target, 0.5), shape_mismatch);
}
