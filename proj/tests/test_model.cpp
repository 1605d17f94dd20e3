#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "swipt/model.hpp"

using Catch::Approx;
using namespace swipt;

namespace {

ScenarioSingle unit_scenario(int n) {
  ScenarioSingle s;
  s.params = SystemParams::table_one();
  s.gains = VectorXd::Ones(n);
  s.power_caps = VectorXd::Constant(n, 10.0);
  return s;
}

}  // namespace

TEST_CASE("unit conversions", "[model]") {
  CHECK(dbm_to_watts(30.0) == Approx(1.0));
  CHECK(dbm_to_watts(-104.0) == Approx(3.981071705534973e-14).epsilon(1e-12));
}

TEST_CASE("SystemParams validation", "[model]") {
  auto p = SystemParams::table_one();
  CHECK_NOTHROW(p.validate());
  p.conversion_efficiency = 1.5;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
  p = SystemParams::table_one();
  p.noise_power = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
}

TEST_CASE("scenario generation", "[model][generator]") {
  const auto params = SystemParams::table_one();
  SECTION("deterministic for a seed") {
    const auto a = generate_scenario_single(20, 99, params, 2.0, 1e-3);
    const auto b = generate_scenario_single(20, 99, params, 2.0, 1e-3);
    CHECK(a.gains == b.gains);
    CHECK(a.ports() == 20);
    CHECK(a.min_harvest == 1e-3);
    CHECK((a.power_caps.array() == 2.0).all());
    CHECK((a.gains.array() > 0.0).all());
  }
  SECTION("different seeds differ") {
    const auto a = generate_scenario_multi(20, 4, 1, params, 6.0, 1e-3);
    const auto b = generate_scenario_multi(20, 4, 2, params, 6.0, 1e-3);
    CHECK(a.gains != b.gains);
    CHECK(a.gains.rows() == 20);
    CHECK(a.gains.cols() == 4);
    CHECK((a.min_harvest.array() == 1e-3).all());
  }
  SECTION("single device is column 0 of the multi generator") {
    const auto m = generate_scenario_multi(7, 1, 5, params, 1.0, 0.0);
    const auto s = generate_scenario_single(7, 5, params, 1.0, 0.0);
    CHECK(m.gains.col(0) == s.gains);
  }
  SECTION("more ports extend fewer ports") {
    const auto small = generate_scenario_multi(5, 3, 11, params, 1.0, 0.0);
    const auto large = generate_scenario_multi(9, 5, 11, params, 1.0, 0.0);
    CHECK(large.gains.topLeftCorner(5, 3) == small.gains);
  }
  SECTION("invalid sizes") {
    CHECK_THROWS_AS(generate_scenario_single(0, 1, params, 1.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(generate_scenario_multi(2, 0, 1, params, 1.0, 0.0), InvalidInput);
  }
}

TEST_CASE("channel gain clamps short distances", "[model]") {
  auto p = SystemParams::table_one();
  p.reference_gain = 1.0;
  CHECK(channel_gain(0.0, 0.7, p) == 0.7);
  CHECK(channel_gain(0.3, 0.7, p) == 0.7);
  CHECK(channel_gain(2.0, 1.0, p) == Approx(0.125));
}

TEST_CASE("single-device evaluators", "[model]") {
  auto s = unit_scenario(2);
  const double sigma2 = s.params.noise_power;
  VectorXd p(2);
  SECTION("rate") {
    p << sigma2 * (std::numbers::e - 1.0), 0.0;
    CHECK(rate_single(0.0, p, s) == 0.0);
    CHECK(rate_single(1.0, p, s) == Approx(1.0).epsilon(1e-12));
    p << sigma2, sigma2 * 3.0;
    CHECK(rate_single(0.5, p, s) == Approx(std::log(3.0)).epsilon(1e-12));
    p << sigma2, sigma2;
    CHECK(rate_single(0.5, p, s) == Approx(std::log(2.0)).epsilon(1e-12));
  }
  SECTION("harvested") {
    p << 1e-3, 1e-3;
    CHECK(harvested_single(1.0, p, s) == 0.0);
    CHECK(harvested_single(0.5, p, s) == Approx(0.6e-3).epsilon(1e-12));
    CHECK(harvested_single(0.0, p, s) == Approx(0.6 * 2e-3).epsilon(1e-12));
  }
  SECTION("ee") {
    p << 0.25, 0.25;
    CHECK(ee_single(p, 1.0, 0.5) == Approx(1.0));
    CHECK(ee_single(p, 0.0, 0.5) == 0.0);
    CHECK(ee_single(VectorXd::Zero(2), 0.0, 0.5) == 0.0);
  }
  SECTION("dimension mismatch") {
    CHECK_THROWS_AS(rate_single(0.5, VectorXd::Zero(3), s), InvalidInput);
  }
}

TEST_CASE("evaluator properties on random samples", "[model][property]") {
  const auto params = SystemParams::table_one();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const auto s = generate_scenario_single(4, 100 + t, params, 2.0, 0.0);
    VectorXd p = 2.0 * VectorXd::NullaryExpr(4, [&]() { return u(rng); });
    const double a1 = u(rng);
    const double a2 = a1 + (1.0 - a1) * u(rng);
    REQUIRE(rate_single(a2, p, s) >= rate_single(a1, p, s));
    VectorXd q = p;
    q(t % 4) = std::min(2.0, q(t % 4) + u(rng));
    REQUIRE(rate_single(a1, q, s) >= rate_single(a1, p, s));
    const double a = 0.99 * u(rng);
    REQUIRE(harvested_single(a, p, s) / (1.0 - a) ==
            Approx(params.conversion_efficiency * s.gains.dot(p)).epsilon(1e-12));
  }
}

TEST_CASE("multi-device evaluation", "[model]") {
  const auto params = SystemParams::table_one();
  SECTION("zero ratios give zero rate") {
    const auto m = generate_scenario_multi(3, 2, 4, params, 1.0, 0.0);
    const auto ev = evaluate_multi(VectorXd::Zero(2), MatrixXd::Constant(3, 2, 0.3), m);
    CHECK(ev.rates.isZero());
    CHECK(ev.ee == 0.0);
  }
  SECTION("K = 1 agrees with the single-device evaluators") {
    for (int t = 0; t < 50; ++t) {
      const auto m = generate_scenario_multi(5, 1, 300 + t, params, 1.0, 0.0);
      const auto s = device_view(m, 0);
      MatrixXd p = MatrixXd::Constant(5, 1, 0.1 * (t % 7 + 1));
      VectorXd alpha = VectorXd::Constant(1, 0.37);
      const auto ev = evaluate_multi(alpha, p, m);
      const double r = rate_single(0.37, p.col(0), s);
      REQUIRE(ev.rates(0) == Approx(r).epsilon(1e-12));
      REQUIRE(ev.harvested(0) == Approx(harvested_single(0.37, p.col(0), s)).epsilon(1e-12));
      REQUIRE(ev.ee == Approx(ee_single(p.col(0), r, params.circuit_power)).epsilon(1e-12));
    }
  }
  SECTION("hand-evaluated 2 x 2 case") {
    ScenarioMulti m;
    m.params = params;
    m.gains = MatrixXd::Ones(2, 2);
    m.power_caps = VectorXd::Constant(2, 1.0);
    m.min_harvest = VectorXd::Zero(2);
    MatrixXd p(2, 2);
    p << 0.4, 0.0, 0.0, 0.7;
    const auto ev = evaluate_multi(VectorXd::Ones(2), p, m);
    const double s2 = params.noise_power;
    CHECK(ev.harvested.isZero());
    CHECK(ev.rates(0) == Approx(0.5 * std::log1p(0.4 / s2)).epsilon(1e-12));
    CHECK(ev.rates(1) == Approx(0.5 * std::log1p(0.7 / s2)).epsilon(1e-12));
    // Harvesting uses both channels' power at every port.
    const auto ev2 = evaluate_multi(VectorXd::Constant(2, 0.5), p, m);
    CHECK(ev2.harvested(0) == Approx(0.6 * 0.5 * 1.1).epsilon(1e-12));
  }
}
