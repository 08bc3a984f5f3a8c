#include <catch2/catch_amalgamated.hpp>

#include "slap/ranging.hpp"

using namespace slap;
using namespace slap::ranging;

static EnvParams test_env() {
  EnvParams env;
  env.gamma = 2.0;
  env.d0_m = 1.0;
  env.pl_d0_dbm = 40.0;
  env.ptx_dbm = 20.0;
  env.t_proc_ns = 500;
  env.eps_cross_m = 50.0;
  return env;
}

TEST_CASE("zero-distance limit", "[ranging]") {
  EnvParams env = test_env();
  double rss_at_zero = rss_dbm(env, 0.0);
  auto est = prox_verify(rss_at_zero, 2.0 * double(env.t_proc_ns), env);
  CHECK(est.delta_m == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("40 dB margin at gamma=2 resolves to 100 m", "[ranging]") {
  EnvParams env = test_env();
  // ptx - pl_d0 - rss = 40 dB  =>  rss = -60 dBm
  double rtt = rtt_ns_model(env, 100.0);
  auto est = prox_verify(-60.0, rtt, env);
  CHECK(est.d_rss_m == Catch::Approx(100.0).epsilon(1e-6));
  CHECK(est.delta_m == Catch::Approx(100.0).margin(0.5));
}

TEST_CASE("relay inflating RTT is flagged inconsistent", "[ranging]") {
  EnvParams env = test_env();
  double true_d = 80.0;
  double rss = rss_dbm(env, true_d);
  double rtt = rtt_ns_model(env, true_d) + 2000.0;  // +1 us per direction
  // d_rtt inflated by ~300 m versus d_rss
  CHECK_THROWS_AS(prox_verify(rss, rtt, env), Error);
  try {
    prox_verify(rss, rtt, env);
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::ranging_inconsistent);
  }
}

TEST_CASE("estimate monotonicity", "[ranging]") {
  EnvParams env = test_env();
  env.eps_cross_m = 1e9;  // isolate the estimators
  double prev_rss_d = 1e18;
  for (double rss = -90; rss <= -20; rss += 5) {
    auto est = prox_verify(rss, rtt_ns_model(env, 50.0), env);
    CHECK(est.d_rss_m < prev_rss_d);
    prev_rss_d = est.d_rss_m;
  }
  double prev_rtt_d = -1;
  for (double rtt = 2000; rtt <= 20000; rtt += 1500) {
    auto est = prox_verify(-60.0, rtt, env);
    CHECK(est.d_rtt_m > prev_rtt_d);
    prev_rtt_d = est.d_rtt_m;
  }
}

TEST_CASE("honest synthesized exchanges resolve near the true distance", "[ranging]") {
  EnvParams env = test_env();
  for (double d : {5.0, 20.0, 75.0, 150.0, 240.0}) {
    auto est = prox_verify(rss_dbm(env, d), rtt_ns_model(env, d), env);
    CHECK(std::abs(est.delta_m - d) < 1.0);  // quantization from ns rounding
  }
}

TEST_CASE("RTT below the processing floor is an error", "[ranging]") {
  EnvParams env = test_env();
  CHECK_THROWS_AS(prox_verify(-60.0, 2.0 * double(env.t_proc_ns) - 1.0, env), Error);
}

TEST_CASE("parameter validation", "[ranging]") {
  EnvParams env = test_env();
  env.gamma = 1.0;
  CHECK_THROWS_AS(env.validate(), Error);
  env = test_env();
  env.d0_m = 0;
  CHECK_THROWS_AS(env.validate(), Error);
  env = test_env();
  env.eps_cross_m = 0;
  CHECK_THROWS_AS(env.validate(), Error);
}

TEST_CASE("coverage is a closed disc with margin", "[ranging]") {
  sim::Vec2 ap{100, 100};
  double delta = 50.0, margin = 5.0;
  CHECK(in_coverage(delta, ap, ap, margin));
  CHECK(in_coverage(delta, {100 + delta + margin, 100}, ap, margin));  // boundary included
  CHECK_FALSE(in_coverage(delta, {100 + delta + margin + 1, 100}, ap, margin));
}
