#include <catch2/catch_amalgamated.hpp>

#include "slap/simnet.hpp"

using namespace slap;
using namespace slap::sim;

namespace {

Engine make_line_net(uint64_t seed) {
  Engine eng(seed);
  eng.add_endpoint({"a", {0, 0}, 1000, 20.0, 0}, nullptr);
  eng.add_endpoint({"b", {300, 0}, 1000, 20.0, 0}, nullptr);
  return eng;
}

}  // namespace

TEST_CASE("empty scenario produces an empty trace", "[simnet]") {
  Engine eng(1);
  CHECK(eng.run() == 0);
  CHECK(eng.trace().empty());
}

TEST_CASE("propagation time for 300 m is about 1.0007 us", "[simnet]") {
  uint64_t ns = propagation_ns(300.0);
  CHECK(ns == 1001);  // 300 / c * 1e9 = 1000.69...
  CHECK(std::abs(double(ns) - 1000.69) < 1.0);
}

TEST_CASE("same seed gives identical trace digests", "[simnet]") {
  auto run_once = [](uint64_t seed) {
    Engine eng = make_line_net(seed);
    eng.add_endpoint({"sink", {500, 0}, 1000, 20.0, 0},
                     [&](Engine& e, const SimEvent& ev) {
                       if (ev.payload[0] < 3) e.send("sink", "a", Bytes{uint8_t(ev.payload[0] + 10)}, Channel::radio);
                     });
    for (int i = 0; i < 5; ++i) eng.send("a", "sink", Bytes{uint8_t(i)}, Channel::radio);
    eng.run();
    return eng.trace_digest();
  };
  CHECK(run_once(7) == run_once(7));
}

TEST_CASE("event delivery respects time order and the clock never regresses", "[simnet]") {
  Engine eng = make_line_net(3);
  std::vector<uint64_t> seen;
  eng.add_endpoint({"c", {100, 0}, 1000, 20.0, 0},
                   [&](Engine& e, const SimEvent&) { seen.push_back(e.now_ns()); });
  eng.send("a", "c", Bytes{1}, Channel::radio);
  eng.send("b", "c", Bytes{2}, Channel::radio);
  eng.schedule("c", 50, Bytes{3});
  eng.run();
  REQUIRE(seen.size() == 3);
  CHECK(std::is_sorted(seen.begin(), seen.end()));
}

TEST_CASE("radio beyond range is dropped", "[simnet]") {
  Engine eng(4);
  bool got = false;
  eng.add_endpoint({"near", {0, 0}, 100, 20.0, 0}, nullptr);
  eng.add_endpoint({"far", {500, 0}, 100, 20.0, 0},
                   [&](Engine&, const SimEvent&) { got = true; });
  eng.send("near", "far", Bytes{9}, Channel::radio);
  eng.run();
  CHECK_FALSE(got);
  REQUIRE_FALSE(eng.trace().empty());
  CHECK(eng.trace().back().dropped);
}

TEST_CASE("pure relay adds at least the extra path delay", "[simnet]") {
  uint64_t direct_arrival = 0, relayed_arrival = 0;
  {
    Engine eng(5);
    eng.add_endpoint({"a", {0, 0}, 1000, 20.0, 0}, nullptr);
    eng.add_endpoint({"b", {300, 0}, 1000, 20.0, 0},
                     [&](Engine& e, const SimEvent&) { direct_arrival = e.now_ns(); });
    eng.send("a", "b", Bytes{1}, Channel::radio);
    eng.run();
  }
  {
    Engine eng(5);
    eng.add_endpoint({"a", {0, 0}, 1000, 20.0, 0}, nullptr);
    eng.add_endpoint({"b", {300, 0}, 1000, 20.0, 0},
                     [&](Engine& e, const SimEvent&) { relayed_arrival = e.now_ns(); });
    eng.add_endpoint({"adv", {150, 200}, 1000, 20.0, 0},
                     [&](Engine& e, const SimEvent& ev) {
                       // forward unchanged from the adversary position
                       e.send("adv", ev.intended_dst, ev.payload, ev.channel);
                     });
    eng.add_interpose({"a", "b", Interpose::Mode::relay, "adv"});
    eng.send("a", "b", Bytes{1}, Channel::radio);
    eng.run();
  }
  CHECK(relayed_arrival > direct_arrival);  // triangle inequality
}

TEST_CASE("passive copy leaves original timing unchanged", "[simnet]") {
  uint64_t plain = 0, with_copy = 0;
  size_t adv_got = 0;
  {
    Engine eng(6);
    eng.add_endpoint({"a", {0, 0}, 1000, 20.0, 0}, nullptr);
    eng.add_endpoint({"b", {300, 0}, 1000, 20.0, 0},
                     [&](Engine& e, const SimEvent&) { plain = e.now_ns(); });
    eng.send("a", "b", Bytes{1}, Channel::radio);
    eng.run();
  }
  {
    Engine eng(6);
    eng.add_endpoint({"a", {0, 0}, 1000, 20.0, 0}, nullptr);
    eng.add_endpoint({"b", {300, 0}, 1000, 20.0, 0},
                     [&](Engine& e, const SimEvent&) { with_copy = e.now_ns(); });
    eng.add_endpoint({"adv", {20, 5}, 1000, 20.0, 0},
                     [&](Engine&, const SimEvent&) { ++adv_got; });
    eng.add_interpose({"a", "b", Interpose::Mode::copy, "adv"});
    eng.send("a", "b", Bytes{1}, Channel::radio);
    eng.run();
  }
  CHECK(plain == with_copy);
  CHECK(adv_got == 1);
}

TEST_CASE("rx power model is applied on radio deliveries", "[simnet]") {
  Engine eng(7);
  double seen = 0;
  eng.set_rx_model([](double d, double tx, uint64_t) { return tx - d; });
  eng.add_endpoint({"a", {0, 0}, 1000, 30.0, 0}, nullptr);
  eng.add_endpoint({"b", {10, 0}, 1000, 20.0, 0},
                   [&](Engine&, const SimEvent& ev) { seen = ev.rx_power_dbm; });
  eng.send("a", "b", Bytes{1}, Channel::radio);
  eng.run();
  CHECK(seen == Catch::Approx(20.0));
}
