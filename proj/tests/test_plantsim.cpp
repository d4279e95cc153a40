#include <doctest.h>

#include <json.hpp>

#include "ihda/error.hpp"
#include "ihda/net.hpp"
#include "ihda/plantsim.hpp"
#include "ihda/runner.hpp"
#include "support.hpp"

using namespace ihda;
using namespace ihda::plant;
using namespace testsupport;

namespace {

Valuation act(std::initializer_list<const char*> names) {
  Valuation v(output_props());
  for (const char* n : names) v.set(n, true);
  return v;
}

const Ihda& fixed() {
  static const Ihda ihda = build_ihda(load_model("transfer_fixed.ipn"));
  return ihda;
}

}  // namespace

TEST_SUITE("plantsim") {

TEST_CASE("initial configuration and sensors") {
  const PlantConfig cfg;
  const PlantState s = initial_state(cfg);
  const Valuation i = sense(cfg, s);
  for (const auto& n : input_names()) CHECK(i.get(n) == (n == "l1" || n == "r2" || n == "press_T"));
  CHECK_THROWS_AS(initial_state(PlantConfig{0, 5, 2, 2, 2}), ModelError);
}

TEST_CASE("chariot kinematics") {
  const PlantConfig cfg;
  PlantState s = initial_state(cfg);
  s.upper_pos = cfg.upper_travel - 1;
  const PlantState n = plant_step(cfg, s, act({"R1"}));
  CHECK(n.upper_pos == cfg.upper_travel);
  CHECK(sense(cfg, n).get("r1"));
  CHECK(plant_step(cfg, n, act({"R1"})).upper_pos == cfg.upper_travel);  // clamped

  PlantState low = initial_state(cfg);
  for (int k = 0; k < cfg.lower_travel; ++k) low = plant_step(cfg, low, act({"L2"}));
  CHECK(sense(cfg, low).get("l2"));
  CHECK_FALSE(sense(cfg, low).get("r2"));
}

TEST_CASE("all actuators off leaves the state unchanged") {
  const PlantConfig cfg;
  const PlantState s = initial_state(cfg);
  const PlantState n = plant_step(cfg, s, act({}));
  CHECK(n == s);
  CHECK(sense(cfg, n) == sense(cfg, s));
}

TEST_CASE("opposite actuators freeze the axis and raise a fault") {
  const PlantConfig cfg;
  PlantState s = initial_state(cfg);
  s.upper_pos = 2;
  const PlantState n = plant_step(cfg, s, act({"R1", "L1"}));
  CHECK(n.upper_pos == 2);
  REQUIRE(n.fault);
  const PlantState m = plant_step(cfg, initial_state(cfg), act({"L2", "R2"}));
  CHECK(m.lower_pos == cfg.lower_travel);
  CHECK(m.fault);
}

TEST_CASE("transfer, load, push and deposit") {
  const PlantConfig cfg;
  PlantState s = initial_state(cfg);
  for (int k = 0; k < cfg.transfer_dwell; ++k) s = plant_step(cfg, s, act({"Transfer"}));
  CHECK_FALSE(s.transfer_box_present);
  CHECK(s.lower_loaded);
  CHECK_FALSE(sense(cfg, s).get("press_T"));

  for (int k = 0; k < cfg.upper_travel; ++k) s = plant_step(cfg, s, act({"R1", "L2"}));
  CHECK(sense(cfg, s).get("r1"));
  CHECK(sense(cfg, s).get("l2"));
  CHECK_FALSE(sense(cfg, s).get("press_L"));
  for (int k = 0; k < cfg.load_dwell; ++k) s = plant_step(cfg, s, act({"Load", "Pusher"}));
  CHECK(sense(cfg, s).get("press_R"));
  CHECK(sense(cfg, s).get("press_L"));

  for (int k = 0; k < cfg.upper_travel; ++k) s = plant_step(cfg, s, act({"L1", "R2"}));
  CHECK(s == initial_state(cfg));
}

TEST_CASE("scenario") {
  Scenario sc = Scenario::press_start(3);
  sc.add_press("press_T=false@4");
  PlantState s = initial_state({});
  sc.apply(2, s);
  CHECK_FALSE(s.start_latch);
  sc.apply(3, s);
  CHECK(s.start_latch);
  CHECK(sense({}, s).get("start"));
  s = plant_step({}, s, act({}));
  CHECK_FALSE(s.start_latch);
  sc.apply(4, s);
  CHECK_FALSE(sense({}, s).get("press_T"));

  CHECK_THROWS_AS(sc.add_press("bogus@1"), ParseError);
  CHECK_THROWS_AS(sc.add_press("start"), ParseError);
  CHECK_THROWS_AS(sc.add_press("start@x"), ParseError);
  CHECK_THROWS_AS(sc.add_press("start=maybe@1"), ParseError);
  const Scenario j = Scenario::from_json(R"([{"cycle": 5, "set": {"start": true}}])");
  REQUIRE(j.script.size() == 1);
  CHECK(j.script[0].cycle == 5);
  CHECK_THROWS_AS(Scenario::from_json(R"([{"cycle": 5, "set": {"nope": true}}])"), ParseError);
  CHECK_THROWS_AS(Scenario::from_json("{}"), ParseError);
}

TEST_CASE("closed loop: start at cycle 3, one full cycle, back to the start") {
  const PlantConfig cfg;
  const auto run = closed_loop(StepController(fixed()), cfg, Scenario::press_start(3));
  REQUIRE(run.client.outcome == RunOutcome::kHome);
  CHECK(run.server.outcome == ServeOutcome::kClientBye);
  CHECK(run.server.detail == "home");
  CHECK(run.server.final_state == initial_state(cfg));
  CHECK(run.server.final_state.transfer_box_present);
  CHECK(run.client.state.marking == fixed().net().initial());

  const auto& trace = run.client.trace;
  REQUIRE(trace.size() > 4);
  for (std::size_t k = 0; k < 3; ++k) CHECK(trace[k].step.empty());
  CHECK(to_string(fixed().net(), trace[3].step) == "{t_A}");
  CHECK(trace.size() < 200);

  // lock-step: every emitted sensor valuation is the sensor function of the
  // state obtained by replaying the recorded actuator valuations
  PlantState s = initial_state(cfg);
  const Scenario sc = Scenario::press_start(3);
  for (const TraceRecord& r : trace) {
    sc.apply(r.cycle, s);
    const Valuation i = sense(cfg, s);
    for (const auto& n : input_names()) CHECK(i.get(n) == r.inputs.get(n));
    Valuation o(output_props());
    for (const auto& n : output_names()) o.set(n, r.outputs.get(n));
    s = plant_step(cfg, s, o);
  }
  CHECK(s == initial_state(cfg));
}

TEST_CASE("closed loop is deterministic") {
  auto lines = [] {
    const auto run = closed_loop(StepController(fixed()), {}, Scenario::press_start(3));
    std::string out;
    for (const auto& r : run.client.trace) out += trace_line(fixed().net(), r) + "\n";
    return out;
  };
  CHECK(lines() == lines());
}

TEST_CASE("session ends at max cycles") {
  const auto run = closed_loop(StepController(fixed()), {}, Scenario{}, 10);
  CHECK(run.server.outcome == ServeOutcome::kMaxCycles);
  CHECK(run.client.outcome == RunOutcome::kServerBye);
  CHECK(run.client.trace.size() == 10);
}

TEST_CASE("no controller within the timeout") {
  ServeOptions so;
  so.accept_timeout_ms = 100;
  PlantServer server({}, {}, so);
  const auto r = server.run();
  CHECK(r.outcome == ServeOutcome::kNoController);
  CHECK(r.cycles == 0);
}

TEST_CASE("mismatched propositions in the handshake") {
  const Ihda other = build_ihda(parse_ipn("inputs: a\noutputs: X\nplaces:\n p tokens 1\n"));
  const auto run = closed_loop(StepController(other), {}, {});
  CHECK(run.client.outcome == RunOutcome::kProtocolError);
  CHECK(run.client.detail.find("inputs") != std::string::npos);
  CHECK(run.server.outcome == ServeOutcome::kClientBye);
}

TEST_CASE("malformed controller messages") {
  for (const char* reply : {"garbage", R"({"outputs": {"R1": true}})", R"({"outputs": {"R1": 1}})", "[1]"}) {
    ServeOptions so;
    so.accept_timeout_ms = 5000;
    PlantServer server({}, {}, so);
    ServeResult res;
    std::thread th([&] { res = server.run(); });
    auto sock = net::LineSocket::connect("127.0.0.1", server.port());
    auto hello = sock.recv_line(5000);
    REQUIRE(hello);
    CHECK(nlohmann::json::parse(*hello).contains("hello"));
    sock.send_line(R"({"ack": true})");
    auto cycle = sock.recv_line(5000);
    REQUIRE(cycle);
    CHECK(nlohmann::json::parse(*cycle)["cycle"] == 0);
    sock.send_line(reply);
    auto bye = sock.recv_line(5000);
    th.join();
    CHECK(res.outcome == ServeOutcome::kProtocolError);
    REQUIRE(bye);
    CHECK(nlohmann::json::parse(*bye).contains("bye"));
  }
}

TEST_CASE("controller drop is a clean shutdown") {
  ServeOptions so;
  so.accept_timeout_ms = 5000;
  PlantServer server({}, {}, so);
  ServeResult res;
  std::thread th([&] { res = server.run(); });
  {
    auto sock = net::LineSocket::connect("127.0.0.1", server.port());
    REQUIRE(sock.recv_line(5000));
    sock.send_line(R"({"ack": true})");
    REQUIRE(sock.recv_line(5000));
  }
  th.join();
  CHECK(res.outcome == ServeOutcome::kDisconnected);
  CHECK(res.final_state == initial_state({}));
}

}  // TEST_SUITE
