#include "ihda/runner.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "ihda/error.hpp"
#include "json_util.hpp"

namespace ihda {

namespace {

using json::Json;

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Json parse_message(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("message is not a JSON object");
  return j;
}

std::string bye_reason(const Json& j) {
  const Json& r = j.at("bye");
  return r.is_string() ? r.get<std::string>() : r.dump();
}

void send_bye(net::LineSocket& sock, const std::string& reason) {
  try {
    sock.send_line(Json{{"bye", reason}}.dump());
  } catch (const ProtocolError&) {
    // peer already gone
  }
}

}  // namespace

namespace plant {

const char* to_string(ServeOutcome o) {
  switch (o) {
    case ServeOutcome::kClientBye: return "client-bye";
    case ServeOutcome::kMaxCycles: return "max-cycles";
    case ServeOutcome::kDisconnected: return "disconnected";
    case ServeOutcome::kNoController: return "no-controller";
    case ServeOutcome::kProtocolError: return "protocol-error";
  }
  return "?";
}

PlantServer::PlantServer(PlantConfig config, Scenario scenario, ServeOptions options)
    : config_(config),
      scenario_(std::move(scenario)),
      options_(std::move(options)),
      listener_(options_.port, options_.host) {
  config_.validate();
  scenario_.validate();
}

ServeResult PlantServer::run() {
  ServeResult result;
  result.final_state = initial_state(config_);
  auto sock = listener_.accept(options_.accept_timeout_ms);
  if (!sock) {
    result.outcome = ServeOutcome::kNoController;
    result.detail = "no controller connected within " + std::to_string(options_.accept_timeout_ms) + " ms";
    return result;
  }
  PlantState& state = result.final_state;

  auto fail = [&](const std::string& why) {
    send_bye(*sock, "protocol error: " + why);
    result.outcome = ServeOutcome::kProtocolError;
    result.detail = why;
    return result;
  };
  // nullopt: session over (result filled in)
  auto await = [&]() -> std::optional<Json> {
    auto line = sock->recv_line(options_.reply_timeout_ms);
    if (!line) {
      result.outcome = ServeOutcome::kDisconnected;
      result.detail = "controller disconnected or timed out";
      return std::nullopt;
    }
    Json j = parse_message(*line);
    if (j.contains("bye")) {
      result.outcome = ServeOutcome::kClientBye;
      result.detail = bye_reason(j);
      return std::nullopt;
    }
    return j;
  };

  try {
    sock->send_line(Json{{"hello", {{"inputs", input_names()}, {"outputs", output_names()}}}}.dump());
    auto ack = await();
    if (!ack) return result;
    if (!ack->contains("ack") || (*ack)["ack"] != true) return fail("expected {\"ack\": true}");

    for (std::uint64_t n = 0; n < options_.max_cycles; ++n) {
      scenario_.apply(n, state);
      Json msg{{"cycle", n}, {"inputs", json::valuation(sense(config_, state))}};
      if (state.fault) msg["fault"] = *state.fault;
      sock->send_line(msg.dump());
      auto reply = await();
      if (!reply) return result;
      if (!reply->contains("outputs")) return fail("expected outputs for cycle " + std::to_string(n));
      const Valuation o = json::valuation_from(reply->at("outputs"), output_props());
      state = plant_step(config_, state, o);
      ++result.cycles;
      if (options_.period_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(options_.period_ms));
    }
    send_bye(*sock, "max cycles reached");
    result.outcome = ServeOutcome::kMaxCycles;
    result.detail = std::to_string(options_.max_cycles) + " cycles served";
  } catch (const ProtocolError& e) {
    return fail(e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(e.what());
  }
  return result;
}

}  // namespace plant

const char* to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::kHome: return "home";
    case RunOutcome::kServerBye: return "server-bye";
    case RunOutcome::kHalted: return "halted";
    case RunOutcome::kDisconnected: return "disconnected";
    case RunOutcome::kProtocolError: return "protocol-error";
  }
  return "?";
}

RunResult run_controller(const StepController& controller, const ClientOptions& options) {
  const Ihda& ihda = controller.ihda();
  const Ipn& net = ihda.net();
  net::LineSocket sock = net::LineSocket::connect(options.host, options.port, options.connect_timeout_ms);

  RunResult result;
  result.state = controller.initial_state();
  auto fail = [&](const std::string& why) {
    send_bye(sock, "protocol error: " + why);
    result.outcome = RunOutcome::kProtocolError;
    result.detail = why;
    return result;
  };
  auto await = [&]() -> std::optional<Json> {
    auto line = sock.recv_line(options.reply_timeout_ms);
    if (!line) {
      result.outcome = RunOutcome::kDisconnected;
      result.detail = "plant disconnected or timed out";
      return std::nullopt;
    }
    Json j = parse_message(*line);
    if (j.contains("bye")) {
      result.outcome = RunOutcome::kServerBye;
      result.detail = bye_reason(j);
      return std::nullopt;
    }
    return j;
  };

  try {
    auto hello = await();
    if (!hello) return result;
    if (!hello->contains("hello")) return fail("expected hello");
    const Json& h = hello->at("hello");
    const auto ins = h.at("inputs").get<std::vector<std::string>>();
    const auto outs = h.at("outputs").get<std::vector<std::string>>();
    if (sorted(ins) != sorted(net.inputs()->names()))
      return fail("plant inputs do not match the model's input propositions");
    if (sorted(outs) != sorted(net.outputs()->names()))
      return fail("plant outputs do not match the model's output propositions");
    sock.send_line(Json{{"ack", true}}.dump());

    bool left_home = false;
    for (;;) {
      auto msg = await();
      if (!msg) return result;
      if (!msg->contains("cycle") || !msg->contains("inputs")) return fail("expected a cycle message");
      if (options.stop_on_home && left_home && result.state.marking == net.initial()) {
        send_bye(sock, "home");
        result.outcome = RunOutcome::kHome;
        result.detail = "returned to the initial marking";
        return result;
      }
      const std::uint64_t n = msg->at("cycle").get<std::uint64_t>();
      const Valuation inputs = json::valuation_from(msg->at("inputs"), ihda.inputs());
      const auto cyc = controller.cycle(result.state, inputs);
      if (!cyc.outputs) {
        send_bye(sock, "controller halted: " + *result.state.halted_reason);
        result.outcome = RunOutcome::kHalted;
        result.detail = *result.state.halted_reason;
        return result;
      }
      TraceRecord rec{n, inputs, cyc.step, *cyc.outputs, cyc.from};
      if (options.on_record) options.on_record(rec);
      result.trace.push_back(std::move(rec));
      sock.send_line(Json{{"outputs", json::valuation(*cyc.outputs)}}.dump());
      if (result.state.marking != net.initial()) left_home = true;
    }
  } catch (const ProtocolError& e) {
    return fail(e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(e.what());
  }
}

}  // namespace ihda
