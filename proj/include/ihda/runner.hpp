#pragma once

// Lock-step closed loop over TCP, newline-delimited JSON. The plant is the
// server and the controller the client:
//
//   plant -> {"hello": {"inputs": [...], "outputs": [...]}}
//   ctrl  -> {"ack": true}
//   plant -> {"cycle": n, "inputs": {...}, "fault": "..."}   (fault optional)
//   ctrl  -> {"outputs": {...}}
//
// Either side may send {"bye": reason} instead of its next message.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ihda/controller.hpp"
#include "ihda/net.hpp"
#include "ihda/plantsim.hpp"

namespace ihda {

namespace plant {

struct ServeOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0: pick a free port
  int period_ms = 0;       // sleep after each tick; 0 runs as fast as the controller answers
  int accept_timeout_ms = 10000;
  int reply_timeout_ms = 10000;
  std::uint64_t max_cycles = 200;
};

enum class ServeOutcome { kClientBye, kMaxCycles, kDisconnected, kNoController, kProtocolError };

struct ServeResult {
  ServeOutcome outcome = ServeOutcome::kNoController;
  PlantState final_state;
  std::uint64_t cycles = 0;  // ticks performed
  std::string detail;
};

const char* to_string(ServeOutcome o);

/// Binds on construction so port() is known before run().
class PlantServer {
 public:
  PlantServer(PlantConfig config, Scenario scenario, ServeOptions options);
  std::uint16_t port() const { return listener_.port(); }
  /// Serves a single controller connection.
  ServeResult run();

 private:
  PlantConfig config_;
  Scenario scenario_;
  ServeOptions options_;
  net::Listener listener_;
};

}  // namespace plant

struct ClientOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  int connect_timeout_ms = 5000;
  int reply_timeout_ms = 10000;
  /// Say bye once the marking is back at m0 after having left it.
  bool stop_on_home = true;
  /// Called for each record as it is produced.
  std::function<void(const TraceRecord&)> on_record;
};

enum class RunOutcome { kHome, kServerBye, kHalted, kDisconnected, kProtocolError };

struct RunResult {
  RunOutcome outcome = RunOutcome::kDisconnected;
  std::vector<TraceRecord> trace;
  ControllerState state;
  std::string detail;
};

const char* to_string(RunOutcome o);

/// Connects (throws ProtocolError if that fails) and runs until either side
/// ends the session.
RunResult run_controller(const StepController& controller, const ClientOptions& options);

}  // namespace ihda
