#pragma once

// Integer-kinematics model of the transfer plant: an upper chariot running
// between the transfer dock (l1) and the loading dock (r1), a lower chariot
// running between the unloading dock (l2) and the transfer dock (r2), a
// pusher at the unloading dock and a transfer mechanism between the two.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ihda/cube.hpp"

namespace ihda::plant {

struct PlantConfig {
  int upper_travel = 5;   // ticks from l1 to r1
  int lower_travel = 5;   // ticks from l2 to r2
  int pusher_stroke = 2;
  int load_dwell = 2;
  int transfer_dwell = 2;

  /// Throws ModelError on non-positive values.
  void validate() const;
};

struct PlantState {
  int upper_pos = 0;   // 0 = l1 (transfer dock), upper_travel = r1 (loading dock)
  int lower_pos = 0;   // 0 = l2 (unloading dock), lower_travel = r2 (transfer dock)
  bool upper_loaded = false;
  bool lower_loaded = false;
  bool transfer_box_present = true;
  int pusher_ext = 0;
  int load_timer = 0;
  int transfer_timer = 0;
  bool start_latch = false;
  /// Scenario overrides for the sensors other than start, valid until the
  /// next tick.
  std::map<std::string, bool> forced;
  /// Latched once opposite actuators are driven together.
  std::optional<std::string> fault;

  friend bool operator==(const PlantState&, const PlantState&) = default;
};

/// Sensor names in the order the plant announces them.
const std::vector<std::string>& input_names();
/// Actuator names in the order the plant announces them.
const std::vector<std::string>& output_names();
const PropSetRef& input_props();
const PropSetRef& output_props();

/// Both chariots home, a box waiting at the transfer dock.
PlantState initial_state(const PlantConfig& cfg);

/// Sensor valuation: a pure function of the state.
Valuation sense(const PlantConfig& cfg, const PlantState& s);

/// One tick under actuator valuation `o` (over output_props(), or any
/// PropSet with the same names).
PlantState plant_step(const PlantConfig& cfg, const PlantState& s, const Valuation& o);

/// Scripted sensor overrides: at `cycle`, the listed inputs read as given.
/// Pressing start sets the start latch; other names are forced for that
/// cycle only.
struct Scenario {
  struct Entry {
    std::uint64_t cycle = 0;
    std::map<std::string, bool> set;
  };
  std::vector<Entry> script;

  /// Press start at cycle k.
  static Scenario press_start(std::uint64_t k);
  /// "name@cycle" or "name=false@cycle". Throws ParseError.
  void add_press(const std::string& spec);
  /// JSON: [{"cycle": 3, "set": {"start": true}}, ...]. Throws ParseError.
  static Scenario from_json(const std::string& text);

  void validate() const;
  /// Installs the overrides scheduled for `cycle` into the state.
  void apply(std::uint64_t cycle, PlantState& s) const;
};

std::string describe(const PlantState& s);

}  // namespace ihda::plant
