#include "ihda/plantsim.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "ihda/error.hpp"

namespace ihda::plant {

void PlantConfig::validate() const {
  for (int v : {upper_travel, lower_travel, pusher_stroke, load_dwell, transfer_dwell})
    if (v <= 0) throw ModelError("plant geometry values must be positive");
}

const std::vector<std::string>& input_names() {
  static const std::vector<std::string> names{"start", "l1",      "r1",      "l2",
                                              "r2",    "press_R", "press_L", "press_T"};
  return names;
}

const std::vector<std::string>& output_names() {
  static const std::vector<std::string> names{"R1", "L1", "L2", "R2", "Pusher", "Transfer", "Load"};
  return names;
}

const PropSetRef& input_props() {
  static const PropSetRef p = make_propset(input_names());
  return p;
}

const PropSetRef& output_props() {
  static const PropSetRef p = make_propset(output_names());
  return p;
}

PlantState initial_state(const PlantConfig& cfg) {
  cfg.validate();
  PlantState s;
  s.upper_pos = 0;
  s.lower_pos = cfg.lower_travel;
  s.transfer_box_present = true;
  s.load_timer = cfg.load_dwell;
  s.transfer_timer = cfg.transfer_dwell;
  return s;
}

Valuation sense(const PlantConfig& cfg, const PlantState& s) {
  Valuation v(input_props());
  v.set("start", s.start_latch);
  v.set("l1", s.upper_pos == 0);
  v.set("r1", s.upper_pos == cfg.upper_travel);
  v.set("l2", s.lower_pos == 0);
  v.set("r2", s.lower_pos == cfg.lower_travel);
  v.set("press_R", s.upper_loaded);
  v.set("press_L", s.lower_pos == 0 && !s.lower_loaded);
  v.set("press_T", s.transfer_box_present);
  for (const auto& [name, value] : s.forced) v.set(name, value);
  return v;
}

namespace {

bool actuator(const Valuation& o, const char* name) {
  auto idx = o.over()->find(name);
  if (!idx) throw ProtocolError(std::string("actuator '") + name + "' missing from valuation");
  return o[*idx];
}

}  // namespace

PlantState plant_step(const PlantConfig& cfg, const PlantState& s, const Valuation& o) {
  PlantState n = s;
  n.start_latch = false;
  n.forced.clear();

  const bool r1 = actuator(o, "R1"), l1 = actuator(o, "L1");
  const bool l2 = actuator(o, "L2"), r2 = actuator(o, "R2");
  const bool push = actuator(o, "Pusher"), transfer = actuator(o, "Transfer"),
             load = actuator(o, "Load");

  if (r1 && l1) {
    n.fault = "R1 and L1 driven together; upper chariot frozen";
  } else if (r1) {
    n.upper_pos = std::min(n.upper_pos + 1, cfg.upper_travel);
  } else if (l1) {
    n.upper_pos = std::max(n.upper_pos - 1, 0);
  }
  if (l2 && r2) {
    n.fault = "L2 and R2 driven together; lower chariot frozen";
  } else if (l2) {
    n.lower_pos = std::max(n.lower_pos - 1, 0);
  } else if (r2) {
    n.lower_pos = std::min(n.lower_pos + 1, cfg.lower_travel);
  }

  n.pusher_ext = push ? std::min(n.pusher_ext + 1, cfg.pusher_stroke) : std::max(n.pusher_ext - 1, 0);
  if (n.pusher_ext == cfg.pusher_stroke && n.lower_pos == 0 && n.lower_loaded) n.lower_loaded = false;

  if (load && n.upper_pos == cfg.upper_travel && !n.upper_loaded) {
    if (--n.load_timer <= 0) {
      n.upper_loaded = true;
      n.load_timer = cfg.load_dwell;
    }
  } else {
    n.load_timer = cfg.load_dwell;
  }

  const bool docked = n.upper_pos == 0 && n.lower_pos == cfg.lower_travel;
  if (transfer && docked && n.transfer_box_present && !n.lower_loaded) {
    if (--n.transfer_timer <= 0) {
      n.transfer_box_present = false;
      n.lower_loaded = true;
      n.transfer_timer = cfg.transfer_dwell;
    }
  } else {
    n.transfer_timer = cfg.transfer_dwell;
  }

  // a loaded upper chariot reaching the transfer dock leaves its box there
  if (n.upper_pos == 0 && s.upper_pos != 0 && n.upper_loaded && !n.transfer_box_present) {
    n.upper_loaded = false;
    n.transfer_box_present = true;
  }
  return n;
}

Scenario Scenario::press_start(std::uint64_t k) { return Scenario{{{k, {{"start", true}}}}}; }

void Scenario::add_press(const std::string& spec) {
  const auto at = spec.rfind('@');
  if (at == std::string::npos || at == 0 || at + 1 == spec.size())
    throw ParseError("scenario entry '" + spec + "' is not of the form name[=bool]@cycle", 0);
  std::string name = spec.substr(0, at);
  bool value = true;
  if (auto eq = name.find('='); eq != std::string::npos) {
    const std::string v = name.substr(eq + 1);
    if (v == "true" || v == "1") value = true;
    else if (v == "false" || v == "0") value = false;
    else throw ParseError("invalid value '" + v + "' in scenario entry '" + spec + "'", eq + 1);
    name.resize(eq);
  }
  std::uint64_t cycle = 0;
  try {
    std::size_t used = 0;
    cycle = std::stoull(spec.substr(at + 1), &used);
    if (used != spec.size() - at - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ParseError("invalid cycle in scenario entry '" + spec + "'", at + 1);
  }
  script.push_back({cycle, {{name, value}}});
  validate();
}

Scenario Scenario::from_json(const std::string& text) {
  Scenario sc;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_array()) throw ParseError("scenario must be a JSON array", 0);
    for (const auto& e : j) {
      Entry entry;
      entry.cycle = e.at("cycle").get<std::uint64_t>();
      entry.set = e.at("set").get<std::map<std::string, bool>>();
      sc.script.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what(), 0);
  }
  sc.validate();
  return sc;
}

void Scenario::validate() const {
  for (const Entry& e : script)
    for (const auto& [name, value] : e.set)
      if (!input_props()->find(name)) throw ParseError("scenario overrides unknown input '" + name + "'", 0);
}

void Scenario::apply(std::uint64_t cycle, PlantState& s) const {
  for (const Entry& e : script) {
    if (e.cycle != cycle) continue;
    for (const auto& [name, value] : e.set) {
      if (name == "start") s.start_latch = value;
      else s.forced[name] = value;
    }
  }
}

std::string describe(const PlantState& s) {
  std::ostringstream out;
  out << "upper=" << s.upper_pos << (s.upper_loaded ? "(loaded)" : "") << " lower=" << s.lower_pos
      << (s.lower_loaded ? "(loaded)" : "") << " pusher=" << s.pusher_ext
      << " dock=" << (s.transfer_box_present ? "box" : "empty");
  if (s.fault) out << " fault=\"" << *s.fault << '"';
  return out.str();
}

}  // namespace ihda::plant
