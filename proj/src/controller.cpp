#include "ihda/controller.hpp"

#include <deque>
#include <istream>
#include <set>
#include <tuple>

#include "ihda/error.hpp"
#include "json_util.hpp"

namespace ihda {

CellLabel step_label(const Ihda& ihda, const Marking& m, const Concset& c) {
  const Cell x{m - preset_step(ihda.net(), c), c};
  if (auto idx = ihda.hda().find(x)) return ihda.label(*idx);
  return label_cell(ihda.net(), x);
}

namespace {

bool admissible_output(const Cube& out, const std::vector<Clause>& invariants) {
  if (out.is_false()) return false;
  for (const Clause& cl : invariants)
    if (violates_clause(out, cl)) return false;
  return true;
}

}  // namespace

Concset select_step(const Ihda& ihda, const Marking& m, const Valuation& inputs,
                    const std::vector<Clause>& invariants) {
  const Ipn& net = ihda.net();
  Concset step = net.empty_concset();
  Marking left = m;
  for (std::size_t t : enabled(net, m, inputs)) {
    const Transition& tr = net.transition(t);
    while (tr.pre.contained_in(left)) {
      Concset candidate = step;
      candidate[t] += 1;
      if (!satisfies(inputs, step_input(net, candidate))) break;
      if (!admissible_output(step_label(ihda, m, candidate).output, invariants)) break;
      step = std::move(candidate);
      left -= tr.pre;
    }
  }
  return step;
}

StepController::StepController(const Ihda& ihda, std::vector<Clause> invariants)
    : ihda_(ihda), invariants_(std::move(invariants)) {}

ControllerState StepController::initial_state() const {
  return {ihda_.net().initial(), 0, ihda_.net().empty_concset(), std::nullopt};
}

StepController::Cycle StepController::cycle(ControllerState& state, const Valuation& inputs) const {
  const Ipn& net = ihda_.net();
  Cycle result{net.empty_concset(), state.marking, std::nullopt};
  if (state.halted_reason) return result;

  const Concset step = select_step(ihda_, state.marking, inputs, invariants_);
  const Cube out = step_label(ihda_, state.marking, step).output;
  result.step = step;
  if (out.is_false()) {
    state.halted_reason = "output of step " + to_string(net, step) + " in marking " +
                          to_string(net, state.marking) + " is FALSE";
    return result;
  }
  for (const Clause& cl : invariants_) {
    if (violates_clause(out, cl)) {
      state.halted_reason = "output of step " + to_string(net, step) + " in marking " +
                            to_string(net, state.marking) + " violates " + to_string(cl);
      return result;
    }
  }
  result.outputs = complete_valuation(out, false);
  state.marking = fire_step(net, state.marking, step);
  state.last_step = step;
  ++state.cycle;
  return result;
}

Preflight preflight(const Ihda& ihda, const std::vector<Clause>& invariants, bool force) {
  Preflight p;
  p.report = analyse(ihda, invariants);
  p.ok = force || p.report.empty();
  return p;
}

// --- conformance -----------------------------------------------------------

namespace {

bool compatible(const IOLetter& l, const CellLabel& label) {
  return satisfies(l.inputs, label.input) && satisfies(l.outputs, label.output);
}

// Maximal progress: the path may idle at a 0-cell only when no step
// leaving it is enabled by the letter's inputs.
bool may_wait(const Ihda& ihda, CellIndex z, const IOLetter& letter) {
  const Hda& h = ihda.hda();
  for (CellIndex x : h.steps_from(z))
    if (h.cell(x).dim() > 0 && satisfies(letter.inputs, ihda.label(x).input)) return false;
  return true;
}

bool conforms_interpreted(const Ihda& ihda, const IOWord& word) {
  const Hda& h = ihda.hda();
  // (0-cell, n0): letter n0 is read by a wait at the 0-cell or by a step
  // leaving it; either move advances n0.
  std::set<std::pair<CellIndex, std::size_t>> seen;
  std::deque<std::pair<CellIndex, std::size_t>> queue{{h.initial(), 0}};
  seen.insert(queue.front());
  while (!queue.empty()) {
    auto [z, n0] = queue.front();
    queue.pop_front();
    if (n0 == word.size()) return true;
    const IOLetter& letter = word[n0];
    auto push = [&](CellIndex next) {
      if (seen.insert({next, n0 + 1}).second) queue.emplace_back(next, n0 + 1);
    };
    if (compatible(letter, ihda.label(z)) && may_wait(ihda, z, letter)) push(z);
    for (CellIndex x : h.steps_from(z)) {
      if (h.cell(x).dim() == 0 || !compatible(letter, ihda.label(x))) continue;
      if (auto up = h.find(upper_zero_face(h.net(), h.cell(x)))) push(*up);
    }
  }
  return false;
}

bool conforms_literal(const Ihda& ihda, const IOWord& word) {
  const Hda& h = ihda.hda();
  // Path positions alternate 0-cell / step cell (a 0-cell may serve as a
  // step). Every move advances n1; it may or may not advance n0. The letter
  // at n0 must fit the cell at n1 whenever n0 < |w|.
  using State = std::tuple<CellIndex, bool, std::size_t>;  // cell, at step position, n0
  auto fits = [&](CellIndex c, std::size_t n0) {
    return n0 == word.size() || compatible(word[n0], ihda.label(c));
  };
  if (word.empty()) return true;
  if (!fits(h.initial(), 0)) return false;
  std::set<State> seen{{h.initial(), false, 0}};
  std::deque<State> queue{{h.initial(), false, 0}};
  while (!queue.empty()) {
    auto [c, at_step, n0] = queue.front();
    queue.pop_front();
    std::vector<CellIndex> next;
    if (at_step) {
      if (auto up = h.find(upper_zero_face(h.net(), h.cell(c)))) next.push_back(*up);
    } else {
      next = h.steps_from(c);
    }
    for (CellIndex n : next) {
      for (std::size_t adv = 0; adv <= 1; ++adv) {
        const std::size_t n0n = n0 + adv;
        if (n0n > word.size() || !fits(n, n0n)) continue;
        if (n == c && n0n < word.size() && !may_wait(ihda, n, word[n0n])) continue;
        if (n0n == word.size()) return true;
        State s{n, !at_step, n0n};
        if (seen.insert(s).second) queue.push_back(s);
      }
    }
  }
  return false;
}

}  // namespace

bool conforms(const Ihda& ihda, const IOWord& word, CounterReading reading) {
  for (const IOLetter& l : word)
    if (!same_props(l.inputs.over(), ihda.inputs()) || !same_props(l.outputs.over(), ihda.outputs()))
      return false;
  return reading == CounterReading::kInterpreted ? conforms_interpreted(ihda, word)
                                                 : conforms_literal(ihda, word);
}

// --- trace log -------------------------------------------------------------

std::string trace_line(const Ipn& net, const TraceRecord& r) {
  json::Json j;
  j["cycle"] = r.cycle;
  j["inputs"] = json::valuation(r.inputs);
  j["step"] = json::concset(net, r.step);
  j["outputs"] = json::valuation(r.outputs);
  j["marking"] = json::marking(net, r.marking);
  return j.dump();
}

std::vector<TraceRecord> parse_trace(const Ipn& net, std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::Json::parse(line);
      out.push_back({j.at("cycle").get<std::uint64_t>(),
                     json::valuation_from(j.at("inputs"), net.inputs()),
                     json::concset_from(net, j.at("step")),
                     json::valuation_from(j.at("outputs"), net.outputs()),
                     json::marking_from(net, j.at("marking"))});
    } catch (const std::exception& e) {
      throw ParseError("trace line " + std::to_string(lineno) + ": " + e.what(), lineno);
    }
  }
  return out;
}

IOWord trace_word(const std::vector<TraceRecord>& trace) {
  IOWord w;
  for (const TraceRecord& r : trace) w.push_back({r.inputs, r.outputs});
  return w;
}

}  // namespace ihda
