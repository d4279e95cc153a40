#pragma once

// Concurrent-step controller: each cycle maps an input valuation to an
// output valuation by picking a step (a cell leaving the current 0-cell)
// of the IHDA and firing it.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ihda/translate.hpp"

namespace ihda {

struct ControllerState {
  Marking marking;
  std::uint64_t cycle = 0;
  Concset last_step;
  std::optional<std::string> halted_reason;
};

/// Greedy maximal admissible step: enabled transitions in declared order,
/// each added (with multiplicity) while tokens last, the inputs satisfy the
/// step, and the step's output label stays satisfiable and within the
/// invariants. Empty when nothing can be added.
Concset select_step(const Ihda& ihda, const Marking& m, const Valuation& inputs,
                    const std::vector<Clause>& invariants = {});

/// Label of the step cell (m − •c, c); looked up in the IHDA when stored.
CellLabel step_label(const Ihda& ihda, const Marking& m, const Concset& c);

class StepController {
 public:
  explicit StepController(const Ihda& ihda, std::vector<Clause> invariants = {});

  ControllerState initial_state() const;

  struct Cycle {
    Concset step;
    Marking from;
    /// nullopt when the controller halted in this cycle.
    std::optional<Valuation> outputs;
  };

  /// One control cycle. A halted controller stays halted.
  Cycle cycle(ControllerState& state, const Valuation& inputs) const;

  const Ihda& ihda() const { return ihda_; }
  const std::vector<Clause>& invariants() const { return invariants_; }

 private:
  const Ihda& ihda_;
  std::vector<Clause> invariants_;
};

struct Preflight {
  bool ok = true;
  AnalysisReport report;
};

/// Refuses (ok == false) when the IHDA has FALSE outputs or invariant
/// violations, unless `force` is set.
Preflight preflight(const Ihda& ihda, const std::vector<Clause>& invariants, bool force = false);

enum class CounterReading {
  /// wait: word advances, path cell held; transition: both advance.
  kInterpreted,
  /// as printed: "only n1" or "n0 and n1" increments.
  kLiteral,
};

/// True iff some computation and some interleaving of the counter rules
/// keeps every visited letter compatible with the visited cell's labels
/// and consumes the whole word. Idling at a 0-cell is only allowed when no
/// step leaving it is enabled by the current letter's inputs.
bool conforms(const Ihda& ihda, const IOWord& word,
              CounterReading reading = CounterReading::kInterpreted);

/// One line of the closed-loop trace log.
struct TraceRecord {
  std::uint64_t cycle = 0;
  Valuation inputs;
  Concset step;
  Valuation outputs;
  /// Marking the step was selected in.
  Marking marking;
};

std::string trace_line(const Ipn& net, const TraceRecord& r);
/// Parses newline-delimited records; blank lines are ignored.
std::vector<TraceRecord> parse_trace(const Ipn& net, std::istream& in);
IOWord trace_word(const std::vector<TraceRecord>& trace);

}  // namespace ihda
