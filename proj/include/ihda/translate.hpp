#pragma once

// IPN -> IHDA: input-compatible cells of the net's HDA, each labelled with
// an (input cube, output cube) pair, plus the analyses run on those labels.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ihda/cube.hpp"
#include "ihda/hda.hpp"
#include "ihda/ipn.hpp"

namespace ihda {

struct CellLabel {
  Cube input;
  Cube output;
  /// For a FALSE output: the first proposition demanded with both polarities.
  std::optional<std::size_t> conflict;
};

class Ihda {
 public:
  Ihda(std::shared_ptr<const Ipn> net, Hda hda, std::vector<CellLabel> labels);

  const Ipn& net() const { return *net_; }
  const std::shared_ptr<const Ipn>& net_ptr() const { return net_; }
  const Hda& hda() const { return hda_; }
  const PropSetRef& inputs() const { return net_->inputs(); }
  const PropSetRef& outputs() const { return net_->outputs(); }
  const CellLabel& label(CellIndex x) const { return labels_[x]; }
  std::size_t size() const { return hda_.size(); }

 private:
  std::shared_ptr<const Ipn> net_;
  Hda hda_;
  std::vector<CellLabel> labels_;
};

/// input  = ⋀_{t∈c} λ(t)[0]
/// output = ⋀_{p : m[p]>0 or p∈•c} λ(p) ∧ ⋀_{t∈c} λ(t)[1]
CellLabel label_cell(const Ipn& net, const Cell& x);

Ihda build_ihda(std::shared_ptr<const Ipn> net, const Budget& budget = {});
inline Ihda build_ihda(const Ipn& net, const Budget& budget = {}) {
  return build_ihda(std::make_shared<const Ipn>(net), budget);
}

enum class FindingKind { kBotOutput, kInvariant };

struct Finding {
  CellIndex cell;
  FindingKind kind;
  std::optional<Clause> clause;
  Computation witness;
  /// Names of the clashing literals, e.g. {"Pusher", "!Pusher"} or the
  /// clause's negated literals present in the label.
  std::vector<std::string> literal_conflict;
  /// No stored super-cell is flagged for the same reason.
  bool maximal = true;
};

struct AnalysisReport {
  std::vector<Finding> inconsistent;
  std::vector<Finding> violations;

  bool empty() const { return inconsistent.empty() && violations.empty(); }
  /// Distinct maximal flagged cells, in cell order.
  std::vector<CellIndex> maximal_cells() const;
};

/// Cells whose output label is FALSE.
AnalysisReport find_inconsistent(const Ihda& ihda);
/// (cell, clause) pairs where the output label contradicts the clause.
/// FALSE-labelled cells are left to find_inconsistent.
AnalysisReport check_invariants(const Ihda& ihda, const std::vector<Clause>& invariants);
/// Both analyses merged.
AnalysisReport analyse(const Ihda& ihda, const std::vector<Clause>& invariants);

struct Witness {
  Computation computation;
  /// Concrete I/O prefix, one letter per transition along the computation.
  IOWord word;
  /// Symbolic description when the target's output is FALSE.
  std::optional<std::string> conflict;
};

/// Throws ModelError if the cell is unreachable.
Witness witness(const Ihda& ihda, CellIndex x);

std::string describe_cell(const Ihda& ihda, CellIndex x);

}  // namespace ihda
