#pragma once

// Anonymous higher-dimensional automata built from Petri nets. A cell is a
// pair (marking, concset); its faces are computed from the net's pre/post
// sets rather than stored.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ihda/ipn.hpp"
#include "ihda/multiset.hpp"

namespace ihda {

struct Cell {
  Marking marking;
  Concset concset;

  std::size_t dim() const { return concset.total(); }
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

using CellIndex = std::size_t;

/// Pre/post incidence of the net the HDA was built from.
struct NetStructure {
  std::vector<std::string> alphabet;  // transition ids
  std::vector<Marking> pre;
  std::vector<Marking> post;

  static NetStructure of(const Ipn& net);
};

/// Predicate on concsets used to prune cells during construction. Must be
/// downward closed: if it accepts c it accepts every c' <= c.
using ConcsetFilter = std::function<bool(const Concset&)>;

class Hda {
 public:
  /// Builds from an explicit cell list (sorted and deduplicated here). No
  /// closure check is made; see verify_precubical.
  Hda(NetStructure net, std::vector<Cell> cells, Cell initial);

  const NetStructure& net() const { return net_; }
  const std::vector<std::string>& alphabet() const { return net_.alphabet; }
  std::size_t size() const { return cells_.size(); }
  const Cell& cell(CellIndex i) const { return cells_[i]; }
  const std::vector<Cell>& cells() const { return cells_; }
  CellIndex initial() const { return initial_; }
  std::optional<CellIndex> find(const Cell& c) const;

  std::size_t dimension() const;
  /// counts[d] = number of d-cells.
  std::vector<std::size_t> count_by_dim() const;

  /// Cells x with lower 0-face equal to `zero` (steps leaving that 0-cell),
  /// including the 0-cell itself.
  const std::vector<CellIndex>& steps_from(CellIndex zero) const;

 private:
  NetStructure net_;
  std::vector<Cell> cells_;
  CellIndex initial_ = 0;
  std::vector<std::vector<CellIndex>> steps_from_;
};

/// Reachable fragment of the net's HDA, breadth first from (m0, ∅).
Hda pn_to_hda(const Ipn& net, const Budget& budget = {}, const ConcsetFilter& keep = {});

/// δ_{A,B}(x) = (m + •A + B•, c − A − B). Throws if A + B exceeds x's concset.
Cell face(const NetStructure& net, const Cell& x, const Concset& lower, const Concset& upper);
inline Cell face(const Hda& h, const Cell& x, const Concset& lower, const Concset& upper) {
  return face(h.net(), x, lower, upper);
}
/// δ_down over the full concset: the 0-cell where the step starts.
Cell lower_zero_face(const NetStructure& net, const Cell& x);
/// δ_up over the full concset: the 0-cell where the step ends.
Cell upper_zero_face(const NetStructure& net, const Cell& x);

/// Calls f(lower, upper) for every pair with lower + upper <= c.
void for_each_split(const Concset& c,
                    const std::function<void(const Concset&, const Concset&)>& f);

/// Every face of x other than x itself (may contain repeats).
std::vector<Cell> proper_faces(const NetStructure& net, const Cell& x);

struct PrecubicalViolation {
  CellIndex cell;
  std::string message;
};

/// Checks closure under faces and δ_{C,D}∘δ_{A,B} = δ_{A+C,B+D} for every
/// stored cell, with faces resolved against the store.
std::vector<PrecubicalViolation> verify_precubical(const Hda& h);

Hda truncate(const Hda& h, std::size_t k);

struct ReachabilityGraph {
  std::vector<Marking> nodes;
  struct Edge {
    std::size_t from;
    std::size_t transition;
    std::size_t to;
  };
  std::vector<Edge> edges;
};

/// Plain marking graph, independent of the cell construction.
ReachabilityGraph reachability_graph(const Ipn& net, const Budget& budget = {});

/// (z0, x0, z1, ..., x_{n-1}, z_n): 0-cells z_i, steps x_i.
struct Computation {
  std::vector<CellIndex> zeros;
  std::vector<CellIndex> steps;

  std::size_t length() const { return steps.size(); }
};

/// Shortest-step search from the initial 0-cell, reusable across targets.
class ComputationSearch {
 public:
  explicit ComputationSearch(const Hda& h);

  /// Shortest computation whose last step is `target` (for a 0-cell target:
  /// whose last 0-cell is the target). nullopt if unreachable.
  std::optional<Computation> to(CellIndex target) const;

 private:
  const Hda& h_;
  std::vector<std::optional<CellIndex>> via_step_;  // per 0-cell, the step used to reach it
  std::vector<bool> reached_;
};

std::optional<Computation> find_computation(const Hda& h, CellIndex target);

/// Checks the alternating face conditions of a computation.
bool is_valid_computation(const Hda& h, const Computation& c);

std::string cell_to_string(const Ipn& net, const Cell& c);

}  // namespace ihda
