#include "ihda/hda.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "ihda/error.hpp"

namespace ihda {

NetStructure NetStructure::of(const Ipn& net) {
  NetStructure s;
  for (const Transition& t : net.transitions()) {
    s.alphabet.push_back(t.id);
    s.pre.push_back(t.pre);
    s.post.push_back(t.post);
  }
  return s;
}

Hda::Hda(NetStructure net, std::vector<Cell> cells, Cell initial) : net_(std::move(net)) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  cells_ = std::move(cells);
  if (initial.dim() != 0) throw ModelError("initial cell must be a 0-cell");
  auto init = find(initial);
  if (!init) throw ModelError("initial cell is not in the cell set");
  initial_ = *init;

  steps_from_.resize(cells_.size());
  for (CellIndex i = 0; i < cells_.size(); ++i) {
    if (auto z = find(lower_zero_face(net_, cells_[i]))) steps_from_[*z].push_back(i);
  }
}

std::optional<CellIndex> Hda::find(const Cell& c) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), c);
  if (it == cells_.end() || !(*it == c)) return std::nullopt;
  return static_cast<CellIndex>(it - cells_.begin());
}

std::size_t Hda::dimension() const {
  std::size_t d = 0;
  for (const Cell& c : cells_) d = std::max(d, c.dim());
  return d;
}

std::vector<std::size_t> Hda::count_by_dim() const {
  std::vector<std::size_t> counts(dimension() + 1, 0);
  for (const Cell& c : cells_) ++counts[c.dim()];
  return counts;
}

const std::vector<CellIndex>& Hda::steps_from(CellIndex zero) const { return steps_from_[zero]; }

// --- faces -----------------------------------------------------------------

namespace {

Marking weighted(const std::vector<Marking>& arcs, const Concset& c, std::size_t places) {
  Marking m(places);
  for (std::size_t t = 0; t < c.size(); ++t)
    if (c[t]) m.add_scaled(arcs[t], c[t]);
  return m;
}

}  // namespace

Cell face(const NetStructure& net, const Cell& x, const Concset& lower, const Concset& upper) {
  const Concset removed = lower + upper;
  if (!removed.contained_in(x.concset))
    throw ModelError("face map removes more transitions than the cell carries");
  const std::size_t places = x.marking.size();
  return Cell{x.marking + weighted(net.pre, lower, places) + weighted(net.post, upper, places),
              x.concset - removed};
}

Cell lower_zero_face(const NetStructure& net, const Cell& x) {
  return Cell{x.marking + weighted(net.pre, x.concset, x.marking.size()),
              Concset(x.concset.size())};
}

Cell upper_zero_face(const NetStructure& net, const Cell& x) {
  return Cell{x.marking + weighted(net.post, x.concset, x.marking.size()),
              Concset(x.concset.size())};
}

// --- construction ----------------------------------------------------------

namespace {

// Calls f(c) for every concset c with •c <= budget, in lexicographic order
// of transition index. Pruning relies on `keep` being downward closed.
void for_each_step(const NetStructure& net, const Marking& available, const ConcsetFilter& keep,
                   const std::function<void(const Concset&)>& f) {
  const std::size_t n = net.alphabet.size();
  Concset c(n);
  Marking left = available;
  std::function<void(std::size_t)> rec = [&](std::size_t t) {
    if (t == n) {
      f(c);
      return;
    }
    rec(t + 1);
    std::uint32_t added = 0;
    while (net.pre[t].contained_in(left)) {
      left -= net.pre[t];
      c[t] += 1;
      ++added;
      if (keep && c.total() > 1 && !keep(c)) break;
      rec(t + 1);
    }
    c[t] -= added;
    left.add_scaled(net.pre[t], added);
  };
  rec(0);
}

void check_tokens(const Marking& m, const Budget& budget, const Ipn& net) {
  for (std::size_t p = 0; p < m.size(); ++p)
    if (m[p] > budget.max_tokens_per_place)
      throw BudgetExceeded("place '" + net.place(p).id + "' reaches " + std::to_string(m[p]) +
                           " tokens (bound " + std::to_string(budget.max_tokens_per_place) + ")");
}

}  // namespace

Hda pn_to_hda(const Ipn& net, const Budget& budget, const ConcsetFilter& keep) {
  for (const Transition& t : net.transitions())
    if (t.pre.empty())
      throw ModelError("transition '" + t.id + "' has an empty preset; its HDA is unbounded");

  NetStructure structure = NetStructure::of(net);

  std::vector<Cell> cells;
  std::set<Marking> seen{net.initial()};
  std::deque<Marking> queue{net.initial()};
  check_tokens(net.initial(), budget, net);

  while (!queue.empty()) {
    const Marking zero = std::move(queue.front());
    queue.pop_front();
    for_each_step(structure, zero, keep, [&](const Concset& c) {
      Cell x{zero - weighted(structure.pre, c, zero.size()), c};
      Marking next = x.marking + weighted(structure.post, c, zero.size());
      cells.push_back(std::move(x));
      if (seen.insert(next).second) {
        check_tokens(next, budget, net);
        if (seen.size() > budget.max_markings)
          throw BudgetExceeded("more than " + std::to_string(budget.max_markings) +
                               " reachable markings");
        queue.push_back(std::move(next));
      }
    });
  }
  return Hda(std::move(structure), std::move(cells), Cell{net.initial(), net.empty_concset()});
}

// --- verification ----------------------------------------------------------

void for_each_split(const Concset& c, const std::function<void(const Concset&, const Concset&)>& f) {
  Concset a(c.size()), b(c.size());
  std::function<void(std::size_t)> rec = [&](std::size_t t) {
    if (t == c.size()) {
      f(a, b);
      return;
    }
    for (std::uint32_t i = 0; i <= c[t]; ++i)
      for (std::uint32_t j = 0; i + j <= c[t]; ++j) {
        a[t] = i;
        b[t] = j;
        rec(t + 1);
      }
    a[t] = b[t] = 0;
  };
  rec(0);
}

std::vector<Cell> proper_faces(const NetStructure& net, const Cell& x) {
  std::vector<Cell> out;
  for_each_split(x.concset, [&](const Concset& a, const Concset& b) {
    if (!a.empty() || !b.empty()) out.push_back(face(net, x, a, b));
  });
  return out;
}

std::vector<PrecubicalViolation> verify_precubical(const Hda& h) {
  std::vector<PrecubicalViolation> out;
  const NetStructure& net = h.net();
  for (CellIndex i = 0; i < h.size(); ++i) {
    const Cell& x = h.cell(i);
    bool broken = false;
    for_each_split(x.concset, [&](const Concset& a, const Concset& b) {
      if (broken) return;
      auto first = h.find(face(net, x, a, b));
      if (!first) {
        out.push_back({i, "face (A=" + std::to_string(a.total()) + ", B=" +
                              std::to_string(b.total()) + ") is not a stored cell"});
        broken = true;
        return;
      }
      const Cell& y = h.cell(*first);
      for_each_split(y.concset, [&](const Concset& c, const Concset& d) {
        if (broken) return;
        auto lhs = h.find(face(net, y, c, d));
        auto rhs = h.find(face(net, x, a + c, b + d));
        if (!lhs || !rhs || *lhs != *rhs) {
          out.push_back({i, "composed faces disagree with the direct face"});
          broken = true;
        }
      });
    });
  }
  return out;
}

Hda truncate(const Hda& h, std::size_t k) {
  std::vector<Cell> kept;
  for (const Cell& c : h.cells())
    if (c.dim() <= k) kept.push_back(c);
  return Hda(h.net(), std::move(kept), h.cell(h.initial()));
}

ReachabilityGraph reachability_graph(const Ipn& net, const Budget& budget) {
  ReachabilityGraph g;
  std::map<Marking, std::size_t> index;
  auto intern = [&](const Marking& m) {
    auto [it, fresh] = index.emplace(m, g.nodes.size());
    if (fresh) {
      check_tokens(m, budget, net);
      if (g.nodes.size() >= budget.max_markings)
        throw BudgetExceeded("more than " + std::to_string(budget.max_markings) +
                             " reachable markings");
      g.nodes.push_back(m);
    }
    return it->second;
  };
  intern(net.initial());
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    for (std::size_t t : marking_enabled(net, g.nodes[n])) {
      const std::size_t to = intern(fire(net, g.nodes[n], t));
      g.edges.push_back({n, t, to});
    }
  }
  return g;
}

// --- computations ----------------------------------------------------------

ComputationSearch::ComputationSearch(const Hda& h)
    : h_(h), via_step_(h.size()), reached_(h.size(), false) {
  std::deque<CellIndex> queue{h.initial()};
  reached_[h.initial()] = true;
  while (!queue.empty()) {
    const CellIndex z = queue.front();
    queue.pop_front();
    for (CellIndex x : h.steps_from(z)) {
      if (h.cell(x).dim() == 0) continue;
      auto next = h.find(upper_zero_face(h.net(), h.cell(x)));
      if (!next || reached_[*next]) continue;
      reached_[*next] = true;
      via_step_[*next] = x;
      queue.push_back(*next);
    }
  }
}

std::optional<Computation> ComputationSearch::to(CellIndex target) const {
  const Cell& t = h_.cell(target);
  CellIndex end_zero = target;
  if (t.dim() > 0) {
    auto z = h_.find(lower_zero_face(h_.net(), t));
    if (!z) return std::nullopt;
    end_zero = *z;
  }
  if (!reached_[end_zero]) return std::nullopt;

  Computation c;
  for (CellIndex z = end_zero;;) {
    c.zeros.push_back(z);
    if (!via_step_[z]) break;
    const CellIndex x = *via_step_[z];
    c.steps.push_back(x);
    z = *h_.find(lower_zero_face(h_.net(), h_.cell(x)));
  }
  std::reverse(c.zeros.begin(), c.zeros.end());
  std::reverse(c.steps.begin(), c.steps.end());
  if (t.dim() > 0) {
    auto up = h_.find(upper_zero_face(h_.net(), t));
    if (!up) return std::nullopt;
    c.steps.push_back(target);
    c.zeros.push_back(*up);
  }
  return c;
}

std::optional<Computation> find_computation(const Hda& h, CellIndex target) {
  return ComputationSearch(h).to(target);
}

bool is_valid_computation(const Hda& h, const Computation& c) {
  if (c.zeros.size() != c.steps.size() + 1) return false;
  for (CellIndex z : c.zeros)
    if (z >= h.size() || h.cell(z).dim() != 0) return false;
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    if (c.steps[i] >= h.size()) return false;
    const Cell& x = h.cell(c.steps[i]);
    if (!(lower_zero_face(h.net(), x) == h.cell(c.zeros[i]))) return false;
    if (!(upper_zero_face(h.net(), x) == h.cell(c.zeros[i + 1]))) return false;
  }
  return true;
}

std::string cell_to_string(const Ipn& net, const Cell& c) {
  return "(" + to_string(net, c.marking) + ", " + to_string(net, c.concset) + ")";
}

}  // namespace ihda
