#include "ihda/translate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ihda/error.hpp"

namespace ihda {

Ihda::Ihda(std::shared_ptr<const Ipn> net, Hda hda, std::vector<CellLabel> labels)
    : net_(std::move(net)), hda_(std::move(hda)), labels_(std::move(labels)) {
  if (labels_.size() != hda_.size()) throw ModelError("every cell needs a label");
}

namespace {

// Accumulates a conjunction and remembers where it first became FALSE.
struct Accumulator {
  Cube cube;
  std::optional<std::size_t> conflict;

  void add(const Cube& c) {
    if (cube.is_false()) return;
    if (!conflict) conflict = first_conflict(cube, c);
    cube = conj(cube, c);
  }
};

}  // namespace

CellLabel label_cell(const Ipn& net, const Cell& x) {
  Accumulator in{Cube::top(net.inputs()), {}};
  Accumulator out{Cube::top(net.outputs()), {}};
  const Marking lower = x.marking + preset_step(net, x.concset);
  for (std::size_t p = 0; p < lower.size(); ++p)
    if (lower[p] > 0) out.add(net.place(p).output);
  for (std::size_t t = 0; t < x.concset.size(); ++t) {
    if (!x.concset[t]) continue;
    in.add(net.transition(t).input);
    out.add(net.transition(t).output);
  }
  return {in.cube, out.cube, out.cube.is_false() ? out.conflict : std::nullopt};
}

Ihda build_ihda(std::shared_ptr<const Ipn> net, const Budget& budget) {
  const Ipn& n = *net;
  Hda hda = pn_to_hda(n, budget, [&n](const Concset& c) { return !step_input(n, c).is_false(); });
  std::vector<CellLabel> labels;
  labels.reserve(hda.size());
  for (const Cell& c : hda.cells()) {
    labels.push_back(label_cell(n, c));
    if (labels.back().input.is_false())
      throw ModelError("input-incompatible cell " + cell_to_string(n, c) + " was constructed");
  }
  return Ihda(std::move(net), std::move(hda), std::move(labels));
}

// --- analyses --------------------------------------------------------------

std::vector<CellIndex> AnalysisReport::maximal_cells() const {
  std::set<CellIndex> cells;
  for (const auto* list : {&inconsistent, &violations})
    for (const Finding& f : *list)
      if (f.maximal) cells.insert(f.cell);
  return {cells.begin(), cells.end()};
}

namespace {

// Marks findings whose cell is a proper face of another flagged cell in the
// same group, then orders maximal cells first.
void finalize(const Ihda& ihda, std::vector<Finding>& findings) {
  std::map<std::string, std::set<CellIndex>> groups;
  auto key = [](const Finding& f) { return f.clause ? to_string(*f.clause) : std::string(); };
  for (const Finding& f : findings) groups[key(f)].insert(f.cell);

  std::map<std::string, std::set<CellIndex>> dominated;
  for (const auto& [k, cells] : groups) {
    for (CellIndex y : cells) {
      for (const Cell& fc : proper_faces(ihda.hda().net(), ihda.hda().cell(y))) {
        auto idx = ihda.hda().find(fc);
        if (idx && cells.count(*idx)) dominated[k].insert(*idx);
      }
    }
  }
  for (Finding& f : findings) f.maximal = !dominated[key(f)].count(f.cell);
  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    if (a.maximal != b.maximal) return a.maximal;
    return a.cell < b.cell;
  });
}

Computation witness_for(const ComputationSearch& search, CellIndex x) {
  auto c = search.to(x);
  if (!c) return {};
  return *c;
}

}  // namespace

AnalysisReport find_inconsistent(const Ihda& ihda) {
  AnalysisReport report;
  ComputationSearch search(ihda.hda());
  const PropSet& outs = *ihda.outputs();
  for (CellIndex x = 0; x < ihda.size(); ++x) {
    const CellLabel& l = ihda.label(x);
    if (!l.output.is_false()) continue;
    Finding f{x, FindingKind::kBotOutput, std::nullopt, witness_for(search, x), {}, true};
    if (l.conflict) f.literal_conflict = {outs.name(*l.conflict), "!" + outs.name(*l.conflict)};
    report.inconsistent.push_back(std::move(f));
  }
  finalize(ihda, report.inconsistent);
  return report;
}

AnalysisReport check_invariants(const Ihda& ihda, const std::vector<Clause>& invariants) {
  AnalysisReport report;
  if (invariants.empty()) return report;
  for (const Clause& cl : invariants)
    if (!same_props(cl.over(), ihda.outputs()))
      throw ModelError("invariant '" + to_string(cl) + "' is not over the outputs");
  ComputationSearch search(ihda.hda());
  const PropSet& outs = *ihda.outputs();
  for (CellIndex x = 0; x < ihda.size(); ++x) {
    const Cube& out = ihda.label(x).output;
    if (out.is_false()) continue;
    for (const Clause& cl : invariants) {
      if (!violates_clause(out, cl)) continue;
      Finding f{x, FindingKind::kInvariant, cl, witness_for(search, x), {}, true};
      // the label holds the negation of every clause literal
      for (auto [p, pos] : cl.literals())
        f.literal_conflict.push_back(pos ? "!" + outs.name(p) : outs.name(p));
      report.violations.push_back(std::move(f));
    }
  }
  finalize(ihda, report.violations);
  return report;
}

AnalysisReport analyse(const Ihda& ihda, const std::vector<Clause>& invariants) {
  AnalysisReport r = find_inconsistent(ihda);
  r.violations = check_invariants(ihda, invariants).violations;
  return r;
}

// --- witnesses -------------------------------------------------------------

Witness witness(const Ihda& ihda, CellIndex x) {
  auto comp = find_computation(ihda.hda(), x);
  if (!comp) throw ModelError("cell " + describe_cell(ihda, x) + " is unreachable");
  const Ipn& net = ihda.net();
  const Hda& hda = ihda.hda();

  Witness w{*comp, {}, std::nullopt};
  for (std::size_t s = 0; s < comp->steps.size(); ++s) {
    const CellIndex step = comp->steps[s];
    const CellLabel& sl = ihda.label(step);
    if (sl.output.is_false()) {
      const std::string prop = sl.conflict ? ihda.outputs()->name(*sl.conflict) : "?";
      w.conflict = "step " + to_string(net, hda.cell(step).concset) + " from " +
                   to_string(net, hda.cell(comp->zeros[s]).marking) + " demands both " + prop +
                   " and !" + prop;
      break;
    }
    const Valuation in = complete_valuation(sl.input, false);
    // walk the edges of the step's cube in declared transition order
    Marking m = hda.cell(comp->zeros[s]).marking;
    for (const std::string& id : concset_ids(net, hda.cell(step).concset)) {
      const std::size_t t = net.transition_index(id);
      Concset single = net.empty_concset();
      single[t] = 1;
      const Cell edge{m - net.transition(t).pre, single};
      auto idx = hda.find(edge);
      const Cube out = idx ? ihda.label(*idx).output : label_cell(net, edge).output;
      if (out.is_false()) {
        w.conflict = "interleaving edge " + cell_to_string(net, edge) + " has a FALSE output";
        return w;
      }
      w.word.push_back({in, complete_valuation(out, false)});
      m = fire(net, m, t);
    }
  }
  return w;
}

std::string describe_cell(const Ihda& ihda, CellIndex x) {
  return cell_to_string(ihda.net(), ihda.hda().cell(x));
}

}  // namespace ihda
