#include "ihda/export.hpp"

#include <set>
#include <sstream>

#include "ihda/error.hpp"
#include "json_util.hpp"

namespace ihda {

namespace {

std::string node_name(CellIndex i) { return "c" + std::to_string(i); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Ihda& ihda, int k) {
  if (k < 0 || k > 2) throw ModelError("DOT export supports 0 <= k <= 2, got " + std::to_string(k));
  const Ipn& net = ihda.net();
  const Hda& h = ihda.hda();
  std::ostringstream out;
  out << "digraph ihda {\n  rankdir=LR;\n  node [shape=circle, label=\"\", width=0.25];\n";
  for (CellIndex i = 0; i < h.size(); ++i) {
    const Cell& c = h.cell(i);
    if (c.dim() != 0) continue;
    out << "  " << node_name(i) << " [tooltip=\"" << escape(to_string(net, c.marking))
        << "\", xlabel=\"" << escape(to_string(ihda.label(i).output)) << "\"";
    if (i == h.initial()) out << ", shape=doublecircle";
    out << "];\n";
  }
  if (k >= 1) {
    for (CellIndex i = 0; i < h.size(); ++i) {
      const Cell& c = h.cell(i);
      if (c.dim() != 1) continue;
      auto from = h.find(lower_zero_face(h.net(), c));
      auto to = h.find(upper_zero_face(h.net(), c));
      if (!from || !to) continue;
      out << "  " << node_name(*from) << " -> " << node_name(*to) << " [label=\""
          << escape(concset_ids(net, c.concset).front()) << "\"];\n";
    }
  }
  if (k >= 2) {
    for (CellIndex i = 0; i < h.size(); ++i) {
      const Cell& c = h.cell(i);
      if (c.dim() != 2) continue;
      const CellLabel& l = ihda.label(i);
      out << "  " << node_name(i) << " [shape=box, style=filled, fillcolor=gray85, label=\""
          << escape(to_string(net, c.concset)) << "\\nin: " << escape(to_string(l.input))
          << "\\nout: " << escape(to_string(l.output)) << "\"];\n";
      std::set<CellIndex> corners;
      for (const Cell& f : proper_faces(h.net(), c))
        if (f.dim() == 0)
          if (auto idx = h.find(f)) corners.insert(*idx);
      for (CellIndex z : corners)
        out << "  " << node_name(i) << " -> " << node_name(z)
            << " [style=dotted, arrowhead=none, constraint=false];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string cells_to_json(const Ihda& ihda) {
  const Ipn& net = ihda.net();
  json::Json arr = json::Json::array();
  for (CellIndex i = 0; i < ihda.size(); ++i) {
    const Cell& c = ihda.hda().cell(i);
    json::Json j = json::cell(net, c);
    j["dim"] = c.dim();
    j["input"] = to_string(ihda.label(i).input);
    j["output"] = to_string(ihda.label(i).output);
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::string report_to_json(const Ihda& ihda, const AnalysisReport& report) {
  const Ipn& net = ihda.net();
  const Hda& h = ihda.hda();
  json::Json arr = json::Json::array();
  for (const auto* list : {&report.inconsistent, &report.violations}) {
    for (const Finding& f : *list) {
      json::Json j;
      j["cell"] = json::cell(net, h.cell(f.cell));
      j["kind"] = f.kind == FindingKind::kBotOutput ? "bot-output" : "invariant";
      if (f.clause) j["clause"] = to_string(*f.clause);
      j["maximal"] = f.maximal;
      json::Json steps = json::Json::array();
      for (std::size_t s = 0; s < f.witness.steps.size(); ++s)
        steps.push_back({{"from", json::marking(net, h.cell(f.witness.zeros[s]).marking)},
                         {"step", json::concset(net, h.cell(f.witness.steps[s]).concset)}});
      j["witness"] = std::move(steps);
      j["literal_conflict"] = f.literal_conflict;
      arr.push_back(std::move(j));
    }
  }
  return arr.dump(2);
}

}  // namespace ihda
