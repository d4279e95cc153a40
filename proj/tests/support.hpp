#pragma once

// Shared test helpers: brute-force oracles and random model generators.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "ihda/error.hpp"
#include "ihda/hda.hpp"
#include "ihda/ipn.hpp"
#include "ihda/runner.hpp"
#include "ihda/translate.hpp"

namespace testsupport {

using Rng = std::mt19937_64;
using Literal = std::pair<std::size_t, bool>;

inline std::string model_path(const std::string& name) { return std::string(IHDA_MODELS_DIR) + "/" + name; }

inline std::shared_ptr<const ihda::Ipn> load_model(const std::string& name) {
  return std::make_shared<const ihda::Ipn>(ihda::load_ipn(model_path(name)));
}

/// The place-label transform making Pusher exclusive with both lower
/// chariot movements. `paper_variant` uses the printed "!L2 & R2" form.
inline std::shared_ptr<const ihda::Ipn> relabeled(const ihda::Ipn& net, bool paper_variant = false) {
  using ihda::parse_cube;
  const auto& o = net.outputs();
  return std::make_shared<const ihda::Ipn>(
      net.restrict_place("p_low_left", parse_cube("!Pusher", o))
          .restrict_place("p_low_right", parse_cube("!Pusher", o))
          .restrict_place("p_push", parse_cube(paper_variant ? "!L2 & R2" : "!L2 & !R2", o)));
}

inline std::vector<ihda::Clause> exclusivity_clauses(const ihda::Ipn& net) {
  return {ihda::parse_clause("!L2 | !Pusher", net.outputs()), ihda::parse_clause("!R2 | !Pusher", net.outputs())};
}

inline ihda::PropSetRef props(std::size_t n, const std::string& prefix = "p") {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return ihda::make_propset(names);
}

/// A literal list as generated, possibly contradictory. This is the oracle's
/// representation; the library only ever sees its text.
inline std::vector<Literal> random_literals(Rng& rng, std::size_t nprops, std::size_t max_lits) {
  std::uniform_int_distribution<std::size_t> count(0, max_lits), prop(0, nprops - 1);
  std::bernoulli_distribution sign(0.5);
  std::vector<Literal> lits(count(rng));
  for (auto& l : lits) l = {prop(rng), sign(rng)};
  return lits;
}

inline std::string literals_text(const std::vector<Literal>& lits, const ihda::PropSet& ps,
                                 const char* sep = " & ") {
  if (lits.empty()) return "TRUE";
  std::string out;
  for (const auto& [p, pos] : lits) {
    if (!out.empty()) out += sep;
    out += (pos ? "" : "!") + ps.name(p);
  }
  return out;
}

/// Oracle: does bitmask assignment `bits` satisfy the conjunction?
inline bool oracle_conj(const std::vector<Literal>& lits, std::uint64_t bits) {
  for (const auto& [p, pos] : lits)
    if (((bits >> p) & 1u) != static_cast<std::uint64_t>(pos)) return false;
  return true;
}

/// Oracle: does `bits` satisfy the disjunction?
inline bool oracle_disj(const std::vector<Literal>& lits, std::uint64_t bits) {
  for (const auto& [p, pos] : lits)
    if (((bits >> p) & 1u) == static_cast<std::uint64_t>(pos)) return true;
  return false;
}

inline ihda::Valuation valuation_of(const ihda::PropSetRef& ps, std::uint64_t bits) {
  std::vector<bool> v(ps->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (bits >> i) & 1u;
  return ihda::Valuation(ps, v);
}

/// Random net with at most `max_places` places and `max_transitions`
/// transitions, every preset non-empty, 1-safe from the initial marking
/// (rejection sampled against the token bound). Labels are random cubes
/// over two inputs and three outputs.
inline ihda::Ipn random_safe_net(Rng& rng, std::size_t max_places = 6, std::size_t max_transitions = 6) {
  using namespace ihda;
  const PropSetRef in = props(2, "i"), out = props(3, "o");
  std::uniform_int_distribution<std::size_t> np(1, max_places), nt(1, max_transitions);
  std::bernoulli_distribution coin(0.5), rare(0.25);
  auto cube = [&](const PropSetRef& ps) {
    Cube c = Cube::top(ps);
    for (std::size_t p = 0; p < ps->size(); ++p)
      if (rare(rng)) c.add(p, coin(rng));
    return c;
  };
  for (;;) {
    const std::size_t P = np(rng), T = nt(rng);
    std::uniform_int_distribution<std::size_t> pick(0, P - 1);
    std::vector<Place> places;
    for (std::size_t p = 0; p < P; ++p) places.push_back({"p" + std::to_string(p), cube(out)});
    std::vector<Transition> ts;
    for (std::size_t t = 0; t < T; ++t) {
      Marking pre(P), post(P);
      pre[pick(rng)] = 1;
      for (std::size_t p = 0; p < P; ++p) {
        if (rare(rng)) pre[p] = 1;
        if (rare(rng)) post[p] = 1;
      }
      ts.push_back({"t" + std::to_string(t), cube(in), cube(out), pre, post});
    }
    Marking m0(P);
    m0[0] = 1;
    for (std::size_t p = 1; p < P; ++p)
      if (rare(rng)) m0[p] = 1;
    Ipn net(in, out, places, ts, m0);
    try {
      (void)reachability_graph(net, Budget{1, 5000});
      return net;
    } catch (const BudgetExceeded&) {
      // not 1-safe; draw again
    }
  }
}

/// Lemma 1 oracle: reachability-graph nodes/edges and the HDA's 0-/1-cells
/// have equal key multisets (node key: marking; edge key: source marking,
/// transition, target marking).
inline bool lemma1_holds(const ihda::Ipn& net, const ihda::Hda& h, std::string* why = nullptr) {
  using namespace ihda;
  using EdgeKey = std::tuple<std::vector<std::uint32_t>, std::size_t, std::vector<std::uint32_t>>;
  const ReachabilityGraph g = reachability_graph(net, Budget{1, 100000});
  std::vector<std::vector<std::uint32_t>> gn, hn;
  std::vector<EdgeKey> ge, he;
  for (const Marking& m : g.nodes) gn.push_back(m.values());
  for (const auto& e : g.edges) ge.emplace_back(g.nodes[e.from].values(), e.transition, g.nodes[e.to].values());
  for (const Cell& c : h.cells()) {
    if (c.dim() == 0) hn.push_back(c.marking.values());
    if (c.dim() != 1) continue;
    std::size_t t = 0;
    while (!c.concset[t]) ++t;
    he.emplace_back(lower_zero_face(h.net(), c).marking.values(), t, upper_zero_face(h.net(), c).marking.values());
  }
  std::sort(gn.begin(), gn.end());
  std::sort(hn.begin(), hn.end());
  std::sort(ge.begin(), ge.end());
  std::sort(he.begin(), he.end());
  if (why)
    *why = "graph " + std::to_string(gn.size()) + "/" + std::to_string(ge.size()) + " vs cells " +
           std::to_string(hn.size()) + "/" + std::to_string(he.size());
  return gn == hn && ge == he;
}

/// Runs one plant/controller session over loopback TCP.
struct LoopRun {
  ihda::RunResult client;
  ihda::plant::ServeResult server;
};

inline LoopRun closed_loop(const ihda::StepController& ctl, const ihda::plant::PlantConfig& cfg,
                           const ihda::plant::Scenario& scenario, std::uint64_t max_cycles = 200) {
  ihda::plant::ServeOptions so;
  so.max_cycles = max_cycles;
  so.accept_timeout_ms = 5000;
  ihda::plant::PlantServer server(cfg, scenario, so);
  LoopRun r;
  std::thread th([&] { r.server = server.run(); });
  ihda::ClientOptions co;
  co.port = server.port();
  try {
    r.client = ihda::run_controller(ctl, co);
  } catch (...) {
    th.join();
    throw;
  }
  th.join();
  return r;
}

}  // namespace testsupport
