#include <doctest.h>

#include <json.hpp>
#include <set>

#include "ihda/error.hpp"
#include "ihda/export.hpp"
#include "ihda/translate.hpp"
#include "support.hpp"

using namespace ihda;
using namespace testsupport;

namespace {

CellIndex find_cell(const Ihda& ihda, std::vector<std::string> marked, std::vector<std::string> running) {
  const Ipn& net = ihda.net();
  auto idx = ihda.hda().find({make_marking(net, marked), make_concset(net, running)});
  REQUIRE(idx);
  return *idx;
}

struct Fig4 {
  CellIndex x, y, w, z;
};

Fig4 fig4(const Ihda& ihda) {
  return {find_cell(ihda, {}, {"t_B", "t_D"}), find_cell(ihda, {}, {"t_C", "t_D"}),
          find_cell(ihda, {}, {"t_B", "t_F", "t_E"}), find_cell(ihda, {}, {"t_C", "t_F", "t_E"})};
}

std::set<CellIndex> cells_of(const std::vector<Finding>& fs) {
  std::set<CellIndex> out;
  for (const Finding& f : fs) out.insert(f.cell);
  return out;
}

}  // namespace

TEST_SUITE("translate") {

TEST_CASE("labels of x, y, w, z") {
  const Ihda ihda = build_ihda(load_model("transfer_buggy.ipn"));
  const auto [x, y, w, z] = fig4(ihda);
  auto row = [&](CellIndex c) {
    return to_string(ihda.label(c).input) + " / " + to_string(ihda.label(c).output);
  };
  CHECK(row(x) == "r1 & l2 / R1 & L2");
  CHECK(row(y) == "press_R & l2 / Load & L2");
  CHECK(row(w) == "r1 & press_L & r2 / R1 & Pusher & R2");
  CHECK(row(z) == "press_R & press_L & r2 / Load & Pusher & R2");
}

TEST_CASE("higher cells of the buggy IHDA") {
  const Ihda ihda = build_ihda(load_model("transfer_buggy.ipn"));
  std::set<std::string> high;
  for (CellIndex c = 0; c < ihda.size(); ++c)
    if (ihda.hda().cell(c).dim() >= 2) high.insert(describe_cell(ihda, c));
  // x, y, w, z and the 2-dimensional faces of w and z
  CHECK(high.size() == 15);
  for (const char* s : {"({}, {t_B, t_D})", "({}, {t_C, t_D})", "({}, {t_B, t_F, t_E})", "({}, {t_C, t_F, t_E})"})
    CHECK(high.count(s));
  CHECK(ihda.hda().dimension() == 3);
}

TEST_CASE("0-cell labels") {
  const Ihda ihda = build_ihda(load_model("transfer_buggy.ipn"));
  for (CellIndex c = 0; c < ihda.size(); ++c) {
    const Cell& cell = ihda.hda().cell(c);
    if (cell.dim() != 0) continue;
    CHECK(ihda.label(c).input.is_top());
    CHECK(ihda.label(c).output == marked_output(ihda.net(), cell.marking));
  }
}

TEST_CASE("1-cell outputs are the source-marking outputs") {
  for (const char* m : {"transfer_buggy.ipn", "transfer_fixed.ipn"}) {
    const Ihda ihda = build_ihda(load_model(m));
    const Ipn& net = ihda.net();
    for (CellIndex c = 0; c < ihda.size(); ++c) {
      const Cell& cell = ihda.hda().cell(c);
      if (cell.dim() != 1) continue;
      std::size_t t = 0;
      while (!cell.concset[t]) ++t;
      CHECK(ihda.label(c).output ==
            conj(marked_output(net, cell.marking + net.transition(t).pre), net.transition(t).output));
      CHECK_FALSE(ihda.label(c).input.is_false());
    }
  }
}

TEST_CASE("input-incompatible steps are pruned") {
  const auto net = std::make_shared<const Ipn>(parse_ipn(
      "inputs: a\noutputs: X\nplaces:\n p tokens 1\n q tokens 1\n p2\n q2\ntransitions:\n"
      " t in \"a\" pre p post p2\n u in \"!a\" pre q post q2\n"));
  const Hda raw = pn_to_hda(*net);
  CHECK(raw.count_by_dim().size() == 3);
  const Ihda ihda = build_ihda(net);
  CHECK(ihda.hda().count_by_dim() == std::vector<std::size_t>{4, 4});
  CHECK(lemma1_holds(*net, ihda.hda()));
  CHECK(verify_precubical(ihda.hda()).empty());
}

TEST_CASE("1-truncation of the IHDA is the reachability graph") {
  for (const char* m : {"transfer_buggy.ipn", "transfer_fixed.ipn"}) {
    const auto net = load_model(m);
    CHECK(lemma1_holds(*net, build_ihda(net).hda()));
  }
  Rng rng(41);
  for (int k = 0; k < 50; ++k) {
    const auto net = std::make_shared<const Ipn>(random_safe_net(rng));
    const Ihda ihda = build_ihda(net);
    CHECK(lemma1_holds(*net, ihda.hda()));
    for (CellIndex c = 0; c < ihda.size(); ++c) CHECK_FALSE(ihda.label(c).input.is_false());
  }
}

TEST_CASE("find_inconsistent") {
  const auto buggy = load_model("transfer_buggy.ipn");
  CHECK(find_inconsistent(build_ihda(buggy)).empty());
  CHECK(find_inconsistent(build_ihda(relabeled(*load_model("transfer_fixed.ipn")))).empty());

  for (bool paper : {false, true}) {
    const Ihda ihda = build_ihda(relabeled(*buggy, paper));
    const auto [x, y, w, z] = fig4(ihda);
    const AnalysisReport r = find_inconsistent(ihda);
    CHECK(r.maximal_cells() == std::vector<CellIndex>{std::min(w, z), std::max(w, z)});
    const auto flagged = cells_of(r.inconsistent);
    CHECK_FALSE(flagged.count(x));
    CHECK_FALSE(flagged.count(y));
    for (const Finding& f : r.inconsistent) {
      CHECK(ihda.label(f.cell).output.is_false());
      CHECK(f.literal_conflict.size() == 2);
      CHECK(f.literal_conflict[1] == "!" + f.literal_conflict[0]);
      // every flagged sub-cell involves the pusher
      const Cell& c = ihda.hda().cell(f.cell);
      const Marking lower = c.marking + preset_step(ihda.net(), c.concset);
      CHECK(lower[ihda.net().place_index("p_push")] == 1);
    }
    // maximal findings come first
    CHECK(r.inconsistent[0].maximal);
    CHECK(r.inconsistent[1].maximal);
    CHECK_FALSE(r.inconsistent.back().maximal);
  }
}

TEST_CASE("check_invariants") {
  const auto buggy = load_model("transfer_buggy.ipn");
  const Ihda ihda = build_ihda(buggy);
  const auto [x, y, w, z] = fig4(ihda);
  const auto clauses = exclusivity_clauses(*buggy);
  const AnalysisReport r = check_invariants(ihda, clauses);
  CHECK(r.inconsistent.empty());
  CHECK(r.maximal_cells() == std::vector<CellIndex>{std::min(w, z), std::max(w, z)});
  for (const Finding& f : r.violations) {
    REQUIRE(f.clause);
    CHECK(to_string(*f.clause) == "!Pusher | !R2");
    CHECK(f.literal_conflict == std::vector<std::string>{"Pusher", "R2"});
  }
  const auto flagged = cells_of(r.violations);
  CHECK_FALSE(flagged.count(x));
  CHECK_FALSE(flagged.count(y));

  CHECK(check_invariants(ihda, {}).empty());
  const auto fixed = load_model("transfer_fixed.ipn");
  CHECK(check_invariants(build_ihda(fixed), exclusivity_clauses(*fixed)).empty());
  CHECK_THROWS_AS(check_invariants(ihda, {parse_clause("r1", buggy->inputs())}), ModelError);
}

TEST_CASE("analyses are pure") {
  const Ihda ihda = build_ihda(load_model("transfer_buggy.ipn"));
  const auto clauses = exclusivity_clauses(ihda.net());
  CHECK(report_to_json(ihda, analyse(ihda, clauses)) == report_to_json(ihda, analyse(ihda, clauses)));
}

TEST_CASE("witness") {
  const auto buggy = load_model("transfer_buggy.ipn");
  const Ihda ihda = build_ihda(buggy);
  const auto [x, y, w, z] = fig4(ihda);
  (void)x, (void)y;

  const Witness ww = witness(ihda, w);
  REQUIRE(ww.computation.length() >= 3);
  CHECK(to_string(*buggy, ihda.hda().cell(ww.computation.steps[0]).concset) == "{t_A}");
  CHECK(to_string(*buggy, ihda.hda().cell(ww.computation.steps[1]).concset) == "{t_G}");
  CHECK(ww.computation.steps.back() == w);
  CHECK_FALSE(ww.conflict);
  CHECK(check_word_prefix(*buggy, ww.word));

  Marking m = buggy->initial();
  for (CellIndex s : ww.computation.steps) m = fire_step(*buggy, m, ihda.hda().cell(s).concset);
  CHECK(m == upper_zero_face(ihda.hda().net(), ihda.hda().cell(w)).marking);

  const Witness w0 = witness(ihda, ihda.hda().initial());
  CHECK(w0.computation.length() == 0);
  CHECK(w0.word.empty());

  for (CellIndex c = 0; c < ihda.size(); ++c) CHECK(check_word_prefix(*buggy, witness(ihda, c).word));
}

TEST_CASE("witness for a FALSE cell stops before it") {
  const Ihda ihda = build_ihda(relabeled(*load_model("transfer_buggy.ipn")));
  const auto [x, y, w, z] = fig4(ihda);
  (void)x, (void)y, (void)z;
  const Witness ww = witness(ihda, w);
  REQUIRE(ww.conflict);
  CHECK(ww.conflict->find("demands both") != std::string::npos);
  CHECK(ww.word.size() == 3);  // t_A, t_G, t_D; w starts from the three-way marking
  CHECK(check_word_prefix(ihda.net(), ww.word));
}

TEST_CASE("JSON report shape") {
  const Ihda ihda = build_ihda(load_model("transfer_buggy.ipn"));
  const auto j = nlohmann::json::parse(report_to_json(ihda, check_invariants(ihda, exclusivity_clauses(ihda.net()))));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 20);
  const auto& first = j[0];
  CHECK(first["kind"] == "invariant");
  CHECK(first["clause"] == "!Pusher | !R2");
  CHECK(first["maximal"] == true);
  CHECK(first["cell"].contains("marking"));
  CHECK(first["cell"]["concset"].size() == 3);
  CHECK(first["witness"].size() >= 3);
  CHECK(first["literal_conflict"] == nlohmann::json({"Pusher", "R2"}));
}

TEST_CASE("exports") {
  const Ihda ihda = build_ihda(load_model("transfer_fixed.ipn"));
  const auto counts = ihda.hda().count_by_dim();
  auto count = [](const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
  };
  const std::string k0 = to_dot(ihda, 0), k1 = to_dot(ihda, 1), k2 = to_dot(ihda, 2);
  CHECK(count(k0, "tooltip=") == counts[0]);
  CHECK(count(k0, " -> ") == 0);
  CHECK(count(k1, "tooltip=") == counts[0]);
  CHECK(count(k1, " -> ") == counts[1]);
  CHECK(count(k2, "shape=box") == counts[2]);
  CHECK(count(k2, "style=dotted") == 4 * counts[2]);
  CHECK_THROWS_AS(to_dot(ihda, -1), ModelError);
  CHECK_THROWS_AS(to_dot(ihda, 3), ModelError);

  const auto cells = nlohmann::json::parse(cells_to_json(ihda));
  CHECK(cells.size() == ihda.size());
  CHECK(cells[0].contains("dim"));
  CHECK(cells[0].contains("output"));
}

}  // TEST_SUITE
