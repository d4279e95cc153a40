// ihda: build, check, export and run interpreted Petri net controllers.
//
// Exit codes: 0 ok, 1 findings or nonconformance, 2 usage or parse error,
// 3 runtime or protocol error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ihda/controller.hpp"
#include "ihda/error.hpp"
#include "ihda/export.hpp"
#include "ihda/runner.hpp"

using namespace ihda;

namespace {

constexpr int kOk = 0, kFindings = 1, kUsage = 2, kRuntime = 3;

struct ModelArgs {
  std::string path;
  std::size_t max_markings = Budget{}.max_markings;
  std::uint32_t max_tokens = Budget{}.max_tokens_per_place;
  std::vector<std::string> invariants;
  std::vector<std::string> restrictions;

  Budget budget() const { return {max_tokens, max_markings}; }
};

void add_model_args(CLI::App* cmd, ModelArgs& a, bool constraints) {
  cmd->add_option("model", a.path, "IPN model file")->required();
  cmd->add_option("--budget", a.max_markings, "maximum number of distinct markings");
  cmd->add_option("--max-tokens", a.max_tokens, "maximum tokens per place");
  if (constraints) {
    cmd->add_option("--invariant", a.invariants, "output clause, e.g. \"!L2 | !Pusher\"");
    cmd->add_option("--restrict", a.restrictions, "conjoin a cube to a place label: place=cube");
  }
}

struct Loaded {
  std::shared_ptr<const Ipn> net;
  std::vector<Clause> invariants;
};

Loaded load(const ModelArgs& a) {
  Ipn net = load_ipn(a.path);
  for (const std::string& r : a.restrictions) {
    const auto eq = r.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError("restriction '" + r + "' is not of the form place=cube", 0);
    const std::string place = r.substr(0, eq);
    if (!net.find_place(place)) throw ParseError("restriction names unknown place '" + place + "'", 0);
    net = net.restrict_place(place, parse_cube(r.substr(eq + 1), net.outputs()));
  }
  Loaded l{std::make_shared<const Ipn>(std::move(net)), {}};
  for (const std::string& c : a.invariants) l.invariants.push_back(parse_clause(c, l.net->outputs()));
  return l;
}

std::string dim_counts(const Hda& h) {
  std::ostringstream out;
  const auto counts = h.count_by_dim();
  for (std::size_t d = 0; d < counts.size(); ++d) out << (d ? ", " : "") << d << "-cells: " << counts[d];
  return out.str();
}

std::string true_props(const Valuation& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.over()->size(); ++i) {
    if (!v[i]) continue;
    if (out.size() > 1) out += ", ";
    out += v.over()->name(i);
  }
  return out + "}";
}

void print_finding(const Ihda& ihda, const Finding& f, std::ostream& out) {
  const Ipn& net = ihda.net();
  const Hda& h = ihda.hda();
  const CellLabel& l = ihda.label(f.cell);
  out << (f.kind == FindingKind::kBotOutput ? "FALSE output" : "invariant violated");
  if (f.clause) out << " [" << to_string(*f.clause) << "]";
  out << " at " << describe_cell(ihda, f.cell) << (f.maximal ? "" : " (sub-cell)") << "\n";
  out << "  label: in " << to_string(l.input) << " / out " << to_string(l.output) << "\n";
  if (!f.literal_conflict.empty()) {
    out << "  conflict:";
    for (const auto& s : f.literal_conflict) out << ' ' << s;
    out << "\n";
  }
  out << "  witness:";
  if (f.witness.steps.empty()) out << " (initial cell)";
  for (CellIndex s : f.witness.steps) out << ' ' << to_string(net, h.cell(s).concset);
  out << "\n";
  const Witness w = witness(ihda, f.cell);
  for (std::size_t k = 0; k < w.word.size(); ++k)
    out << "    " << k << ": i=" << true_props(w.word[k].inputs) << " o=" << true_props(w.word[k].outputs)
        << "\n";
  if (w.conflict) out << "    then: " << *w.conflict << "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << content;
}

std::pair<std::string, std::uint16_t> split_endpoint(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos) throw ParseError("expected host:port, got '" + s + "'", 0);
  try {
    const unsigned long port = std::stoul(s.substr(colon + 1));
    if (port == 0 || port > 65535) throw std::out_of_range("");
    return {colon == 0 ? "127.0.0.1" : s.substr(0, colon), static_cast<std::uint16_t>(port)};
  } catch (const std::exception&) {
    throw ParseError("invalid port in '" + s + "'", colon + 1);
  }
}

int cmd_build(const ModelArgs& a, const std::string& out_path) {
  const Loaded l = load(a);
  const Ihda ihda = build_ihda(l.net, a.budget());
  std::cout << dim_counts(ihda.hda()) << "\n";
  std::cout << "dimension: " << ihda.hda().dimension() << "\n";
  if (!out_path.empty()) write_file(out_path, cells_to_json(ihda) + "\n");
  return kOk;
}

int cmd_check(const ModelArgs& a, const std::string& json_path, bool all) {
  const Loaded l = load(a);
  const Ihda ihda = build_ihda(l.net, a.budget());
  const AnalysisReport report = analyse(ihda, l.invariants);
  std::cout << dim_counts(ihda.hda()) << "\n";
  std::size_t hidden = 0;
  for (const auto* list : {&report.inconsistent, &report.violations}) {
    for (const Finding& f : *list) {
      if (!f.maximal && !all) {
        ++hidden;
        continue;
      }
      print_finding(ihda, f, std::cout);
    }
  }
  const auto maximal = report.maximal_cells();
  if (report.empty()) {
    std::cout << "no findings\n";
  } else {
    std::cout << maximal.size() << " maximal flagged cell(s)";
    if (hidden) std::cout << ", " << hidden << " sub-cell finding(s) not shown (--all)";
    std::cout << "\n";
  }
  if (!json_path.empty()) write_file(json_path, report_to_json(ihda, report) + "\n");
  return report.empty() ? kOk : kFindings;
}

int cmd_export(const ModelArgs& a, const std::string& dot_path, int k, const std::string& json_path) {
  if (k < 0 || k > 2) throw ParseError("--k must be 0, 1 or 2", 0);
  const Loaded l = load(a);
  const Ihda ihda = build_ihda(l.net, a.budget());
  if (!json_path.empty()) write_file(json_path, cells_to_json(ihda) + "\n");
  if (!dot_path.empty()) write_file(dot_path, to_dot(ihda, k));
  else if (json_path.empty()) std::cout << to_dot(ihda, k);
  return kOk;
}

struct RunArgs {
  std::string connect;
  bool force = false;
  bool keep_going = false;
  std::string trace;
};

int cmd_run(const ModelArgs& a, const RunArgs& r) {
  const Loaded l = load(a);
  const auto [host, port] = split_endpoint(r.connect);
  const Ihda ihda = build_ihda(l.net, a.budget());
  const Preflight pf = preflight(ihda, l.invariants, r.force);
  if (!pf.report.empty()) {
    std::cerr << (pf.ok ? "warning: " : "refusing to run: ") << pf.report.maximal_cells().size()
              << " maximal flagged cell(s):\n";
    for (CellIndex x : pf.report.maximal_cells()) std::cerr << "  " << describe_cell(ihda, x) << "\n";
    if (!pf.ok) {
      std::cerr << "run `ihda check` for witnesses, or pass --force\n";
      return kFindings;
    }
  }

  std::ofstream trace;
  if (!r.trace.empty()) {
    trace.open(r.trace);
    if (!trace) throw Error("cannot write '" + r.trace + "'");
  }
  const StepController controller(ihda, l.invariants);
  ClientOptions opts;
  opts.host = host;
  opts.port = port;
  opts.stop_on_home = !r.keep_going;
  opts.on_record = [&](const TraceRecord& rec) {
    if (trace) trace << trace_line(ihda.net(), rec) << std::endl;
  };
  const RunResult res = run_controller(controller, opts);
  std::cout << "session ended: " << to_string(res.outcome) << " (" << res.detail << ") after "
            << res.trace.size() << " cycle(s); marking " << to_string(ihda.net(), res.state.marking) << "\n";
  switch (res.outcome) {
    case RunOutcome::kHome:
    case RunOutcome::kServerBye: return kOk;
    default: return kRuntime;
  }
}

struct SimArgs {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7878;
  int period_ms = 1000;
  int accept_timeout_ms = 60000;
  std::uint64_t max_cycles = 200;
  std::vector<std::string> press;
  std::string scenario;
  plant::PlantConfig geometry;
};

int cmd_simulate(const SimArgs& s) {
  plant::Scenario scenario;
  if (!s.scenario.empty()) {
    std::ifstream in(s.scenario);
    if (!in) throw ParseError("cannot open scenario '" + s.scenario + "'", 0);
    std::ostringstream text;
    text << in.rdbuf();
    scenario = plant::Scenario::from_json(text.str());
  }
  for (const auto& p : s.press) scenario.add_press(p);
  if (s.scenario.empty() && s.press.empty()) scenario = plant::Scenario::press_start(3);

  plant::ServeOptions opts;
  opts.host = s.host;
  opts.port = s.port;
  opts.period_ms = s.period_ms;
  opts.accept_timeout_ms = s.accept_timeout_ms;
  opts.reply_timeout_ms = std::max(10000, 10 * s.period_ms);
  opts.max_cycles = s.max_cycles;
  plant::PlantServer server(s.geometry, scenario, opts);
  std::cout << "plant listening on " << s.host << ":" << server.port() << std::endl;
  const auto res = server.run();
  const bool home = res.final_state == plant::initial_state(s.geometry);
  std::cout << "session ended: " << plant::to_string(res.outcome) << " (" << res.detail << ") after "
            << res.cycles << " tick(s)\nfinal state: " << plant::describe(res.final_state)
            << (home ? " [initial configuration]" : "") << "\n";
  switch (res.outcome) {
    case plant::ServeOutcome::kNoController:
    case plant::ServeOutcome::kProtocolError:
    case plant::ServeOutcome::kDisconnected: return kRuntime;
    default: return kOk;
  }
}

int cmd_conform(const ModelArgs& a, const std::string& trace_path, bool strict) {
  const Loaded l = load(a);
  const Ihda ihda = build_ihda(l.net, a.budget());
  std::ifstream in(trace_path);
  if (!in) throw ParseError("cannot open trace '" + trace_path + "'", 0);
  const auto trace = parse_trace(ihda.net(), in);
  const bool ok = conforms(ihda, trace_word(trace), strict ? CounterReading::kLiteral : CounterReading::kInterpreted);
  std::cout << (ok ? "accepted" : "rejected") << ": " << trace.size() << " letter(s)"
            << (strict ? " (literal counter rules)" : "") << "\n";
  return ok ? kOk : kFindings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpreted Petri net to interpreted HDA toolkit"};
  app.require_subcommand(1);

  ModelArgs build_a, check_a, export_a, run_a, conform_a;
  std::string build_out, check_json, dot_path, export_json, trace_path;
  bool check_all = false, strict = false;
  int k = 2;
  RunArgs run_r;
  SimArgs sim;

  auto* build = app.add_subcommand("build", "build the IHDA and print cell counts by dimension");
  add_model_args(build, build_a, true);
  build->add_option("--out", build_out, "write the labelled cell store as JSON");

  auto* check = app.add_subcommand("check", "report FALSE outputs and invariant violations");
  add_model_args(check, check_a, true);
  check->add_option("--json", check_json, "write findings as JSON");
  check->add_flag("--all", check_all, "also print non-maximal findings");

  auto* exp = app.add_subcommand("export", "DOT rendering of the k-truncation and/or JSON cell store");
  add_model_args(exp, export_a, true);
  exp->add_option("--dot", dot_path, "DOT output file (stdout when neither --dot nor --json)");
  exp->add_option("--k", k, "truncation level, 0..2");
  exp->add_option("--json", export_json, "JSON cell store output file");

  auto* run = app.add_subcommand("run", "run the step controller against a plant");
  add_model_args(run, run_a, true);
  run->add_option("--connect", run_r.connect, "plant endpoint host:port")->required();
  run->add_flag("--force", run_r.force, "start even if the pre-flight check finds faults");
  run->add_option("--trace", run_r.trace, "newline-delimited JSON trace log");
  run->add_flag("--keep-going", run_r.keep_going, "do not stop when the initial marking is reached again");

  auto* simulate = app.add_subcommand("simulate", "serve the simulated transfer plant");
  simulate->add_option("--host", sim.host, "listen address");
  simulate->add_option("--port", sim.port, "listen port (0 picks a free one)");
  simulate->add_option("--period-ms", sim.period_ms, "sampling period; 0 is lock-step as fast as possible");
  simulate->add_option("--accept-timeout-ms", sim.accept_timeout_ms, "give up when no controller connects");
  simulate->add_option("--max-cycles", sim.max_cycles, "end the session after this many cycles");
  simulate->add_option("--press", sim.press, "scenario entry name[=bool]@cycle (default start@3)");
  simulate->add_option("--scenario", sim.scenario, "scenario JSON file");
  simulate->add_option("--upper-travel", sim.geometry.upper_travel);
  simulate->add_option("--lower-travel", sim.geometry.lower_travel);
  simulate->add_option("--pusher-stroke", sim.geometry.pusher_stroke);
  simulate->add_option("--load-dwell", sim.geometry.load_dwell);
  simulate->add_option("--transfer-dwell", sim.geometry.transfer_dwell);

  auto* conform = app.add_subcommand("conform", "check a recorded trace against the IHDA");
  add_model_args(conform, conform_a, true);
  conform->add_option("trace", trace_path, "trace log")->required();
  conform->add_flag("--strict-iv-a", strict, "use the counter rules exactly as printed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*build) return cmd_build(build_a, build_out);
    if (*check) return cmd_check(check_a, check_json, check_all);
    if (*exp) return cmd_export(export_a, dot_path, k, export_json);
    if (*run) return cmd_run(run_a, run_r);
    if (*simulate) return cmd_simulate(sim);
    if (*conform) return cmd_conform(conform_a, trace_path, strict);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
