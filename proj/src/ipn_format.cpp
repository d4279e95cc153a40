// Text format for interpreted Petri nets.
//
//   inputs:  start r1 ...
//   outputs: R1 L1 ...
//   places:
//     <id> [output "<cube>"] [tokens <n>]
//   transitions:
//     <id> [in "<cube>"] [out "<cube>"] pre <p>... post <p>...
//
// '#' starts a comment. Omitted labels default to TRUE.

#include <fstream>
#include <sstream>

#include "ihda/error.hpp"
#include "ihda/ipn.hpp"

namespace ihda {

namespace {

struct Token {
  std::string text;
  bool quoted = false;
};

[[noreturn]] void fail_at(std::size_t line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg, line);
}

std::vector<Token> tokenize(std::string_view line, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
      ++i;
      continue;
    }
    if (c == '"') {
      const std::size_t end = line.find('"', i + 1);
      if (end == std::string_view::npos) fail_at(lineno, "unterminated string");
      out.push_back({std::string(line.substr(i + 1, end - i - 1)), true});
      i = end + 1;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' &&
           line[j] != ',' && line[j] != '"' && line[j] != '#')
      ++j;
    out.push_back({std::string(line.substr(i, j - i)), false});
    i = j;
  }
  return out;
}

struct RawPlace {
  std::size_t line = 0;
  std::string id;
  std::string output = "TRUE";
  std::uint32_t tokens = 0;
};

struct RawTransition {
  std::size_t line = 0;
  std::string id;
  std::string in = "TRUE";
  std::string out = "TRUE";
  std::vector<std::string> pre, post;
};

enum class Section { kNone, kInputs, kOutputs, kPlaces, kTransitions };

Cube label(const std::string& text, const PropSetRef& over, std::size_t line,
           const std::string& owner) {
  Cube c = Cube::top(over);
  try {
    c = parse_cube(text, over);
  } catch (const ParseError& e) {
    fail_at(line, "in label of '" + owner + "': " + e.what());
  }
  if (c.is_false()) fail_at(line, "label of '" + owner + "' is FALSE");
  return c;
}

}  // namespace

Ipn parse_ipn(std::string_view text) {
  std::vector<std::string> inputs, outputs;
  std::vector<RawPlace> places;
  std::vector<RawTransition> transitions;
  Section section = Section::kNone;

  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;

    auto toks = tokenize(line, lineno);
    if (toks.empty()) continue;

    // section header, optionally followed by entries on the same line
    if (!toks[0].quoted && toks[0].text.back() == ':') {
      const std::string head = toks[0].text.substr(0, toks[0].text.size() - 1);
      if (head == "inputs") section = Section::kInputs;
      else if (head == "outputs") section = Section::kOutputs;
      else if (head == "places") section = Section::kPlaces;
      else if (head == "transitions") section = Section::kTransitions;
      else fail_at(lineno, "unknown section '" + head + "'");
      toks.erase(toks.begin());
      if (toks.empty()) continue;
    }

    switch (section) {
      case Section::kNone:
        fail_at(lineno, "content outside of a section");
      case Section::kInputs:
      case Section::kOutputs:
        for (auto& t : toks) {
          if (t.quoted) fail_at(lineno, "unexpected string in proposition list");
          (section == Section::kInputs ? inputs : outputs).push_back(t.text);
        }
        break;
      case Section::kPlaces: {
        if (toks[0].quoted) fail_at(lineno, "expected place id");
        RawPlace p;
        p.line = lineno;
        p.id = toks[0].text;
        for (std::size_t k = 1; k < toks.size(); k += 2) {
          if (k + 1 >= toks.size()) fail_at(lineno, "missing value after '" + toks[k].text + "'");
          if (toks[k].text == "output" && toks[k + 1].quoted) {
            p.output = toks[k + 1].text;
          } else if (toks[k].text == "tokens" && !toks[k + 1].quoted) {
            try {
              std::size_t used = 0;
              const unsigned long n = std::stoul(toks[k + 1].text, &used);
              if (used != toks[k + 1].text.size()) throw std::invalid_argument("");
              p.tokens = static_cast<std::uint32_t>(n);
            } catch (const std::exception&) {
              fail_at(lineno, "invalid token count '" + toks[k + 1].text + "'");
            }
          } else {
            fail_at(lineno, "unexpected '" + toks[k].text + "' in place declaration");
          }
        }
        places.push_back(std::move(p));
        break;
      }
      case Section::kTransitions: {
        if (toks[0].quoted) fail_at(lineno, "expected transition id");
        RawTransition t;
        t.line = lineno;
        t.id = toks[0].text;
        std::vector<std::string>* arcs = nullptr;
        for (std::size_t k = 1; k < toks.size(); ++k) {
          const Token& tok = toks[k];
          if (!tok.quoted && (tok.text == "in" || tok.text == "out")) {
            if (k + 1 >= toks.size() || !toks[k + 1].quoted)
              fail_at(lineno, "expected quoted cube after '" + tok.text + "'");
            (tok.text == "in" ? t.in : t.out) = toks[++k].text;
            arcs = nullptr;
          } else if (!tok.quoted && tok.text == "pre") {
            arcs = &t.pre;
          } else if (!tok.quoted && tok.text == "post") {
            arcs = &t.post;
          } else if (arcs && !tok.quoted) {
            arcs->push_back(tok.text);
          } else {
            fail_at(lineno, "unexpected '" + tok.text + "' in transition declaration");
          }
        }
        transitions.push_back(std::move(t));
        break;
      }
    }
  }

  PropSetRef in_props, out_props;
  try {
    in_props = make_propset(inputs);
    out_props = make_propset(outputs);
  } catch (const ModelError& e) {
    throw ParseError(e.what(), 0);
  }

  std::unordered_map<std::string, std::size_t> place_ids;
  std::vector<Place> built_places;
  Marking initial(places.size());
  for (std::size_t p = 0; p < places.size(); ++p) {
    const RawPlace& rp = places[p];
    if (!place_ids.emplace(rp.id, p).second) fail_at(rp.line, "duplicate place '" + rp.id + "'");
    built_places.push_back({rp.id, label(rp.output, out_props, rp.line, rp.id)});
    initial[p] = rp.tokens;
  }

  std::vector<Transition> built;
  for (const RawTransition& rt : transitions) {
    if (place_ids.count(rt.id)) fail_at(rt.line, "duplicate id '" + rt.id + "'");
    for (const Transition& prev : built)
      if (prev.id == rt.id) fail_at(rt.line, "duplicate transition '" + rt.id + "'");
    Transition t{rt.id, label(rt.in, in_props, rt.line, rt.id),
                 label(rt.out, out_props, rt.line, rt.id), Marking(places.size()),
                 Marking(places.size())};
    auto resolve = [&](const std::vector<std::string>& ids, Marking& into) {
      for (const auto& id : ids) {
        auto it = place_ids.find(id);
        if (it == place_ids.end())
          fail_at(rt.line, "transition '" + rt.id + "' references undeclared place '" + id + "'");
        if (into[it->second]) fail_at(rt.line, "repeated arc to '" + id + "' (arcs are unweighted)");
        into[it->second] = 1;
      }
    };
    resolve(rt.pre, t.pre);
    resolve(rt.post, t.post);
    built.push_back(std::move(t));
  }

  try {
    return Ipn(in_props, out_props, std::move(built_places), std::move(built), std::move(initial));
  } catch (const ModelError& e) {
    throw ParseError(e.what(), 0);
  }
}

Ipn load_ipn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ipn(ss.str());
}

std::string serialize_ipn(const Ipn& net) {
  std::ostringstream out;
  out << "inputs:";
  for (const auto& n : net.inputs()->names()) out << ' ' << n;
  out << "\noutputs:";
  for (const auto& n : net.outputs()->names()) out << ' ' << n;
  out << "\nplaces:\n";
  for (std::size_t p = 0; p < net.num_places(); ++p) {
    out << "  " << net.place(p).id;
    if (!net.place(p).output.is_top()) out << " output \"" << to_string(net.place(p).output) << '"';
    if (net.initial()[p]) out << " tokens " << net.initial()[p];
    out << '\n';
  }
  out << "transitions:\n";
  for (const Transition& t : net.transitions()) {
    out << "  " << t.id << " in \"" << to_string(t.input) << "\" out \"" << to_string(t.output)
        << "\" pre";
    for (std::size_t p = 0; p < net.num_places(); ++p)
      if (t.pre[p]) out << ' ' << net.place(p).id;
    out << " post";
    for (std::size_t p = 0; p < net.num_places(); ++p)
      if (t.post[p]) out << ' ' << net.place(p).id;
    out << '\n';
  }
  return out.str();
}

}  // namespace ihda
