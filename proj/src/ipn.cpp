#include "ihda/ipn.hpp"

#include <deque>
#include <set>

#include "ihda/error.hpp"

namespace ihda {

Ipn::Ipn(PropSetRef inputs, PropSetRef outputs, std::vector<Place> places,
         std::vector<Transition> transitions, Marking initial)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      places_(std::move(places)),
      transitions_(std::move(transitions)),
      initial_(std::move(initial)) {
  for (std::size_t p = 0; p < places_.size(); ++p) {
    const Place& pl = places_[p];
    if (!place_index_.emplace(pl.id, p).second) throw ModelError("duplicate place '" + pl.id + "'");
    if (!same_props(pl.output.over(), outputs_))
      throw ModelError("place '" + pl.id + "' label is not over the outputs");
    if (pl.output.is_false()) throw ModelError("place '" + pl.id + "' has a FALSE output label");
  }
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    const Transition& tr = transitions_[t];
    if (place_index_.count(tr.id))
      throw ModelError("id '" + tr.id + "' is used for a place and a transition");
    if (!transition_index_.emplace(tr.id, t).second)
      throw ModelError("duplicate transition '" + tr.id + "'");
    if (!same_props(tr.input.over(), inputs_) || !same_props(tr.output.over(), outputs_))
      throw ModelError("transition '" + tr.id + "' labels use the wrong proposition sets");
    if (tr.input.is_false() || tr.output.is_false())
      throw ModelError("transition '" + tr.id + "' has a FALSE label");
    if (tr.pre.size() != places_.size() || tr.post.size() != places_.size())
      throw ModelError("transition '" + tr.id + "' arcs do not match the place count");
    if (tr.pre.max_count() > 1 || tr.post.max_count() > 1)
      throw ModelError("transition '" + tr.id + "' has a weighted arc");
  }
  if (initial_.size() != places_.size()) throw ModelError("initial marking size mismatch");
}

std::optional<std::size_t> Ipn::find_place(std::string_view id) const {
  auto it = place_index_.find(std::string(id));
  if (it == place_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Ipn::find_transition(std::string_view id) const {
  auto it = transition_index_.find(std::string(id));
  if (it == transition_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Ipn::place_index(std::string_view id) const {
  if (auto p = find_place(id)) return *p;
  throw ModelError("unknown place '" + std::string(id) + "'");
}

std::size_t Ipn::transition_index(std::string_view id) const {
  if (auto t = find_transition(id)) return *t;
  throw ModelError("unknown transition '" + std::string(id) + "'");
}

Ipn Ipn::restrict_place(std::string_view place, const Cube& extra) const {
  const std::size_t p = place_index(place);
  std::vector<Place> places = places_;
  places[p].output = conj(places[p].output, extra);
  if (places[p].output.is_false())
    throw ModelError("restricting place '" + std::string(place) + "' yields FALSE");
  return Ipn(inputs_, outputs_, std::move(places), transitions_, initial_);
}

bool operator==(const Ipn& a, const Ipn& b) {
  if (!same_props(a.inputs_, b.inputs_) || !same_props(a.outputs_, b.outputs_)) return false;
  if (a.places_.size() != b.places_.size() || a.transitions_.size() != b.transitions_.size())
    return false;
  for (std::size_t p = 0; p < a.places_.size(); ++p)
    if (a.places_[p].id != b.places_[p].id || !(a.places_[p].output == b.places_[p].output))
      return false;
  for (std::size_t t = 0; t < a.transitions_.size(); ++t) {
    const auto &x = a.transitions_[t], &y = b.transitions_[t];
    if (x.id != y.id || !(x.input == y.input) || !(x.output == y.output) || x.pre != y.pre ||
        x.post != y.post)
      return false;
  }
  return a.initial_ == b.initial_;
}

Concset make_concset(const Ipn& net, const std::vector<std::string>& ids) {
  Concset c = net.empty_concset();
  for (const auto& id : ids) c[net.transition_index(id)] += 1;
  return c;
}

Marking make_marking(const Ipn& net, const std::vector<std::string>& ids) {
  Marking m = net.empty_marking();
  for (const auto& id : ids) m[net.place_index(id)] += 1;
  return m;
}

std::vector<std::string> concset_ids(const Ipn& net, const Concset& c) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < c.size(); ++t)
    for (std::uint32_t k = 0; k < c[t]; ++k) out.push_back(net.transition(t).id);
  return out;
}

std::string to_string(const Ipn& net, const Concset& c) {
  std::string out = "{";
  for (const auto& id : concset_ids(net, c)) {
    if (out.size() > 1) out += ", ";
    out += id;
  }
  return out + "}";
}

std::string to_string(const Ipn& net, const Marking& m) {
  std::string out = "{";
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p] == 0) continue;
    if (out.size() > 1) out += ", ";
    out += net.place(p).id;
    if (m[p] > 1) out += "*" + std::to_string(m[p]);
  }
  return out + "}";
}

Marking preset_step(const Ipn& net, const Concset& c) {
  if (c.size() != net.num_transitions()) throw ModelError("concset size mismatch");
  Marking m = net.empty_marking();
  for (std::size_t t = 0; t < c.size(); ++t)
    if (c[t]) m.add_scaled(net.transition(t).pre, c[t]);
  return m;
}

Marking postset_step(const Ipn& net, const Concset& c) {
  if (c.size() != net.num_transitions()) throw ModelError("concset size mismatch");
  Marking m = net.empty_marking();
  for (std::size_t t = 0; t < c.size(); ++t)
    if (c[t]) m.add_scaled(net.transition(t).post, c[t]);
  return m;
}

std::vector<std::size_t> marking_enabled(const Ipn& net, const Marking& m) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < net.num_transitions(); ++t)
    if (net.transition(t).pre.contained_in(m)) out.push_back(t);
  return out;
}

std::vector<std::size_t> enabled(const Ipn& net, const Marking& m, const Valuation& i) {
  std::vector<std::size_t> out;
  for (std::size_t t : marking_enabled(net, m))
    if (satisfies(i, net.transition(t).input)) out.push_back(t);
  return out;
}

Cube step_input(const Ipn& net, const Concset& c) {
  Cube cube = Cube::top(net.inputs());
  for (std::size_t t = 0; t < c.size(); ++t)
    if (c[t]) cube = conj(cube, net.transition(t).input);
  return cube;
}

Cube step_output(const Ipn& net, const Concset& c) {
  Cube cube = Cube::top(net.outputs());
  for (std::size_t t = 0; t < c.size(); ++t)
    if (c[t]) cube = conj(cube, net.transition(t).output);
  return cube;
}

bool step_enabled(const Ipn& net, const Marking& m, const Concset& c, const Valuation& i) {
  if (c.size() != net.num_transitions()) return false;
  return preset_step(net, c).contained_in(m) && satisfies(i, step_input(net, c));
}

Marking fire_step(const Ipn& net, const Marking& m, const Concset& c) {
  const Marking pre = preset_step(net, c);
  if (!pre.contained_in(m))
    throw ModelError("insufficient tokens to fire " + to_string(net, c) + " from " +
                     to_string(net, m));
  return m - pre + postset_step(net, c);
}

Marking fire(const Ipn& net, const Marking& m, std::size_t t) {
  const Transition& tr = net.transition(t);
  if (!tr.pre.contained_in(m))
    throw ModelError("transition '" + tr.id + "' is not enabled in " + to_string(net, m));
  return m - tr.pre + tr.post;
}

Cube marked_output(const Ipn& net, const Marking& m) {
  Cube cube = Cube::top(net.outputs());
  for (std::size_t p = 0; p < m.size(); ++p)
    if (m[p] > 0) cube = conj(cube, net.place(p).output);
  return cube;
}

std::vector<Successor> successors(const Ipn& net, const Marking& m, const Valuation& i) {
  const Cube here = marked_output(net, m);
  const auto en = enabled(net, m, i);
  std::vector<Successor> out;
  if (en.empty()) {
    out.push_back({StepKind::kWait, std::nullopt, m, here});
    return out;
  }
  for (std::size_t t : en)
    out.push_back({StepKind::kTransition, t, fire(net, m, t), conj(here, net.transition(t).output)});
  return out;
}

bool check_word_prefix(const Ipn& net, const IOWord& word) {
  std::set<Marking> frontier{net.initial()};
  for (const IOLetter& letter : word) {
    if (!same_props(letter.inputs.over(), net.inputs()) ||
        !same_props(letter.outputs.over(), net.outputs()))
      return false;
    std::set<Marking> next;
    for (const Marking& m : frontier)
      for (const Successor& s : successors(net, m, letter.inputs))
        if (satisfies(letter.outputs, s.output)) next.insert(s.marking);
    if (next.empty()) return false;
    frontier = std::move(next);
  }
  return true;
}

}  // namespace ihda
