#pragma once

// Interpreted Petri nets: marked place/transition nets whose places carry
// output cubes and whose transitions carry (input cube, output cube) pairs.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ihda/cube.hpp"
#include "ihda/multiset.hpp"

namespace ihda {

struct Place {
  std::string id;
  Cube output;
};

struct Transition {
  std::string id;
  Cube input;
  Cube output;
  Marking pre;   // •t, 0/1 per place
  Marking post;  // t•
};

/// Limits guarding state-space construction; the tools only handle
/// bounded nets.
struct Budget {
  std::uint32_t max_tokens_per_place = 1;
  std::size_t max_markings = 100000;
};

class Ipn {
 public:
  Ipn(PropSetRef inputs, PropSetRef outputs, std::vector<Place> places,
      std::vector<Transition> transitions, Marking initial);

  const PropSetRef& inputs() const { return inputs_; }
  const PropSetRef& outputs() const { return outputs_; }
  const std::vector<Place>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const Place& place(std::size_t p) const { return places_[p]; }
  const Transition& transition(std::size_t t) const { return transitions_[t]; }
  const Marking& initial() const { return initial_; }

  std::size_t num_places() const { return places_.size(); }
  std::size_t num_transitions() const { return transitions_.size(); }
  std::optional<std::size_t> find_place(std::string_view id) const;
  std::optional<std::size_t> find_transition(std::string_view id) const;
  std::size_t place_index(std::string_view id) const;
  std::size_t transition_index(std::string_view id) const;

  Marking empty_marking() const { return Marking(places_.size()); }
  Concset empty_concset() const { return Concset(transitions_.size()); }

  /// Copy with place `p`'s output label conjoined with `extra`. Throws if the
  /// result is ⊥.
  Ipn restrict_place(std::string_view place, const Cube& extra) const;

  friend bool operator==(const Ipn& a, const Ipn& b);

 private:
  PropSetRef inputs_;
  PropSetRef outputs_;
  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  Marking initial_;
  std::unordered_map<std::string, std::size_t> place_index_;
  std::unordered_map<std::string, std::size_t> transition_index_;
};

/// Parses the line-oriented model format (see README).
Ipn parse_ipn(std::string_view text);
Ipn load_ipn(const std::string& path);
std::string serialize_ipn(const Ipn& net);

/// Builds a concset from transition ids; repeated ids add multiplicity.
Concset make_concset(const Ipn& net, const std::vector<std::string>& ids);
/// Builds a marking from place ids (one token per occurrence).
Marking make_marking(const Ipn& net, const std::vector<std::string>& ids);
/// Transition ids, each repeated by its multiplicity, in declared order.
std::vector<std::string> concset_ids(const Ipn& net, const Concset& c);
std::string to_string(const Ipn& net, const Concset& c);
std::string to_string(const Ipn& net, const Marking& m);

/// •c = Σ c(t)·•t
Marking preset_step(const Ipn& net, const Concset& c);
/// c• = Σ c(t)·t•
Marking postset_step(const Ipn& net, const Concset& c);

/// Transitions with m ≥ •t whose input cube holds under i, in declared order.
std::vector<std::size_t> enabled(const Ipn& net, const Marking& m, const Valuation& i);
/// Enabled by the marking alone.
std::vector<std::size_t> marking_enabled(const Ipn& net, const Marking& m);

/// Conjunction of the input cubes of the transitions in c.
Cube step_input(const Ipn& net, const Concset& c);
/// Conjunction of the output cubes of the transitions in c.
Cube step_output(const Ipn& net, const Concset& c);

bool step_enabled(const Ipn& net, const Marking& m, const Concset& c, const Valuation& i);

/// m − •c + c•. Throws ModelError if m does not cover •c.
Marking fire_step(const Ipn& net, const Marking& m, const Concset& c);
Marking fire(const Ipn& net, const Marking& m, std::size_t t);

/// Conjunction of the output labels of places holding at least one token.
Cube marked_output(const Ipn& net, const Marking& m);

enum class StepKind { kWait, kTransition };

struct Successor {
  StepKind kind;
  std::optional<std::size_t> transition;
  Marking marking;
  Cube output;
};

/// Interpreted one-step successors: the single wait step when nothing is
/// enabled, otherwise one transition step per enabled transition.
std::vector<Successor> successors(const Ipn& net, const Marking& m, const Valuation& i);

struct IOLetter {
  Valuation inputs;
  Valuation outputs;
};
using IOWord = std::vector<IOLetter>;

/// True iff some interpreted run of the net produces the finite word.
bool check_word_prefix(const Ipn& net, const IOWord& word);

}  // namespace ihda
