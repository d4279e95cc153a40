#pragma once

// Boolean cubes (conjunctions of literals) over a fixed, ordered set of
// atomic propositions, plus total valuations and single clauses.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ihda {

/// Ordered set of distinct proposition names. The order is the canonical
/// literal order of every cube built over it.
class PropSet {
 public:
  explicit PropSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws ModelError on unknown names.
  std::size_t index(std::string_view name) const;

  friend bool operator==(const PropSet& a, const PropSet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

using PropSetRef = std::shared_ptr<const PropSet>;

PropSetRef make_propset(std::vector<std::string> names);

/// True iff both refer to structurally equal proposition sets.
bool same_props(const PropSetRef& a, const PropSetRef& b);

enum class Polarity : std::int8_t { kNone = 0, kPos = 1, kNeg = -1 };

/// Conjunction of literals. The false cube is a regular value; all false
/// cubes over the same PropSet compare equal.
class Cube {
 public:
  static Cube top(PropSetRef over);
  static Cube bottom(PropSetRef over);
  static Cube literal(PropSetRef over, std::string_view name, bool positive);

  const PropSetRef& over() const { return over_; }
  bool is_false() const { return false_; }
  bool is_top() const;
  Polarity polarity(std::size_t prop) const { return lits_[prop]; }
  /// Number of literals (0 for ⊥ and ⊤).
  std::size_t literal_count() const;

  /// Adds a literal in place; becomes ⊥ on a contradiction.
  void add(std::size_t prop, bool positive);

  friend bool operator==(const Cube& a, const Cube& b);
  friend bool operator<(const Cube& a, const Cube& b);

 private:
  Cube(PropSetRef over, bool is_false);

  PropSetRef over_;
  std::vector<Polarity> lits_;
  bool false_ = false;
};

/// Total assignment over a PropSet.
class Valuation {
 public:
  explicit Valuation(PropSetRef over);  // all false
  Valuation(PropSetRef over, std::vector<bool> bits);

  const PropSetRef& over() const { return over_; }
  bool operator[](std::size_t i) const { return bits_[i]; }
  bool get(std::string_view name) const { return bits_[over_->index(name)]; }
  void set(std::size_t i, bool v) { bits_[i] = v; }
  void set(std::string_view name, bool v) { bits_[over_->index(name)] = v; }
  const std::vector<bool>& bits() const { return bits_; }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return same_props(a.over_, b.over_) && a.bits_ == b.bits_;
  }

 private:
  PropSetRef over_;
  std::vector<bool> bits_;
};

/// Disjunction of literals. Never tautological and never empty.
class Clause {
 public:
  Clause(PropSetRef over, std::vector<std::pair<std::size_t, bool>> literals);

  const PropSetRef& over() const { return over_; }
  const std::vector<std::pair<std::size_t, bool>>& literals() const { return lits_; }

 private:
  PropSetRef over_;
  std::vector<std::pair<std::size_t, bool>> lits_;
};

/// Parses `lit (& lit)*` with `lit := name | !name`, or `TRUE` / `FALSE`.
Cube parse_cube(std::string_view text, const PropSetRef& over);
/// Parses `lit (| lit)*`.
Clause parse_clause(std::string_view text, const PropSetRef& over);

Cube conj(const Cube& a, const Cube& b);
inline Cube operator&(const Cube& a, const Cube& b) { return conj(a, b); }

/// Index of the first proposition on which a and b carry opposite
/// literals; nullopt if there is none (⊥ operands are not inspected).
std::optional<std::size_t> first_conflict(const Cube& a, const Cube& b);

inline bool is_false(const Cube& c) { return c.is_false(); }
bool satisfies(const Valuation& v, const Cube& c);
bool satisfies(const Valuation& v, const Clause& cl);
/// True iff c ∧ cl is unsatisfiable. c must not be ⊥.
bool violates_clause(const Cube& c, const Clause& cl);
/// Valuation agreeing with c, `fill` elsewhere. Throws on ⊥.
Valuation complete_valuation(const Cube& c, bool fill);

/// Canonical text: literals in PropSet order joined by " & ", "TRUE", "FALSE".
std::string to_string(const Cube& c);
std::string to_string(const Clause& c);

}  // namespace ihda
