#include "ihda/cube.hpp"

#include <algorithm>
#include <cctype>

#include "ihda/error.hpp"

namespace ihda {

PropSet::PropSet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second)
      throw ModelError("duplicate proposition '" + names_[i] + "'");
  }
}

std::optional<std::size_t> PropSet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t PropSet::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw ModelError("unknown proposition '" + std::string(name) + "'");
}

PropSetRef make_propset(std::vector<std::string> names) {
  return std::make_shared<const PropSet>(std::move(names));
}

bool same_props(const PropSetRef& a, const PropSetRef& b) {
  return a == b || (a && b && *a == *b);
}

namespace {

void require_same(const PropSetRef& a, const PropSetRef& b) {
  if (!same_props(a, b)) throw ModelError("operands range over different proposition sets");
}

}  // namespace

Cube::Cube(PropSetRef over, bool is_false)
    : over_(std::move(over)), lits_(over_->size(), Polarity::kNone), false_(is_false) {}

Cube Cube::top(PropSetRef over) { return Cube(std::move(over), false); }
Cube Cube::bottom(PropSetRef over) { return Cube(std::move(over), true); }

Cube Cube::literal(PropSetRef over, std::string_view name, bool positive) {
  Cube c(over, false);
  c.add(over->index(name), positive);
  return c;
}

bool Cube::is_top() const {
  if (false_) return false;
  for (auto p : lits_)
    if (p != Polarity::kNone) return false;
  return true;
}

std::size_t Cube::literal_count() const {
  if (false_) return 0;
  std::size_t n = 0;
  for (auto p : lits_) n += p != Polarity::kNone;
  return n;
}

void Cube::add(std::size_t prop, bool positive) {
  if (false_) return;
  const Polarity want = positive ? Polarity::kPos : Polarity::kNeg;
  if (lits_[prop] == Polarity::kNone) {
    lits_[prop] = want;
  } else if (lits_[prop] != want) {
    // canonical ⊥: no literals
    false_ = true;
    std::fill(lits_.begin(), lits_.end(), Polarity::kNone);
  }
}

bool operator==(const Cube& a, const Cube& b) {
  return same_props(a.over_, b.over_) && a.false_ == b.false_ && a.lits_ == b.lits_;
}

bool operator<(const Cube& a, const Cube& b) {
  if (a.false_ != b.false_) return a.false_ < b.false_;
  return a.lits_ < b.lits_;
}

Valuation::Valuation(PropSetRef over)
    : over_(std::move(over)), bits_(over_->size(), false) {}

Valuation::Valuation(PropSetRef over, std::vector<bool> bits)
    : over_(std::move(over)), bits_(std::move(bits)) {
  if (bits_.size() != over_->size()) throw ModelError("valuation is not total");
}

Clause::Clause(PropSetRef over, std::vector<std::pair<std::size_t, bool>> literals)
    : over_(std::move(over)) {
  if (literals.empty()) throw ModelError("empty clause");
  std::vector<Polarity> seen(over_->size(), Polarity::kNone);
  for (auto [p, pos] : literals) {
    const Polarity want = pos ? Polarity::kPos : Polarity::kNeg;
    if (seen[p] == want) continue;
    if (seen[p] != Polarity::kNone)
      throw ModelError("clause mentions '" + over_->name(p) + "' with both polarities");
    seen[p] = want;
    lits_.emplace_back(p, pos);
  }
  std::sort(lits_.begin(), lits_.end());
}

// --- parsing ---------------------------------------------------------------

namespace {

class LiteralScanner {
 public:
  LiteralScanner(std::string_view text, const PropSet& props) : s_(text), props_(props) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  std::size_t pos() const { return pos_; }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string_view identifier() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
    }
    if (start == pos_) fail("expected proposition name");
    return s_.substr(start, pos_ - start);
  }

  std::pair<std::size_t, bool> literal() {
    const bool negated = consume('!');
    const std::size_t at = (skip_ws(), pos_);
    const std::string_view name = identifier();
    auto idx = props_.find(name);
    if (!idx) throw ParseError("unknown proposition '" + std::string(name) + "' at offset " +
                                   std::to_string(at),
                               at);
    return {*idx, !negated};
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_), pos_);
  }

  /// True if the whole remaining input is exactly `kw` (surrounded by ws).
  bool keyword_only(std::string_view kw) {
    skip_ws();
    std::size_t end = s_.size();
    while (end > pos_ && std::isspace(static_cast<unsigned char>(s_[end - 1]))) --end;
    if (s_.substr(pos_, end - pos_) == kw) {
      pos_ = s_.size();
      return true;
    }
    return false;
  }

 private:
  std::string_view s_;
  const PropSet& props_;
  std::size_t pos_ = 0;
};

}  // namespace

Cube parse_cube(std::string_view text, const PropSetRef& over) {
  LiteralScanner sc(text, *over);
  if (sc.at_end()) throw ParseError("empty cube", 0);
  // Keywords are checked first so propositions named TRUE/FALSE cannot
  // shadow them.
  if (sc.keyword_only("TRUE")) return Cube::top(over);
  if (sc.keyword_only("FALSE")) return Cube::bottom(over);
  Cube c = Cube::top(over);
  do {
    auto [p, pos] = sc.literal();
    c.add(p, pos);
  } while (sc.consume('&'));
  if (!sc.at_end()) sc.fail("expected '&' or end of cube");
  return c;
}

Clause parse_clause(std::string_view text, const PropSetRef& over) {
  LiteralScanner sc(text, *over);
  if (sc.at_end()) throw ParseError("empty clause", 0);
  std::vector<std::pair<std::size_t, bool>> lits;
  do {
    lits.push_back(sc.literal());
  } while (sc.consume('|'));
  if (!sc.at_end()) sc.fail("expected '|' or end of clause");
  return Clause(over, std::move(lits));
}

// --- algebra ---------------------------------------------------------------

Cube conj(const Cube& a, const Cube& b) {
  require_same(a.over(), b.over());
  if (a.is_false()) return a;
  if (b.is_false()) return b;
  Cube r = a;
  for (std::size_t i = 0; i < b.over()->size(); ++i) {
    const Polarity p = b.polarity(i);
    if (p != Polarity::kNone) r.add(i, p == Polarity::kPos);
  }
  return r;
}

std::optional<std::size_t> first_conflict(const Cube& a, const Cube& b) {
  require_same(a.over(), b.over());
  if (a.is_false() || b.is_false()) return std::nullopt;
  for (std::size_t i = 0; i < a.over()->size(); ++i) {
    const Polarity pa = a.polarity(i), pb = b.polarity(i);
    if (pa != Polarity::kNone && pb != Polarity::kNone && pa != pb) return i;
  }
  return std::nullopt;
}

bool satisfies(const Valuation& v, const Cube& c) {
  require_same(v.over(), c.over());
  if (c.is_false()) return false;
  for (std::size_t i = 0; i < v.over()->size(); ++i) {
    const Polarity p = c.polarity(i);
    if (p == Polarity::kPos && !v[i]) return false;
    if (p == Polarity::kNeg && v[i]) return false;
  }
  return true;
}

bool satisfies(const Valuation& v, const Clause& cl) {
  require_same(v.over(), cl.over());
  for (auto [p, pos] : cl.literals())
    if (v[p] == pos) return true;
  return false;
}

bool violates_clause(const Cube& c, const Clause& cl) {
  require_same(c.over(), cl.over());
  if (c.is_false()) throw ModelError("violates_clause on the false cube");
  for (auto [p, pos] : cl.literals()) {
    const Polarity want_opposite = pos ? Polarity::kNeg : Polarity::kPos;
    if (c.polarity(p) != want_opposite) return false;
  }
  return true;
}

Valuation complete_valuation(const Cube& c, bool fill) {
  if (c.is_false()) throw ModelError("cannot complete the false cube to a valuation");
  Valuation v(c.over());
  for (std::size_t i = 0; i < c.over()->size(); ++i) {
    switch (c.polarity(i)) {
      case Polarity::kPos: v.set(i, true); break;
      case Polarity::kNeg: v.set(i, false); break;
      case Polarity::kNone: v.set(i, fill); break;
    }
  }
  return v;
}

std::string to_string(const Cube& c) {
  if (c.is_false()) return "FALSE";
  std::string out;
  for (std::size_t i = 0; i < c.over()->size(); ++i) {
    const Polarity p = c.polarity(i);
    if (p == Polarity::kNone) continue;
    if (!out.empty()) out += " & ";
    if (p == Polarity::kNeg) out += '!';
    out += c.over()->name(i);
  }
  return out.empty() ? "TRUE" : out;
}

std::string to_string(const Clause& c) {
  std::string out;
  for (auto [p, pos] : c.literals()) {
    if (!out.empty()) out += " | ";
    if (!pos) out += '!';
    out += c.over()->name(p);
  }
  return out;
}

}  // namespace ihda
