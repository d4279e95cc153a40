#pragma once

// JSON encodings shared by the exporters, the trace log and the wire
// protocol. Objects keep insertion order so output is stable.

#include <json.hpp>

#include "ihda/error.hpp"
#include "ihda/hda.hpp"
#include "ihda/ipn.hpp"

namespace ihda::json {

using Json = nlohmann::ordered_json;

/// {name: bool, ...} in PropSet order.
inline Json valuation(const Valuation& v) {
  Json j = Json::object();
  for (std::size_t i = 0; i < v.over()->size(); ++i) j[v.over()->name(i)] = static_cast<bool>(v[i]);
  return j;
}

/// Exactly the PropSet's names, each a boolean.
inline Valuation valuation_from(const Json& j, const PropSetRef& over) {
  if (!j.is_object()) throw ProtocolError("valuation must be a JSON object");
  if (j.size() != over->size()) throw ProtocolError("valuation does not cover the proposition set");
  Valuation v(over);
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto idx = over->find(it.key());
    if (!idx) throw ProtocolError("unknown proposition '" + it.key() + "'");
    if (!it.value().is_boolean()) throw ProtocolError("value of '" + it.key() + "' is not a boolean");
    v.set(*idx, it.value().get<bool>());
  }
  return v;
}

/// {place: count} for marked places.
inline Json marking(const Ipn& net, const Marking& m) {
  Json j = Json::object();
  for (std::size_t p = 0; p < m.size(); ++p)
    if (m[p]) j[net.place(p).id] = m[p];
  return j;
}

inline Marking marking_from(const Ipn& net, const Json& j) {
  if (!j.is_object()) throw ModelError("marking must be a JSON object");
  Marking m = net.empty_marking();
  for (auto it = j.begin(); it != j.end(); ++it) m[net.place_index(it.key())] = it.value().get<std::uint32_t>();
  return m;
}

/// Transition ids repeated by multiplicity.
inline Json concset(const Ipn& net, const Concset& c) { return concset_ids(net, c); }

inline Concset concset_from(const Ipn& net, const Json& j) {
  if (!j.is_array()) throw ModelError("step must be a JSON array");
  return make_concset(net, j.get<std::vector<std::string>>());
}

inline Json cell(const Ipn& net, const Cell& c) {
  return Json{{"marking", marking(net, c.marking)}, {"concset", concset(net, c.concset)}};
}

}  // namespace ihda::json
