#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kempe/graph.hpp"
#include "kempe/graph_vector.hpp"
#include "kempe/integer.hpp"

namespace kempe {

// The two terms of X_g = X_{g'} + X_{g''} obtained by splitting slots i, j
// holding (a,b), (c,d): g' uses (a,d),(c,b) and g'' uses (a,c),(b,d).
struct PlueckerTerms {
  SignedGraph first;
  SignedGraph second;
};

// Throws std::invalid_argument if the two slots share an endpoint.
PlueckerTerms pluecker_split(const CanonicalGraph& g, int slot1, int slot2);

struct TraceEntry {
  enum class Kind { Move, Note };
  Kind kind = Kind::Note;
  CanonicalGraph graph;  // graph the move was applied to
  Edge e1;
  Edge e2;
  bool allowable = true;
  std::string text;

  std::string to_line() const;
};

struct ReductionTrace {
  std::vector<TraceEntry> entries;

  void move(const CanonicalGraph& g, int slot1, int slot2);
  void note(std::string text);
  void append(const ReductionTrace& other);
  int forbidden_count() const;
  int move_count() const;
  std::string to_text() const;
};

// Tags a Plücker move: allowable_pair for degree-2 graphs, always allowed
// otherwise (allowability is only defined in degree 2).
bool move_is_allowable(const CanonicalGraph& g, int slot1, int slot2);

struct PlanarTerm {
  uint32_t id;
  int32_t coeff;
};
using Expansion = std::vector<PlanarTerm>;  // sorted by id

// Straightening to the planar basis with a shared, thread-safe memo from
// canonical graph to planar expansion. Planar graphs are interned to ids in
// order of first appearance. Memo coefficients are stored in 32 bits to keep
// the n = 10 degree-2 table small; expand() throws std::overflow_error if a
// coefficient does not fit (the unmemoized straighten() has no such limit).
class Straightener {
 public:
  const Expansion& expand(const CanonicalGraph& g);
  uint32_t intern(const CanonicalGraph& planar);
  CanonicalGraph planar_graph(uint32_t id) const;
  size_t memo_size() const;
  size_t planar_count() const;
  // Approximate heap bytes held by the memo.
  size_t memory_bytes() const;

  GraphVector<Integer> straighten_graph(const CanonicalGraph& g);

  template <class R>
  GraphVector<R> straighten(const GraphVector<R>& v) {
    GraphVector<R> out;
    for (const auto& [g, c] : v.terms()) {
      const Expansion& e = expand(g);
      for (const PlanarTerm& t : e) out.add(planar_graph(t.id), c * ring_from_integer(Integer(t.coeff), c));
    }
    return out;
  }

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<CanonicalGraph, Expansion, CanonicalGraphHash> memo_;
  std::vector<CanonicalGraph> planar_;
  std::unordered_map<CanonicalGraph, uint32_t, CanonicalGraphHash> planar_ids_;
  size_t term_count_ = 0;
};

// Straightening without memo, splitting the lexicographically smallest
// crossing pair.
template <class R>
GraphVector<R> straighten(const GraphVector<R>& v);

using PairPredicate = std::function<bool(const CanonicalGraph&, int, int)>;

template <class R>
struct RestrictedResult {
  GraphVector<R> planar;  // planar part
  GraphVector<R> stuck;   // graphs with crossings but no allowed pair
  ReductionTrace trace;
};

// Repeatedly splits the lexicographically smallest allowed crossing pair.
// Graphs are processed in order of decreasing potential, so each graph is
// split once with its accumulated coefficient.
template <class R>
RestrictedResult<R> straighten_restricted(const GraphVector<R>& v, const PairPredicate& allowed) {
  RestrictedResult<R> out;
  std::map<std::pair<int64_t, CanonicalGraph>, R> work;
  auto push = [&](const SignedGraph& sg, const R& c) {
    R value = sg.sign > 0 ? c : -c;
    auto key = std::make_pair(-potential(sg.graph), sg.graph);
    auto [it, inserted] = work.try_emplace(key, value);
    if (!inserted) it->second += value;
  };
  for (const auto& [g, c] : v.terms()) push(SignedGraph{g, 1}, c);
  while (!work.empty()) {
    auto node = work.extract(work.begin());
    const CanonicalGraph& g = node.key().second;
    const R& c = node.mapped();
    if (ring_is_zero(c)) continue;
    std::optional<std::pair<int, int>> chosen;
    bool crossing = false;
    for (int i = 0; i < g.edge_count() && !chosen; ++i) {
      for (int j = i + 1; j < g.edge_count(); ++j) {
        if (!edges_cross(g.edge(i), g.edge(j))) continue;
        crossing = true;
        if (allowed(g, i, j)) {
          chosen = std::make_pair(i, j);
          break;
        }
      }
    }
    if (!crossing) {
      out.planar.add(g, c);
      continue;
    }
    if (!chosen) {
      out.stuck.add(g, c);
      continue;
    }
    out.trace.move(g, chosen->first, chosen->second);
    PlueckerTerms terms = pluecker_split(g, chosen->first, chosen->second);
    push(terms.first, c);
    push(terms.second, c);
  }
  return out;
}

template <class R>
GraphVector<R> straighten(const GraphVector<R>& v) {
  RestrictedResult<R> r = straighten_restricted(v, [](const CanonicalGraph&, int, int) { return true; });
  return r.planar;
}

}  // namespace kempe
