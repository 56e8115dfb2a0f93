#include "kempe/straighten.hpp"

#include <algorithm>
#include <stdexcept>

namespace kempe {

PlueckerTerms pluecker_split(const CanonicalGraph& g, int slot1, int slot2) {
  if (slot1 == slot2) throw std::invalid_argument("Plücker split needs two distinct edge slots");
  const Edge e1 = g.edge(slot1);
  const Edge e2 = g.edge(slot2);
  const int a = e1.lo, b = e1.hi, c = e2.lo, d = e2.hi;
  if (a == c || a == d || b == c || b == d) {
    throw std::invalid_argument("Plücker split of edges sharing an endpoint: " + e1.to_string() + ", " +
                                e2.to_string());
  }
  std::vector<DirectedEdge> rest;
  rest.reserve(g.edge_count());
  for (int s = 0; s < g.edge_count(); ++s) {
    if (s == slot1 || s == slot2) continue;
    rest.push_back({g.edge(s).lo, g.edge(s).hi});
  }
  auto build = [&](DirectedEdge x, DirectedEdge y) {
    std::vector<DirectedEdge> edges = rest;
    edges.push_back(x);
    edges.push_back(y);
    return *canonicalize_any(g.n(), edges);
  };
  return {build({a, d}, {c, b}), build({a, c}, {b, d})};
}

std::string TraceEntry::to_line() const {
  if (kind == Kind::Note) return "# " + text;
  return "PLUCKER " + e1.to_string() + " " + e2.to_string() + (allowable ? " ALLOWED" : " FORBIDDEN");
}

bool move_is_allowable(const CanonicalGraph& g, int slot1, int slot2) {
  auto deg = g.regular_degree();
  if (!deg || *deg != 2) return true;
  return allowable_pair(g, slot1, slot2);
}

void ReductionTrace::move(const CanonicalGraph& g, int slot1, int slot2) {
  TraceEntry entry;
  entry.kind = TraceEntry::Kind::Move;
  entry.graph = g;
  entry.e1 = g.edge(slot1);
  entry.e2 = g.edge(slot2);
  entry.allowable = move_is_allowable(g, slot1, slot2);
  entries.push_back(std::move(entry));
}

void ReductionTrace::note(std::string text) {
  TraceEntry entry;
  entry.kind = TraceEntry::Kind::Note;
  entry.text = std::move(text);
  entries.push_back(std::move(entry));
}

void ReductionTrace::append(const ReductionTrace& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

int ReductionTrace::forbidden_count() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const TraceEntry& e) {
    return e.kind == TraceEntry::Kind::Move && !e.allowable;
  }));
}

int ReductionTrace::move_count() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(),
                                        [](const TraceEntry& e) { return e.kind == TraceEntry::Kind::Move; }));
}

std::string ReductionTrace::to_text() const {
  std::string out;
  for (const TraceEntry& e : entries) {
    out += e.to_line();
    out += '\n';
  }
  return out;
}

uint32_t Straightener::intern(const CanonicalGraph& planar) {
  {
    std::shared_lock lock(mu_);
    auto it = planar_ids_.find(planar);
    if (it != planar_ids_.end()) return it->second;
  }
  std::unique_lock lock(mu_);
  auto [it, inserted] = planar_ids_.try_emplace(planar, static_cast<uint32_t>(planar_.size()));
  if (inserted) planar_.push_back(planar);
  return it->second;
}

CanonicalGraph Straightener::planar_graph(uint32_t id) const {
  std::shared_lock lock(mu_);
  return planar_.at(id);
}

size_t Straightener::memo_size() const {
  std::shared_lock lock(mu_);
  return memo_.size();
}

size_t Straightener::planar_count() const {
  std::shared_lock lock(mu_);
  return planar_.size();
}

size_t Straightener::memory_bytes() const {
  std::shared_lock lock(mu_);
  const size_t node = sizeof(CanonicalGraph) + sizeof(Expansion) + 2 * sizeof(void*);
  return memo_.size() * node + memo_.bucket_count() * sizeof(void*) + term_count_ * sizeof(PlanarTerm);
}

const Expansion& Straightener::expand(const CanonicalGraph& g) {
  {
    std::shared_lock lock(mu_);
    auto it = memo_.find(g);
    if (it != memo_.end()) return it->second;
  }
  Expansion result;
  auto pair = first_crossing_pair(g);
  if (!pair) {
    result.push_back({intern(g), 1});
  } else {
    PlueckerTerms terms = pluecker_split(g, pair->first, pair->second);
    const Expansion& x = expand(terms.first.graph);
    const Expansion& y = expand(terms.second.graph);
    const int sx = terms.first.sign;
    const int sy = terms.second.sign;
    result.reserve(x.size() + y.size());
    auto push = [&](uint32_t id, int64_t c) {
      if (c == 0) return;
      if (c > INT32_MAX || c < INT32_MIN) {
        throw std::overflow_error("straightening coefficient exceeds 32 bits for " + g.to_string());
      }
      result.push_back({id, static_cast<int32_t>(c)});
    };
    size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].id < y[j].id)) {
        push(x[i].id, int64_t(sx) * x[i].coeff);
        ++i;
      } else if (i == x.size() || y[j].id < x[i].id) {
        push(y[j].id, int64_t(sy) * y[j].coeff);
        ++j;
      } else {
        push(x[i].id, int64_t(sx) * x[i].coeff + int64_t(sy) * y[j].coeff);
        ++i;
        ++j;
      }
    }
    result.shrink_to_fit();
  }
  std::unique_lock lock(mu_);
  auto [it, inserted] = memo_.try_emplace(g, std::move(result));
  if (inserted) term_count_ += it->second.size();
  return it->second;
}

GraphVector<Integer> Straightener::straighten_graph(const CanonicalGraph& g) {
  return straighten(GraphVector<Integer>::single(g, Integer(1)));
}

}  // namespace kempe
