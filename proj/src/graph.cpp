#include "kempe/graph.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace kempe {

Edge::Edge(int a, int b) {
  if (a == b) throw std::invalid_argument("loop edge " + std::to_string(a));
  if (a > b) std::swap(a, b);
  lo = static_cast<uint8_t>(a);
  hi = static_cast<uint8_t>(b);
}

std::string Edge::to_string() const { return std::to_string(lo) + "-" + std::to_string(hi); }

CanonicalGraph CanonicalGraph::from_edges(int n, std::span<const Edge> edges) {
  if (n < 1 || n > kMaxVertices) throw std::invalid_argument("vertex count out of range: " + std::to_string(n));
  if (edges.size() > static_cast<size_t>(kMaxEdges)) throw std::invalid_argument("too many edges");
  CanonicalGraph g;
  g.n_ = static_cast<uint8_t>(n);
  g.count_ = static_cast<uint8_t>(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.lo >= e.hi || e.hi >= n) {
      throw std::invalid_argument("edge " + e.to_string() + " is not a chord on " + std::to_string(n) + " vertices");
    }
    g.edges_[i] = e;
  }
  std::sort(g.edges_.begin(), g.edges_.begin() + g.count_);
  return g;
}

std::array<int, kMaxVertices> CanonicalGraph::degrees() const {
  std::array<int, kMaxVertices> deg{};
  for (const Edge& e : edges()) {
    ++deg[e.lo];
    ++deg[e.hi];
  }
  return deg;
}

std::optional<int> CanonicalGraph::regular_degree() const {
  auto deg = degrees();
  for (int v = 1; v < n_; ++v) {
    if (deg[v] != deg[0]) return std::nullopt;
  }
  return deg[0];
}

int CanonicalGraph::find_slot(Edge e, int skip) const {
  for (int s = 0; s < count_; ++s) {
    if (s != skip && edges_[s] == e) return s;
  }
  return -1;
}

int CanonicalGraph::multiplicity(Edge e) const {
  return static_cast<int>(std::count(edges_.begin(), edges_.begin() + count_, e));
}

CanonicalGraph CanonicalGraph::without_slots(std::initializer_list<int> slots) const {
  CanonicalGraph g;
  g.n_ = n_;
  for (int s = 0; s < count_; ++s) {
    if (std::find(slots.begin(), slots.end(), s) == slots.end()) g.edges_[g.count_++] = edges_[s];
  }
  return g;
}

CanonicalGraph CanonicalGraph::with_edges_added(std::span<const Edge> extra) const {
  std::vector<Edge> all(edges().begin(), edges().end());
  all.insert(all.end(), extra.begin(), extra.end());
  return from_edges(n_, all);
}

size_t CanonicalGraph::hash() const {
  // FNV-1a over the used bytes.
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](uint8_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  mix(n_);
  mix(count_);
  for (int s = 0; s < count_; ++s) {
    mix(edges_[s].lo);
    mix(edges_[s].hi);
  }
  return static_cast<size_t>(h);
}

std::string CanonicalGraph::to_string() const {
  std::ostringstream os;
  os << "n=" << int(n_) << " {";
  for (int s = 0; s < count_; ++s) os << (s ? "," : "") << edges_[s].to_string();
  os << "}";
  return os.str();
}

bool operator==(const CanonicalGraph& a, const CanonicalGraph& b) {
  return a.n_ == b.n_ && a.count_ == b.count_ &&
         std::equal(a.edges_.begin(), a.edges_.begin() + a.count_, b.edges_.begin());
}

std::strong_ordering operator<=>(const CanonicalGraph& a, const CanonicalGraph& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.edges_.begin(), a.edges_.begin() + a.count_, b.edges_.begin(),
                                                b.edges_.begin() + b.count_);
}

namespace {

std::optional<SignedGraph> canonicalize_impl(int n, std::span<const DirectedEdge> edges, bool require_regular) {
  if (n < 1 || n > kMaxVertices) throw std::invalid_argument("vertex count out of range: " + std::to_string(n));
  std::array<int, kMaxVertices> deg{};
  for (const DirectedEdge& e : edges) {
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n) {
      throw std::invalid_argument("edge endpoint out of range on " + std::to_string(n) + " vertices");
    }
    ++deg[e.tail];
    ++deg[e.head];
  }
  if (require_regular) {
    for (int v = 1; v < n; ++v) {
      if (deg[v] != deg[0]) {
        std::ostringstream os;
        os << "graph is not regular; degree sequence:";
        for (int u = 0; u < n; ++u) os << ' ' << deg[u];
        throw std::invalid_argument(os.str());
      }
    }
  }
  for (const DirectedEdge& e : edges) {
    if (e.tail == e.head) return std::nullopt;
  }
  std::vector<Edge> out;
  out.reserve(edges.size());
  int sign = 1;
  for (const DirectedEdge& e : edges) {
    if (e.tail > e.head) sign = -sign;
    out.emplace_back(e.tail, e.head);
  }
  return SignedGraph{CanonicalGraph::from_edges(n, out), sign};
}

}  // namespace

std::optional<SignedGraph> canonicalize(int n, std::span<const DirectedEdge> edges) {
  return canonicalize_impl(n, edges, true);
}

std::optional<SignedGraph> canonicalize_any(int n, std::span<const DirectedEdge> edges) {
  return canonicalize_impl(n, edges, false);
}

bool edges_cross(Edge e1, Edge e2) {
  if (e1.lo == e2.lo || e1.lo == e2.hi || e1.hi == e2.lo || e1.hi == e2.hi) return false;
  bool lo_inside = e1.lo < e2.lo && e2.lo < e1.hi;
  bool hi_inside = e1.lo < e2.hi && e2.hi < e1.hi;
  return lo_inside != hi_inside;
}

bool is_planar(const CanonicalGraph& g) { return !first_crossing_pair(g).has_value(); }

int crossings_of_slot(const CanonicalGraph& g, int slot) {
  int count = 0;
  Edge e = g.edge(slot);
  for (int s = 0; s < g.edge_count(); ++s) {
    if (s != slot && edges_cross(e, g.edge(s))) ++count;
  }
  return count;
}

int crossing_count(const CanonicalGraph& g) {
  int count = 0;
  for (int i = 0; i < g.edge_count(); ++i) {
    for (int j = i + 1; j < g.edge_count(); ++j) {
      if (edges_cross(g.edge(i), g.edge(j))) ++count;
    }
  }
  return count;
}

std::optional<std::pair<int, int>> first_crossing_pair(const CanonicalGraph& g) {
  for (int i = 0; i < g.edge_count(); ++i) {
    for (int j = i + 1; j < g.edge_count(); ++j) {
      if (edges_cross(g.edge(i), g.edge(j))) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

int64_t potential(const CanonicalGraph& g) {
  int64_t total = 0;
  for (const Edge& e : g.edges()) {
    int64_t d = e.hi - e.lo;
    total += d * (g.n() - d);
  }
  return total;
}

int CycleDecomposition::odd_count() const {
  return static_cast<int>(std::count_if(cycles.begin(), cycles.end(), [](const Cycle& c) { return c.odd(); }));
}

CycleDecomposition cycle_decomposition(const CanonicalGraph& g) {
  auto deg = g.regular_degree();
  if (!deg || *deg != 2) throw std::invalid_argument("cycle decomposition needs a degree-2 graph: " + g.to_string());
  const int n = g.n();
  std::array<std::array<int, 2>, kMaxVertices> incident{};
  std::array<int, kMaxVertices> filled{};
  for (int s = 0; s < g.edge_count(); ++s) {
    Edge e = g.edge(s);
    incident[e.lo][filled[e.lo]++] = s;
    incident[e.hi][filled[e.hi]++] = s;
  }
  CycleDecomposition cd;
  cd.cycle_of_vertex.fill(-1);
  cd.cycle_of_slot.fill(-1);
  for (int start = 0; start < n; ++start) {
    if (cd.cycle_of_vertex[start] != -1) continue;
    const int id = static_cast<int>(cd.cycles.size());
    Cycle cycle;
    int v = start;
    int slot = incident[start][0];
    while (true) {
      cycle.vertices.push_back(v);
      cycle.slots.push_back(slot);
      cd.cycle_of_vertex[v] = id;
      cd.cycle_of_slot[slot] = id;
      Edge e = g.edge(slot);
      int w = (e.lo == v) ? e.hi : e.lo;
      if (w == start) break;
      slot = (incident[w][0] == slot) ? incident[w][1] : incident[w][0];
      v = w;
    }
    cd.cycles.push_back(std::move(cycle));
  }
  return cd;
}

bool is_allowable(const CycleDecomposition& cd) {
  const size_t k = cd.cycles.size();
  if (k == 1) return false;
  if (k == 2 && cd.odd_count() == 2) return false;
  return true;
}

bool is_allowable(const CanonicalGraph& g) { return is_allowable(cycle_decomposition(g)); }

bool allowable_pair(const CycleDecomposition& cd, int slot1, int slot2) {
  if (!is_allowable(cd)) return false;
  const int c1 = cd.cycle_of_slot[slot1];
  const int c2 = cd.cycle_of_slot[slot2];
  if (cd.cycles.size() == 2) return c1 == c2;
  if (cd.cycles.size() == 3 && cd.odd_count() == 2) return cd.cycles[c1].odd() == cd.cycles[c2].odd();
  return true;
}

bool allowable_pair(const CanonicalGraph& g, int slot1, int slot2) {
  return allowable_pair(cycle_decomposition(g), slot1, slot2);
}

QuasiPlanarStatus quasi_planar_status(const CanonicalGraph& g) {
  QuasiPlanarStatus status;
  if (is_planar(g)) {
    status.kind = QuasiPlanarKind::Planar;
    return status;
  }
  for (int s = 0; s + 1 < g.edge_count(); ++s) {
    Edge e = g.edge(s);
    if (g.edge(s + 1) != e) continue;
    if (s > 0 && g.edge(s - 1) == e) continue;
    if (crossings_of_slot(g, s) != 2) continue;
    if (is_planar(g.without_slots({s, s + 1}))) status.distinguished.push_back(e);
  }
  status.kind = status.distinguished.empty() ? QuasiPlanarKind::No : QuasiPlanarKind::QuasiPlanar;
  return status;
}

bool is_quasi_planar(const CanonicalGraph& g) { return quasi_planar_status(g).kind != QuasiPlanarKind::No; }

std::vector<Edge> planar_cycle_edges(std::vector<int> vertices) {
  std::sort(vertices.begin(), vertices.end());
  std::vector<Edge> out;
  const size_t k = vertices.size();
  if (k < 2) throw std::invalid_argument("a cycle needs at least two vertices");
  if (k == 2) return {Edge(vertices[0], vertices[1]), Edge(vertices[0], vertices[1])};
  for (size_t i = 0; i + 1 < k; ++i) out.emplace_back(vertices[i], vertices[i + 1]);
  out.emplace_back(vertices[0], vertices[k - 1]);
  return out;
}

CanonicalGraph associated_planar(const CanonicalGraph& g, std::optional<Edge> choice) {
  QuasiPlanarStatus status = quasi_planar_status(g);
  if (status.kind == QuasiPlanarKind::Planar) return g;
  if (status.kind == QuasiPlanarKind::No) throw std::invalid_argument("graph is not quasi-planar: " + g.to_string());
  Edge e = choice.value_or(status.distinguished.front());
  if (std::find(status.distinguished.begin(), status.distinguished.end(), e) == status.distinguished.end()) {
    throw std::invalid_argument("edge " + e.to_string() + " is not a distinguished doubled edge");
  }
  CycleDecomposition cd = cycle_decomposition(g);
  int crossed = -1;
  for (int s = 0; s < g.edge_count(); ++s) {
    if (!edges_cross(e, g.edge(s))) continue;
    if (crossed != -1 && cd.cycle_of_slot[s] != crossed) {
      throw std::logic_error("distinguished edge crosses two different cycles: " + g.to_string());
    }
    crossed = cd.cycle_of_slot[s];
  }
  const Cycle& c = cd.cycles[crossed];
  std::vector<int> verts = c.vertices;
  verts.push_back(e.lo);
  verts.push_back(e.hi);
  std::vector<Edge> kept;
  for (int s = 0; s < g.edge_count(); ++s) {
    if (g.edge(s) == e || cd.cycle_of_slot[s] == crossed) continue;
    kept.push_back(g.edge(s));
  }
  for (Edge f : planar_cycle_edges(verts)) kept.push_back(f);
  CanonicalGraph out = CanonicalGraph::from_edges(g.n(), kept);
  if (level(out) != level(g)) throw std::logic_error("associated planar graph changed the level: " + g.to_string());
  return out;
}

int planar_level(const CanonicalGraph& g) { return static_cast<int>(cycle_decomposition(g).cycles.size()); }

int level(const CanonicalGraph& g) {
  QuasiPlanarStatus status = quasi_planar_status(g);
  if (status.kind == QuasiPlanarKind::No) throw std::invalid_argument("level of a non-quasi-planar graph: " + g.to_string());
  int cycles = planar_level(g);
  return status.kind == QuasiPlanarKind::Planar ? cycles : cycles - 1;
}

namespace {

std::array<int, 2> slots_at(const CanonicalGraph& g, int a) {
  std::array<int, 2> out{-1, -1};
  int k = 0;
  for (int s = 0; s < g.edge_count() && k < 2; ++s) {
    if (g.edge(s).lo == a || g.edge(s).hi == a) out[k++] = s;
  }
  return out;
}

bool is_special(const CanonicalGraph& g, int a) {
  auto at = slots_at(g, a);
  return is_planar(g.without_slots({at[0], at[1]}));
}

// Distinct cycles other than a's own crossed by chord (a, b), ordered by
// distance from a.
std::vector<int> cycles_along(const CanonicalGraph& g, const CycleDecomposition& cd, int a, int b) {
  const int n = g.n();
  Edge chord(a, b);
  // The side arc runs from a in increasing direction to b.
  auto side_pos = [&](int v) { return ((v - a) % n + n) % n; };
  const int b_pos = side_pos(b);
  std::vector<std::tuple<int, int, int>> hits;  // (near-side position, far-side distance, cycle)
  for (int s = 0; s < g.edge_count(); ++s) {
    Edge e = g.edge(s);
    if (!edges_cross(chord, e) || cd.cycle_of_slot[s] == cd.cycle_of_vertex[a]) continue;
    int p = side_pos(e.lo);
    int q = side_pos(e.hi);
    if (p > b_pos) std::swap(p, q);
    hits.emplace_back(p, n - q, cd.cycle_of_slot[s]);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<int> out;
  for (const auto& [p, q, c] : hits) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<int> special_vertices(const CanonicalGraph& g) {
  std::vector<int> out;
  for (int a = 0; a < g.n(); ++a) {
    if (is_special(g, a)) out.push_back(a);
  }
  return out;
}

bool is_semi_planar(const CanonicalGraph& g) {
  for (int a = 0; a < g.n(); ++a) {
    if (is_special(g, a)) return true;
  }
  return false;
}

std::vector<int> skewered_cycles(const CanonicalGraph& g, int a) {
  if (!is_special(g, a)) throw std::invalid_argument("vertex " + std::to_string(a) + " is not special in " + g.to_string());
  CycleDecomposition cd = cycle_decomposition(g);
  auto at = slots_at(g, a);
  auto other = [&](int slot) { return g.edge(slot).lo == a ? g.edge(slot).hi : g.edge(slot).lo; };
  std::vector<int> first = cycles_along(g, cd, a, other(at[0]));
  std::vector<int> second = cycles_along(g, cd, a, other(at[1]));
  if (first != second) {
    throw std::logic_error("skewered cycles depend on the edge followed at vertex " + std::to_string(a) + " in " +
                           g.to_string());
  }
  return first;
}

std::optional<int> extreme_cycle(const CanonicalGraph& g, int a) {
  std::vector<int> cycles = skewered_cycles(g, a);
  if (cycles.empty()) return std::nullopt;
  return cycles.back();
}

std::vector<CanonicalGraph> all_degree_two_graphs(int n) {
  if (n < 2 || n > 12) throw std::invalid_argument("degree-2 enumeration supports 2 <= n <= 12");
  std::vector<CanonicalGraph> out;
  std::array<int, kMaxVertices> deficit{};
  for (int v = 0; v < n; ++v) deficit[v] = 2;
  std::vector<Edge> edges;
  std::function<void()> rec = [&]() {
    int v = 0;
    while (v < n && deficit[v] == 0) ++v;
    if (v == n) {
      out.push_back(CanonicalGraph::from_edges(n, edges));
      return;
    }
    if (deficit[v] == 1) {
      for (int u = v + 1; u < n; ++u) {
        if (deficit[u] == 0) continue;
        --deficit[u];
        deficit[v] = 0;
        edges.emplace_back(v, u);
        rec();
        edges.pop_back();
        deficit[v] = 1;
        ++deficit[u];
      }
      return;
    }
    for (int u1 = v + 1; u1 < n; ++u1) {
      if (deficit[u1] == 0) continue;
      for (int u2 = u1; u2 < n; ++u2) {
        if (deficit[u2] == 0 || (u2 == u1 && deficit[u1] < 2)) continue;
        --deficit[u1];
        --deficit[u2];
        deficit[v] = 0;
        edges.emplace_back(v, u1);
        edges.emplace_back(v, u2);
        rec();
        edges.pop_back();
        edges.pop_back();
        deficit[v] = 2;
        ++deficit[u1];
        ++deficit[u2];
      }
    }
  };
  rec();
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CanonicalGraph> all_matchings(int n) {
  if (n < 2 || n % 2 != 0 || n > kMaxVertices) throw std::invalid_argument("matchings need an even n");
  std::vector<CanonicalGraph> out;
  std::vector<bool> used(n, false);
  std::vector<Edge> edges;
  std::function<void()> rec = [&]() {
    int v = 0;
    while (v < n && used[v]) ++v;
    if (v == n) {
      out.push_back(CanonicalGraph::from_edges(n, edges));
      return;
    }
    used[v] = true;
    for (int u = v + 1; u < n; ++u) {
      if (used[u]) continue;
      used[u] = true;
      edges.emplace_back(v, u);
      rec();
      edges.pop_back();
      used[u] = false;
    }
    used[v] = false;
  };
  rec();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kempe
