#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kempe {

inline constexpr int kMaxVertices = 16;
inline constexpr int kMaxEdges = 24;

// Directed edge tail -> head; evaluates to the bracket [tail head].
struct DirectedEdge {
  int tail;
  int head;
};

// Undirected chord with lo < hi (the low -> high orientation).
struct Edge {
  uint8_t lo = 0;
  uint8_t hi = 0;

  Edge() = default;
  Edge(int a, int b);
  auto operator<=>(const Edge&) const = default;
  std::string to_string() const;
};

// Multigraph on vertices 0..n-1 placed on a circle in numeric order, with every
// edge oriented low -> high and the edge list sorted.
class CanonicalGraph {
 public:
  CanonicalGraph() = default;

  // Sorts the given low -> high edges. Throws std::invalid_argument on loops,
  // out-of-range labels or too many edges. Regularity is not required here.
  static CanonicalGraph from_edges(int n, std::span<const Edge> edges);

  int n() const { return n_; }
  int edge_count() const { return count_; }
  std::span<const Edge> edges() const { return {edges_.data(), count_}; }
  Edge edge(int slot) const { return edges_[slot]; }

  std::array<int, kMaxVertices> degrees() const;
  // The common valence, or nullopt when the graph is not regular.
  std::optional<int> regular_degree() const;

  // First slot holding edge e other than `skip`, or -1.
  int find_slot(Edge e, int skip = -1) const;
  int multiplicity(Edge e) const;

  // Graph with the given slots removed (no re-sorting needed).
  CanonicalGraph without_slots(std::initializer_list<int> slots) const;
  CanonicalGraph with_edges_added(std::span<const Edge> extra) const;

  size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const CanonicalGraph& a, const CanonicalGraph& b);
  friend std::strong_ordering operator<=>(const CanonicalGraph& a, const CanonicalGraph& b);

 private:
  uint8_t n_ = 0;
  uint8_t count_ = 0;
  std::array<Edge, kMaxEdges> edges_{};
};

struct CanonicalGraphHash {
  size_t operator()(const CanonicalGraph& g) const { return g.hash(); }
};

struct SignedGraph {
  CanonicalGraph graph;
  int sign = 1;
};

// Orients every edge low -> high and sorts; the sign is (-1)^(reversals).
// Returns nullopt (the zero element) when some edge is a loop. Throws
// std::invalid_argument with the degree sequence when the input is not regular.
std::optional<SignedGraph> canonicalize(int n, std::span<const DirectedEdge> edges);
// Same, without the regularity requirement (used for local identity pictures).
std::optional<SignedGraph> canonicalize_any(int n, std::span<const DirectedEdge> edges);

bool edges_cross(Edge e1, Edge e2);
bool is_planar(const CanonicalGraph& g);
// Number of edge slots crossing slot s.
int crossings_of_slot(const CanonicalGraph& g, int slot);
int crossing_count(const CanonicalGraph& g);
// Lexicographically smallest pair of crossing slots (i < j).
std::optional<std::pair<int, int>> first_crossing_pair(const CanonicalGraph& g);
// Sum over edge slots of d(n-d), d the circular distance of the endpoints.
int64_t potential(const CanonicalGraph& g);

struct Cycle {
  std::vector<int> vertices;  // traversal order, starting at the smallest vertex
  std::vector<int> slots;     // slots[i] joins vertices[i] and vertices[i+1 mod len]
  int length() const { return static_cast<int>(vertices.size()); }
  bool odd() const { return vertices.size() % 2 == 1; }
};

struct CycleDecomposition {
  std::vector<Cycle> cycles;  // ordered by smallest vertex
  std::array<int, kMaxEdges> cycle_of_slot{};
  std::array<int, kMaxVertices> cycle_of_vertex{};

  int odd_count() const;
};

// Throws std::invalid_argument unless g is regular of degree 2.
CycleDecomposition cycle_decomposition(const CanonicalGraph& g);

bool is_allowable(const CanonicalGraph& g);
bool is_allowable(const CycleDecomposition& cd);
bool allowable_pair(const CanonicalGraph& g, int slot1, int slot2);
bool allowable_pair(const CycleDecomposition& cd, int slot1, int slot2);

enum class QuasiPlanarKind { Planar, QuasiPlanar, No };

struct QuasiPlanarStatus {
  QuasiPlanarKind kind = QuasiPlanarKind::No;
  std::vector<Edge> distinguished;  // sorted; empty unless QuasiPlanar
};

QuasiPlanarStatus quasi_planar_status(const CanonicalGraph& g);
bool is_quasi_planar(const CanonicalGraph& g);

// Replaces the distinguished doubled edge and the cycle it crosses by the
// planar cycle on their vertices. Planar input is returned unchanged. Throws
// std::invalid_argument when g is not quasi-planar or `choice` is not
// distinguished.
CanonicalGraph associated_planar(const CanonicalGraph& g, std::optional<Edge> choice = std::nullopt);

// Number of cycles, minus one for non-planar quasi-planar graphs.
int level(const CanonicalGraph& g);
// Number of cycles of a planar degree-2 graph (its level).
int planar_level(const CanonicalGraph& g);

// The planar cycle through the given vertices (consecutive in numeric order).
std::vector<Edge> planar_cycle_edges(std::vector<int> vertices);

std::vector<int> special_vertices(const CanonicalGraph& g);
bool is_semi_planar(const CanonicalGraph& g);
// Indices (into cycle_decomposition(g).cycles) of the cycles other than a's
// own that are crossed by the edges at special vertex a, in order of distance
// from a. Throws std::logic_error if the two edges at a disagree.
std::vector<int> skewered_cycles(const CanonicalGraph& g, int a);
std::optional<int> extreme_cycle(const CanonicalGraph& g, int a);

// All degree-2 canonical graphs on n vertices (n <= 12).
std::vector<CanonicalGraph> all_degree_two_graphs(int n);
// All perfect matchings on n vertices.
std::vector<CanonicalGraph> all_matchings(int n);

}  // namespace kempe
