#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kempe/graph.hpp"
#include "kempe/lattice.hpp"
#include "kempe/relspaces.hpp"
#include "kempe/sparse_matrix.hpp"
#include "kempe/straighten.hpp"

namespace kempe {

// Partition of 0..n-1 into at least two pieces of even size. Pieces are
// sorted internally and ordered by their smallest element.
class EvenPartition {
 public:
  EvenPartition() = default;
  // Throws std::invalid_argument unless the pieces form an even partition of 0..n-1.
  static EvenPartition make(int n, std::vector<std::vector<int>> pieces);

  int n() const { return n_; }
  int size() const { return static_cast<int>(pieces_.size()); }
  const std::vector<std::vector<int>>& pieces() const { return pieces_; }
  const std::vector<int>& piece(int i) const { return pieces_[i]; }
  int piece_of(int v) const { return label_[v]; }
  // Partition with pieces i and j united (needs at least three pieces).
  EvenPartition merged(int i, int j) const;
  std::string to_string() const;

  friend bool operator==(const EvenPartition&, const EvenPartition&) = default;
  friend auto operator<=>(const EvenPartition& a, const EvenPartition& b) { return a.pieces_ <=> b.pieces_; }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> pieces_;
  std::array<uint8_t, kMaxVertices> label_{};
};

// Every edge touching a piece lies inside it.
bool is_closed(const CanonicalGraph& g, const EvenPartition& p);
// Even partitions of the vertex set closed with respect to a degree-2 graph.
std::vector<EvenPartition> closed_partitions(const CanonicalGraph& g);
// All even partitions of 0..n-1 with at least two pieces, sorted.
std::vector<EvenPartition> even_partitions(int n);

struct PartitionedTerm {
  CanonicalGraph graph;
  EvenPartition partition;

  friend bool operator==(const PartitionedTerm&, const PartitionedTerm&) = default;
  friend auto operator<=>(const PartitionedTerm& a, const PartitionedTerm& b) {
    if (auto c = a.partition <=> b.partition; c != 0) return c;
    return a.graph <=> b.graph;
  }
};

struct PartitionedTermHash {
  size_t operator()(const PartitionedTerm& t) const;
};

using PartitionedVector = std::map<PartitionedTerm, Integer>;
void add_term(PartitionedVector& v, const PartitionedTerm& t, const Integer& c);

// Restriction of g to a piece, relabeled monotonically to 0..|U|-1.
CanonicalGraph restrict_to_piece(const CanonicalGraph& g, const std::vector<int>& piece);

// Rewrites (g, partition) in the per-piece planar basis using Plücker
// relations inside single pieces only. Throws if the partition is not closed.
PartitionedVector straighten_in_pieces(const PartitionedTerm& t, Straightener& s);

// W̃_L: basis terms (partition, graph planar inside every piece).
class WTilde {
 public:
  WTilde(int n, Straightener& s);

  int n() const { return n_; }
  int64_t size() const { return static_cast<int64_t>(terms_.size()); }
  const PartitionedTerm& term(int64_t i) const { return terms_[i]; }
  int64_t find(const PartitionedTerm& t) const;
  const BasisIndex& w_basis() const { return w_; }
  Straightener& straightener() { return s_; }

  // Number of basis terms by piece count.
  std::map<int, int64_t> census() const;
  // Pivot preference for modular elimination: more pieces first, then among
  // two-piece terms the more balanced shapes.
  std::vector<int64_t> elimination_priority() const;

  // Coordinates of an arbitrary (closed) partitioned combination.
  SparseVec coordinates(const PartitionedVector& v);
  // Forgetting the partition: W x #W̃.
  SparseIntMatrix to_w();

  struct MergeProvenance {
    int64_t source;  // basis term with at least three pieces
    int piece_a;
    int piece_b;
  };
  // (Γ, U) - (Γ, U') for each basis term and each unordered pair of pieces.
  // Stops early when f returns false.
  void for_each_merging_relation(const std::function<bool(const SparseVec&, const MergeProvenance&)>& f);
  int64_t merging_count() const;
  // Materialized, deduplicated (up to sign) merging columns.
  SparseIntMatrix merging_relations(std::vector<MergeProvenance>* provenance = nullptr);

 private:
  int n_;
  Straightener& s_;
  BasisIndex w_;
  std::vector<PartitionedTerm> terms_;
  std::unordered_map<PartitionedTerm, int64_t, PartitionedTermHash> index_;
};

// Relations (Γ, {U1∪U2, U3∪U4}) - (Γ, {U1∪U3, U2∪U4}) for four odd closed sets.
struct OddExchange {
  CanonicalGraph graph;
  std::array<std::vector<int>, 4> sets;
  PartitionedVector relation() const;
};
// Empty for n < 12. For n = 12 every split into four triangles and each pair
// of pairings; larger n enumerates four odd sets with Γ planar on each set.
std::vector<OddExchange> odd_exchange_relations(int n);

struct MergeChainStep {
  int sign;  // +1 or -1
  PartitionedTerm finer;
  int piece_a;
  int piece_b;
  PartitionedVector relation() const;  // (Γ, finer) - (Γ, finer merged)
};
// Four merging relations whose signed sum is the odd exchange relation, when
// one of the sets holds more than one cycle of Γ; nullopt otherwise.
std::optional<std::vector<MergeChainStep>> odd_exchange_as_merging_chain(const OddExchange& x);

// Ṽ^(2): two-colored graphs with a closed partition.
struct ColoredPartitionedTerm {
  CanonicalGraph first;   // matching, first color
  CanonicalGraph second;  // matching, second color
  EvenPartition partition;
  friend auto operator<=>(const ColoredPartitionedTerm&, const ColoredPartitionedTerm&) = default;
};
using ColoredPartitionedVector = std::map<ColoredPartitionedTerm, Integer>;

// Splits an even-cycle degree-2 graph into two matchings by alternating
// colors around each cycle, starting at the smallest vertex.
std::pair<CanonicalGraph, CanonicalGraph> two_color(const CanonicalGraph& g);

struct MergingLift {
  ColoredPartitionedVector lift;
  int64_t expansion_terms = 0;  // even-cycle graphs produced from Γ
  bool in_p_kernel = false;     // maps to zero in V⊗V
  bool round_trip = false;      // maps back onto the merging relation in W̃
};
// Lifts (Γ, U) - (Γ, U') through Ṽ^(2). U' must be U with two pieces merged.
MergingLift lift_merging_relation(const CanonicalGraph& g, const EvenPartition& fine, const EvenPartition& coarse,
                                  Straightener& s);

struct PrimeRank {
  uint32_t p = 0;
  int64_t wtilde_to_w_rank = 0;
  int64_t q_dim = 0;
  int64_t merging_rank = 0;
  bool spans() const { return merging_rank == q_dim; }
};

struct MergeSpanReport {
  int n = 0;
  int64_t wtilde_dim = 0;
  int64_t w_dim = 0;
  int64_t merging_count = 0;
  std::vector<PrimeRank> primes;
  // Exact analysis over Z (small n only).
  std::optional<SpanReport> over_z;
};

// Merging rank versus dim Q_L over each prime. The elimination stops once the
// rank reaches dim Q_L. With `exact`, Q_L is also computed as a saturated
// kernel and the merging columns are analysed over Z.
MergeSpanReport merge_span_check(int n, const std::vector<uint32_t>& primes, bool exact = false);

// dim W′_L = #W̃ - rank(merging and odd exchange) over F_p.
struct WPrimeReport {
  int n = 0;
  uint32_t p = 0;
  int64_t wtilde_dim = 0;
  int64_t relation_rank = 0;
  int64_t wprime_dim = 0;
  int64_t w_dim = 0;
  bool isomorphic() const { return wprime_dim == w_dim; }
};
WPrimeReport wprime_dimension(int n, uint32_t p);

LatticeBasis q_kernel(int n);

struct SurjectivityReport {
  int n = 0;
  uint32_t p = 0;  // 0 = over Q
  int64_t vtilde_dim = 0;
  int64_t tensor_dim = 0;
  int64_t vtilde_rank = 0;
  int64_t wtilde_dim = 0;
  int64_t w_dim = 0;
  int64_t wtilde_rank = 0;
  bool surjective() const { return vtilde_rank == tensor_dim && wtilde_rank == w_dim; }
};
// Ranks of Ṽ^(2) -> V⊗V and W̃ -> W over F_p (p = 0: over Q).
SurjectivityReport surjectivity_check(int n, uint32_t p);

}  // namespace kempe
