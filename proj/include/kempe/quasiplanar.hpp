#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kempe/graph.hpp"
#include "kempe/graph_vector.hpp"
#include "kempe/integer.hpp"
#include "kempe/straighten.hpp"

namespace kempe {

// Allowable quasi-planar graphs grouped by associated planar graph. A graph
// with two distinguished doubled edges is listed under each associated graph.
struct QuasiPlanarCensus {
  int n = 0;
  int64_t planar_count = 0;
  int64_t allowable_quasi_planar = 0;  // planar ones included
  std::map<CanonicalGraph, std::vector<CanonicalGraph>> classes;  // every planar graph is a key
  std::vector<CanonicalGraph> empty_classes;
  // Smallest rotation of each empty class, one per orbit under i -> i+1 mod n.
  std::vector<CanonicalGraph> empty_orbits;

  int64_t classes_with_representative() const;
};

// Throws std::invalid_argument for odd n or n < 6.
QuasiPlanarCensus enumerate_quasi_planar(int n);

// Relabels vertex v as v + k mod n.
CanonicalGraph rotate_graph(const CanonicalGraph& g, int k);

// Level of a graph in the filtration: planar_level for planar graphs, level()
// for quasi-planar ones.
int filtration_level(const CanonicalGraph& g);

// I1 at a distinguished doubled edge: X_Γ = sign * 2 X_Γ′ + (graphs with more
// cycles). The certificate straightens X_Γ - sign * 2 X_Γ′ and checks that
// every planar term has level above that of Γ.
struct TwoComparison {
  CanonicalGraph graph;
  CanonicalGraph associated;
  Edge distinguished;
  int level = 0;
  int sign = 0;
  GraphVector<Integer> remainder;
  int remainder_min_level = -1;  // -1 when the remainder is zero
  bool certified = false;
  ReductionTrace trace;
};

// Throws std::invalid_argument for planar or non-quasi-planar input, or when
// `choice` is not distinguished.
TwoComparison two_comparison(const CanonicalGraph& g, std::optional<Edge> choice = std::nullopt);

// X′_Γ as a combination of allowable quasi-planar graphs using only allowable
// Plücker moves (directly or inside identity derivations), with coefficients
// in Z[1/2].
struct ReductionResult {
  GraphVector<Rational> terms;
  ReductionTrace trace;  // left empty when reduce() is asked for no trace
  std::map<std::string, int64_t> clauses;  // clause name -> number of nodes using it
  int64_t nodes = 0;
  int64_t moves = 0;
  int64_t forbidden_moves = 0;
};

class QuasiPlanarReducer {
 public:
  QuasiPlanarReducer();
  ~QuasiPlanarReducer();
  QuasiPlanarReducer(const QuasiPlanarReducer&) = delete;
  QuasiPlanarReducer& operator=(const QuasiPlanarReducer&) = delete;

  // Throws std::invalid_argument for forbidden input or n < 10, and
  // std::runtime_error if no clause applies.
  ReductionResult reduce(const CanonicalGraph& g, bool with_trace = true);
  size_t memo_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ReductionResult reduce_to_quasi_planar(const CanonicalGraph& g);

struct ReductionAudit {
  bool sound = false;                 // straightened output equals straightened input
  bool quasi_planar_support = false;  // every output graph is allowable quasi-planar
  bool dyadic = false;                // denominators are powers of two
  int64_t forbidden_moves = 0;
  bool ok() const { return sound && quasi_planar_support && dyadic && forbidden_moves == 0; }
};
ReductionAudit audit_reduction(const CanonicalGraph& g, const ReductionResult& r, Straightener& s);

// Moves the distinguished doubled edge of a level-1 or odd level-2
// quasi-planar graph onto ce, for a path c-d-e of Γ that is not a 3-cycle:
// I2 on (b, c, d, e, f), then I1 at the old doubled edge of the second term.
struct DoubledEdgeMove {
  CanonicalGraph from;
  CanonicalGraph to;
  Rational factor;  // X_Γ = factor * X_Γ′ modulo higher level
  GraphVector<Integer> remainder;  // straighten(X_Γ - factor X_Γ′), scaled to integers by 2
  int remainder_min_level = -1;
  bool certified = false;
  ReductionTrace trace;
};
DoubledEdgeMove move_doubled_edge(const CanonicalGraph& g, int c, int d, int e);

// Two allowable quasi-planar graphs of level 2 whose two non-doubled cycles
// are odd and the doubled edge crosses one of them.
bool is_odd_level_two(const CanonicalGraph& g);

struct GradedSpanReport {
  int n = 0;
  int64_t classes = 0;
  int64_t checked = 0;
  int64_t verified = 0;
  int64_t two_comparisons = 0;
  int64_t moves = 0;
  std::vector<CanonicalGraph> failures;  // associated planar graphs of unverified classes
};
// For each class: members of level >= 3 (and the non-odd level-2 ones) via
// two_comparison; level-1 and odd level-2 members must be connected by
// certified doubled-edge moves. `stride` > 1 checks every stride-th class.
GradedSpanReport graded_span_check(int n, int stride = 1);

struct WPrimeIsoReport {
  int n = 0;
  int64_t w_dim = 0;
  int64_t wtilde_dim = 0;
  int64_t quasi_planar_classes = 0;
  struct Row {
    uint32_t p = 0;  // 0 = over Q
    int64_t w2_dim = 0;  // W″
    int64_t w1_dim = 0;  // W′
  };
  std::vector<Row> rows;
};
// Over Q only for n <= 8 (exact span analysis); over F_p for every listed prime.
WPrimeIsoReport wprime_iso_check(int n, const std::vector<uint32_t>& primes, bool over_q);

}  // namespace kempe
