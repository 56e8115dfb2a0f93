#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kempe/graph.hpp"
#include "kempe/graph_vector.hpp"
#include "kempe/lattice.hpp"
#include "kempe/sparse_matrix.hpp"
#include "kempe/straighten.hpp"

namespace kempe {

// Ordered set of graphs with positions (sorted lexicographically by edge list).
class BasisIndex {
 public:
  BasisIndex() = default;
  explicit BasisIndex(std::vector<CanonicalGraph> graphs);

  int64_t size() const { return static_cast<int64_t>(graphs_.size()); }
  const CanonicalGraph& graph(int64_t i) const { return graphs_[i]; }
  const std::vector<CanonicalGraph>& graphs() const { return graphs_; }
  // Position of g, or -1.
  int64_t find(const CanonicalGraph& g) const;

 private:
  std::vector<CanonicalGraph> graphs_;
  std::unordered_map<CanonicalGraph, int64_t, CanonicalGraphHash> index_;
};

// Loopless k-regular multigraphs on n points, sorted. Throws if n*k is odd.
std::vector<CanonicalGraph> regular_graphs(int n, int k);
// Throws std::invalid_argument for odd n.
std::vector<CanonicalGraph> matchings(int n);
std::vector<CanonicalGraph> planar_matchings(int n);
// Planar graphs of regular degree k in {1, 2, 3}.
BasisIndex planar_basis(int n, int k);

using SparseVec = std::vector<std::pair<int64_t, Integer>>;  // sorted by index

// V⊗V element as a combination of ordered pairs of graphs.
struct TensorVector {
  std::map<std::pair<CanonicalGraph, CanonicalGraph>, Integer> terms;

  void add(const CanonicalGraph& a, const CanonicalGraph& b, const Integer& c);
  friend bool operator==(const TensorVector& x, const TensorVector& y) = default;
};

// Outer product: graphs of v and w are relabeled by the given maps into
// 0..n-1 and united. Throws std::invalid_argument if the images overlap.
GraphVector<Integer> outer_multiply(const GraphVector<Integer>& v, const std::vector<int>& v_labels,
                                    const GraphVector<Integer>& w, const std::vector<int>& w_labels, int n);
TensorVector outer_multiply(const TensorVector& v, const std::vector<int>& v_labels, const TensorVector& w,
                            const std::vector<int>& w_labels, int n);

// Where a binomial generator came from. Vertex sets are sorted label lists.
struct BinomialProvenance {
  std::array<int, 4> u{};
  CanonicalGraph delta;        // matching on U (embedded in L)
  CanonicalGraph delta_prime;
  CanonicalGraph gamma;        // matching on L \ U
  CanonicalGraph gamma_prime;
};

struct BinomialFamily {
  int64_t raw_count = 0;             // before removing zeros and duplicates
  SparseIntMatrix columns;           // V⊗V coordinates, one column per distinct generator
  std::vector<BinomialProvenance> provenance;  // parallel to columns
};

struct RelationKernels {
  LatticeBasis b;   // in V⊗V coordinates
  LatticeBasis i2;  // in Sym² coordinates
};

// Coordinate systems for degree one and two at a fixed n: V has the planar
// matchings as a basis, W the planar degree-2 graphs, V⊗V the ordered pairs
// (i, j) at i*m + j and Sym² the pairs i <= j in lexicographic order.
class RelationSpaces {
 public:
  RelationSpaces(int n, Straightener& straightener);

  int n() const { return n_; }
  const BasisIndex& v_basis() const { return v_; }
  const BasisIndex& w_basis() const { return w_; }
  int64_t v_dim() const { return v_.size(); }
  int64_t w_dim() const { return w_.size(); }
  int64_t tensor_dim() const { return v_dim() * v_dim(); }
  int64_t sym_dim() const { return v_dim() * (v_dim() + 1) / 2; }
  int64_t tensor_index(int64_t i, int64_t j) const { return i * v_dim() + j; }
  int64_t sym_index(int64_t i, int64_t j) const;

  // Straightened coordinates of a matching (in V) or a degree-2 graph (in W).
  const SparseVec& v_coordinates(const CanonicalGraph& matching);
  SparseVec w_coordinates(const CanonicalGraph& g);
  SparseVec tensor_coordinates(const TensorVector& t);

  SparseIntMatrix mult_matrix();    // W x Sym²
  SparseIntMatrix tensor_matrix();  // W x V⊗V
  RelationKernels relation_kernels();
  // Image of V⊗V columns in Sym².
  SparseIntMatrix symmetrize(const SparseIntMatrix& tensor_columns) const;

  // Simple binomial relations; with `simplest`, only those whose two
  // matchings off U form one 4-cycle plus doubled edges.
  BinomialFamily simple_binomials(bool simplest = false);
  TensorVector binomial_tensor(const BinomialProvenance& p) const;

 private:
  int n_;
  Straightener& straightener_;
  BasisIndex v_;
  BasisIndex w_;
  std::unordered_map<CanonicalGraph, SparseVec, CanonicalGraphHash> v_cache_;
};

SparseIntMatrix mult_matrix(int n);
RelationKernels relation_kernels(int n);
BinomialFamily simple_binomials(int n);
BinomialFamily simplest_binomials(int n);

// The 10-point simple binomial relation drawn as two colored pictures
// (4-cycles from Δ, Δ′ and 6-cycles from Γ, Γ′).
BinomialProvenance displayed_relation_10();

struct CubicReport {
  int64_t sym3_dim = 0;
  int64_t r3_dim = 0;
  int64_t i3_dim = 0;
  int64_t quadratic_image_rank = 0;
  int64_t corank = 0;
};

// Degree-3 relations at n = 6 not generated by quadratic ones, counted over Q.
CubicReport cubic_report_n6();
int64_t cubic_corank_n6();

}  // namespace kempe
