#include "kempe/relspaces.hpp"

#include <algorithm>
#include <stdexcept>

namespace kempe {

namespace {

void regular_rec(int n, std::vector<int>& residual, std::vector<Edge>& edges, std::vector<CanonicalGraph>& out) {
  int v = 0;
  while (v < n && residual[v] == 0) ++v;
  if (v == n) {
    out.push_back(CanonicalGraph::from_edges(n, edges));
    return;
  }
  int available = 0;
  for (int w = v + 1; w < n; ++w) available += residual[w];
  if (available < residual[v]) return;
  // Edges leave v in nondecreasing order of the far endpoint.
  int start = v + 1;
  if (!edges.empty() && edges.back().lo == v) start = edges.back().hi;
  for (int w = start; w < n; ++w) {
    if (residual[w] == 0) continue;
    --residual[v];
    --residual[w];
    edges.emplace_back(v, w);
    regular_rec(n, residual, edges, out);
    edges.pop_back();
    ++residual[v];
    ++residual[w];
  }
}

SparseVec to_sparse_vec(const std::map<int64_t, Integer>& m) {
  SparseVec out;
  out.reserve(m.size());
  for (const auto& [i, c] : m)
    if (!c.is_zero()) out.emplace_back(i, c);
  return out;
}

CanonicalGraph relabel(const CanonicalGraph& g, const std::vector<int>& labels, int n, int& sign) {
  std::vector<DirectedEdge> edges;
  for (Edge e : g.edges()) edges.push_back({labels.at(e.lo), labels.at(e.hi)});
  auto sg = canonicalize_any(n, edges);
  if (!sg) throw std::invalid_argument("relabeling created a loop");
  sign = sg->sign;
  return sg->graph;
}

void check_disjoint(const std::vector<int>& a, const std::vector<int>& b, int n) {
  std::vector<char> used(n, 0);
  for (int x : a) {
    if (x < 0 || x >= n || used[x]) throw std::invalid_argument("outer product labels overlap or are out of range");
    used[x] = 1;
  }
  for (int x : b) {
    if (x < 0 || x >= n || used[x]) throw std::invalid_argument("outer product labels overlap or are out of range");
    used[x] = 1;
  }
}

CanonicalGraph unite(const CanonicalGraph& a, const CanonicalGraph& b) {
  return a.with_edges_added(b.edges());
}

}  // namespace

BasisIndex::BasisIndex(std::vector<CanonicalGraph> graphs) : graphs_(std::move(graphs)) {
  std::sort(graphs_.begin(), graphs_.end());
  graphs_.erase(std::unique(graphs_.begin(), graphs_.end()), graphs_.end());
  index_.reserve(graphs_.size());
  for (size_t i = 0; i < graphs_.size(); ++i) index_.emplace(graphs_[i], static_cast<int64_t>(i));
}

int64_t BasisIndex::find(const CanonicalGraph& g) const {
  auto it = index_.find(g);
  return it == index_.end() ? -1 : it->second;
}

std::vector<CanonicalGraph> regular_graphs(int n, int k) {
  if (n < 0 || n > kMaxVertices || k < 0 || (n * k) % 2 != 0 || n * k / 2 > kMaxEdges) {
    throw std::invalid_argument("no regular graphs of degree " + std::to_string(k) + " on " + std::to_string(n) +
                                " points");
  }
  std::vector<int> residual(n, k);
  std::vector<Edge> edges;
  std::vector<CanonicalGraph> out;
  regular_rec(n, residual, edges, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CanonicalGraph> matchings(int n) {
  if (n % 2 != 0) throw std::invalid_argument("matchings need an even number of points");
  return regular_graphs(n, 1);
}

std::vector<CanonicalGraph> planar_matchings(int n) {
  std::vector<CanonicalGraph> out;
  for (const CanonicalGraph& g : matchings(n))
    if (is_planar(g)) out.push_back(g);
  return out;
}

BasisIndex planar_basis(int n, int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("planar_basis supports degrees 1, 2 and 3");
  std::vector<CanonicalGraph> out;
  for (const CanonicalGraph& g : regular_graphs(n, k))
    if (is_planar(g)) out.push_back(g);
  return BasisIndex(std::move(out));
}

void TensorVector::add(const CanonicalGraph& a, const CanonicalGraph& b, const Integer& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.try_emplace({a, b}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

GraphVector<Integer> outer_multiply(const GraphVector<Integer>& v, const std::vector<int>& v_labels,
                                    const GraphVector<Integer>& w, const std::vector<int>& w_labels, int n) {
  check_disjoint(v_labels, w_labels, n);
  GraphVector<Integer> out;
  for (const auto& [g, c] : v.terms()) {
    int sg = 1;
    CanonicalGraph gg = relabel(g, v_labels, n, sg);
    for (const auto& [h, d] : w.terms()) {
      int sh = 1;
      CanonicalGraph hh = relabel(h, w_labels, n, sh);
      out.add(unite(gg, hh), (sg * sh > 0) ? c * d : -(c * d));
    }
  }
  return out;
}

TensorVector outer_multiply(const TensorVector& v, const std::vector<int>& v_labels, const TensorVector& w,
                            const std::vector<int>& w_labels, int n) {
  check_disjoint(v_labels, w_labels, n);
  TensorVector out;
  for (const auto& [vp, c] : v.terms) {
    int s1 = 1, s2 = 1;
    CanonicalGraph a1 = relabel(vp.first, v_labels, n, s1);
    CanonicalGraph a2 = relabel(vp.second, v_labels, n, s2);
    for (const auto& [wp, d] : w.terms) {
      int t1 = 1, t2 = 1;
      CanonicalGraph b1 = relabel(wp.first, w_labels, n, t1);
      CanonicalGraph b2 = relabel(wp.second, w_labels, n, t2);
      const int sign = s1 * s2 * t1 * t2;
      out.add(unite(a1, b1), unite(a2, b2), sign > 0 ? c * d : -(c * d));
    }
  }
  return out;
}

RelationSpaces::RelationSpaces(int n, Straightener& straightener)
    : n_(n), straightener_(straightener), v_(planar_basis(n, 1)), w_(planar_basis(n, 2)) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("relation spaces need an even number of points");
}

int64_t RelationSpaces::sym_index(int64_t i, int64_t j) const {
  if (i > j) std::swap(i, j);
  const int64_t m = v_dim();
  return i * m - i * (i - 1) / 2 + (j - i);
}

const SparseVec& RelationSpaces::v_coordinates(const CanonicalGraph& matching) {
  auto it = v_cache_.find(matching);
  if (it != v_cache_.end()) return it->second;
  std::map<int64_t, Integer> acc;
  const GraphVector<Integer> straight = straightener_.straighten_graph(matching);
  for (const auto& [g, c] : straight.terms()) {
    int64_t pos = v_.find(g);
    if (pos < 0) throw std::logic_error("straightened term is not a planar matching: " + g.to_string());
    acc[pos] += c;
  }
  return v_cache_.emplace(matching, to_sparse_vec(acc)).first->second;
}

SparseVec RelationSpaces::w_coordinates(const CanonicalGraph& g) {
  std::map<int64_t, Integer> acc;
  const GraphVector<Integer> straight = straightener_.straighten_graph(g);
  for (const auto& [h, c] : straight.terms()) {
    int64_t pos = w_.find(h);
    if (pos < 0) throw std::logic_error("straightened term is not a planar degree-2 graph: " + h.to_string());
    acc[pos] += c;
  }
  return to_sparse_vec(acc);
}

SparseVec RelationSpaces::tensor_coordinates(const TensorVector& t) {
  std::map<int64_t, Integer> acc;
  for (const auto& [pair, c] : t.terms) {
    const SparseVec a = v_coordinates(pair.first);
    const SparseVec& b = v_coordinates(pair.second);
    for (const auto& [i, x] : a)
      for (const auto& [j, y] : b) acc[tensor_index(i, j)] += c * x * y;
  }
  return to_sparse_vec(acc);
}

SparseIntMatrix RelationSpaces::mult_matrix() {
  SparseIntMatrix m(w_dim(), 0);
  for (int64_t i = 0; i < v_dim(); ++i)
    for (int64_t j = i; j < v_dim(); ++j) m.append_column(w_coordinates(unite(v_.graph(i), v_.graph(j))));
  return m;
}

SparseIntMatrix RelationSpaces::tensor_matrix() {
  std::vector<SparseVec> sym;
  for (int64_t i = 0; i < v_dim(); ++i)
    for (int64_t j = i; j < v_dim(); ++j) sym.push_back(w_coordinates(unite(v_.graph(i), v_.graph(j))));
  SparseIntMatrix m(w_dim(), 0);
  for (int64_t i = 0; i < v_dim(); ++i)
    for (int64_t j = 0; j < v_dim(); ++j) m.append_column(sym[sym_index(i, j)]);
  return m;
}

RelationKernels RelationSpaces::relation_kernels() {
  return {kernel_saturated(tensor_matrix()), kernel_saturated(mult_matrix())};
}

SparseIntMatrix RelationSpaces::symmetrize(const SparseIntMatrix& tensor_columns) const {
  if (tensor_columns.rows() != tensor_dim()) throw std::invalid_argument("columns are not in V⊗V coordinates");
  SparseIntMatrix out(sym_dim(), 0);
  for (const auto& col : tensor_columns.columns()) {
    std::map<int64_t, Integer> acc;
    for (const auto& [row, value] : col) acc[sym_index(row / v_dim(), row % v_dim())] += value;
    out.append_column(to_sparse_vec(acc));
  }
  return out;
}

TensorVector RelationSpaces::binomial_tensor(const BinomialProvenance& p) const {
  TensorVector t;
  t.add(unite(p.gamma, p.delta), unite(p.gamma_prime, p.delta_prime), 1);
  t.add(unite(p.gamma, p.delta_prime), unite(p.gamma_prime, p.delta), -1);
  return t;
}

BinomialFamily RelationSpaces::simple_binomials(bool simplest) {
  BinomialFamily family;
  family.columns = SparseIntMatrix(tensor_dim(), 0);
  std::map<SparseVec, int64_t> seen;
  const std::vector<CanonicalGraph> rest_matchings = matchings(n_ - 4);
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      for (int c = b + 1; c < n_; ++c)
        for (int d = c + 1; d < n_; ++d) {
          std::vector<int> rest;
          for (int x = 0; x < n_; ++x)
            if (x != a && x != b && x != c && x != d) rest.push_back(x);
          auto match = [&](std::initializer_list<std::pair<int, int>> pairs) {
            std::vector<Edge> e;
            for (auto [x, y] : pairs) e.emplace_back(x, y);
            return CanonicalGraph::from_edges(n_, e);
          };
          const std::array<CanonicalGraph, 3> deltas = {match({{a, b}, {c, d}}), match({{a, c}, {b, d}}),
                                                        match({{a, d}, {b, c}})};
          std::vector<CanonicalGraph> gammas;
          for (const CanonicalGraph& g : rest_matchings) {
            std::vector<Edge> e;
            for (Edge x : g.edges()) e.emplace_back(rest[x.lo], rest[x.hi]);
            gammas.push_back(CanonicalGraph::from_edges(n_, e));
          }
          for (int di = 0; di < 3; ++di)
            for (int dj = di + 1; dj < 3; ++dj)
              for (const CanonicalGraph& g : gammas)
                for (const CanonicalGraph& gp : gammas) {
                  if (simplest) {
                    int differing = 0;
                    for (Edge e : g.edges()) differing += gp.multiplicity(e) == 0;
                    if (differing != 2) continue;
                  }
                  ++family.raw_count;
                  BinomialProvenance p{{a, b, c, d}, deltas[di], deltas[dj], g, gp};
                  SparseVec v = tensor_coordinates(binomial_tensor(p));
                  if (v.empty()) continue;
                  if (v.front().second.sign() < 0)
                    for (auto& entry : v) entry.second = -entry.second;
                  if (seen.try_emplace(v, family.columns.cols()).second) {
                    family.columns.append_column(v);
                    family.provenance.push_back(p);
                  }
                }
        }
  return family;
}

SparseIntMatrix mult_matrix(int n) {
  Straightener s;
  return RelationSpaces(n, s).mult_matrix();
}

RelationKernels relation_kernels(int n) {
  Straightener s;
  return RelationSpaces(n, s).relation_kernels();
}

BinomialFamily simple_binomials(int n) {
  Straightener s;
  return RelationSpaces(n, s).simple_binomials(false);
}

BinomialFamily simplest_binomials(int n) {
  Straightener s;
  return RelationSpaces(n, s).simple_binomials(true);
}

BinomialProvenance displayed_relation_10() {
  // Circle order: top row left to right, then bottom row right to left.
  auto m = [](std::initializer_list<std::pair<int, int>> pairs) {
    std::vector<Edge> e;
    for (auto [x, y] : pairs) e.emplace_back(x, y);
    return CanonicalGraph::from_edges(10, e);
  };
  BinomialProvenance p;
  p.u = {3, 4, 5, 6};
  p.delta = m({{3, 6}, {4, 5}});
  p.delta_prime = m({{3, 4}, {5, 6}});
  p.gamma = m({{0, 1}, {2, 7}, {8, 9}});
  p.gamma_prime = m({{0, 9}, {1, 2}, {7, 8}});
  return p;
}

CubicReport cubic_report_n6() {
  const int n = 6;
  Straightener s;
  RelationSpaces spaces(n, s);
  const BasisIndex r3 = planar_basis(n, 3);
  const int64_t m = spaces.v_dim();
  std::map<std::array<int64_t, 3>, int64_t> monomial;
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = i; j < m; ++j)
      for (int64_t k = j; k < m; ++k) monomial.emplace(std::array<int64_t, 3>{i, j, k}, 0);
  int64_t next = 0;
  for (auto& [key, idx] : monomial) idx = next++;

  SparseIntMatrix cubic(r3.size(), 0);
  for (const auto& [key, idx] : monomial) {
    CanonicalGraph g = unite(unite(spaces.v_basis().graph(key[0]), spaces.v_basis().graph(key[1])),
                             spaces.v_basis().graph(key[2]));
    std::map<int64_t, Integer> acc;
    const GraphVector<Integer> straight = s.straighten_graph(g);
    for (const auto& [h, c] : straight.terms()) acc[r3.find(h)] += c;
    cubic.append_column(to_sparse_vec(acc));
  }

  CubicReport report;
  report.sym3_dim = static_cast<int64_t>(monomial.size());
  report.r3_dim = r3.size();
  const int64_t r3_rank = rank_over_q(DenseIntMatrix::from_sparse(cubic));
  report.i3_dim = report.sym3_dim - r3_rank;

  // V ⊗ I^(2) -> Sym³: multiply each quadratic relation by each basis vector.
  LatticeBasis i2 = kernel_saturated(spaces.mult_matrix());
  std::vector<std::pair<int64_t, int64_t>> pair_of_sym(spaces.sym_dim());
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = i; j < m; ++j) pair_of_sym[spaces.sym_index(i, j)] = {i, j};
  SparseIntMatrix image(report.sym3_dim, 0);
  for (int64_t l = 0; l < m; ++l) {
    for (int64_t t = 0; t < i2.rank(); ++t) {
      std::map<int64_t, Integer> acc;
      for (int64_t row = 0; row < i2.ambient(); ++row) {
        if (sgn(i2.basis.at(row, t)) == 0) continue;
        std::array<int64_t, 3> key = {l, pair_of_sym[row].first, pair_of_sym[row].second};
        std::sort(key.begin(), key.end());
        acc[monomial.at(key)] += Integer(i2.basis.at(row, t));
      }
      image.append_column(to_sparse_vec(acc));
    }
  }
  report.quadratic_image_rank = image.cols() == 0 ? 0 : rank_over_q(DenseIntMatrix::from_sparse(image));
  report.corank = report.i3_dim - report.quadratic_image_rank;
  return report;
}

int64_t cubic_corank_n6() { return cubic_report_n6().corank; }

}  // namespace kempe
