#include "kempe/partitions.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kempe/modular.hpp"

namespace kempe {

namespace {

// Set partitions of items 0..k-1 (k <= 32) into blocks of even total weight,
// each block given as a bit mask. Blocks appear in order of smallest item.
void block_rec(uint32_t remaining, const std::vector<int>& weight, std::vector<uint32_t>& cur,
               std::vector<std::vector<uint32_t>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  const int u = std::countr_zero(remaining);
  const uint32_t rest = remaining & ~(1u << u);
  for (uint32_t s = rest;; s = (s - 1) & rest) {
    int total = weight[u];
    for (uint32_t b = s; b != 0; b &= b - 1) total += weight[std::countr_zero(b)];
    if (total % 2 == 0) {
      cur.push_back(s | (1u << u));
      block_rec(rest & ~s, weight, cur, out);
      cur.pop_back();
    }
    if (s == 0) break;
  }
}

std::vector<std::vector<uint32_t>> even_blocks(const std::vector<int>& weight) {
  std::vector<std::vector<uint32_t>> out;
  std::vector<uint32_t> cur;
  const int k = static_cast<int>(weight.size());
  block_rec(k == 32 ? ~0u : ((1u << k) - 1), weight, cur, out);
  return out;
}

std::vector<int> mask_members(uint32_t mask) {
  std::vector<int> out;
  for (uint32_t b = mask; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

std::vector<int> united(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a);
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> lift_edges(const CanonicalGraph& local, const std::vector<int>& piece) {
  std::vector<Edge> out;
  out.reserve(local.edge_count());
  for (Edge e : local.edges()) out.emplace_back(piece[e.lo], piece[e.hi]);
  return out;
}

CanonicalGraph unite(const CanonicalGraph& a, const CanonicalGraph& b) { return a.with_edges_added(b.edges()); }

SparseVec to_sparse_vec(const std::map<int64_t, Integer>& m) {
  SparseVec out;
  out.reserve(m.size());
  for (const auto& [i, c] : m)
    if (!c.is_zero()) out.emplace_back(i, c);
  return out;
}

std::vector<ModEntry> reduce_mod(const SparseVec& v, uint32_t p) {
  std::vector<ModEntry> out;
  out.reserve(v.size());
  for (const auto& [i, c] : v) {
    const uint32_t r = c.mod(p);
    if (r != 0) out.emplace_back(i, r);
  }
  return out;
}

const BasisIndex& planar_piece_basis(int size, int degree) {
  static std::map<std::pair<int, int>, BasisIndex> cache;
  auto it = cache.find({size, degree});
  if (it == cache.end()) it = cache.emplace(std::make_pair(size, degree), planar_basis(size, degree)).first;
  return it->second;
}

// Calls f on every choice of one option per factor, with edges united and
// coefficients multiplied.
using EdgeOption = std::pair<std::vector<Edge>, Integer>;
void for_each_product(const std::vector<std::vector<EdgeOption>>& factors, size_t i, std::vector<Edge>& edges,
                      const Integer& coeff, const std::function<void(const std::vector<Edge>&, const Integer&)>& f) {
  if (i == factors.size()) {
    f(edges, coeff);
    return;
  }
  for (const auto& [e, c] : factors[i]) {
    const size_t mark = edges.size();
    edges.insert(edges.end(), e.begin(), e.end());
    for_each_product(factors, i + 1, edges, coeff * c, f);
    edges.resize(mark);
  }
}

}  // namespace

EvenPartition EvenPartition::make(int n, std::vector<std::vector<int>> pieces) {
  if (n < 0 || n > kMaxVertices) throw std::invalid_argument("partition size out of range");
  if (pieces.size() < 2) throw std::invalid_argument("an even partition needs at least two pieces");
  std::vector<char> seen(n, 0);
  for (auto& piece : pieces) {
    if (piece.empty() || piece.size() % 2 != 0) throw std::invalid_argument("partition pieces must have even size");
    std::sort(piece.begin(), piece.end());
    for (int v : piece) {
      if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("partition pieces overlap or are out of range");
      seen[v] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw std::invalid_argument("partition pieces do not cover every vertex");
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  EvenPartition out;
  out.n_ = n;
  out.pieces_ = std::move(pieces);
  for (size_t i = 0; i < out.pieces_.size(); ++i)
    for (int v : out.pieces_[i]) out.label_[v] = static_cast<uint8_t>(i);
  return out;
}

EvenPartition EvenPartition::merged(int i, int j) const {
  if (size() < 3) throw std::invalid_argument("merging would leave a single piece");
  if (i == j || i < 0 || j < 0 || i >= size() || j >= size()) throw std::invalid_argument("bad piece indices");
  std::vector<std::vector<int>> pieces;
  for (int k = 0; k < size(); ++k)
    if (k != i && k != j) pieces.push_back(pieces_[k]);
  pieces.push_back(united(pieces_[i], pieces_[j]));
  return make(n_, std::move(pieces));
}

std::string EvenPartition::to_string() const {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < pieces_.size(); ++i) {
    os << (i ? ",[" : "[");
    for (size_t j = 0; j < pieces_[i].size(); ++j) os << (j ? "," : "") << pieces_[i][j];
    os << ']';
  }
  os << ']';
  return os.str();
}

bool is_closed(const CanonicalGraph& g, const EvenPartition& p) {
  if (g.n() != p.n()) return false;
  for (Edge e : g.edges())
    if (p.piece_of(e.lo) != p.piece_of(e.hi)) return false;
  return true;
}

std::vector<EvenPartition> closed_partitions(const CanonicalGraph& g) {
  const CycleDecomposition cd = cycle_decomposition(g);
  std::vector<int> weight;
  for (const Cycle& c : cd.cycles) weight.push_back(c.length());
  std::vector<EvenPartition> out;
  if (weight.size() > 32) throw std::invalid_argument("too many cycles");
  for (const auto& blocks : even_blocks(weight)) {
    if (blocks.size() < 2) continue;
    std::vector<std::vector<int>> pieces;
    for (uint32_t b : blocks) {
      std::vector<int> piece;
      for (int c : mask_members(b)) piece.insert(piece.end(), cd.cycles[c].vertices.begin(), cd.cycles[c].vertices.end());
      pieces.push_back(std::move(piece));
    }
    out.push_back(EvenPartition::make(g.n(), std::move(pieces)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EvenPartition> even_partitions(int n) {
  if (n < 0 || n > kMaxVertices) throw std::invalid_argument("partition size out of range");
  std::vector<EvenPartition> out;
  if (n == 0) return out;
  for (const auto& blocks : even_blocks(std::vector<int>(n, 1))) {
    if (blocks.size() < 2) continue;
    std::vector<std::vector<int>> pieces;
    for (uint32_t b : blocks) pieces.push_back(mask_members(b));
    out.push_back(EvenPartition::make(n, std::move(pieces)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

size_t PartitionedTermHash::operator()(const PartitionedTerm& t) const {
  size_t h = t.graph.hash();
  for (int v = 0; v < t.partition.n(); ++v) h = h * 1099511628211ull + static_cast<size_t>(t.partition.piece_of(v) + 1);
  return h;
}

void add_term(PartitionedVector& v, const PartitionedTerm& t, const Integer& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = v.try_emplace(t, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) v.erase(it);
  }
}

CanonicalGraph restrict_to_piece(const CanonicalGraph& g, const std::vector<int>& piece) {
  std::array<int, kMaxVertices> pos;
  pos.fill(-1);
  for (size_t i = 0; i < piece.size(); ++i) pos[piece[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (Edge e : g.edges()) {
    const bool lo = pos[e.lo] >= 0;
    const bool hi = pos[e.hi] >= 0;
    if (lo != hi) throw std::invalid_argument("partition is not closed: edge " + e.to_string() + " leaves a piece");
    if (lo) edges.emplace_back(pos[e.lo], pos[e.hi]);
  }
  return CanonicalGraph::from_edges(static_cast<int>(piece.size()), edges);
}

PartitionedVector straighten_in_pieces(const PartitionedTerm& t, Straightener& s) {
  if (!is_closed(t.graph, t.partition)) throw std::invalid_argument("partition is not closed for the graph");
  std::vector<std::vector<EdgeOption>> factors;
  for (const auto& piece : t.partition.pieces()) {
    const CanonicalGraph local = restrict_to_piece(t.graph, piece);
    std::vector<EdgeOption> options;
    if (is_planar(local)) {
      options.emplace_back(lift_edges(local, piece), Integer(1));
    } else {
      const Expansion e = s.expand(local);
      for (const PlanarTerm& term : e) options.emplace_back(lift_edges(s.planar_graph(term.id), piece), Integer(term.coeff));
    }
    factors.push_back(std::move(options));
  }
  PartitionedVector out;
  std::vector<Edge> edges;
  for_each_product(factors, 0, edges, Integer(1), [&](const std::vector<Edge>& e, const Integer& c) {
    add_term(out, PartitionedTerm{CanonicalGraph::from_edges(t.graph.n(), e), t.partition}, c);
  });
  return out;
}

WTilde::WTilde(int n, Straightener& s) : n_(n), s_(s), w_(planar_basis(n, 2)) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("W̃ needs an even number of points, at least 4");
  for (const EvenPartition& p : even_partitions(n)) {
    std::vector<std::vector<EdgeOption>> factors;
    for (const auto& piece : p.pieces()) {
      std::vector<EdgeOption> options;
      for (const CanonicalGraph& local : planar_piece_basis(static_cast<int>(piece.size()), 2).graphs())
        options.emplace_back(lift_edges(local, piece), Integer(1));
      factors.push_back(std::move(options));
    }
    std::vector<Edge> edges;
    for_each_product(factors, 0, edges, Integer(1), [&](const std::vector<Edge>& e, const Integer&) {
      terms_.push_back(PartitionedTerm{CanonicalGraph::from_edges(n, e), p});
    });
  }
  index_.reserve(terms_.size());
  for (size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], static_cast<int64_t>(i));
}

int64_t WTilde::find(const PartitionedTerm& t) const {
  auto it = index_.find(t);
  return it == index_.end() ? -1 : it->second;
}

std::map<int, int64_t> WTilde::census() const {
  std::map<int, int64_t> out;
  for (const PartitionedTerm& t : terms_) ++out[t.partition.size()];
  return out;
}

std::vector<int64_t> WTilde::elimination_priority() const {
  std::vector<int64_t> out;
  out.reserve(terms_.size());
  for (const PartitionedTerm& t : terms_) {
    const int k = t.partition.size();
    size_t largest = 0;
    for (const auto& piece : t.partition.pieces()) largest = std::max(largest, piece.size());
    out.push_back(static_cast<int64_t>(kMaxVertices - k) * 64 + (k == 2 ? static_cast<int64_t>(largest) : 0));
  }
  return out;
}

SparseVec WTilde::coordinates(const PartitionedVector& v) {
  std::map<int64_t, Integer> acc;
  for (const auto& [term, c] : v) {
    const PartitionedVector straight = straighten_in_pieces(term, s_);
    for (const auto& [basis_term, d] : straight) {
      const int64_t i = find(basis_term);
      if (i < 0) throw std::logic_error("term missing from the W̃ basis: " + basis_term.graph.to_string());
      acc[i] += c * d;
    }
  }
  return to_sparse_vec(acc);
}

SparseIntMatrix WTilde::to_w() {
  SparseIntMatrix m(w_.size(), 0);
  for (const PartitionedTerm& t : terms_) {
    std::map<int64_t, Integer> acc;
    if (is_planar(t.graph)) {
      acc[w_.find(t.graph)] += 1;
    } else {
      const Expansion e = s_.expand(t.graph);
      for (const PlanarTerm& term : e) {
        const int64_t i = w_.find(s_.planar_graph(term.id));
        if (i < 0) throw std::logic_error("straightened term is not a planar degree-2 graph");
        acc[i] += term.coeff;
      }
    }
    m.append_column(to_sparse_vec(acc));
  }
  return m;
}

void WTilde::for_each_merging_relation(
    const std::function<bool(const SparseVec&, const MergeProvenance&)>& f) {
  for (size_t i = 0; i < terms_.size(); ++i) {
    const PartitionedTerm& t = terms_[i];
    const int k = t.partition.size();
    if (k < 3) continue;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        const PartitionedVector coarse = straighten_in_pieces({t.graph, t.partition.merged(a, b)}, s_);
        std::map<int64_t, Integer> acc;
        acc[static_cast<int64_t>(i)] += 1;
        for (const auto& [term, c] : coarse) {
          const int64_t j = find(term);
          if (j < 0) throw std::logic_error("merged term missing from the W̃ basis");
          acc[j] -= c;
        }
        if (!f(to_sparse_vec(acc), MergeProvenance{static_cast<int64_t>(i), a, b})) return;
      }
  }
}

int64_t WTilde::merging_count() const {
  int64_t out = 0;
  for (const PartitionedTerm& t : terms_) {
    const int64_t k = t.partition.size();
    if (k >= 3) out += k * (k - 1) / 2;
  }
  return out;
}

SparseIntMatrix WTilde::merging_relations(std::vector<MergeProvenance>* provenance) {
  SparseIntMatrix m(size(), 0);
  std::map<SparseVec, int64_t> seen;
  for_each_merging_relation([&](const SparseVec& col, const MergeProvenance& prov) {
    SparseVec v = col;
    if (v.empty()) return true;
    if (v.front().second.sign() < 0)
      for (auto& entry : v) entry.second = -entry.second;
    if (seen.try_emplace(v, m.cols()).second) {
      m.append_column(v);
      if (provenance) provenance->push_back(prov);
    }
    return true;
  });
  return m;
}

PartitionedVector OddExchange::relation() const {
  for (const auto& u : sets)
    if (u.size() % 2 != 1) throw std::invalid_argument("odd exchange sets must have odd size");
  const int n = graph.n();
  const EvenPartition p = EvenPartition::make(n, {united(sets[0], sets[1]), united(sets[2], sets[3])});
  const EvenPartition q = EvenPartition::make(n, {united(sets[0], sets[2]), united(sets[1], sets[3])});
  if (!is_closed(graph, p) || !is_closed(graph, q)) throw std::invalid_argument("odd exchange sets are not closed");
  PartitionedVector v;
  add_term(v, {graph, p}, 1);
  add_term(v, {graph, q}, -1);
  return v;
}

namespace {

void odd_sets_rec(uint32_t remaining, std::vector<uint32_t>& cur, std::vector<std::vector<uint32_t>>& out) {
  if (remaining == 0) {
    if (cur.size() == 4) out.push_back(cur);
    return;
  }
  if (cur.size() == 4) return;
  const int u = std::countr_zero(remaining);
  const uint32_t rest = remaining & ~(1u << u);
  for (uint32_t s = rest;; s = (s - 1) & rest) {
    const int size = std::popcount(s) + 1;
    if (size % 2 == 1 && size >= 3) {
      cur.push_back(s | (1u << u));
      odd_sets_rec(rest & ~s, cur, out);
      cur.pop_back();
    }
    if (s == 0) break;
  }
}

}  // namespace

std::vector<OddExchange> odd_exchange_relations(int n) {
  std::vector<OddExchange> out;
  if (n < 12) return out;
  if (n > kMaxVertices) throw std::invalid_argument("too many points");
  std::vector<std::vector<uint32_t>> splits;
  std::vector<uint32_t> cur;
  odd_sets_rec((1u << n) - 1, cur, splits);
  static constexpr std::array<std::array<int, 4>, 3> kOrders = {{{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 3, 1}}};
  for (const auto& split : splits) {
    std::array<std::vector<int>, 4> sets;
    std::vector<std::vector<EdgeOption>> factors;
    for (int i = 0; i < 4; ++i) {
      sets[i] = mask_members(split[i]);
      std::vector<EdgeOption> options;
      for (const CanonicalGraph& local : planar_piece_basis(static_cast<int>(sets[i].size()), 2).graphs())
        options.emplace_back(lift_edges(local, sets[i]), Integer(1));
      factors.push_back(std::move(options));
    }
    std::vector<Edge> edges;
    for_each_product(factors, 0, edges, Integer(1), [&](const std::vector<Edge>& e, const Integer&) {
      const CanonicalGraph g = CanonicalGraph::from_edges(n, e);
      for (const auto& order : kOrders)
        out.push_back(OddExchange{g, {sets[order[0]], sets[order[1]], sets[order[2]], sets[order[3]]}});
    });
  }
  return out;
}

PartitionedVector MergeChainStep::relation() const {
  PartitionedVector v;
  add_term(v, finer, 1);
  add_term(v, {finer.graph, finer.partition.merged(piece_a, piece_b)}, -1);
  return v;
}

std::optional<std::vector<MergeChainStep>> odd_exchange_as_merging_chain(const OddExchange& x) {
  const CanonicalGraph& g = x.graph;
  const int n = g.n();
  std::vector<char> seen(n, 0);
  for (const auto& u : x.sets) {
    if (u.size() % 2 != 1) throw std::invalid_argument("odd exchange sets must have odd size");
    for (int v : u) {
      if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("odd exchange sets overlap or are out of range");
      seen[v] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw std::invalid_argument("odd exchange sets do not cover every vertex");
  const CycleDecomposition cd = cycle_decomposition(g);
  std::array<int, kMaxVertices> set_of{};
  for (int i = 0; i < 4; ++i)
    for (int v : x.sets[i]) set_of[v] = i;
  for (Edge e : g.edges())
    if (set_of[e.lo] != set_of[e.hi]) throw std::invalid_argument("odd exchange sets are not closed");

  static constexpr std::array<int, 4> kPartnerFirst = {1, 0, 3, 2};
  static constexpr std::array<int, 4> kPartnerSecond = {2, 3, 0, 1};
  for (int i = 0; i < 4; ++i) {
    std::vector<int> cycles;
    for (int v : x.sets[i])
      if (std::find(cycles.begin(), cycles.end(), cd.cycle_of_vertex[v]) == cycles.end())
        cycles.push_back(cd.cycle_of_vertex[v]);
    if (cycles.size() < 2) continue;
    std::sort(cycles.begin(), cycles.end());
    int odd_cycle = -1;
    for (int c : cycles)
      if (cd.cycles[c].odd()) {
        odd_cycle = c;
        break;
      }
    std::vector<int> odd_part = cd.cycles[odd_cycle].vertices;
    std::sort(odd_part.begin(), odd_part.end());
    std::vector<int> set_i = x.sets[i];
    std::sort(set_i.begin(), set_i.end());
    std::vector<int> even_part;
    std::set_difference(set_i.begin(), set_i.end(), odd_part.begin(), odd_part.end(), std::back_inserter(even_part));

    const int a = kPartnerFirst[i];
    const int b = kPartnerSecond[i];
    const int c = 6 - i - a - b;
    const auto& ua = x.sets[a];
    const auto& ub = x.sets[b];
    const auto& uc = x.sets[c];
    const EvenPartition pa = EvenPartition::make(n, {even_part, united(odd_part, ua), united(ub, uc)});
    const EvenPartition pc = EvenPartition::make(n, {even_part, united(odd_part, ub), united(ua, uc)});
    const int v0 = even_part.front();
    const int w0 = odd_part.front();
    std::vector<MergeChainStep> chain;
    chain.push_back({-1, {g, pa}, pa.piece_of(v0), pa.piece_of(w0)});
    chain.push_back({+1, {g, pa}, pa.piece_of(w0), pa.piece_of(ub.front())});
    chain.push_back({-1, {g, pc}, pc.piece_of(w0), pc.piece_of(ua.front())});
    chain.push_back({+1, {g, pc}, pc.piece_of(v0), pc.piece_of(w0)});
    return chain;
  }
  return std::nullopt;
}

std::pair<CanonicalGraph, CanonicalGraph> two_color(const CanonicalGraph& g) {
  const CycleDecomposition cd = cycle_decomposition(g);
  std::vector<Edge> first;
  std::vector<Edge> second;
  for (const Cycle& c : cd.cycles) {
    if (c.odd()) throw std::invalid_argument("two-coloring needs even cycles only");
    for (int k = 0; k < c.length(); ++k) (k % 2 == 0 ? first : second).push_back(g.edge(c.slots[k]));
  }
  return {CanonicalGraph::from_edges(g.n(), first), CanonicalGraph::from_edges(g.n(), second)};
}

namespace {

// Splices pairs of odd cycles sharing a piece until every cycle is even.
void expand_to_even(const CanonicalGraph& h, const Integer& c, const EvenPartition& p,
                    std::map<CanonicalGraph, Integer>& out) {
  const CycleDecomposition cd = cycle_decomposition(h);
  for (int piece = 0; piece < p.size(); ++piece) {
    std::vector<int> odd;
    for (size_t k = 0; k < cd.cycles.size(); ++k)
      if (cd.cycles[k].odd() && p.piece_of(cd.cycles[k].vertices.front()) == piece) odd.push_back(static_cast<int>(k));
    if (odd.size() < 2) continue;
    const PlueckerTerms t = pluecker_split(h, cd.cycles[odd[0]].slots[0], cd.cycles[odd[1]].slots[0]);
    expand_to_even(t.first.graph, t.first.sign > 0 ? c : -c, p, out);
    expand_to_even(t.second.graph, t.second.sign > 0 ? c : -c, p, out);
    return;
  }
  out[h] += c;
}

PartitionedVector merging_difference(const CanonicalGraph& g, const EvenPartition& fine, const EvenPartition& coarse,
                                     const Integer& c, Straightener& s) {
  PartitionedVector out;
  for (const auto& [t, d] : straighten_in_pieces({g, fine}, s)) add_term(out, t, c * d);
  for (const auto& [t, d] : straighten_in_pieces({g, coarse}, s)) add_term(out, t, -(c * d));
  return out;
}

}  // namespace

MergingLift lift_merging_relation(const CanonicalGraph& g, const EvenPartition& fine, const EvenPartition& coarse,
                                  Straightener& s) {
  if (!is_closed(g, fine)) throw std::invalid_argument("partition is not closed for the graph");
  bool merging_pair = false;
  for (int a = 0; a < fine.size() && !merging_pair; ++a)
    for (int b = a + 1; b < fine.size() && !merging_pair; ++b) merging_pair = fine.size() >= 3 && fine.merged(a, b) == coarse;
  if (!merging_pair) throw std::invalid_argument("the coarse partition does not merge two pieces of the fine one");

  std::map<CanonicalGraph, Integer> even;
  expand_to_even(g, Integer(1), fine, even);
  MergingLift out;
  // Image in V⊗V keyed by pairs of planar matching ids.
  std::map<std::pair<uint32_t, uint32_t>, Integer> image;
  auto add_image = [&](const CanonicalGraph& a, const CanonicalGraph& b, const Integer& c) {
    const Expansion ea = s.expand(a);
    const Expansion eb = s.expand(b);
    for (const PlanarTerm& x : ea)
      for (const PlanarTerm& y : eb) image[{x.id, y.id}] += c * Integer(x.coeff) * Integer(y.coeff);
  };
  PartitionedVector back;
  for (const auto& [h, c] : even) {
    if (c.is_zero()) continue;
    ++out.expansion_terms;
    const auto [first, second] = two_color(h);
    for (const auto& [p, sign] : {std::make_pair(fine, 1), std::make_pair(coarse, -1)}) {
      const Integer value = sign > 0 ? c : -c;
      auto [it, inserted] = out.lift.try_emplace(ColoredPartitionedTerm{first, second, p}, value);
      if (!inserted) it->second += value;
      add_image(first, second, value);
    }
    for (const auto& [t, d] : merging_difference(unite(first, second), fine, coarse, c, s)) add_term(back, t, d);
  }
  std::erase_if(out.lift, [](const auto& kv) { return kv.second.is_zero(); });
  out.in_p_kernel = std::all_of(image.begin(), image.end(), [](const auto& kv) { return kv.second.is_zero(); });
  out.round_trip = back == merging_difference(g, fine, coarse, Integer(1), s);
  return out;
}

LatticeBasis q_kernel(int n) {
  Straightener s;
  WTilde w(n, s);
  return kernel_saturated(w.to_w());
}

MergeSpanReport merge_span_check(int n, const std::vector<uint32_t>& primes, bool exact) {
  Straightener s;
  WTilde w(n, s);
  const SparseIntMatrix to_w = w.to_w();
  MergeSpanReport report;
  report.n = n;
  report.wtilde_dim = w.size();
  report.w_dim = w.w_basis().size();
  report.merging_count = w.merging_count();
  const std::vector<int64_t> priority = w.elimination_priority();
  std::vector<ModularEliminator> elims;
  for (uint32_t p : primes) {
    PrimeRank r;
    r.p = p;
    r.wtilde_to_w_rank = rank_mod_p(to_w, p);
    r.q_dim = w.size() - r.wtilde_to_w_rank;
    report.primes.push_back(r);
    elims.emplace_back(w.size(), p, priority);
  }
  if (!primes.empty()) {
    w.for_each_merging_relation([&](const SparseVec& v, const WTilde::MergeProvenance&) {
      bool done = true;
      for (size_t k = 0; k < elims.size(); ++k) {
        if (elims[k].rank() >= report.primes[k].q_dim) continue;
        elims[k].insert(reduce_mod(v, elims[k].prime()));
        if (elims[k].rank() < report.primes[k].q_dim) done = false;
      }
      return !done;
    });
    for (size_t k = 0; k < elims.size(); ++k) report.primes[k].merging_rank = elims[k].rank();
  }
  if (exact) report.over_z = span_analysis(w.merging_relations(), kernel_saturated(to_w));
  return report;
}

WPrimeReport wprime_dimension(int n, uint32_t p) {
  Straightener s;
  WTilde w(n, s);
  WPrimeReport report;
  report.n = n;
  report.p = p;
  report.wtilde_dim = w.size();
  report.w_dim = w.w_basis().size();
  // Both relation families lie in Q_L, so the rank is capped by dim Q_L.
  const int64_t q_dim = w.size() - rank_mod_p(w.to_w(), p);
  ModularEliminator elim(w.size(), p, w.elimination_priority());
  w.for_each_merging_relation([&](const SparseVec& v, const WTilde::MergeProvenance&) {
    elim.insert(reduce_mod(v, p));
    return elim.rank() < q_dim;
  });
  if (elim.rank() < q_dim) {
    for (const OddExchange& x : odd_exchange_relations(n)) {
      elim.insert(reduce_mod(w.coordinates(x.relation()), p));
      if (elim.rank() >= q_dim) break;
    }
  }
  report.relation_rank = elim.rank();
  report.wprime_dim = w.size() - elim.rank();
  return report;
}

namespace {

constexpr uint32_t kLargePrime = 2147483647u;

// Rank of a column stream: over F_p, or over Q when p = 0 (a full rank modulo
// a large prime certifies full rank over Q; otherwise exact elimination).
class StreamRank {
 public:
  StreamRank(int64_t rows, uint32_t p)
      : rows_(rows), p_(p), elim_(rows, p == 0 ? kLargePrime : p), kept_(rows, 0) {}
  void add(const SparseVec& v) {
    if (p_ == 0) kept_.append_column(v);
    if (elim_.rank() < rows_) elim_.insert(reduce_mod(v, elim_.prime()));
  }
  int64_t rank() {
    if (p_ != 0 || elim_.rank() == rows_) return elim_.rank();
    kept_.set_shape(rows_, kept_.cols());
    return rank_over_q(DenseIntMatrix::from_sparse(kept_));
  }

 private:
  int64_t rows_;
  uint32_t p_;
  ModularEliminator elim_;
  SparseIntMatrix kept_;
};

}  // namespace

SurjectivityReport surjectivity_check(int n, uint32_t p) {
  Straightener s;
  RelationSpaces rs(n, s);
  WTilde w(n, s);
  SurjectivityReport report;
  report.n = n;
  report.p = p;
  report.tensor_dim = rs.tensor_dim();
  report.wtilde_dim = w.size();
  report.w_dim = rs.w_dim();

  StreamRank vt(rs.tensor_dim(), p);
  for (const EvenPartition& part : even_partitions(n)) {
    std::vector<std::vector<EdgeOption>> first;
    for (const auto& piece : part.pieces()) {
      std::vector<EdgeOption> options;
      for (const CanonicalGraph& m : planar_piece_basis(static_cast<int>(piece.size()), 1).graphs())
        options.emplace_back(lift_edges(m, piece), Integer(1));
      first.push_back(std::move(options));
    }
    std::vector<CanonicalGraph> colorings;
    std::vector<Edge> edges;
    for_each_product(first, 0, edges, Integer(1), [&](const std::vector<Edge>& e, const Integer&) {
      colorings.push_back(CanonicalGraph::from_edges(n, e));
    });
    // Pairs of per-piece matchings are pairs of global products.
    for (const CanonicalGraph& a : colorings)
      for (const CanonicalGraph& b : colorings) {
        TensorVector t;
        t.add(a, b, 1);
        vt.add(rs.tensor_coordinates(t));
        ++report.vtilde_dim;
      }
  }
  report.vtilde_rank = vt.rank();

  StreamRank wt(rs.w_dim(), p);
  const SparseIntMatrix to_w = w.to_w();
  for (const auto& col : to_w.columns()) wt.add(col);
  report.wtilde_rank = wt.rank();
  return report;
}

}  // namespace kempe
