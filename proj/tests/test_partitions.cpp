#include <gtest/gtest.h>

#include <random>
#include <set>

#include "kempe/modular.hpp"
#include "kempe/partitions.hpp"

using namespace kempe;

namespace {

CanonicalGraph graph(int n, std::initializer_list<std::pair<int, int>> edges) {
  std::vector<Edge> e;
  for (auto [a, b] : edges) e.emplace_back(a, b);
  return CanonicalGraph::from_edges(n, e);
}

// Set partitions of 0..n-1 as restricted growth strings, kept when every
// block is even and there are at least two blocks.
void growth_rec(int n, std::vector<int>& label, int blocks, std::vector<std::vector<std::vector<int>>>& out) {
  const int i = static_cast<int>(label.size());
  if (i == n) {
    std::vector<std::vector<int>> pieces(blocks);
    for (int v = 0; v < n; ++v) pieces[label[v]].push_back(v);
    if (blocks < 2) return;
    for (const auto& p : pieces)
      if (p.size() % 2 != 0) return;
    out.push_back(pieces);
    return;
  }
  for (int b = 0; b <= blocks; ++b) {
    label.push_back(b);
    growth_rec(n, label, std::max(blocks, b + 1), out);
    label.pop_back();
  }
}

std::vector<std::vector<std::vector<int>>> brute_even_partitions(int n) {
  std::vector<int> label;
  std::vector<std::vector<std::vector<int>>> out;
  growth_rec(n, label, 0, out);
  return out;
}

int64_t bell(int k) {
  std::vector<std::vector<int64_t>> s(k + 1, std::vector<int64_t>(k + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= i; ++j) s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  int64_t total = 0;
  for (int j = 0; j <= k; ++j) total += s[k][j];
  return total;
}

// Value of a W̃ combination after forgetting partitions, in the W basis.
SparseVec forget(WTilde& w, const SparseVec& v) {
  std::map<int64_t, Integer> acc;
  for (const auto& [j, c] : v) {
    const GraphVector<Integer> straight = w.straightener().straighten_graph(w.term(j).graph);
    for (const auto& [h, d] : straight.terms()) acc[w.w_basis().find(h)] += c * d;
  }
  SparseVec out;
  for (const auto& [i, c] : acc)
    if (!c.is_zero()) out.emplace_back(i, c);
  return out;
}

CanonicalGraph random_degree_two(int n, std::mt19937_64& rng) {
  const std::vector<CanonicalGraph> all = all_degree_two_graphs(n);
  return all[std::uniform_int_distribution<size_t>(0, all.size() - 1)(rng)];
}

PartitionedVector straightened(const PartitionedVector& v, Straightener& s) {
  PartitionedVector out;
  for (const auto& [t, c] : v)
    for (const auto& [u, d] : straighten_in_pieces(t, s)) add_term(out, u, c * d);
  return out;
}

}  // namespace

TEST(EvenPartition, CanonicalFormAndValidation) {
  const EvenPartition p = EvenPartition::make(6, {{5, 2}, {4, 0, 1, 3}});
  EXPECT_EQ(p.to_string(), "[[0,1,3,4],[2,5]]");
  EXPECT_EQ(p.piece_of(2), 1);
  EXPECT_EQ(p.piece_of(3), 0);
  EXPECT_THROW(EvenPartition::make(6, {{0, 1, 2, 3, 4, 5}}), std::invalid_argument);
  EXPECT_THROW(EvenPartition::make(6, {{0, 1, 2}, {3, 4, 5}}), std::invalid_argument);
  EXPECT_THROW(EvenPartition::make(6, {{0, 1}, {1, 2, 3, 4}}), std::invalid_argument);
  EXPECT_THROW(EvenPartition::make(6, {{0, 1}, {2, 3}}), std::invalid_argument);
  const EvenPartition q = EvenPartition::make(6, {{0, 5}, {1, 2}, {3, 4}});
  EXPECT_EQ(q.merged(2, 0), EvenPartition::make(6, {{0, 3, 4, 5}, {1, 2}}));
  EXPECT_THROW(p.merged(0, 1), std::invalid_argument);
}

TEST(EvenPartition, EnumerationMatchesGrowthStrings) {
  for (int n = 2; n <= 10; n += 2) {
    std::set<EvenPartition> expected;
    for (auto pieces : brute_even_partitions(n)) expected.insert(EvenPartition::make(n, pieces));
    const std::vector<EvenPartition> got = even_partitions(n);
    EXPECT_EQ(std::set<EvenPartition>(got.begin(), got.end()), expected) << "n=" << n;
    EXPECT_EQ(got.size(), expected.size());
  }
  EXPECT_EQ(even_partitions(6).size(), 30u);
}

TEST(ClosedPartitions, FiveDoubledEdgesGiveFiftyOne) {
  const CanonicalGraph g = graph(10, {{0, 1}, {0, 1}, {2, 3}, {2, 3}, {4, 5}, {4, 5}, {6, 7}, {6, 7}, {8, 9}, {8, 9}});
  EXPECT_EQ(static_cast<int64_t>(closed_partitions(g).size()), bell(5) - 1);
  EXPECT_EQ(closed_partitions(g).size(), 51u);
}

TEST(ClosedPartitions, SingleCycleHasNone) {
  std::vector<Edge> e;
  for (int i = 0; i < 10; ++i) e.emplace_back(i, (i + 1) % 10);
  EXPECT_TRUE(closed_partitions(CanonicalGraph::from_edges(10, e)).empty());
}

TEST(ClosedPartitions, OddCyclesMustPair) {
  const CanonicalGraph g = graph(10, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {6, 7}, {7, 8}, {8, 9}, {6, 9}});
  const auto got = closed_partitions(g);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], EvenPartition::make(10, {{0, 1, 2, 3, 4, 5}, {6, 7, 8, 9}}));
}

TEST(ClosedPartitions, AgreesWithFilteredEnumeration) {
  for (int n : {6, 8}) {
    const std::vector<EvenPartition> all = even_partitions(n);
    for (const CanonicalGraph& g : all_degree_two_graphs(n)) {
      std::vector<EvenPartition> expected;
      for (const EvenPartition& p : all)
        if (is_closed(g, p)) expected.push_back(p);
      EXPECT_EQ(closed_partitions(g), expected) << g.to_string();
    }
  }
}

TEST(WTilde, CensusIsSumOfPieceProducts) {
  for (int n : {6, 8}) {
    Straightener s;
    WTilde w(n, s);
    int64_t expected = 0;
    for (const EvenPartition& p : even_partitions(n)) {
      int64_t prod = 1;
      for (const auto& piece : p.pieces()) prod *= planar_basis(static_cast<int>(piece.size()), 2).size();
      expected += prod;
    }
    EXPECT_EQ(w.size(), expected) << "n=" << n;
    const EvenPartition edge_split = [&] {
      std::vector<int> rest;
      for (int v = 2; v < n; ++v) rest.push_back(v);
      return EvenPartition::make(n, {{0, 1}, rest});
    }();
    int64_t block = 0;
    for (int64_t i = 0; i < w.size(); ++i) block += w.term(i).partition == edge_split;
    EXPECT_EQ(block, planar_basis(n - 2, 2).size());
    for (int64_t i = 0; i < w.size(); ++i) {
      const PartitionedTerm& t = w.term(i);
      ASSERT_TRUE(is_closed(t.graph, t.partition));
      for (const auto& piece : t.partition.pieces()) ASSERT_TRUE(is_planar(restrict_to_piece(t.graph, piece)));
      ASSERT_EQ(w.find(t), i);
    }
  }
  Straightener s;
  EXPECT_EQ(WTilde(6, s).size(), 60);
}

TEST(WTilde, ToWAgreesWithStraighteningEveryTerm) {
  Straightener s;
  WTilde w(6, s);
  const auto cols = w.to_w().columns();
  for (int64_t i = 0; i < w.size(); ++i) {
    const GraphVector<Integer> oracle = straighten(GraphVector<Integer>::single(w.term(i).graph, Integer(1)));
    SparseVec expected;
    std::map<int64_t, Integer> acc;
    for (const auto& [h, c] : oracle.terms()) acc[w.w_basis().find(h)] += c;
    for (const auto& [r, c] : acc) expected.emplace_back(r, c);
    EXPECT_EQ(cols[i], expected) << w.term(i).graph.to_string();
  }
}

TEST(WTilde, ToWSampledAtEight) {
  Straightener s;
  WTilde w(8, s);
  const auto cols = w.to_w().columns();
  std::mt19937_64 rng(8);
  for (int k = 0; k < 200; ++k) {
    const int64_t i = std::uniform_int_distribution<int64_t>(0, w.size() - 1)(rng);
    EXPECT_EQ(cols[i], forget(w, {{i, Integer(1)}}));
  }
}

TEST(WTilde, SurjectiveOntoWAwayFromTwo) {
  for (int n : {6, 8}) {
    const SurjectivityReport r = surjectivity_check(n, 3);
    EXPECT_EQ(r.wtilde_rank, r.w_dim) << "n=" << n;
    EXPECT_EQ(r.vtilde_rank, r.tensor_dim) << "n=" << n;
    EXPECT_TRUE(r.surjective());
  }
  const SurjectivityReport q = surjectivity_check(6, 0);
  EXPECT_TRUE(q.surjective());
  EXPECT_EQ(q.wtilde_dim, 60);
  const SurjectivityReport two = surjectivity_check(6, 2);
  EXPECT_LE(two.vtilde_rank, two.tensor_dim);
  EXPECT_LE(two.wtilde_rank, two.w_dim);
}

TEST(Merging, ColumnsLieInTheKernelOfForgetting) {
  for (int n : {6, 8}) {
    Straightener s;
    WTilde w(n, s);
    int64_t count = 0;
    w.for_each_merging_relation([&](const SparseVec& v, const WTilde::MergeProvenance& p) {
      EXPECT_TRUE(forget(w, v).empty()) << w.term(p.source).partition.to_string();
      EXPECT_GE(w.term(p.source).partition.size(), 3);
      ++count;
      return true;
    });
    EXPECT_EQ(count, w.merging_count());
  }
}

TEST(Merging, DedupedCountAtSixIsStable) {
  Straightener s;
  WTilde w(6, s);
  std::vector<WTilde::MergeProvenance> prov;
  const SparseIntMatrix m = w.merging_relations(&prov);
  // Fifteen three-piece partitions of doubled edges, three pairs each.
  EXPECT_EQ(w.merging_count(), 45);
  EXPECT_EQ(m.cols(), static_cast<int64_t>(prov.size()));
  EXPECT_EQ(m.cols(), 45);
  EXPECT_EQ(w.merging_relations().to_text(), m.to_text());
}

TEST(Merging, ChainsAreAssociative) {
  std::mt19937_64 rng(17);
  for (int n : {8, 10}) {
    Straightener s;
    const std::vector<EvenPartition> parts = even_partitions(n);
    std::vector<EvenPartition> four;
    for (const EvenPartition& p : parts)
      if (p.size() >= 4) four.push_back(p);
    for (int trial = 0; trial < 40; ++trial) {
      const EvenPartition& p = four[std::uniform_int_distribution<size_t>(0, four.size() - 1)(rng)];
      // Random graph closed for p: a random degree-2 graph on each piece.
      std::vector<Edge> edges;
      for (const auto& piece : p.pieces()) {
        const CanonicalGraph local = random_degree_two(static_cast<int>(piece.size()), rng);
        for (Edge e : local.edges()) edges.emplace_back(piece[e.lo], piece[e.hi]);
      }
      const CanonicalGraph g = CanonicalGraph::from_edges(n, edges);
      const std::vector<int>& u1 = p.piece(0);
      const std::vector<int>& u2 = p.piece(1);
      const std::vector<int>& u3 = p.piece(2);
      // U -> merge(1,2) -> merge(12,3) versus U -> merge(2,3) -> merge(1,23).
      const EvenPartition a1 = p.merged(0, 1);
      const EvenPartition a2 = a1.merged(a1.piece_of(u1[0]), a1.piece_of(u3[0]));
      const EvenPartition b1 = p.merged(1, 2);
      const EvenPartition b2 = b1.merged(b1.piece_of(u2[0]), b1.piece_of(u1[0]));
      ASSERT_EQ(a2, b2);
      PartitionedVector lhs;
      add_term(lhs, {g, p}, 1);
      add_term(lhs, {g, a1}, -1);
      add_term(lhs, {g, a1}, 1);
      add_term(lhs, {g, a2}, -1);
      PartitionedVector step_a1;
      add_term(step_a1, {g, p}, 1);
      add_term(step_a1, {g, a1}, -1);
      PartitionedVector step_a2;
      add_term(step_a2, {g, a1}, 1);
      add_term(step_a2, {g, a2}, -1);
      PartitionedVector step_b1;
      add_term(step_b1, {g, p}, 1);
      add_term(step_b1, {g, b1}, -1);
      PartitionedVector step_b2;
      add_term(step_b2, {g, b1}, 1);
      add_term(step_b2, {g, b2}, -1);
      PartitionedVector sum_a = straightened(step_a1, s);
      for (const auto& [t, c] : straightened(step_a2, s)) add_term(sum_a, t, c);
      PartitionedVector sum_b = straightened(step_b1, s);
      for (const auto& [t, c] : straightened(step_b2, s)) add_term(sum_b, t, c);
      EXPECT_EQ(sum_a, sum_b) << p.to_string();
      EXPECT_EQ(sum_a, straightened(lhs, s));
    }
  }
}

TEST(MergeSpan, ReportsAtSixAndEight) {
  const MergeSpanReport six = merge_span_check(6, {3, 5, 7}, true);
  EXPECT_EQ(six.wtilde_dim, 60);
  EXPECT_EQ(six.w_dim, 15);
  for (const PrimeRank& r : six.primes) {
    EXPECT_EQ(r.wtilde_to_w_rank, 15);
    EXPECT_EQ(r.q_dim, 45);
    EXPECT_LE(r.merging_rank, r.q_dim);
  }
  ASSERT_TRUE(six.over_z.has_value());
  EXPECT_TRUE(six.over_z->contained);
  EXPECT_EQ(six.over_z->target_rank, 45);
  const MergeSpanReport eight = merge_span_check(8, {3});
  ASSERT_EQ(eight.primes.size(), 1u);
  EXPECT_EQ(eight.primes[0].wtilde_to_w_rank, 91);
  EXPECT_LE(eight.primes[0].merging_rank, eight.primes[0].q_dim);
}

TEST(QKernel, DimensionIsRankNullity) {
  Straightener s;
  WTilde w(6, s);
  const LatticeBasis q = q_kernel(6);
  EXPECT_EQ(q.rank(), w.size() - w.w_basis().size());
}

TEST(Lift, EvenCyclesColorDirectly) {
  Straightener s;
  const CanonicalGraph g = graph(8, {{0, 1}, {0, 1}, {2, 3}, {3, 4}, {4, 5}, {2, 5}, {6, 7}, {6, 7}});
  const EvenPartition fine = EvenPartition::make(8, {{0, 1}, {2, 3, 4, 5}, {6, 7}});
  const MergingLift lift = lift_merging_relation(g, fine, fine.merged(0, 2), s);
  EXPECT_EQ(lift.expansion_terms, 1);
  EXPECT_EQ(lift.lift.size(), 2u);
  EXPECT_TRUE(lift.in_p_kernel);
  EXPECT_TRUE(lift.round_trip);
  const auto [a, b] = two_color(g);
  EXPECT_EQ(a.regular_degree(), 1);
  EXPECT_EQ(b.regular_degree(), 1);
  EXPECT_EQ(a.with_edges_added(b.edges()), g);
}

TEST(Lift, OddCyclesInOnePieceExpandToEvenCycles) {
  Straightener s;
  const CanonicalGraph g = graph(10, {{0, 1}, {1, 2}, {0, 2}, {3, 5}, {4, 5}, {3, 4}, {6, 7}, {6, 7}, {8, 9}, {8, 9}});
  const EvenPartition fine = EvenPartition::make(10, {{0, 1, 2, 3, 4, 5}, {6, 7}, {8, 9}});
  const MergingLift lift = lift_merging_relation(g, fine, fine.merged(0, 1), s);
  EXPECT_GE(lift.expansion_terms, 2);
  EXPECT_TRUE(lift.in_p_kernel);
  EXPECT_TRUE(lift.round_trip);
  for (const auto& [t, c] : lift.lift) {
    EXPECT_EQ(t.first.regular_degree(), 1);
    EXPECT_EQ(t.second.regular_degree(), 1);
    const CycleDecomposition cd = cycle_decomposition(t.first.with_edges_added(t.second.edges()));
    EXPECT_EQ(cd.odd_count(), 0);
  }
  EXPECT_THROW(lift_merging_relation(g, fine, fine, s), std::invalid_argument);
  const EvenPartition open = EvenPartition::make(10, {{0, 1, 2, 6}, {3, 4, 5, 7}, {8, 9}});
  EXPECT_THROW(lift_merging_relation(g, open, open.merged(0, 1), s), std::invalid_argument);
}

TEST(Lift, RandomMergingRelationsRoundTrip) {
  std::mt19937_64 rng(5);
  for (int n : {8, 10}) {
    Straightener s;
    const std::vector<CanonicalGraph> graphs = all_degree_two_graphs(n);
    int checked = 0;
    while (checked < 30) {
      const CanonicalGraph& g = graphs[std::uniform_int_distribution<size_t>(0, graphs.size() - 1)(rng)];
      std::vector<EvenPartition> closed;
      for (const EvenPartition& p : closed_partitions(g))
        if (p.size() >= 3) closed.push_back(p);
      if (closed.empty()) continue;
      const EvenPartition& p = closed[std::uniform_int_distribution<size_t>(0, closed.size() - 1)(rng)];
      const int a = std::uniform_int_distribution<int>(0, p.size() - 1)(rng);
      const int b = (a + 1 + std::uniform_int_distribution<int>(0, p.size() - 2)(rng)) % p.size();
      const MergingLift lift = lift_merging_relation(g, p, p.merged(a, b), s);
      EXPECT_TRUE(lift.in_p_kernel) << g.to_string();
      EXPECT_TRUE(lift.round_trip) << g.to_string() << " " << p.to_string();
      ++checked;
    }
  }
}

TEST(OddExchange, NoneBelowTwelve) {
  EXPECT_TRUE(odd_exchange_relations(10).empty());
  EXPECT_TRUE(odd_exchange_relations(8).empty());
}

TEST(OddExchange, FourTrianglesAtTwelve) {
  const std::vector<OddExchange> all = odd_exchange_relations(12);
  // 12! / (3!^4 4!) splits into triangles, three pairs of pairings each.
  EXPECT_EQ(all.size(), 15400u * 3);
  const std::array<std::vector<int>, 4> sets = {std::vector<int>{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}};
  std::vector<Edge> edges;
  for (const auto& u : sets) {
    edges.emplace_back(u[0], u[1]);
    edges.emplace_back(u[1], u[2]);
    edges.emplace_back(u[0], u[2]);
  }
  const OddExchange x{CanonicalGraph::from_edges(12, edges), sets};
  bool found = false;
  for (const OddExchange& y : all) found = found || (y.graph == x.graph && y.relation() == x.relation());
  EXPECT_TRUE(found);
  const PartitionedVector rel = x.relation();
  ASSERT_EQ(rel.size(), 2u);
  EXPECT_EQ(rel.begin()->first.graph, std::next(rel.begin())->first.graph);
  EXPECT_FALSE(odd_exchange_as_merging_chain(x).has_value());
}

TEST(OddExchange, ChainAtFourteenTelescopes) {
  // U1 = triangle plus doubled edge, the rest triangles.
  const std::array<std::vector<int>, 4> sets = {std::vector<int>{0, 1, 2, 3, 4}, {5, 6, 7}, {8, 9, 10}, {11, 12, 13}};
  const CanonicalGraph g = graph(14, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {3, 4}, {5, 6}, {6, 7}, {5, 7}, {8, 9},
                                      {9, 10}, {8, 10}, {11, 12}, {12, 13}, {11, 13}});
  Straightener s;
  for (const auto& order : std::vector<std::array<int, 4>>{{0, 1, 2, 3}, {1, 0, 2, 3}, {2, 3, 0, 1}, {3, 2, 1, 0}}) {
    const OddExchange x{g, {sets[order[0]], sets[order[1]], sets[order[2]], sets[order[3]]}};
    const auto chain = odd_exchange_as_merging_chain(x);
    ASSERT_TRUE(chain.has_value());
    ASSERT_EQ(chain->size(), 4u);
    PartitionedVector sum;
    for (const MergeChainStep& step : *chain) {
      EXPECT_EQ(step.finer.partition.size(), 3);
      for (const auto& [t, c] : step.relation()) add_term(sum, t, step.sign > 0 ? c : -c);
    }
    EXPECT_EQ(sum, x.relation());
    EXPECT_EQ(straightened(sum, s), straightened(x.relation(), s));
  }
  const std::array<std::vector<int>, 4> single = {std::vector<int>{0, 1, 2, 3, 4}, {5, 6, 7}, {8, 9, 10},
                                                  {11, 12, 13}};
  std::vector<Edge> edges;
  for (const auto& u : single)
    for (size_t i = 0; i < u.size(); ++i) edges.emplace_back(u[i], u[(i + 1) % u.size()]);
  EXPECT_FALSE(odd_exchange_as_merging_chain({CanonicalGraph::from_edges(14, edges), single}).has_value());
}

TEST(WPrime, DimensionBoundsAtSmallN) {
  for (int n : {6, 8}) {
    const WPrimeReport r = wprime_dimension(n, 3);
    EXPECT_GE(r.wprime_dim, r.w_dim) << "n=" << n;
    EXPECT_EQ(r.wprime_dim, r.wtilde_dim - r.relation_rank);
  }
}
