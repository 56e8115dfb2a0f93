#include <gtest/gtest.h>

#include <random>
#include <set>

#include "kempe/quasiplanar.hpp"
#include "kempe/relspaces.hpp"

using namespace kempe;

namespace {

CanonicalGraph graph(int n, std::initializer_list<std::pair<int, int>> edges) {
  std::vector<Edge> e;
  for (auto [a, b] : edges) e.emplace_back(a, b);
  return CanonicalGraph::from_edges(n, e);
}

std::vector<int> cycle_type(const CanonicalGraph& g) {
  std::vector<int> out;
  for (const Cycle& c : cycle_decomposition(g).cycles) out.push_back(c.length());
  std::sort(out.begin(), out.end());
  return out;
}

// Smallest planar level in a straightened integer combination.
int lowest_level(const GraphVector<Integer>& v) {
  int out = -1;
  for (const auto& [g, c] : v.terms()) {
    EXPECT_TRUE(is_planar(g));
    int l = planar_level(g);
    if (out < 0 || l < out) out = l;
  }
  return out;
}

// The triangle {0,3,6} with special vertex 3 skewers the square 1-2-4-5;
// a third triangle sits on 7,8,9.
CanonicalGraph triangle_and_square() {
  return graph(10, {{0, 3}, {0, 6}, {3, 6}, {1, 2}, {1, 5}, {2, 4}, {4, 5}, {7, 8}, {8, 9}, {7, 9}});
}

}  // namespace

TEST(QuasiPlanarCensus, SixVerticesMissOnlyConsecutiveTriangles) {
  QuasiPlanarCensus c = enumerate_quasi_planar(6);
  EXPECT_EQ(c.planar_count, 15);
  // A class with only triangles has no non-planar preimage (a doubled edge
  // and the cycle it crosses merge into at least four vertices), and the
  // planar graph itself is forbidden when it is two odd cycles.
  std::set<CanonicalGraph> expected;
  const BasisIndex planar = planar_basis(6, 2);
  for (const CanonicalGraph& p : planar.graphs()) {
    if (cycle_type(p) == std::vector<int>{3, 3}) expected.insert(p);
  }
  EXPECT_EQ(std::set<CanonicalGraph>(c.empty_classes.begin(), c.empty_classes.end()), expected);
  EXPECT_EQ(c.empty_classes.size(), 3u);
  ASSERT_EQ(c.empty_orbits.size(), 1u);
  EXPECT_EQ(c.empty_orbits[0], graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}));
  EXPECT_EQ(c.classes_with_representative(), 12);
}

TEST(QuasiPlanarCensus, EveryPlanarGraphRepresentedAtEightAndTen) {
  for (int n : {8, 10}) {
    QuasiPlanarCensus c = enumerate_quasi_planar(n);
    EXPECT_EQ(c.planar_count, planar_basis(n, 2).size());
    EXPECT_TRUE(c.empty_classes.empty()) << n;
    EXPECT_EQ(c.classes_with_representative(), c.planar_count);
  }
}

TEST(QuasiPlanarCensus, MembersShareLevelWithTheirPlanarGraph) {
  QuasiPlanarCensus c = enumerate_quasi_planar(8);
  int64_t listed = 0;
  for (const auto& [p, members] : c.classes) {
    for (const CanonicalGraph& m : members) {
      ++listed;
      EXPECT_TRUE(is_allowable(m));
      EXPECT_EQ(level(m), planar_level(p)) << m.to_string();
      if (m == p) continue;
      QuasiPlanarStatus st = quasi_planar_status(m);
      bool found = false;
      for (Edge e : st.distinguished) found = found || associated_planar(m, e) == p;
      EXPECT_TRUE(found) << m.to_string();
    }
  }
  EXPECT_GE(listed, c.allowable_quasi_planar);
}

TEST(QuasiPlanarCensus, RejectsSmallOrOddN) {
  EXPECT_THROW(enumerate_quasi_planar(4), std::invalid_argument);
  EXPECT_THROW(enumerate_quasi_planar(7), std::invalid_argument);
}

TEST(RotateGraph, OrbitOfConsecutiveTriangles) {
  CanonicalGraph g = graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  EXPECT_EQ(rotate_graph(g, 6), g);
  EXPECT_EQ(rotate_graph(g, 3), g);
  EXPECT_NE(rotate_graph(g, 1), g);
  EXPECT_EQ(rotate_graph(g, 1), graph(6, {{1, 2}, {2, 3}, {1, 3}, {4, 5}, {0, 5}, {0, 4}}));
}

TEST(TwoComparison, LeftFigureGraph) {
  CanonicalGraph g = graph(8, {{4, 7}, {4, 7}, {0, 5}, {5, 6}, {0, 6}, {1, 2}, {2, 3}, {1, 3}});
  TwoComparison tc = two_comparison(g);
  EXPECT_EQ(tc.distinguished, Edge(4, 7));
  EXPECT_NE(tc.sign, 0);
  EXPECT_TRUE(tc.certified);
  EXPECT_EQ(tc.associated, associated_planar(g));
  // The comparison lives in W, so the I1 derivation may use moves that are
  // forbidden in W′ (here two odd cycles among three).
  EXPECT_GT(tc.trace.move_count(), 0);
}

TEST(TwoComparison, ExhaustiveAtEight) {
  int64_t checked = 0;
  for (const CanonicalGraph& g : all_degree_two_graphs(8)) {
    QuasiPlanarStatus st = quasi_planar_status(g);
    if (st.kind != QuasiPlanarKind::QuasiPlanar || !is_allowable(g)) continue;
    std::set<int> signs;
    for (Edge e : st.distinguished) {
      TwoComparison tc = two_comparison(g, e);
      ++checked;
      ASSERT_TRUE(tc.certified) << g.to_string();
      // Oracle: unmemoized straightening of X_Γ; the associated planar graph
      // carries 2·sign and everything else sits strictly higher.
      GraphVector<Integer> x = straighten(GraphVector<Integer>::single(g, Integer(1)));
      EXPECT_EQ(x.coefficient(tc.associated, Integer(0)), Integer(2 * tc.sign)) << g.to_string();
      GraphVector<Integer> rem = x;
      rem.add(tc.associated, Integer(-2 * tc.sign));
      EXPECT_EQ(rem, tc.remainder);
      int low = lowest_level(rem);
      EXPECT_TRUE(low < 0 || low > level(g)) << g.to_string();
      signs.insert(tc.sign);
    }
    EXPECT_FALSE(signs.count(0));
  }
  EXPECT_EQ(checked, 204);
}

TEST(TwoComparison, RejectsPlanarAndNonDistinguished) {
  CanonicalGraph planar = graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  EXPECT_THROW(two_comparison(planar), std::invalid_argument);
  CanonicalGraph g = graph(8, {{4, 7}, {4, 7}, {0, 5}, {5, 6}, {0, 6}, {1, 2}, {2, 3}, {1, 3}});
  EXPECT_THROW(two_comparison(g, Edge(0, 5)), std::invalid_argument);
}

TEST(DoubledEdgeMove, LevelOneClassesAtEight) {
  QuasiPlanarCensus c = enumerate_quasi_planar(8);
  int64_t moves = 0;
  for (const auto& [p, members] : c.classes) {
    if (planar_level(p) != 1) continue;
    for (const CanonicalGraph& m : members) {
      if (quasi_planar_status(m).distinguished.size() != 1) continue;
      for (const Cycle& cy : cycle_decomposition(m).cycles) {
        const int len = cy.length();
        if (len < 4) continue;
        for (int k = 0; k < len; ++k) {
          DoubledEdgeMove mv = move_doubled_edge(m, cy.vertices[k], cy.vertices[(k + 1) % len], cy.vertices[(k + 2) % len]);
          if (mv.to.edge_count() == 0) continue;
          ++moves;
          EXPECT_TRUE(mv.certified) << m.to_string();
          EXPECT_EQ(associated_planar(mv.to, Edge(cy.vertices[k], cy.vertices[(k + 2) % len])), p);
          // Oracle: unmemoized straightening on both sides.
          GraphVector<Rational> diff = straighten(GraphVector<Rational>::single(m, Rational(1)));
          diff -= straighten(GraphVector<Rational>::single(mv.to, mv.factor));
          int low = -1;
          for (const auto& [h, coeff] : diff.terms()) low = low < 0 ? planar_level(h) : std::min(low, planar_level(h));
          EXPECT_TRUE(low < 0 || low > 1);
          EXPECT_EQ(mv.factor, Rational(1));
        }
      }
    }
  }
  EXPECT_GT(moves, 0);
}

TEST(DoubledEdgeMove, RejectsTrianglePath) {
  CanonicalGraph g = graph(8, {{4, 7}, {4, 7}, {0, 5}, {5, 6}, {0, 6}, {1, 2}, {2, 3}, {1, 3}});
  EXPECT_THROW(move_doubled_edge(g, 1, 2, 3), std::invalid_argument);
}

TEST(OddLevelTwo, Examples) {
  // Doubled 4-7 crossing the triangle 0-5-6, plus the triangle 1-2-3: the
  // associated graph is a 5-cycle and a triangle.
  EXPECT_TRUE(is_odd_level_two(graph(8, {{4, 7}, {4, 7}, {0, 5}, {5, 6}, {0, 6}, {1, 2}, {2, 3}, {1, 3}})));
  EXPECT_FALSE(is_odd_level_two(graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}})));
}

TEST(Reduction, QuasiPlanarInputIsItself) {
  CanonicalGraph g = graph(10, {{0, 1}, {0, 1}, {2, 3}, {2, 3}, {4, 5}, {4, 5}, {6, 7}, {6, 7}, {8, 9}, {8, 9}});
  ReductionResult r = reduce_to_quasi_planar(g);
  EXPECT_EQ(r.terms, GraphVector<Rational>::single(g, Rational(1)));
  EXPECT_EQ(r.moves, 0);
  EXPECT_EQ(r.trace.move_count(), 0);
}

TEST(Reduction, RejectsForbiddenOrSmallInput) {
  CanonicalGraph connected = graph(10, {{0, 5}, {5, 1}, {1, 6}, {6, 2}, {2, 7}, {7, 3}, {3, 8}, {8, 4}, {4, 9}, {0, 9}});
  EXPECT_THROW(reduce_to_quasi_planar(connected), std::invalid_argument);
  CanonicalGraph small = graph(8, {{0, 4}, {0, 4}, {1, 5}, {1, 5}, {2, 6}, {2, 6}, {3, 7}, {3, 7}});
  EXPECT_THROW(reduce_to_quasi_planar(small), std::invalid_argument);
}

TEST(Reduction, TriangleSkeweringSquareUsesSquareIdentity) {
  CanonicalGraph g = triangle_and_square();
  ASSERT_TRUE(is_semi_planar(g));
  ASSERT_FALSE(is_quasi_planar(g));
  QuasiPlanarReducer red;
  ReductionResult r = red.reduce(g);
  ASSERT_FALSE(r.trace.entries.empty());
  EXPECT_NE(r.trace.entries.front().text.find("extreme-square"), std::string::npos);
  EXPECT_EQ(r.clauses["extreme-square"], 1);
  Straightener s;
  ReductionAudit a = audit_reduction(g, r, s);
  EXPECT_TRUE(a.ok());
  // Independent soundness check without the shared memo.
  EXPECT_EQ(straighten(r.terms), straighten(GraphVector<Rational>::single(g, Rational(1))));
}

TEST(Reduction, RandomAllowableGraphsAtTen) {
  std::vector<CanonicalGraph> all = all_degree_two_graphs(10);
  std::mt19937_64 rng(11);
  QuasiPlanarReducer red;
  Straightener s;
  int done = 0;
  while (done < 300) {
    const CanonicalGraph& g = all[rng() % all.size()];
    if (!is_allowable(g)) continue;
    ++done;
    ReductionResult r = red.reduce(g, done % 50 == 0);
    ReductionAudit a = audit_reduction(g, r, s);
    ASSERT_TRUE(a.ok()) << g.to_string() << " sound " << a.sound << " support " << a.quasi_planar_support
                        << " dyadic " << a.dyadic << " forbidden " << a.forbidden_moves;
    if (done % 50 == 0) EXPECT_EQ(r.trace.forbidden_count(), 0);
  }
}

TEST(GradedSpan, AllClassesAtTenSampled) {
  GradedSpanReport r = graded_span_check(10, 5);
  EXPECT_EQ(r.classes, 603);
  EXPECT_EQ(r.checked, 121);
  EXPECT_EQ(r.verified, r.checked);
  EXPECT_TRUE(r.failures.empty());
}

TEST(GradedSpan, EightVertexFailuresAreTriangleAndPentagon) {
  GradedSpanReport r = graded_span_check(8);
  EXPECT_EQ(r.classes, 91);
  EXPECT_EQ(r.verified + static_cast<int64_t>(r.failures.size()), 91);
  for (const CanonicalGraph& p : r.failures) EXPECT_EQ(cycle_type(p), (std::vector<int>{3, 5})) << p.to_string();
}

TEST(WPrimeIso, SixAndEight) {
  WPrimeIsoReport six = wprime_iso_check(6, {3}, true);
  EXPECT_EQ(six.w_dim, 15);
  EXPECT_EQ(six.wtilde_dim, 60);
  EXPECT_EQ(six.quasi_planar_classes, 12);
  ASSERT_EQ(six.rows.size(), 2u);
  for (const auto& row : six.rows) {
    EXPECT_EQ(row.w2_dim, 15);
    EXPECT_EQ(row.w1_dim, 15);
  }
  WPrimeIsoReport eight = wprime_iso_check(8, {3}, false);
  ASSERT_EQ(eight.rows.size(), 1u);
  EXPECT_EQ(eight.rows[0].w2_dim, 1470 - 1365);
  EXPECT_GE(eight.rows[0].w1_dim, eight.w_dim);
}
