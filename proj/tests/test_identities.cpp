#include <gtest/gtest.h>

#include <random>

#include "kempe/evaluate.hpp"
#include "kempe/identities.hpp"

using namespace kempe;

TEST(Identities, AllPassBothModes) {
  for (const auto& id : standard_identities()) {
    auto r = verify_identity(id, 0);
    EXPECT_TRUE(r.bracket_ok) << id.name << ": " << r.counterexample;
    EXPECT_TRUE(r.derivation_ok) << id.name;
    EXPECT_TRUE(r.host_ok) << id.name << ": " << r.counterexample;
    EXPECT_GE(r.assignments, 10);
    EXPECT_EQ(r.hosts, 5);
    EXPECT_EQ(r.terms.size(), id.rhs.size() + 1);
  }
}

TEST(Identities, PrintedCoefficients) {
  EXPECT_EQ(identity_by_name("I1").lhs.coeff, Integer(1));
  EXPECT_EQ(identity_by_name("I1").rhs[0].coeff, Integer(2));
  EXPECT_EQ(identity_by_name("I2").lhs.coeff, Integer(-2));
  EXPECT_EQ(identity_by_name("I3").lhs.coeff, Integer(-2));
  EXPECT_EQ(identity_by_name("SQR").lhs.coeff, Integer(2));
  EXPECT_THROW(identity_by_name("I9"), std::invalid_argument);
}

TEST(Identities, TermsShareDegreeSequence) {
  for (const auto& id : standard_identities()) {
    auto lhs = CanonicalGraph::from_edges(id.vertices, id.lhs.edges).degrees();
    for (const auto& t : id.rhs) EXPECT_EQ(CanonicalGraph::from_edges(id.vertices, t.edges).degrees(), lhs) << id.name;
  }
}

TEST(Identities, SquareWithAllPlusSignsFails) {
  // With every doubled-pair term at +1 the square relation is not an identity
  // in the low -> high orientation; the bracket check must reject it.
  LocalIdentity wrong = identity_by_name("SQR");
  for (auto& t : wrong.rhs) t.coeff = 1;
  auto r = verify_identity(wrong, 0);
  EXPECT_FALSE(r.bracket_ok);
  EXPECT_FALSE(r.counterexample.empty());
}

TEST(Identities, ApplyInHostMatchesStraightening) {
  // I2 on the path 0-1-2-3-4 of a 6-cycle plus a 4-cycle at n = 10.
  const auto& id = identity_by_name("I2");
  std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}, {6, 7}, {7, 8}, {8, 9}, {6, 9}};
  auto host = CanonicalGraph::from_edges(10, edges);
  std::vector<int> phi = {0, 1, 2, 3, 4};
  auto app = apply_identity(id, host, phi);
  ASSERT_TRUE(app);
  Straightener s;
  EXPECT_EQ(s.straighten(app->rhs), s.straighten(GraphVector<Rational>::single(host, Rational(1))));
  EXPECT_EQ(app->trace.forbidden_count(), 0);
  std::mt19937_64 rng(4);
  auto p = random_assignment(10, rng);
  EXPECT_EQ(evaluate(app->rhs, p), evaluate_graph(host, p));
}

TEST(Identities, DegenerateMapDropsLoopTerms) {
  // I3 with x = y: the path closes into a 6-cycle 0-1-2-3-4-x.
  const auto& id = identity_by_name("I3");
  std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {5, 6}, {5, 6}, {7, 8}, {8, 9}, {7, 9}};
  auto host = CanonicalGraph::from_edges(10, edges);
  std::vector<int> phi = {0, 1, 2, 3, 4, 0};
  auto app = apply_identity(id, host, phi);
  ASSERT_TRUE(app);
  Straightener s;
  EXPECT_EQ(s.straighten(app->rhs), s.straighten(GraphVector<Rational>::single(host, Rational(1))));
}

TEST(Identities, RefusesMissingEdges) {
  const auto& id = identity_by_name("I2");
  std::vector<Edge> edges = {{0, 1}, {0, 1}, {2, 3}, {2, 3}, {4, 5}, {4, 5}};
  auto host = CanonicalGraph::from_edges(6, edges);
  std::vector<int> phi = {0, 1, 2, 3, 4};
  EXPECT_FALSE(apply_identity(id, host, phi).has_value());
}
