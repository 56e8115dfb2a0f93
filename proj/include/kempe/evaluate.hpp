#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kempe/graph.hpp"
#include "kempe/graph_vector.hpp"
#include "kempe/integer.hpp"

namespace kempe {

// Per-vertex point (x, y) on the projective line.
struct PointAssignment {
  std::vector<Rational> x;
  std::vector<Rational> y;
};

// Random assignment with small integer numerators and denominators.
PointAssignment random_assignment(int n, std::mt19937_64& rng);

// Regular graph of degree k by random stub pairing, redrawn on loops.
CanonicalGraph random_regular_graph(int n, int k, std::mt19937_64& rng);
// 1..max_terms random regular graphs of one degree with coefficients in [-10, 10].
GraphVector<Integer> random_graph_vector(int n, int k, int max_terms, std::mt19937_64& rng);

// Product over edges (a,b) of x_a y_b - x_b y_a.
Rational evaluate_graph(const CanonicalGraph& g, const PointAssignment& p);

inline Rational to_rational_coeff(const Integer& c) { return to_rational(c); }
inline Rational to_rational_coeff(const Rational& c) { return c; }

template <class R>
Rational evaluate(const GraphVector<R>& v, const PointAssignment& p) {
  Rational total = 0;
  for (const auto& [g, c] : v.terms()) total += to_rational_coeff(c) * evaluate_graph(g, p);
  return total;
}

}  // namespace kempe
