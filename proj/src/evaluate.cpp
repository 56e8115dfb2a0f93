#include "kempe/evaluate.hpp"

#include <algorithm>

namespace kempe {

PointAssignment random_assignment(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-50, 50);
  std::uniform_int_distribution<int> den(1, 7);
  PointAssignment p;
  for (int v = 0; v < n; ++v) {
    Rational x(num(rng), den(rng));
    Rational y(num(rng), den(rng));
    x.canonicalize();
    y.canonicalize();
    p.x.push_back(x);
    p.y.push_back(y);
  }
  return p;
}

CanonicalGraph random_regular_graph(int n, int k, std::mt19937_64& rng) {
  while (true) {
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < k; ++i) stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<Edge> edges;
    bool loop = false;
    for (size_t i = 0; i < stubs.size(); i += 2) {
      if (stubs[i] == stubs[i + 1]) {
        loop = true;
        break;
      }
      edges.emplace_back(stubs[i], stubs[i + 1]);
    }
    if (!loop) return CanonicalGraph::from_edges(n, edges);
  }
}

GraphVector<Integer> random_graph_vector(int n, int k, int max_terms, std::mt19937_64& rng) {
  GraphVector<Integer> v;
  const int terms = 1 + static_cast<int>(rng() % max_terms);
  for (int t = 0; t < terms; ++t) v.add(random_regular_graph(n, k, rng), Integer(static_cast<int>(rng() % 21) - 10));
  return v;
}

Rational evaluate_graph(const CanonicalGraph& g, const PointAssignment& p) {
  Rational product = 1;
  for (const Edge& e : g.edges()) product *= p.x[e.lo] * p.y[e.hi] - p.x[e.hi] * p.y[e.lo];
  return product;
}

}  // namespace kempe
