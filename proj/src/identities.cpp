#include "kempe/identities.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "kempe/evaluate.hpp"

namespace kempe {

namespace {

IdentityTerm term(int coeff, std::vector<std::pair<int, int>> pairs) {
  IdentityTerm t;
  t.coeff = coeff;
  for (auto [a, b] : pairs) t.edges.emplace_back(a, b);
  return t;
}

std::vector<LocalIdentity> build_identities() {
  std::vector<LocalIdentity> out;

  // Doubled chord 0-3 crossed by 1-5 and 2-4.
  LocalIdentity i1{"I1", 6, term(1, {{0, 3}, {0, 3}, {1, 5}, {2, 4}}), {}};
  i1.rhs = {
      term(2, {{0, 1}, {2, 3}, {3, 4}, {0, 5}}),
      term(1, {{0, 1}, {0, 2}, {3, 4}, {3, 5}}),
      term(1, {{0, 4}, {0, 5}, {1, 3}, {2, 3}}),
      term(1, {{0, 3}, {1, 2}, {0, 5}, {3, 4}}),
      term(1, {{0, 3}, {4, 5}, {0, 1}, {2, 3}}),
  };
  out.push_back(i1);

  // Path 0-1-2-3-4 with loose ends at 0 and 4.
  LocalIdentity i2{"I2", 5, term(-2, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}), {}};
  i2.rhs = {
      term(1, {{0, 4}, {1, 2}, {2, 3}, {1, 3}}),
      term(-1, {{0, 2}, {2, 4}, {1, 3}, {1, 3}}),
      term(1, {{0, 3}, {3, 4}, {1, 2}, {1, 2}}),
      term(1, {{0, 1}, {1, 4}, {2, 3}, {2, 3}}),
  };
  out.push_back(i2);

  // Path 0-1-2-3-4-5 with loose ends at 0 and 5.
  LocalIdentity i3{"I3", 6, term(-2, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}), {}};
  i3.rhs = {
      term(1, {{0, 5}, {1, 2}, {2, 3}, {3, 4}, {1, 4}}),
      term(1, {{0, 3}, {2, 3}, {2, 5}, {1, 4}, {1, 4}}),
      term(1, {{0, 1}, {1, 4}, {4, 5}, {2, 3}, {2, 3}}),
      term(1, {{0, 3}, {3, 4}, {4, 5}, {1, 2}, {1, 2}}),
      term(1, {{0, 1}, {1, 2}, {2, 5}, {3, 4}, {3, 4}}),
      term(1, {{0, 5}, {1, 2}, {1, 2}, {3, 4}, {3, 4}}),
      term(-1, {{0, 2}, {2, 4}, {4, 5}, {1, 3}, {1, 3}}),
      term(-1, {{0, 1}, {1, 3}, {3, 5}, {2, 4}, {2, 4}}),
      term(-1, {{0, 5}, {1, 3}, {1, 3}, {2, 4}, {2, 4}}),
  };
  out.push_back(i3);

  // Square a b c d = 0 1 2 3. The signs on the doubled-pair terms are the ones
  // forced by the low -> high orientation convention.
  LocalIdentity sqr{"SQR", 4, term(2, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}), {}};
  sqr.rhs = {
      term(-1, {{0, 1}, {0, 1}, {2, 3}, {2, 3}}),
      term(1, {{0, 2}, {0, 2}, {1, 3}, {1, 3}}),
      term(-1, {{0, 3}, {0, 3}, {1, 2}, {1, 2}}),
  };
  out.push_back(sqr);
  return out;
}

CanonicalGraph local_graph(const LocalIdentity& id, const IdentityTerm& t) {
  return CanonicalGraph::from_edges(id.vertices, t.edges);
}

// Local Plücker moves deriving the identity: straighten every term.
const ReductionTrace& local_derivation(const LocalIdentity& id) {
  static std::mutex mu;
  static std::map<std::string, ReductionTrace> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(id.name);
  if (it != cache.end()) return it->second;
  ReductionTrace trace;
  auto all = [](const CanonicalGraph&, int, int) { return true; };
  auto add = [&](const IdentityTerm& t) {
    auto r = straighten_restricted(GraphVector<Integer>::single(local_graph(id, t), Integer(1)), all);
    trace.append(r.trace);
  };
  add(id.lhs);
  for (const auto& t : id.rhs) add(t);
  return cache.emplace(id.name, std::move(trace)).first->second;
}

std::optional<SignedGraph> image(const std::vector<Edge>& local, std::span<const int> phi,
                                 const std::vector<DirectedEdge>& rest, int n) {
  std::vector<DirectedEdge> edges = rest;
  for (Edge e : local) edges.push_back({phi[e.lo], phi[e.hi]});
  return canonicalize_any(n, edges);
}

}  // namespace

const std::vector<LocalIdentity>& standard_identities() {
  static const std::vector<LocalIdentity> ids = build_identities();
  return ids;
}

const LocalIdentity& identity_by_name(const std::string& name) {
  for (const auto& id : standard_identities()) {
    if (id.name == name) return id;
  }
  throw std::invalid_argument("unknown identity " + name);
}

std::optional<IdentityApplication> apply_identity(const LocalIdentity& id, const CanonicalGraph& host,
                                                  std::span<const int> phi) {
  if (static_cast<int>(phi.size()) != id.vertices) throw std::invalid_argument("vertex map has the wrong size");
  const int n = host.n();
  std::vector<Edge> remaining(host.edges().begin(), host.edges().end());
  for (Edge e : id.lhs.edges) {
    int a = phi[e.lo], b = phi[e.hi];
    if (a == b) return std::nullopt;
    auto it = std::find(remaining.begin(), remaining.end(), Edge(a, b));
    if (it == remaining.end()) return std::nullopt;
    remaining.erase(it);
  }
  std::vector<DirectedEdge> rest;
  for (Edge e : remaining) rest.push_back({e.lo, e.hi});

  auto lhs = image(id.lhs.edges, phi, rest, n);
  if (!lhs || lhs->graph != host) return std::nullopt;
  Rational lead = to_rational(id.lhs.coeff) * lhs->sign;
  std::map<CanonicalGraph, Rational> acc;
  for (const auto& t : id.rhs) {
    auto g = image(t.edges, phi, rest, n);
    if (!g) continue;
    acc[g->graph] += to_rational(t.coeff) * g->sign;
  }
  auto self = acc.find(host);
  if (self != acc.end()) {
    lead -= self->second;
    acc.erase(self);
  }
  if (sgn(lead) == 0) return std::nullopt;

  IdentityApplication app;
  for (const auto& [g, c] : acc) app.rhs.add(g, c / lead);

  for (const TraceEntry& move : local_derivation(id).entries) {
    if (move.kind != TraceEntry::Kind::Move) continue;
    std::vector<Edge> local(move.graph.edges().begin(), move.graph.edges().end());
    auto g = image(local, phi, rest, n);
    if (!g) continue;
    int a = phi[move.e1.lo], b = phi[move.e1.hi], c = phi[move.e2.lo], d = phi[move.e2.hi];
    if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
    int s1 = g->graph.find_slot(Edge(a, b));
    int s2 = g->graph.find_slot(Edge(c, d), s1);
    app.trace.move(g->graph, s1, s2);
  }
  return app;
}

IdentityReport verify_identity(const LocalIdentity& id, uint64_t seed, int assignments, int hosts, int host_n) {
  IdentityReport report;
  report.name = id.name;
  report.terms.emplace_back(id.lhs.coeff.to_string(), local_graph(id, id.lhs).to_string() + " (left)");
  for (const auto& t : id.rhs) report.terms.emplace_back(t.coeff.to_string(), local_graph(id, t).to_string());

  std::mt19937_64 rng(seed);
  report.bracket_ok = true;
  for (int i = 0; i < assignments; ++i) {
    PointAssignment p = random_assignment(id.vertices, rng);
    Rational diff = to_rational(id.lhs.coeff) * evaluate_graph(local_graph(id, id.lhs), p);
    for (const auto& t : id.rhs) diff -= to_rational(t.coeff) * evaluate_graph(local_graph(id, t), p);
    ++report.assignments;
    if (sgn(diff) != 0) {
      report.bracket_ok = false;
      std::ostringstream os;
      os << "assignment";
      for (int v = 0; v < id.vertices; ++v) os << " " << v << ":(" << p.x[v] << "," << p.y[v] << ")";
      os << " leaves residual " << diff;
      report.counterexample = os.str();
      break;
    }
  }

  GraphVector<Integer> local;
  local.add(local_graph(id, id.lhs), id.lhs.coeff);
  for (const auto& t : id.rhs) local.add(local_graph(id, t), -t.coeff);
  report.derivation_ok = straighten(local).empty();

  std::array<int, kMaxVertices> local_deg{};
  for (Edge e : id.lhs.edges) {
    ++local_deg[e.lo];
    ++local_deg[e.hi];
  }
  Straightener straightener;
  report.host_ok = true;
  for (int h = 0; h < hosts && report.host_ok; ++h) {
    std::vector<int> all(host_n);
    for (int v = 0; v < host_n; ++v) all[v] = v;
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> chosen(all.begin(), all.begin() + id.vertices);
    std::sort(chosen.begin(), chosen.end());
    const int shift = static_cast<int>(rng() % id.vertices);
    std::vector<int> phi(id.vertices);
    for (int i = 0; i < id.vertices; ++i) phi[i] = chosen[(i + shift) % id.vertices];

    std::vector<int> stubs;
    std::vector<int> deficit(host_n, 2);
    for (int i = 0; i < id.vertices; ++i) deficit[phi[i]] -= local_deg[i];
    for (int v = 0; v < host_n; ++v)
      for (int k = 0; k < deficit[v]; ++k) stubs.push_back(v);
    std::vector<Edge> completion;
    for (int attempt = 0; attempt < 10000; ++attempt) {
      std::shuffle(stubs.begin(), stubs.end(), rng);
      completion.clear();
      bool ok = true;
      for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
        if (stubs[i] == stubs[i + 1]) {
          ok = false;
          break;
        }
        completion.emplace_back(stubs[i], stubs[i + 1]);
      }
      if (ok) break;
      completion.clear();
    }
    std::vector<Edge> host_edges = completion;
    for (Edge e : id.lhs.edges) host_edges.emplace_back(phi[e.lo], phi[e.hi]);
    CanonicalGraph host = CanonicalGraph::from_edges(host_n, host_edges);
    auto app = apply_identity(id, host, phi);
    ++report.hosts;
    if (!app) {
      report.host_ok = false;
      report.counterexample = "identity does not apply in host " + host.to_string();
      break;
    }
    auto expected = straightener.straighten(GraphVector<Rational>::single(host, Rational(1)));
    auto got = straightener.straighten(app->rhs);
    if (!(expected == got)) {
      report.host_ok = false;
      report.counterexample = "host " + host.to_string() + " disagrees after straightening";
    }
  }
  return report;
}

}  // namespace kempe
