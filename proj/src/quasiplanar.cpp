#include "kempe/quasiplanar.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "kempe/identities.hpp"
#include "kempe/partitions.hpp"
#include "kempe/relspaces.hpp"

namespace kempe {

int64_t QuasiPlanarCensus::classes_with_representative() const {
  return static_cast<int64_t>(classes.size() - empty_classes.size());
}

CanonicalGraph rotate_graph(const CanonicalGraph& g, int k) {
  const int n = g.n();
  std::vector<Edge> edges;
  for (Edge e : g.edges()) edges.emplace_back((e.lo + k) % n, (e.hi + k) % n);
  return CanonicalGraph::from_edges(n, edges);
}

QuasiPlanarCensus enumerate_quasi_planar(int n) {
  if (n < 6 || n % 2 != 0) throw std::invalid_argument("quasi-planar census needs even n >= 6");
  QuasiPlanarCensus census;
  census.n = n;
  const BasisIndex planar = planar_basis(n, 2);
  for (const CanonicalGraph& p : planar.graphs()) census.classes[p];
  census.planar_count = static_cast<int64_t>(census.classes.size());
  for (const CanonicalGraph& g : all_degree_two_graphs(n)) {
    QuasiPlanarStatus status = quasi_planar_status(g);
    if (status.kind == QuasiPlanarKind::No || !is_allowable(g)) continue;
    ++census.allowable_quasi_planar;
    if (status.kind == QuasiPlanarKind::Planar) {
      census.classes[g].push_back(g);
      continue;
    }
    for (Edge e : status.distinguished) census.classes.at(associated_planar(g, e)).push_back(g);
  }
  for (auto& [p, members] : census.classes) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) census.empty_classes.push_back(p);
  }
  std::set<CanonicalGraph> orbits;
  for (const CanonicalGraph& p : census.empty_classes) {
    CanonicalGraph best = p;
    for (int k = 1; k < n; ++k) best = std::min(best, rotate_graph(p, k));
    orbits.insert(best);
  }
  census.empty_orbits.assign(orbits.begin(), orbits.end());
  return census;
}

int filtration_level(const CanonicalGraph& g) { return level(g); }

namespace {

using RVec = GraphVector<Rational>;

Straightener& shared_straightener() {
  static Straightener s;
  return s;
}

// Smallest planar level in a planar combination, -1 if empty.
template <class R>
int min_level(const GraphVector<R>& v) {
  int out = -1;
  for (const auto& [g, c] : v.terms()) {
    int l = planar_level(g);
    if (out < 0 || l < out) out = l;
  }
  return out;
}

GraphVector<Integer> to_integer(const RVec& v, const Rational& scale) {
  GraphVector<Integer> out;
  for (const auto& [g, c] : v.terms()) {
    Rational x = c * scale;
    if (x.get_den() != 1) throw std::logic_error("non-integral remainder");
    out.add(g, Integer(mpz_class(x.get_num())));
  }
  return out;
}

bool is_dyadic(const Rational& q) {
  const mpz_class& den = q.get_den();
  return mpz_scan1(den.get_mpz_t(), 0) + 1 == mpz_sizeinbase(den.get_mpz_t(), 2);
}

// Endpoints of the two edges crossing a distinguished doubled edge uv.
std::vector<std::pair<int, int>> crossing_edges(const CanonicalGraph& g, Edge e) {
  std::vector<std::pair<int, int>> out;  // (inner, outer)
  for (Edge f : g.edges()) {
    if (!edges_cross(e, f)) continue;
    bool lo_inside = f.lo > e.lo && f.lo < e.hi;
    out.emplace_back(lo_inside ? f.lo : f.hi, lo_inside ? f.hi : f.lo);
  }
  return out;
}

}  // namespace

TwoComparison two_comparison(const CanonicalGraph& g, std::optional<Edge> choice) {
  QuasiPlanarStatus status = quasi_planar_status(g);
  if (status.kind != QuasiPlanarKind::QuasiPlanar) {
    throw std::invalid_argument("two-comparison needs a non-planar quasi-planar graph: " + g.to_string());
  }
  Edge e = choice.value_or(status.distinguished.front());
  if (std::find(status.distinguished.begin(), status.distinguished.end(), e) == status.distinguished.end()) {
    throw std::invalid_argument("edge " + e.to_string() + " is not distinguished in " + g.to_string());
  }
  TwoComparison out;
  out.graph = g;
  out.distinguished = e;
  out.associated = associated_planar(g, e);
  out.level = level(g);

  auto cross = crossing_edges(g, e);
  if (cross.size() != 2) throw std::logic_error("distinguished edge must cross two edges: " + g.to_string());
  const LocalIdentity& i1 = identity_by_name("I1");
  std::optional<IdentityApplication> chosen;
  for (int flip_uv = 0; flip_uv < 2 && !chosen; ++flip_uv) {
    for (int flip_edges = 0; flip_edges < 2 && !chosen; ++flip_edges) {
      auto x = cross[flip_edges], y = cross[1 - flip_edges];
      int u = flip_uv ? e.hi : e.lo, v = flip_uv ? e.lo : e.hi;
      std::vector<int> phi = {u, x.first, y.first, v, y.second, x.second};
      auto app = apply_identity(i1, g, phi);
      if (!app) continue;
      Rational c = app->rhs.coefficient(out.associated, Rational(0));
      if (c == 2 || c == -2) chosen = std::move(app);
    }
  }
  if (!chosen) return out;
  out.sign = sgn(chosen->rhs.coefficient(out.associated, Rational(0)));
  out.trace = chosen->trace;
  out.trace.note("I1 at " + e.to_string() + " gives " + std::to_string(2 * out.sign) + " X of " +
                 out.associated.to_string());

  Straightener& s = shared_straightener();
  RVec diff = RVec::single(g, Rational(1));
  diff.add(out.associated, Rational(-2 * out.sign));
  RVec rem = s.straighten(diff);
  out.remainder = to_integer(rem, Rational(1));
  out.remainder_min_level = min_level(rem);
  out.certified = out.remainder_min_level < 0 || out.remainder_min_level > out.level;
  return out;
}

bool is_odd_level_two(const CanonicalGraph& g) {
  QuasiPlanarStatus status = quasi_planar_status(g);
  if (status.kind != QuasiPlanarKind::QuasiPlanar || level(g) != 2) return false;
  CycleDecomposition cd = cycle_decomposition(associated_planar(g));
  return cd.cycles.size() == 2 && cd.odd_count() == 2;
}

namespace {

// Target of a doubled-edge move: P with the cycle through c and e replaced
// by the doubled edge ce and the planar cycle on its remaining vertices.
std::optional<CanonicalGraph> moved_graph(const CanonicalGraph& p, int c, int e) {
  CycleDecomposition cd = cycle_decomposition(p);
  int k = cd.cycle_of_vertex[c];
  if (cd.cycle_of_vertex[e] != k) return std::nullopt;
  std::vector<int> rest;
  for (int v : cd.cycles[k].vertices) {
    if (v != c && v != e) rest.push_back(v);
  }
  if (rest.size() < 2) return std::nullopt;
  std::vector<Edge> edges;
  for (int s = 0; s < p.edge_count(); ++s) {
    if (cd.cycle_of_slot[s] != k) edges.push_back(p.edge(s));
  }
  edges.emplace_back(c, e);
  edges.emplace_back(c, e);
  for (Edge f : planar_cycle_edges(rest)) edges.push_back(f);
  return CanonicalGraph::from_edges(p.n(), edges);
}

int other_neighbor(const CycleDecomposition& cd, int v, int not_this) {
  const Cycle& cy = cd.cycles[cd.cycle_of_vertex[v]];
  const int len = cy.length();
  int i = static_cast<int>(std::find(cy.vertices.begin(), cy.vertices.end(), v) - cy.vertices.begin());
  int prev = cy.vertices[(i + len - 1) % len], next = cy.vertices[(i + 1) % len];
  return prev == not_this ? next : prev;
}

}  // namespace

DoubledEdgeMove move_doubled_edge(const CanonicalGraph& g, int c, int d, int e) {
  QuasiPlanarStatus status = quasi_planar_status(g);
  if (status.kind != QuasiPlanarKind::QuasiPlanar) {
    throw std::invalid_argument("doubled-edge move needs a quasi-planar graph: " + g.to_string());
  }
  if (g.multiplicity(Edge(c, d)) != 1 || g.multiplicity(Edge(d, e)) != 1 || c == e) {
    throw std::invalid_argument("c-d-e must be a path of single edges");
  }
  if (g.multiplicity(Edge(c, e)) > 0) throw std::invalid_argument("c-d-e lies on a 3-cycle");
  DoubledEdgeMove out;
  out.from = g;
  const Edge old = status.distinguished.front();
  const CanonicalGraph p = associated_planar(g, old);
  auto target = moved_graph(p, c, e);
  if (!target || !is_quasi_planar(*target)) return out;
  out.to = *target;

  CycleDecomposition cd = cycle_decomposition(g);
  int b = other_neighbor(cd, c, d), f = other_neighbor(cd, e, d);
  std::vector<int> phi = {b, c, d, e, f};
  if (auto app = apply_identity(identity_by_name("I2"), g, phi)) {
    out.trace.append(app->trace);
    CanonicalGraph second = CanonicalGraph::from_edges(g.n(), std::vector<Edge>{});
    for (const auto& [h, coeff] : app->rhs.terms()) {
      if (h.multiplicity(Edge(c, e)) == 2 && h.multiplicity(old) == 2) second = h;
    }
    if (second.edge_count() > 0 && is_quasi_planar(second)) {
      QuasiPlanarStatus st = quasi_planar_status(second);
      if (std::find(st.distinguished.begin(), st.distinguished.end(), old) != st.distinguished.end()) {
        TwoComparison tc = two_comparison(second, old);
        out.trace.append(tc.trace);
      }
    }
  }

  Straightener& s = shared_straightener();
  RVec xg = s.straighten(RVec::single(g, Rational(1)));
  RVec xt = s.straighten(RVec::single(out.to, Rational(1)));
  Rational cg = xg.coefficient(p, Rational(0)), ct = xt.coefficient(p, Rational(0));
  if (sgn(ct) == 0) return out;
  out.factor = cg / ct;
  RVec rem = xg - xt.scaled(out.factor);
  out.remainder = to_integer(rem, Rational(2));
  out.remainder_min_level = min_level(rem);
  out.certified = out.remainder_min_level < 0 || out.remainder_min_level > level(g);
  out.trace.note("moved " + old.to_string() + " to " + Edge(c, e).to_string() + " with factor " +
                 out.factor.get_str());
  return out;
}

GradedSpanReport graded_span_check(int n, int stride) {
  GradedSpanReport report;
  report.n = n;
  QuasiPlanarCensus census = enumerate_quasi_planar(n);
  int64_t index = 0;
  for (const auto& [p, members] : census.classes) {
    if (members.empty()) continue;
    ++report.classes;
    if (index++ % std::max(stride, 1) != 0) continue;
    ++report.checked;
    bool ok = true;
    std::vector<CanonicalGraph> chained;
    for (const CanonicalGraph& m : members) {
      if (m == p) continue;
      QuasiPlanarStatus st = quasi_planar_status(m);
      Edge e = st.distinguished.front();
      for (Edge d : st.distinguished) {
        if (associated_planar(m, d) == p) e = d;
      }
      const int l = level(m);
      CycleDecomposition pcd = cycle_decomposition(p);
      bool forbidden_class = pcd.cycles.size() == 1 || (pcd.cycles.size() == 2 && pcd.odd_count() == 2);
      if (l >= 2 && !forbidden_class) {
        ++report.two_comparisons;
        if (!two_comparison(m, e).certified) ok = false;
      } else {
        chained.push_back(m);
      }
    }
    if (!chained.empty()) {
      // Union-find over members joined by certified moves.
      std::vector<int> parent(chained.size());
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
      for (size_t i = 0; i < chained.size(); ++i) {
        const CanonicalGraph& m = chained[i];
        if (quasi_planar_status(m).distinguished.size() != 1) continue;
        CycleDecomposition cd = cycle_decomposition(m);
        for (const Cycle& cy : cd.cycles) {
          const int len = cy.length();
          if (len < 4) continue;
          for (int k = 0; k < len; ++k) {
            int c = cy.vertices[k], d = cy.vertices[(k + 1) % len], e = cy.vertices[(k + 2) % len];
            auto target = moved_graph(p, c, e);
            if (!target) continue;
            auto it = std::lower_bound(chained.begin(), chained.end(), *target);
            if (it == chained.end() || *it != *target) continue;
            ++report.moves;
            if (!move_doubled_edge(m, c, d, e).certified) continue;
            parent[root(static_cast<int>(i))] = root(static_cast<int>(it - chained.begin()));
          }
        }
      }
      for (size_t i = 0; i < chained.size(); ++i) {
        if (root(static_cast<int>(i)) != root(0)) ok = false;
      }
    }
    if (ok) {
      ++report.verified;
    } else {
      report.failures.push_back(p);
    }
  }
  return report;
}

WPrimeIsoReport wprime_iso_check(int n, const std::vector<uint32_t>& primes, bool over_q) {
  WPrimeIsoReport report;
  report.n = n;
  QuasiPlanarCensus census = enumerate_quasi_planar(n);
  report.quasi_planar_classes = census.classes_with_representative();
  const bool exact = over_q && n <= 8;
  MergeSpanReport merge = merge_span_check(n, primes, exact);
  report.w_dim = merge.w_dim;
  report.wtilde_dim = merge.wtilde_dim;
  auto add_row = [&](uint32_t p, int64_t merging_rank) {
    WPrimeIsoReport::Row row;
    row.p = p;
    row.w2_dim = report.wtilde_dim - merging_rank;
    // Odd exchange relations only exist from twelve vertices on.
    row.w1_dim = n < 12 ? row.w2_dim : wprime_dimension(n, p).wprime_dim;
    report.rows.push_back(row);
  };
  if (exact && merge.over_z) add_row(0, static_cast<int64_t>(merge.over_z->divisors.size()));
  for (const PrimeRank& r : merge.primes) add_row(r.p, r.merging_rank);
  return report;
}

// Reduction to allowable quasi-planar graphs.

struct QuasiPlanarReducer::Impl {
  struct Node {
    RVec value;
    ReductionTrace own;
    std::string clause;
    std::vector<CanonicalGraph> children;
  };
  struct Candidate {
    std::string clause;
    RVec terms;  // X_g in terms of other graphs
    ReductionTrace trace;
  };
  using Generator = std::function<std::optional<Candidate>()>;

  std::unordered_map<CanonicalGraph, Node, CanonicalGraphHash> memo;
  std::unordered_set<CanonicalGraph, CanonicalGraphHash> in_progress;

  static std::optional<Candidate> hold(const CanonicalGraph& g, std::vector<Edge> held, std::string clause) {
    std::sort(held.begin(), held.end());
    auto is_held = [&](Edge e) { return std::binary_search(held.begin(), held.end(), e); };
    auto r = straighten_restricted(RVec::single(g, Rational(1)), [&](const CanonicalGraph& h, int i, int j) {
      return !is_held(h.edge(i)) && !is_held(h.edge(j)) && move_is_allowable(h, i, j);
    });
    if (r.trace.move_count() == 0) return std::nullopt;
    Candidate c;
    c.clause = std::move(clause);
    c.terms = r.planar + r.stuck;
    std::string text = "merge: hold";
    for (Edge e : held) text += " " + e.to_string();
    text += " as a closed piece";
    c.trace.note(text);
    c.trace.append(r.trace);
    return c;
  }

  static std::optional<Candidate> use_identity(const CanonicalGraph& g, const std::string& name, std::vector<int> phi,
                                               std::string clause) {
    auto app = apply_identity(identity_by_name(name), g, phi);
    if (!app || app->trace.forbidden_count() > 0) return std::nullopt;
    for (const auto& [h, c] : app->rhs.terms()) {
      if (!is_allowable(h)) return std::nullopt;
    }
    Candidate c;
    c.clause = std::move(clause);
    c.terms = std::move(app->rhs);
    std::string text = name + " at";
    for (int v : phi) text += " " + std::to_string(v);
    c.trace.note(text);
    c.trace.append(app->trace);
    return c;
  }

  static std::vector<Edge> cycle_edges(const CanonicalGraph& g, const Cycle& cy) {
    std::vector<Edge> out;
    for (int s : cy.slots) out.push_back(g.edge(s));
    return out;
  }

  static std::vector<Generator> candidates(const CanonicalGraph& g) {
    std::vector<Generator> out;
    const CycleDecomposition cd = cycle_decomposition(g);
    std::vector<int> crossed(g.edge_count());
    for (int s = 0; s < g.edge_count(); ++s) crossed[s] = crossings_of_slot(g, s);
    auto cycle_crossings = [&](const Cycle& cy) {
      int t = 0;
      for (int s : cy.slots) t += crossed[s];
      return t;
    };
    auto at = [](const Cycle& cy, int i) { return cy.vertices[((i % cy.length()) + cy.length()) % cy.length()]; };
    auto slot_at = [](const Cycle& cy, int i) { return cy.slots[((i % cy.length()) + cy.length()) % cy.length()]; };

    // (a) a doubled edge crossing at most two edges
    for (const Cycle& cy : cd.cycles) {
      if (cy.length() == 2 && crossed[cy.slots[0]] <= 2) {
        out.push_back([&g, e = g.edge(cy.slots[0])] { return hold(g, {e, e}, "a"); });
      }
    }
    // (b) three consecutive uncrossed edges
    for (const Cycle& cy : cd.cycles) {
      const int len = cy.length();
      if (len < 4) continue;
      for (int i = 0; i < len; ++i) {
        if (crossed[slot_at(cy, i)] || crossed[slot_at(cy, i + 1)] || crossed[slot_at(cy, i + 2)]) continue;
        if (len == 4) {
          out.push_back([&g, edges = cycle_edges(g, cy)] { return hold(g, edges, "b-square"); });
          break;
        }
        std::vector<int> phi;
        for (int k = -1; k <= 4; ++k) phi.push_back(at(cy, i + k));
        out.push_back([&g, phi] { return use_identity(g, "I3", phi, "b"); });
      }
    }
    // (c) an uncrossed cycle of length at least four
    for (const Cycle& cy : cd.cycles) {
      if (cy.length() < 4 || cycle_crossings(cy) != 0) continue;
      if (!cy.odd()) {
        out.push_back([&g, edges = cycle_edges(g, cy)] { return hold(g, edges, "c-even"); });
      } else {
        std::vector<int> phi(cy.vertices.begin(), cy.vertices.begin() + 5);
        out.push_back([&g, phi] { return use_identity(g, "I2", phi, "c-odd"); });
      }
    }
    // (d) two uncrossed triangles
    {
      std::vector<Edge> held;
      int found = 0;
      for (const Cycle& cy : cd.cycles) {
        if (cy.length() != 3 || cycle_crossings(cy) != 0 || found == 2) continue;
        ++found;
        for (Edge e : cycle_edges(g, cy)) held.push_back(e);
      }
      if (found == 2) out.push_back([&g, held] { return hold(g, held, "d"); });
    }

    std::vector<int> special = special_vertices(g);
    if (!special.empty()) {
      const int a = special.front();
      const Cycle& own = cd.cycles[cd.cycle_of_vertex[a]];
      const int pos = static_cast<int>(std::find(own.vertices.begin(), own.vertices.end(), a) - own.vertices.begin());
      // (e) the special cycle itself
      if (own.length() == 4) {
        std::vector<int> phi;
        for (int k = 0; k < 4; ++k) phi.push_back(at(own, pos + k));
        out.push_back([&g, phi] { return use_identity(g, "SQR", phi, "e-square"); });
      } else if (own.length() >= 5) {
        std::vector<int> phi;
        for (int k = 0; k < 6; ++k) phi.push_back(at(own, pos + k));
        out.push_back([&g, phi] { return use_identity(g, "I3", phi, "e-long"); });
      }
      // (f) a skewered cycle with a side of exactly three vertices
      std::vector<int> skewered = skewered_cycles(g, a);
      for (int idx : skewered) {
        const Cycle& cy = cd.cycles[idx];
        const int len = cy.length();
        if (len < 5) continue;
        for (int i = 0; i < len; ++i) {
          if (!crossed[slot_at(cy, i - 1)] || crossed[slot_at(cy, i)] || crossed[slot_at(cy, i + 1)] ||
              !crossed[slot_at(cy, i + 2)]) {
            continue;
          }
          std::vector<int> phi;
          for (int k = -1; k <= 3; ++k) phi.push_back(at(cy, i + k));
          out.push_back([&g, phi] { return use_identity(g, "I2", phi, "f"); });
        }
      }
      // Induction on skewered cycles: straighten the special cycle together
      // with the extreme one.
      // An odd special cycle with an extreme square would need forbidden
      // moves, so the square identity goes first there.
      if (auto ext = extreme_cycle(g, a)) {
        const Cycle& far = cd.cycles[*ext];
        std::vector<Generator> squares;
        if (far.length() == 4) {
          for (int r = 0; r < 4; ++r) {
            std::vector<int> phi;
            for (int k = 0; k < 4; ++k) phi.push_back(at(far, r + k));
            squares.push_back([&g, phi] { return use_identity(g, "SQR", phi, "extreme-square"); });
          }
        }
        std::vector<Edge> held;
        for (int s = 0; s < g.edge_count(); ++s) {
          int k = cd.cycle_of_slot[s];
          if (k != cd.cycle_of_vertex[a] && k != *ext) held.push_back(g.edge(s));
        }
        Generator induction = [&g, held] { return hold(g, held, "semi-planar"); };
        if (own.odd()) out.insert(out.end(), squares.begin(), squares.end());
        out.push_back(induction);
        if (!own.odd()) out.insert(out.end(), squares.begin(), squares.end());
      }
    }

    // Fallbacks: hold any doubled edge, or create doubled edges with I2.
    for (const Cycle& cy : cd.cycles) {
      if (cy.length() == 2) {
        out.push_back([&g, e = g.edge(cy.slots[0])] { return hold(g, {e, e}, "doubled"); });
      }
    }
    for (const Cycle& cy : cd.cycles) {
      if (cy.length() < 4) continue;
      for (int i = 0; i < cy.length(); ++i) {
        std::vector<int> phi;
        for (int k = 0; k < 5; ++k) phi.push_back(at(cy, i + k));
        out.push_back([&g, phi] { return use_identity(g, "I2", phi, "create-doubled"); });
      }
    }
    return out;
  }

  bool resolve(const CanonicalGraph& g) {
    if (memo.count(g)) return true;
    if (in_progress.count(g) || !is_allowable(g)) return false;
    if (is_quasi_planar(g)) {
      Node leaf;
      leaf.value = RVec::single(g, Rational(1));
      leaf.clause = "quasi-planar";
      memo.emplace(g, std::move(leaf));
      return true;
    }
    in_progress.insert(g);
    for (const Generator& gen : candidates(g)) {
      std::optional<Candidate> cand = gen();
      if (!cand || cand->terms.coefficient(g, Rational(0)) != 0) continue;
      bool ok = true;
      for (const auto& [h, c] : cand->terms.terms()) {
        if (!resolve(h)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      Node node;
      node.clause = cand->clause;
      node.own = std::move(cand->trace);
      for (const auto& [h, c] : cand->terms.terms()) {
        node.children.push_back(h);
        node.value += memo.at(h).value.scaled(c);
      }
      in_progress.erase(g);
      memo.emplace(g, std::move(node));
      return true;
    }
    in_progress.erase(g);
    return false;
  }
};

QuasiPlanarReducer::QuasiPlanarReducer() : impl_(std::make_unique<Impl>()) {}
QuasiPlanarReducer::~QuasiPlanarReducer() = default;

size_t QuasiPlanarReducer::memo_size() const { return impl_->memo.size(); }

ReductionResult QuasiPlanarReducer::reduce(const CanonicalGraph& g, bool with_trace) {
  if (g.n() < 10) throw std::invalid_argument("reduction to quasi-planar graphs needs n >= 10");
  if (!is_allowable(g)) throw std::invalid_argument("graph is not allowable: " + g.to_string());
  if (!impl_->resolve(g)) throw std::runtime_error("no reduction clause applies to " + g.to_string());
  ReductionResult out;
  out.terms = impl_->memo.at(g).value;
  std::unordered_set<CanonicalGraph, CanonicalGraphHash> seen;
  std::vector<const CanonicalGraph*> stack = {&impl_->memo.find(g)->first};
  seen.insert(g);
  while (!stack.empty()) {
    const CanonicalGraph& h = *stack.back();
    stack.pop_back();
    const Impl::Node& node = impl_->memo.at(h);
    ++out.nodes;
    ++out.clauses[node.clause];
    out.moves += node.own.move_count();
    out.forbidden_moves += node.own.forbidden_count();
    if (with_trace) {
      out.trace.note("node " + h.to_string() + " by " + node.clause);
      out.trace.append(node.own);
    }
    for (const CanonicalGraph& c : node.children) {
      if (seen.insert(c).second) stack.push_back(&impl_->memo.find(c)->first);
    }
  }
  return out;
}

ReductionResult reduce_to_quasi_planar(const CanonicalGraph& g) {
  QuasiPlanarReducer r;
  return r.reduce(g);
}

ReductionAudit audit_reduction(const CanonicalGraph& g, const ReductionResult& r, Straightener& s) {
  ReductionAudit audit;
  audit.forbidden_moves = r.forbidden_moves;
  audit.quasi_planar_support = true;
  audit.dyadic = true;
  for (const auto& [h, c] : r.terms.terms()) {
    if (!is_quasi_planar(h) || !is_allowable(h)) audit.quasi_planar_support = false;
    if (!is_dyadic(c)) audit.dyadic = false;
  }
  audit.sound = s.straighten(r.terms) == s.straighten(RVec::single(g, Rational(1)));
  return audit;
}

}  // namespace kempe
