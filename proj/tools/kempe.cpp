// Command-line front end: dimension counts, straightening, identity checks,
// span analyses, partitioned quotients and quasi-planar reductions.

#include <sys/resource.h>

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kempe/evaluate.hpp"
#include "kempe/identities.hpp"
#include "kempe/lattice.hpp"
#include "kempe/modular.hpp"
#include "kempe/partitions.hpp"
#include "kempe/quasiplanar.hpp"
#include "kempe/relspaces.hpp"
#include "kempe/straighten.hpp"

#ifndef KEMPE_VERSION
#define KEMPE_VERSION "dev"
#endif

namespace {

using json = nlohmann::json;
using namespace kempe;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 0;
  uint64_t seed = 0;
  int workers = 1;
  int64_t memory_mb = 0;
  std::string cache_dir;
  bool use_cache = true;
  bool refresh = false;
  std::string format = "text";
  std::vector<uint32_t> primes;
};

// Claims carry what was checked, in which ring, and whether the statement is
// a theorem instance, exploratory data, or an internal consistency check.
// Failing exploratory claims do not change the exit status.
json claim(const std::string& statement, const std::string& kind, const std::string& ring, bool holds,
           json ranks = json::object()) {
  return json{{"statement", statement}, {"kind", kind}, {"ring", ring}, {"holds", holds}, {"ranks", ranks}};
}

std::string ring_name(uint32_t p) { return p == 0 ? "Q" : "F_" + std::to_string(p); }

void require_even(int n, int lo, int hi) {
  if (n % 2 != 0) throw UsageError("n must be even, got " + std::to_string(n));
  if (n < lo || n > hi) {
    throw UsageError("n must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(n));
  }
}

void require_primes(const std::vector<uint32_t>& primes) {
  for (uint32_t p : primes) {
    if (p < 3 || !is_probable_prime(p)) throw UsageError("moduli must be odd primes, got " + std::to_string(p));
  }
}

// JSON conversions.

json graph_json(const CanonicalGraph& g) {
  json edges = json::array();
  for (Edge e : g.edges()) edges.push_back({e.lo, e.hi});
  return edges;
}

template <class R>
json vector_json(const GraphVector<R>& v) {
  json out = json::array();
  for (const auto& [g, c] : v.terms()) out.push_back({{"coeff", ring_to_string(c)}, {"edges", graph_json(g)}});
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int json_n(const json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer()) throw UsageError("input needs an integer field \"n\"");
  return j["n"].get<int>();
}

std::vector<std::pair<int, int>> json_edges(const json& j) {
  if (!j.is_array()) throw UsageError("\"edges\" must be an array of [a, b] pairs");
  std::vector<std::pair<int, int>> out;
  for (const json& e : j) {
    if (!e.is_array() || e.size() != 2) throw UsageError("each edge must be a pair [a, b]");
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

CanonicalGraph undirected_graph(int n, const json& edges) {
  std::vector<Edge> e;
  for (auto [a, b] : json_edges(edges)) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw UsageError("edge label out of range");
    e.emplace_back(a, b);
  }
  return CanonicalGraph::from_edges(n, e);
}

Integer json_integer(const json& c) {
  if (c.is_number_integer()) return Integer(c.get<int64_t>());
  if (c.is_string()) return Integer(mpz_class(c.get<std::string>()));
  throw UsageError("coefficients must be integers or decimal strings");
}

std::vector<std::vector<int>> json_pieces(const json& j) {
  std::vector<std::vector<int>> out;
  for (const json& piece : j) out.push_back(piece.get<std::vector<int>>());
  return out;
}

json span_json(const SpanReport& r) {
  std::vector<std::string> divisors, bad;
  std::map<std::string, int64_t> counts;
  for (const mpz_class& d : r.divisors) ++counts[d.get_str()];
  for (const mpz_class& p : r.bad_primes) bad.push_back(p.get_str());
  return json{{"contained", r.contained}, {"outside_generator", r.outside_generator},
              {"generators", r.generator_count}, {"target_rank", r.target_rank},
              {"rank", r.divisors.size()}, {"divisor_counts", counts}, {"bad_primes", bad},
              {"summary", r.summary()}};
}

// Result cache keyed by (command, n, arguments) and stamped with the code
// version. An entry from another version is refused rather than reused.

struct StaleCache : std::runtime_error {
  using std::runtime_error::runtime_error;
};

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

class Cache {
 public:
  explicit Cache(const RunConfig& cfg) : cfg_(cfg) {}

  template <class F>
  json cached(const std::string& command, const json& args, F compute) {
    if (!cfg_.use_cache) return compute();
    std::filesystem::path path = entry_path(command, args);
    if (!cfg_.refresh && std::filesystem::exists(path)) {
      json entry = read_json_file(path.string());
      if (entry.value("version", "") != KEMPE_VERSION) {
        throw StaleCache("cache entry " + path.string() + " was written by version " + entry.value("version", "?") +
                         " (this is " + KEMPE_VERSION + "); remove it or pass --refresh");
      }
      if (entry.value("args", json()) != args) throw StaleCache("cache entry " + path.string() + " has other arguments");
      std::cerr << "cache hit: " << path.string() << "\n";
      return entry["report"];
    }
    json report = compute();
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << json{{"version", KEMPE_VERSION}, {"command", command}, {"args", args}, {"report", report}}.dump(1) << "\n";
    return report;
  }

 private:
  std::filesystem::path entry_path(const std::string& command, const json& args) const {
    std::ostringstream name;
    name << command << "-n" << args.value("n", 0) << "-" << std::hex << fnv1a(args.dump()) << ".json";
    return std::filesystem::path(cfg_.cache_dir) / name.str();
  }

  const RunConfig& cfg_;
};

std::string default_cache_dir() {
  if (const char* env = std::getenv("KEMPE_CACHE_DIR"); env && *env) return env;
  return ".kempe-cache";
}

// Commands. Each returns a report with a "claims" array.

json cmd_dims(const RunConfig& cfg) {
  require_even(cfg.n, 2, 12);
  const int n = cfg.n;
  int64_t catalan = 1;
  for (int i = 0; i < n / 2; ++i) catalan = catalan * 2 * (2 * i + 1) / (i + 2);
  json r;
  r["matchings"] = matchings(n).size();
  r["planar_matchings"] = planar_matchings(n).size();
  r["w_dim"] = planar_basis(n, 2).size();
  r["degree_two_graphs"] = all_degree_two_graphs(n).size();
  r["claims"] = json::array({claim("planar matchings are counted by the Catalan number " + std::to_string(catalan),
                                   "consistency", "Z", r["planar_matchings"].get<int64_t>() == catalan)});
  return r;
}

json cmd_straighten(const RunConfig& cfg, const std::string& path) {
  json in = read_json_file(path);
  const int n = json_n(in);
  require_even(n, 2, kMaxVertices);
  GraphVector<Integer> v;
  for (const json& t : in.at("terms")) {
    std::vector<DirectedEdge> edges;
    for (auto [a, b] : json_edges(t.at("edges"))) {
      if (a < 0 || b < 0 || a >= n || b >= n) throw UsageError("edge label out of range");
      edges.push_back({a, b});
    }
    std::optional<SignedGraph> sg;
    try {
      sg = canonicalize(n, edges);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (sg) v.add(*sg, json_integer(t.at("coeff")));
  }
  Straightener s;
  GraphVector<Integer> out = s.straighten(v);
  bool planar = true;
  for (const auto& [g, c] : out.terms()) planar = planar && is_planar(g);
  std::mt19937_64 rng(cfg.seed);
  bool agrees = true;
  for (int i = 0; i < 5; ++i) {
    PointAssignment p = random_assignment(n, rng);
    agrees = agrees && evaluate(v, p) == evaluate(out, p);
  }
  json r;
  r["input"] = vector_json(v);
  r["output"] = vector_json(out);
  r["claims"] = json::array({claim("output is supported on planar graphs", "consistency", "Z", planar),
                             claim("input and output agree at 5 random point assignments", "consistency", "Q", agrees)});
  return r;
}

json cmd_identities(const RunConfig& cfg) {
  json r;
  r["identities"] = json::array();
  r["claims"] = json::array();
  int passed = 0;
  const auto& ids = standard_identities();
  for (size_t i = 0; i < ids.size(); ++i) {
    IdentityReport rep = verify_identity(ids[i], cfg.seed + i);
    passed += rep.passed();
    json terms = json::array();
    for (const auto& [c, g] : rep.terms) terms.push_back({{"coeff", c}, {"graph", g}});
    r["identities"].push_back({{"name", rep.name}, {"bracket", rep.bracket_ok}, {"derivation", rep.derivation_ok},
                               {"hosts", rep.host_ok}, {"terms", terms}, {"counterexample", rep.counterexample}});
    r["claims"].push_back(claim(rep.name + " holds as bracket identity, by local straightening and inside hosts",
                                "theorem instance", "Q", rep.passed()));
  }
  r["summary"] = std::to_string(passed) + "/" + std::to_string(ids.size()) + " pass";
  return r;
}

json cmd_span(const RunConfig& cfg, const std::string& gens, const std::vector<std::string>& over) {
  require_even(cfg.n, 4, 10);
  if (gens != "simple" && gens != "simplest") throw UsageError("--gens must be simple or simplest");
  bool over_z = over.empty();
  std::vector<uint32_t> primes = cfg.primes;
  bool after_mod = false;
  for (const std::string& token : over) {
    if (token == "Z") {
      over_z = true;
    } else if (token == "mod") {
      after_mod = true;
    } else if (after_mod && !token.empty() && token.find_first_not_of("0123456789") == std::string::npos) {
      primes.push_back(static_cast<uint32_t>(std::stoul(token)));
    } else {
      throw UsageError("--over takes Z and/or mod followed by primes, got " + token);
    }
  }
  if (after_mod && primes.empty()) throw UsageError("--over mod needs at least one prime");
  require_primes(primes);
  Straightener s;
  RelationSpaces spaces(cfg.n, s);
  BinomialFamily family = spaces.simple_binomials(gens == "simplest");
  RelationKernels k = spaces.relation_kernels();
  SparseIntMatrix sym = spaces.symmetrize(family.columns);
  const bool simplest = gens == "simplest";
  const std::string family_name = simplest ? "simplest" : "simple";
  const std::string i2_statement = family_name + " binomial relations span I2_" + std::to_string(cfg.n);
  const std::string z_ring = simplest ? "Z[1/2]" : "Z";
  json r;
  r["generators"] = family.columns.cols();
  r["raw_count"] = family.raw_count;
  r["i2_rank"] = k.i2.rank();
  r["b_rank"] = k.b.rank();
  r["claims"] = json::array();
  if (over_z) {
    SpanReport on_i2 = span_analysis(sym, k.i2);
    SpanReport on_b = span_analysis(family.columns, k.b);
    r["i2"] = span_json(on_i2);
    r["b"] = span_json(on_b);
    r["claims"].push_back(claim("generators lie in the relation lattices", "consistency", "Z",
                                on_i2.contained && on_b.contained));
    r["claims"].push_back(claim(i2_statement, "theorem instance", z_ring, on_i2.spans_over(simplest ? 2 : 1),
                                {{"rank", on_i2.divisors.size()}, {"target", on_i2.target_rank}}));
    r["claims"].push_back(claim(family_name + " binomial relations span B_" + std::to_string(cfg.n), "exploratory",
                                z_ring, on_b.spans_over(simplest ? 2 : 1),
                                {{"rank", on_b.divisors.size()}, {"target", on_b.target_rank}}));
    r["summary"] = on_i2.spans_over(1) ? "divisors all 1; spans over Z" : on_i2.summary();
  }
  for (uint32_t p : primes) {
    int64_t rank_i2 = rank_mod_p(sym, p), rank_b = rank_mod_p(family.columns, p);
    r["mod"][std::to_string(p)] = {{"i2_rank", rank_i2}, {"b_rank", rank_b}};
    r["claims"].push_back(claim(i2_statement, "theorem instance", ring_name(p), rank_i2 == k.i2.rank(),
                                {{"rank", rank_i2}, {"target", k.i2.rank()}}));
  }
  return r;
}

json cmd_merge_span(const RunConfig& cfg, bool exact) {
  require_even(cfg.n, 6, 10);
  std::vector<uint32_t> primes = cfg.primes.empty() ? std::vector<uint32_t>{3, 5, 7} : cfg.primes;
  require_primes(primes);
  if (exact && cfg.n > 8) throw UsageError("--exact is limited to n <= 8");
  MergeSpanReport m = merge_span_check(cfg.n, primes, exact);
  const bool theorem = cfg.n >= 10 && cfg.n != 12;
  json r;
  r["wtilde_dim"] = m.wtilde_dim;
  r["w_dim"] = m.w_dim;
  r["merging_count"] = m.merging_count;
  r["claims"] = json::array();
  for (const PrimeRank& pr : m.primes) {
    r["primes"][std::to_string(pr.p)] = {{"wtilde_to_w_rank", pr.wtilde_to_w_rank}, {"q_dim", pr.q_dim},
                                         {"merging_rank", pr.merging_rank}};
    r["claims"].push_back(claim("W~ maps onto W", "consistency", ring_name(pr.p), pr.wtilde_to_w_rank == m.w_dim));
    r["claims"].push_back(claim("merging relations span Q_" + std::to_string(cfg.n),
                                theorem ? "theorem instance" : "exploratory", ring_name(pr.p), pr.spans(),
                                {{"merging_rank", pr.merging_rank}, {"q_dim", pr.q_dim}}));
  }
  if (m.over_z) {
    r["over_z"] = span_json(*m.over_z);
    r["claims"].push_back(claim("merging relations span Q_" + std::to_string(cfg.n) + " over Z[1/2]",
                                theorem ? "theorem instance" : "exploratory", "Z", m.over_z->spans_over(2),
                                {{"rank", m.over_z->divisors.size()}, {"target", m.over_z->target_rank}}));
  }
  return r;
}

json cmd_wprime(const RunConfig& cfg) {
  require_even(cfg.n, 6, 10);
  std::vector<uint32_t> primes = cfg.primes.empty() ? std::vector<uint32_t>{3} : cfg.primes;
  require_primes(primes);
  WPrimeIsoReport w = wprime_iso_check(cfg.n, primes, cfg.n <= 8);
  const bool theorem = cfg.n >= 10 && cfg.n != 12;
  json r;
  r["w_dim"] = w.w_dim;
  r["wtilde_dim"] = w.wtilde_dim;
  r["quasi_planar_classes"] = w.quasi_planar_classes;
  r["rows"] = json::array();
  r["claims"] = json::array();
  for (const auto& row : w.rows) {
    r["rows"].push_back({{"ring", ring_name(row.p)}, {"w2_dim", row.w2_dim}, {"w1_dim", row.w1_dim}});
    r["claims"].push_back(claim("W'_" + std::to_string(cfg.n) + " -> W_" + std::to_string(cfg.n) + " is an isomorphism",
                                theorem ? "theorem instance" : "exploratory", ring_name(row.p), row.w1_dim == w.w_dim,
                                {{"w1_dim", row.w1_dim}, {"w_dim", w.w_dim}}));
    r["claims"].push_back(claim("dim W' is at most the number of quasi-planar classes",
                                theorem ? "theorem instance" : "exploratory", ring_name(row.p),
                                row.w1_dim <= w.quasi_planar_classes));
  }
  return r;
}

json cmd_qp_census(const RunConfig& cfg, bool graded, int stride) {
  require_even(cfg.n, 6, 10);
  QuasiPlanarCensus c = enumerate_quasi_planar(cfg.n);
  json r;
  r["planar_graphs"] = c.planar_count;
  r["allowable_quasi_planar"] = c.allowable_quasi_planar;
  r["classes_with_representative"] = c.classes_with_representative();
  json empty = json::array(), orbits = json::array();
  for (const CanonicalGraph& g : c.empty_classes) empty.push_back(graph_json(g));
  for (const CanonicalGraph& g : c.empty_orbits) orbits.push_back(graph_json(g));
  r["empty_classes"] = empty;
  r["empty_orbits"] = orbits;
  r["claims"] = json::array();
  if (cfg.n == 6) {
    r["claims"].push_back(claim("exactly one planar graph (up to rotation) has no allowable quasi-planar preimage",
                                "theorem instance", "Z", c.empty_orbits.size() == 1));
  } else {
    r["claims"].push_back(claim("every planar graph is associated to an allowable quasi-planar graph",
                                "theorem instance", "Z", c.empty_classes.empty()));
  }
  if (graded) {
    GradedSpanReport g = graded_span_check(cfg.n, stride);
    json failures = json::array();
    for (const CanonicalGraph& p : g.failures) failures.push_back(graph_json(p));
    r["graded"] = {{"classes", g.classes}, {"checked", g.checked}, {"verified", g.verified},
                   {"two_comparisons", g.two_comparisons}, {"moves", g.moves}, {"failures", failures}};
    r["claims"].push_back(claim("equivalent quasi-planar graphs span the same graded piece",
                                cfg.n >= 10 ? "theorem instance" : "exploratory", "Z", g.verified == g.checked,
                                {{"verified", g.verified}, {"checked", g.checked}}));
  }
  return r;
}

json cmd_reduce(const RunConfig& cfg, const std::string& path, bool with_trace) {
  (void)cfg;
  json in = read_json_file(path);
  const int n = json_n(in);
  require_even(n, 10, kMaxVertices);
  CanonicalGraph g = undirected_graph(n, in.at("edges"));
  if (g.regular_degree() != 2) throw UsageError("reduce needs a degree-2 graph");
  if (!is_allowable(g)) throw UsageError("graph is forbidden (connected or two odd cycles)");
  QuasiPlanarReducer reducer;
  ReductionResult res = reducer.reduce(g, with_trace);
  Straightener s;
  ReductionAudit a = audit_reduction(g, res, s);
  json r;
  r["graph"] = graph_json(g);
  r["terms"] = vector_json(res.terms);
  r["clauses"] = res.clauses;
  r["nodes"] = res.nodes;
  r["moves"] = res.moves;
  r["forbidden_moves"] = res.forbidden_moves;
  if (with_trace) {
    json lines = json::array();
    for (const TraceEntry& e : res.trace.entries) lines.push_back(e.to_line());
    r["trace"] = lines;
  }
  r["claims"] = json::array(
      {claim("output straightens to X of the input", "consistency", "Q", a.sound),
       claim("output is supported on allowable quasi-planar graphs", "consistency", "Z", a.quasi_planar_support),
       claim("coefficients lie in Z[1/2]", "consistency", "Q", a.dyadic),
       claim("no forbidden Pluecker move is used", "consistency", "Z", a.forbidden_moves == 0)});
  return r;
}

json cmd_lift(const RunConfig& cfg, const std::string& path) {
  (void)cfg;
  json in = read_json_file(path);
  const int n = json_n(in);
  require_even(n, 6, kMaxVertices);
  CanonicalGraph g = undirected_graph(n, in.at("edges"));
  EvenPartition fine, coarse;
  try {
    fine = EvenPartition::make(n, json_pieces(in.at("fine")));
    coarse = EvenPartition::make(n, json_pieces(in.at("coarse")));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Straightener s;
  MergingLift lift = lift_merging_relation(g, fine, coarse, s);
  json terms = json::array();
  for (const auto& [t, c] : lift.lift) {
    terms.push_back({{"coeff", c.to_string()}, {"first", graph_json(t.first)}, {"second", graph_json(t.second)},
                     {"partition", t.partition.to_string()}});
  }
  json r;
  r["lift"] = terms;
  r["expansion_terms"] = lift.expansion_terms;
  r["claims"] = json::array({claim("the lift maps to zero in V (x) V", "consistency", "Z", lift.in_p_kernel),
                             claim("the lift maps back onto the merging relation", "consistency", "Z", lift.round_trip)});
  return r;
}

json cmd_cubic_n6() {
  CubicReport c = cubic_report_n6();
  json r;
  r["sym3_dim"] = c.sym3_dim;
  r["r3_dim"] = c.r3_dim;
  r["i3_dim"] = c.i3_dim;
  r["quadratic_image_rank"] = c.quadratic_image_rank;
  r["corank"] = c.corank;
  r["claims"] = json::array({claim("a single cubic relation is needed at n = 6", "theorem instance", "Q",
                                   c.corank == 1, {{"corank", c.corank}})});
  return r;
}

json cmd_export(const RunConfig& cfg, const std::string& which, const std::string& out_path) {
  require_even(cfg.n, 4, 10);
  Straightener s;
  SparseIntMatrix m;
  if (which == "mult" || which == "tensor" || which == "simple" || which == "simplest" || which == "kernel-b" ||
      which == "kernel-i2") {
    RelationSpaces spaces(cfg.n, s);
    if (which == "mult") m = spaces.mult_matrix();
    if (which == "tensor") m = spaces.tensor_matrix();
    if (which == "simple" || which == "simplest") m = spaces.simple_binomials(which == "simplest").columns;
    if (which == "kernel-b") m = spaces.relation_kernels().b.basis.to_sparse();
    if (which == "kernel-i2") m = spaces.relation_kernels().i2.basis.to_sparse();
  } else if (which == "merging" || which == "to-w") {
    require_even(cfg.n, 6, 10);
    WTilde w(cfg.n, s);
    m = which == "merging" ? w.merging_relations() : w.to_w();
  } else {
    throw UsageError("unknown matrix " + which + " (mult, tensor, simple, simplest, kernel-b, kernel-i2, merging, to-w)");
  }
  std::ofstream out(out_path);
  if (!out) throw UsageError("cannot write " + out_path);
  m.write_text(out);
  json r;
  r["matrix"] = which;
  r["rows"] = m.rows();
  r["cols"] = m.cols();
  r["nonzeros"] = m.nonzeros();
  r["path"] = out_path;
  r["claims"] = json::array();
  return r;
}

json cmd_odd_exchange(const RunConfig& cfg, int limit, bool rank) {
  if (cfg.n < 12 || cfg.n % 2 != 0 || cfg.n > 14) throw UsageError("the odd exchange experiment needs n = 12 or 14");
  std::vector<OddExchange> xs = odd_exchange_relations(cfg.n);
  int64_t checked = 0, chained = 0, telescoping = 0;
  for (const OddExchange& x : xs) {
    if (checked >= limit) break;
    ++checked;
    auto chain = odd_exchange_as_merging_chain(x);
    if (!chain) continue;
    ++chained;
    PartitionedVector sum;
    for (const MergeChainStep& step : *chain) {
      for (const auto& [t, c] : step.relation()) add_term(sum, t, c * Integer(step.sign));
    }
    telescoping += sum == x.relation();
  }
  json r;
  r["relations"] = xs.size();
  r["checked"] = checked;
  r["merging_chains"] = chained;
  r["claims"] = json::array({claim("every merging chain sums to its odd exchange relation", "consistency", "Z",
                                   telescoping == chained)});
  if (rank) {
    uint32_t p = cfg.primes.empty() ? 3 : cfg.primes.front();
    WPrimeReport w = wprime_dimension(cfg.n, p);
    r["wprime"] = {{"wtilde_dim", w.wtilde_dim}, {"relation_rank", w.relation_rank}, {"wprime_dim", w.wprime_dim},
                   {"w_dim", w.w_dim}};
    r["claims"].push_back(claim("merging and odd exchange relations give W' = W", "exploratory", ring_name(p),
                                w.isomorphic()));
  }
  return r;
}

// Output.

bool assertions_hold(const json& report, json& counterexample) {
  for (const json& c : report.value("claims", json::array())) {
    if (c["kind"] != "exploratory" && !c["holds"].get<bool>()) {
      counterexample = c;
      return false;
    }
  }
  return true;
}

void render_text(const json& j, const std::string& prefix, std::ostream& os) {
  for (const auto& [key, value] : j.items()) {
    if (key == "claims") continue;
    if (value.is_object()) {
      render_text(value, prefix + key + ".", os);
    } else if (value.is_string()) {
      os << prefix << key << ": " << value.get<std::string>() << "\n";
    } else {
      os << prefix << key << ": " << value.dump() << "\n";
    }
  }
}

void emit(const RunConfig& cfg, const std::string& command, const json& report) {
  json full = report;
  full["command"] = command;
  full["version"] = KEMPE_VERSION;
  if (cfg.format == "json") {
    std::cout << full.dump(2) << "\n";
    return;
  }
  render_text(report, "", std::cout);
  for (const json& c : report.value("claims", json::array())) {
    std::cout << (c["holds"].get<bool>() ? "[PASS] " : "[FAIL] ") << c["statement"].get<std::string>() << " ("
              << c["kind"].get<std::string>() << ", " << c["ring"].get<std::string>() << ")\n";
  }
}

void apply_memory_budget(int64_t mb) {
  if (mb <= 0) return;
  rlimit lim{};
  lim.rlim_cur = lim.rlim_max = static_cast<rlim_t>(mb) << 20;
  if (setrlimit(RLIMIT_AS, &lim) != 0) std::cerr << "warning: could not apply the memory budget\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Straightening, relation spaces and quasi-planar reductions for points on the projective line"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.cache_dir = default_cache_dir();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker count (stages currently run sequentially)")->check(CLI::PositiveNumber);
  app.add_option("--memory-mb", cfg.memory_mb, "Address-space budget in MiB (0 = unlimited)");
  app.add_option("--cache-dir", cfg.cache_dir, "Cache directory (default $KEMPE_CACHE_DIR or .kempe-cache)");
  app.add_flag("!--no-cache", cfg.use_cache, "Do not read or write the cache");
  app.add_flag("--refresh", cfg.refresh, "Recompute and overwrite cache entries");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* dims = app.add_subcommand("dims", "Dimension counts for n points");
  dims->add_option("n", cfg.n, "Number of points")->required();

  std::string vector_path, graph_path, term_path, gens = "simple", which, out_path;
  std::vector<std::string> over;
  bool exact = false, graded = false, trace = false, rank = false;
  int stride = 1, limit = 1000;

  auto* straighten_cmd = app.add_subcommand("straighten", "Straighten a graph vector given as JSON");
  straighten_cmd->add_option("vector", vector_path, "JSON file {n, terms: [{coeff, edges: [[tail, head], ...]}]}")
      ->required();

  auto* identities = app.add_subcommand("identities", "Verify the local identities I1, I2, I3 and SQR");

  auto* span = app.add_subcommand("span", "Span analysis of binomial relations");
  span->add_option("--n", cfg.n)->required();
  span->add_option("--gens", gens, "simple or simplest")->check(CLI::IsMember({"simple", "simplest"}));
  span->add_option("--over", over, "Z, or mod followed by primes")->expected(1, -1);

  auto* merge = app.add_subcommand("merge-span", "Merging relations against Q_n");
  merge->add_option("--n", cfg.n)->required();
  merge->add_option("--mod", cfg.primes, "Primes (default 3 5 7)")->expected(1, -1);
  merge->add_flag("--exact", exact, "Also analyse over Z (n <= 8)");

  auto* wprime = app.add_subcommand("wprime", "dim W' against dim W");
  wprime->add_option("--n", cfg.n)->required();
  wprime->add_option("--mod", cfg.primes, "Primes (default 3)")->expected(1, -1);

  auto* census = app.add_subcommand("qp-census", "Quasi-planar census by associated planar graph");
  census->add_option("--n", cfg.n)->required();
  census->add_flag("--graded", graded, "Also check the graded span of every class");
  census->add_option("--stride", stride, "Check every stride-th class")->check(CLI::PositiveNumber);

  auto* reduce = app.add_subcommand("reduce", "Reduce an allowable graph to quasi-planar graphs");
  reduce->add_option("graph", graph_path, "JSON file {n, edges: [[a, b], ...]}")->required();
  reduce->add_flag("--trace", trace, "Include the move trace");

  auto* lift = app.add_subcommand("lift", "Lift a merging relation to two-colored graphs");
  lift->add_option("term", term_path, "JSON file {n, edges, fine: [[...]], coarse: [[...]]}")->required();

  auto* cubic = app.add_subcommand("cubic-n6", "Cubic relations at n = 6");

  auto* exp = app.add_subcommand("export", "Write a matrix in sparse text format");
  exp->add_option("--n", cfg.n)->required();
  exp->add_option("--matrix", which, "mult, tensor, simple, simplest, kernel-b, kernel-i2, merging, to-w")->required();
  exp->add_option("--out", out_path)->required();

  auto* odd = app.add_subcommand("experiment", "Optional experiments beyond the desk-scale budget");
  auto* odd_exchange = odd->add_subcommand("odd-exchange", "Odd exchange relations and their merging chains");
  odd->require_subcommand(1);
  odd_exchange->add_option("--n", cfg.n)->required();
  odd_exchange->add_option("--limit", limit, "Relations to check for merging chains");
  odd_exchange->add_flag("--rank", rank, "Also compute dim W' over F_p (long)");
  odd_exchange->add_option("--mod", cfg.primes, "Prime for --rank (default 3)")->expected(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  apply_memory_budget(cfg.memory_mb);

  Cache cache(cfg);
  std::string command;
  json report;
  try {
    if (*dims) {
      command = "dims";
      report = cmd_dims(cfg);
    } else if (*straighten_cmd) {
      command = "straighten";
      report = cmd_straighten(cfg, vector_path);
    } else if (*identities) {
      command = "identities";
      report = cmd_identities(cfg);
    } else if (*span) {
      command = "span";
      json args{{"n", cfg.n}, {"gens", gens}, {"over", over}, {"mod", cfg.primes}};
      report = cache.cached(command, args, [&] { return cmd_span(cfg, gens, over); });
    } else if (*merge) {
      command = "merge-span";
      json args{{"n", cfg.n}, {"mod", cfg.primes}, {"exact", exact}};
      report = cache.cached(command, args, [&] { return cmd_merge_span(cfg, exact); });
    } else if (*wprime) {
      command = "wprime";
      json args{{"n", cfg.n}, {"mod", cfg.primes}};
      report = cache.cached(command, args, [&] { return cmd_wprime(cfg); });
    } else if (*census) {
      command = "qp-census";
      json args{{"n", cfg.n}, {"graded", graded}, {"stride", stride}};
      report = cache.cached(command, args, [&] { return cmd_qp_census(cfg, graded, stride); });
    } else if (*reduce) {
      command = "reduce";
      report = cmd_reduce(cfg, graph_path, trace);
    } else if (*lift) {
      command = "lift";
      report = cmd_lift(cfg, term_path);
    } else if (*cubic) {
      command = "cubic-n6";
      report = cache.cached(command, json{{"n", 6}}, [] { return cmd_cubic_n6(); });
    } else if (*exp) {
      command = "export";
      report = cmd_export(cfg, which, out_path);
    } else if (*odd_exchange) {
      command = "experiment odd-exchange";
      json args{{"n", cfg.n}, {"limit", limit}, {"rank", rank}, {"mod", cfg.primes}};
      report = cache.cached("odd-exchange", args, [&] { return cmd_odd_exchange(cfg, limit, rank); });
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StaleCache& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory (budget " << cfg.memory_mb << " MiB)\n";
    return kExitUsage;
  }

  emit(cfg, command, report);
  json counterexample;
  if (!assertions_hold(report, counterexample)) {
    std::cerr << json{{"counterexample", counterexample}}.dump(2) << "\n";
    return kExitAssertion;
  }
  return kExitOk;
}
