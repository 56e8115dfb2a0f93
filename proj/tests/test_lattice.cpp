#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "kempe/lattice.hpp"
#include "kempe/modular.hpp"
#include "kempe/ring.hpp"

using namespace kempe;

namespace {

DenseIntMatrix from_rows(const std::vector<std::vector<long>>& rows) {
  DenseIntMatrix m(static_cast<int64_t>(rows.size()), rows.empty() ? 0 : static_cast<int64_t>(rows[0].size()));
  for (int64_t i = 0; i < m.rows; ++i)
    for (int64_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  return m;
}

DenseIntMatrix random_matrix(std::mt19937_64& rng, int64_t r, int64_t c, long lo, long hi, double density = 1.0) {
  std::uniform_int_distribution<long> dist(lo, hi);
  std::bernoulli_distribution keep(density);
  DenseIntMatrix m(r, c);
  for (auto& x : m.data) x = keep(rng) ? dist(rng) : 0;
  return m;
}

// Independent oracle: Gaussian elimination over Q.
int64_t rational_rank(const DenseIntMatrix& m) {
  std::vector<std::vector<mpq_class>> a(m.rows, std::vector<mpq_class>(m.cols));
  for (int64_t i = 0; i < m.rows; ++i)
    for (int64_t j = 0; j < m.cols; ++j) a[i][j] = m.at(i, j);
  int64_t rank = 0;
  for (int64_t j = 0; j < m.cols && rank < m.rows; ++j) {
    int64_t p = -1;
    for (int64_t i = rank; i < m.rows; ++i)
      if (sgn(a[i][j]) != 0) p = i;
    if (p < 0) continue;
    std::swap(a[p], a[rank]);
    for (int64_t i = rank + 1; i < m.rows; ++i) {
      if (sgn(a[i][j]) == 0) continue;
      mpq_class f = a[i][j] / a[rank][j];
      for (int64_t t = j; t < m.cols; ++t) a[i][t] -= f * a[rank][t];
    }
    ++rank;
  }
  return rank;
}

int64_t dense_rank_mod(const DenseIntMatrix& m, uint32_t p) { return rank_mod_p(m.to_sparse(), p); }

uint32_t random_prime(std::mt19937_64& rng, uint32_t lo, uint32_t hi) {
  std::uniform_int_distribution<uint32_t> dist(lo, hi);
  while (true) {
    uint32_t c = dist(rng) | 1u;
    if (is_probable_prime(c)) return c;
  }
}

// Oracle for Smith invariants of tiny matrices: ratios of determinantal divisors.
mpz_class det(const std::vector<std::vector<mpz_class>>& a) {
  const size_t n = a.size();
  if (n == 1) return a[0][0];
  mpz_class out = 0;
  for (size_t j = 0; j < n; ++j) {
    std::vector<std::vector<mpz_class>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (size_t t = 0; t < n; ++t)
        if (t != j) row.push_back(a[i][t]);
      minor.push_back(row);
    }
    mpz_class term = a[0][j] * det(minor);
    out += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return out;
}

void subsets(int64_t n, int64_t k, int64_t start, std::vector<int64_t>& cur, std::vector<std::vector<int64_t>>& out) {
  if (static_cast<int64_t>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int64_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<mpz_class> determinantal_invariants(const DenseIntMatrix& m) {
  std::vector<mpz_class> out;
  mpz_class prev = 1;
  for (int64_t k = 1; k <= std::min(m.rows, m.cols); ++k) {
    std::vector<std::vector<int64_t>> rs, cs;
    std::vector<int64_t> cur;
    subsets(m.rows, k, 0, cur, rs);
    subsets(m.cols, k, 0, cur, cs);
    mpz_class g = 0;
    for (const auto& r : rs) {
      for (const auto& c : cs) {
        std::vector<std::vector<mpz_class>> a(k, std::vector<mpz_class>(k));
        for (int64_t i = 0; i < k; ++i)
          for (int64_t j = 0; j < k; ++j) a[i][j] = m.at(r[i], c[j]);
        mpz_class d = det(a);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      }
    }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

DenseIntMatrix random_unimodular(std::mt19937_64& rng, int64_t n) {
  DenseIntMatrix u = DenseIntMatrix::identity(n);
  std::uniform_int_distribution<int64_t> idx(0, n - 1);
  std::uniform_int_distribution<long> coeff(-3, 3);
  for (int step = 0; step < 12; ++step) {
    int64_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    long f = coeff(rng);
    for (int64_t c = 0; c < n; ++c) u.at(i, c) += f * u.at(j, c);
  }
  return u;
}

std::vector<mpz_class> ints(std::initializer_list<long> v) { return std::vector<mpz_class>(v.begin(), v.end()); }

void expect_kernel_contract(const DenseIntMatrix& m, const LatticeBasis& k) {
  EXPECT_TRUE((m * k.basis).is_zero());
  EXPECT_EQ(k.coordinates * k.basis, DenseIntMatrix::identity(k.rank()));
  EXPECT_EQ(k.rank(), m.cols - rational_rank(m));
  for (const mpz_class& d : elementary_divisors(k.basis)) EXPECT_EQ(d, 1);
}

}  // namespace

TEST(SparseText, RoundTripIsByteExact) {
  const std::string text = "3 4 M\n1 1 5\n3 2 -7\n2 4 123456789012345678901234567890\n1 3 1\n0 0 0\n";
  std::istringstream in(text);
  SparseIntMatrix m = SparseIntMatrix::read_text(in);
  EXPECT_EQ(m.rows(), 3);
  EXPECT_EQ(m.cols(), 4);
  EXPECT_EQ(m.nonzeros(), 4u);
  EXPECT_EQ(m.to_text(), text);
  std::istringstream again(m.to_text());
  EXPECT_EQ(SparseIntMatrix::read_text(again).to_text(), text);
}

TEST(SparseText, RejectsMalformedInput) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return SparseIntMatrix::read_text(in);
  };
  EXPECT_THROW(parse("2 2 M\n1 1 3\n1 1 4\n0 0 0\n"), std::invalid_argument);
  EXPECT_THROW(parse("2 2 M\n1 1 0\n0 0 0\n"), std::invalid_argument);
  EXPECT_THROW(parse("2 2 M\n3 1 1\n0 0 0\n"), std::invalid_argument);
  EXPECT_THROW(parse("2 2 M\n1 1 1\n"), std::invalid_argument);
  EXPECT_THROW(parse("2 2\n0 0 0\n"), std::invalid_argument);
  EXPECT_NO_THROW(parse("0 0 M\n0 0 0\n"));
}

TEST(ModularRank, TrivialCases) {
  EXPECT_EQ(dense_rank_mod(DenseIntMatrix::identity(5), 101), 5);
  EXPECT_EQ(dense_rank_mod(DenseIntMatrix(4, 6), 101), 0);
  EXPECT_EQ(dense_rank_mod(from_rows({{2, 4}, {1, 2}}), 3), 1);
  EXPECT_EQ(dense_rank_mod(from_rows({{2, 0}, {0, 3}}), 3), 1);
  EXPECT_EQ(dense_rank_mod(from_rows({{2, 0}, {0, 3}}), 5), 2);
}

TEST(ModularRank, RandomMatricesAgreeWithRationalRank) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 6; ++trial) {
    // Products of thin factors give controlled rank deficiency.
    const int64_t inner = 20 + 6 * trial;
    DenseIntMatrix m = random_matrix(rng, 50, inner, -9, 9, 0.5) * random_matrix(rng, inner, 50, -9, 9, 0.5);
    const int64_t expected = rational_rank(m);
    EXPECT_EQ(rank_over_q(m), expected);
    for (int k = 0; k < 3; ++k) {
      uint32_t p = random_prime(rng, 1u << 29, (1u << 30) - 1);
      EXPECT_EQ(dense_rank_mod(m, p), expected) << "p=" << p;
    }
  }
}

TEST(ModularRank, ColumnPriorityDoesNotChangeRank) {
  std::mt19937_64 rng(7);
  DenseIntMatrix m = random_matrix(rng, 30, 12, -2, 2, 0.3) * random_matrix(rng, 12, 40, -2, 2, 0.3);
  const int64_t expected = rational_rank(m);
  std::vector<int64_t> priority(40);
  std::iota(priority.begin(), priority.end(), 0);
  std::shuffle(priority.begin(), priority.end(), rng);
  ModularEliminator elim(40, 1000003, priority);
  for (const auto& row : m.to_sparse().row_lists()) {
    std::vector<ModEntry> v;
    for (const auto& [col, value] : row) v.emplace_back(col, value.mod(1000003));
    elim.insert(v);
  }
  EXPECT_EQ(elim.rank(), expected);
  EXPECT_EQ(static_cast<int64_t>(elim.pivot_columns().size()), expected);
  // Every original row is now in the span.
  for (const auto& row : m.to_sparse().row_lists()) {
    std::vector<ModEntry> v;
    for (const auto& [col, value] : row) v.emplace_back(col, value.mod(1000003));
    EXPECT_TRUE(elim.in_span(v));
  }
  DenseIntMatrix ext(m.rows + 1, m.cols);
  for (int64_t i = 0; i < m.rows; ++i)
    for (int64_t j = 0; j < m.cols; ++j) ext.at(i, j) = m.at(i, j);
  ext.at(m.rows, 0) = 1;
  std::vector<ModEntry> unit = {{0, 1}};
  EXPECT_EQ(elim.in_span(unit), rational_rank(ext) == expected);
}

TEST(Kernel, OneByTwoExamples) {
  LatticeBasis a = kernel_saturated(from_rows({{1, 1}}));
  ASSERT_EQ(a.rank(), 1);
  EXPECT_EQ(a.column(0), ints({1, -1}));
  LatticeBasis b = kernel_saturated(from_rows({{2, 2}}));
  ASSERT_EQ(b.rank(), 1);
  EXPECT_EQ(b.column(0), ints({1, -1}));
}

TEST(Kernel, SaturatedWithoutUnitEntries) {
  DenseIntMatrix m = from_rows({{2, 4, 6, 8}, {3, 9, 15, 3}});
  LatticeBasis k = kernel_saturated(m);
  expect_kernel_contract(m, k);
  EXPECT_EQ(k.rank(), 2);
}

TEST(Kernel, ZeroAndFullRankMatrices) {
  LatticeBasis z = kernel_saturated(DenseIntMatrix(3, 4));
  EXPECT_EQ(z.rank(), 4);
  EXPECT_EQ(z.basis, DenseIntMatrix::identity(4));
  LatticeBasis f = kernel_saturated(from_rows({{1, 2}, {3, 4}}));
  EXPECT_EQ(f.rank(), 0);
}

TEST(Kernel, RandomMatricesSatisfyContract) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int64_t> dim(1, 9);
    const int64_t r = dim(rng), c = dim(rng) + 3;
    // Even-only and mixed entries exercise both elimination phases.
    const long scale = trial % 3 == 0 ? 2 : 1;
    DenseIntMatrix m = random_matrix(rng, r, c, -4, 4, 0.6);
    for (auto& x : m.data) x *= scale;
    if (trial % 4 == 1) m = random_matrix(rng, r, 2, -3, 3) * random_matrix(rng, 2, c, -3, 3);
    LatticeBasis k = kernel_saturated(m);
    expect_kernel_contract(m, k);
  }
}

TEST(Kernel, SolveFindsCoordinatesAndRejectsOutsiders) {
  DenseIntMatrix m = from_rows({{1, 1, 1}});
  LatticeBasis k = kernel_saturated(m);
  auto y = k.solve(ints({3, -1, -2}));
  ASSERT_TRUE(y.has_value());
  std::vector<mpz_class> back(3);
  for (int64_t i = 0; i < 3; ++i)
    for (int64_t t = 0; t < k.rank(); ++t) back[i] += k.basis.at(i, t) * (*y)[t];
  EXPECT_EQ(back, ints({3, -1, -2}));
  EXPECT_FALSE(k.solve(ints({1, 0, 0})).has_value());
}

TEST(Divisors, SmallExamples) {
  EXPECT_EQ(elementary_divisors(from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 6}})), ints({1, 2, 6}));
  EXPECT_EQ(elementary_divisors(from_rows({{2}})), ints({2}));
  EXPECT_EQ(elementary_divisors(from_rows({{2, 0}, {0, 3}})), ints({1, 6}));
  EXPECT_EQ(elementary_divisors(from_rows({{0, 0}, {0, 0}})), ints({}));
  EXPECT_EQ(elementary_divisors(from_rows({{-4, 6}})), ints({2}));
}

TEST(Divisors, InvariantUnderUnimodularMoves) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    DenseIntMatrix m = random_matrix(rng, 4, 4, -6, 6);
    if (trial % 5 == 0) m = random_matrix(rng, 4, 2, -4, 4) * random_matrix(rng, 2, 4, -4, 4);
    DenseIntMatrix moved = random_unimodular(rng, 4) * m * random_unimodular(rng, 4);
    const auto expected = determinantal_invariants(m);
    EXPECT_EQ(elementary_divisors(m), expected);
    EXPECT_EQ(elementary_divisors(moved), expected);
  }
}

TEST(Divisors, ModularPathAgreesWithPlainSmithForm) {
  std::mt19937_64 rng(31337);
  SnfOptions modular{.dense_threshold = 0};
  SnfOptions plain{.dense_threshold = 1000};
  for (int trial = 0; trial < 8; ++trial) {
    DenseIntMatrix m = random_matrix(rng, 8, 14, -5, 5, 0.5);
    DenseIntMatrix d = DenseIntMatrix::identity(8);
    d.at(6, 6) = 2 * (trial + 1);
    d.at(7, 7) = 12;
    m = d * m;
    EXPECT_EQ(elementary_divisors(m, modular), elementary_divisors(m, plain));
    EXPECT_EQ(elementary_divisors(m.transposed(), modular), elementary_divisors(m, plain));
  }
}

TEST(Divisors, PrimeFactors) {
  EXPECT_EQ(prime_factors(mpz_class(1)), ints({}));
  EXPECT_EQ(prime_factors(mpz_class(-360)), ints({2, 3, 5}));
  EXPECT_EQ(prime_factors(mpz_class(1000003) * 1000003 * 8), ints({2, 1000003}));
}

TEST(Span, GeneratorsEqualToTarget) {
  DenseIntMatrix m = from_rows({{1, 1, 1, 1}, {0, 1, 2, 3}});
  LatticeBasis k = kernel_saturated(m);
  SpanReport r = span_analysis(k.basis.to_sparse(), k);
  EXPECT_TRUE(r.contained);
  EXPECT_TRUE(r.full_rank);
  EXPECT_TRUE(r.bad_primes.empty());
  for (const mpz_class& d : r.divisors) EXPECT_EQ(d, 1);
  EXPECT_TRUE(r.spans_over(1));
}

TEST(Span, DoubledTargetHasBadPrimeTwo) {
  DenseIntMatrix m = from_rows({{1, 1, 1, 1}, {0, 1, 2, 3}});
  LatticeBasis k = kernel_saturated(m);
  DenseIntMatrix doubled = k.basis;
  for (auto& x : doubled.data) x *= 2;
  SpanReport r = span_analysis(doubled.to_sparse(), k);
  EXPECT_TRUE(r.full_rank);
  EXPECT_EQ(r.bad_primes, ints({2}));
  EXPECT_FALSE(r.spans_over(3));
  EXPECT_TRUE(r.spans_over(2));
}

TEST(Span, OutsideGeneratorReportsResidual) {
  LatticeBasis k = kernel_saturated(from_rows({{1, 1}}));
  SparseIntMatrix g(2, 2);
  g.add(0, 0, 1);
  g.add(1, 0, -1);
  g.add(0, 1, 1);
  SpanReport r = span_analysis(g, k);
  EXPECT_FALSE(r.contained);
  EXPECT_EQ(r.outside_generator, 1);
  ASSERT_FALSE(r.residual.empty());
  EXPECT_FALSE(r.spans_over(2));
}

TEST(Span, BadPrimesMatchBruteForceModularRanks) {
  std::mt19937_64 rng(2718);
  const std::vector<uint32_t> small_primes = {2, 3, 5, 7, 11, 13};
  for (int trial = 0; trial < 10; ++trial) {
    DenseIntMatrix m = random_matrix(rng, 4, 12, -3, 3, 0.7);
    LatticeBasis k = kernel_saturated(m);
    // Generators K T for a random T with a planted scaled column.
    DenseIntMatrix t = random_matrix(rng, k.rank(), k.rank() + 2, -2, 2, 0.6);
    const long planted = std::vector<long>{2, 3, 6, 10, 1}[trial % 5];
    for (int64_t i = 0; i < t.rows; ++i) t.at(i, 0) *= planted;
    DenseIntMatrix g = k.basis * t;
    SpanReport r = span_analysis(g.to_sparse(), k);
    ASSERT_TRUE(r.contained);
    for (uint32_t p : small_primes) {
      const bool deficient = dense_rank_mod(g, p) < k.rank();
      const bool reported = std::find(r.bad_primes.begin(), r.bad_primes.end(), mpz_class(p)) != r.bad_primes.end();
      EXPECT_EQ(deficient, !r.full_rank || reported) << "p=" << p << " trial=" << trial;
    }
  }
}
