#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kempe/sparse_matrix.hpp"

namespace kempe {

// Row-major dense integer matrix used by the exact lattice routines.
struct DenseIntMatrix {
  int64_t rows = 0;
  int64_t cols = 0;
  std::vector<mpz_class> data;

  DenseIntMatrix() = default;
  DenseIntMatrix(int64_t r, int64_t c) : rows(r), cols(c), data(static_cast<size_t>(r * c)) {}

  mpz_class& at(int64_t i, int64_t j) { return data[static_cast<size_t>(i * cols + j)]; }
  const mpz_class& at(int64_t i, int64_t j) const { return data[static_cast<size_t>(i * cols + j)]; }

  static DenseIntMatrix from_sparse(const SparseIntMatrix& m);
  static DenseIntMatrix identity(int64_t n);
  SparseIntMatrix to_sparse() const;
  DenseIntMatrix transposed() const;
  bool is_zero() const;

  friend DenseIntMatrix operator*(const DenseIntMatrix& a, const DenseIntMatrix& b);
  friend bool operator==(const DenseIntMatrix& a, const DenseIntMatrix& b) = default;
};

// Columns of `basis` form a Z-basis of a saturated sublattice of Z^m, and
// `coordinates` is a left inverse (coordinates * basis = I) whose rows give the
// coordinates of any lattice vector.
struct LatticeBasis {
  DenseIntMatrix basis;        // m x k
  DenseIntMatrix coordinates;  // k x m

  int64_t ambient() const { return basis.rows; }
  int64_t rank() const { return basis.cols; }
  std::vector<mpz_class> column(int64_t j) const;
  // Coordinates of x if it lies in the lattice.
  std::optional<std::vector<mpz_class>> solve(const std::vector<mpz_class>& x) const;
};

// Saturated basis of {x in Z^cols : M x = 0}.
LatticeBasis kernel_saturated(const DenseIntMatrix& m);
LatticeBasis kernel_saturated(const SparseIntMatrix& m);

struct EliminationSummary {
  int64_t rank = 0;
  std::vector<int64_t> pivot_rows;
  std::vector<int64_t> pivot_cols;
  mpz_class minor;  // determinant (up to sign) of the pivot minor
};

// Fraction-free (Bareiss) elimination with full pivoting.
EliminationSummary bareiss(const DenseIntMatrix& m);
int64_t rank_over_q(const DenseIntMatrix& m);

struct SnfOptions {
  // Matrices whose smaller side is at most this use plain integer Smith form;
  // larger full-rank matrices are reduced modulo a nonzero maximal minor.
  int64_t dense_threshold = 24;
};

// Nonzero Smith invariants d_1 | d_2 | ... (positive).
std::vector<mpz_class> elementary_divisors(const DenseIntMatrix& m, const SnfOptions& options = {});
std::vector<mpz_class> elementary_divisors(const SparseIntMatrix& m, const SnfOptions& options = {});

// Prime factors in increasing order; cofactors that survive trial division
// and fail the primality test are returned as they are.
std::vector<mpz_class> prime_factors(const mpz_class& v);

struct SpanReport {
  bool contained = true;
  int64_t outside_generator = -1;  // first generator not in the target
  std::vector<std::pair<int64_t, mpz_class>> residual;  // g - K P g, nonzero entries
  int64_t target_rank = 0;
  int64_t generator_count = 0;
  bool full_rank = false;
  std::vector<mpz_class> divisors;
  std::vector<mpz_class> bad_primes;

  // Generators span target (x) Z[1/N].
  bool spans_over(const mpz_class& n) const;
  std::string summary() const;
};

// Generators are the columns of `generators` (ambient rows = target.ambient()).
SpanReport span_analysis(const SparseIntMatrix& generators, const LatticeBasis& target,
                         const SnfOptions& options = {});

}  // namespace kempe
