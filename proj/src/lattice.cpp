#include "kempe/lattice.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace kempe {

namespace {

mpz_class abs_mpz(const mpz_class& v) { return v < 0 ? mpz_class(-v) : v; }

int cmpabs(const mpz_class& a, const mpz_class& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }
int cmpabs(const mpz_class& a, unsigned long b) { return mpz_cmpabs_ui(a.get_mpz_t(), b); }

// Symmetric residue in (-d/2, d/2].
void reduce_sym(mpz_class& x, const mpz_class& d) {
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  mpz_class twice = x * 2;
  if (twice > d) x -= d;
}

void swap_rows(DenseIntMatrix& a, int64_t i, int64_t j) {
  if (i == j) return;
  for (int64_t c = 0; c < a.cols; ++c) swap(a.at(i, c), a.at(j, c));
}

void swap_cols(DenseIntMatrix& a, int64_t i, int64_t j) {
  if (i == j) return;
  for (int64_t r = 0; r < a.rows; ++r) swap(a.at(r, i), a.at(r, j));
}

// Plain Smith form. With a modulus d, entries are kept reduced modulo d; this
// is valid when the column lattice contains d Z^rows, and every divisor is
// then reported as gcd(invariant, d).
std::vector<mpz_class> smith(DenseIntMatrix a, const mpz_class* d) {
  const int64_t r = a.rows, c = a.cols;
  std::vector<mpz_class> out;
  if (d) {
    for (auto& x : a.data) reduce_sym(x, *d);
  }
  const int64_t limit = std::min(r, c);
  mpz_class q;
  for (int64_t k = 0; k < limit; ++k) {
    bool found = true;
    while (true) {
      int64_t bi = -1, bj = -1;
      mpz_class best;
      for (int64_t i = k; i < r; ++i) {
        for (int64_t j = k; j < c; ++j) {
          const mpz_class& v = a.at(i, j);
          if (sgn(v) == 0) continue;
          if (bi < 0 || cmpabs(v, best) < 0) {
            bi = i;
            bj = j;
            best = v;
            if (cmpabs(best, 1) == 0) break;
          }
        }
        if (bi >= 0 && cmpabs(best, 1) == 0) break;
      }
      if (bi < 0) {
        found = false;
        break;
      }
      swap_rows(a, k, bi);
      swap_cols(a, k, bj);
      const mpz_class pivot = a.at(k, k);
      bool clean = true;
      std::vector<int64_t> row_nz;
      for (int64_t j = k; j < c; ++j)
        if (sgn(a.at(k, j)) != 0) row_nz.push_back(j);
      for (int64_t i = k + 1; i < r; ++i) {
        if (sgn(a.at(i, k)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a.at(i, k).get_mpz_t(), pivot.get_mpz_t());
        if (sgn(q) != 0) {
          for (int64_t j : row_nz) {
            a.at(i, j) -= q * a.at(k, j);
            if (d) reduce_sym(a.at(i, j), *d);
          }
        }
        if (sgn(a.at(i, k)) != 0) clean = false;
      }
      for (int64_t j = k + 1; j < c; ++j) {
        if (sgn(a.at(k, j)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a.at(k, j).get_mpz_t(), pivot.get_mpz_t());
        if (sgn(q) != 0) {
          for (int64_t i = k; i < r; ++i) {
            if (sgn(a.at(i, k)) == 0) continue;
            a.at(i, j) -= q * a.at(i, k);
            if (d) reduce_sym(a.at(i, j), *d);
          }
        }
        if (sgn(a.at(k, j)) != 0) clean = false;
      }
      if (!clean) continue;
      int64_t bad_row = -1;
      for (int64_t i = k + 1; i < r && bad_row < 0; ++i) {
        for (int64_t j = k + 1; j < c; ++j) {
          if (!mpz_divisible_p(a.at(i, j).get_mpz_t(), pivot.get_mpz_t())) {
            bad_row = i;
            break;
          }
        }
      }
      if (bad_row < 0) break;
      for (int64_t j = k; j < c; ++j) {
        a.at(k, j) += a.at(bad_row, j);
        if (d) reduce_sym(a.at(k, j), *d);
      }
    }
    if (!found) {
      if (d) {
        for (int64_t i = k; i < r; ++i) out.push_back(*d);
      }
      break;
    }
    mpz_class dk = abs_mpz(a.at(k, k));
    if (d) mpz_gcd(dk.get_mpz_t(), dk.get_mpz_t(), d->get_mpz_t());
    out.push_back(dk);
  }
  return out;
}

}  // namespace

DenseIntMatrix DenseIntMatrix::from_sparse(const SparseIntMatrix& m) {
  DenseIntMatrix out(m.rows(), m.cols());
  for (const Triplet& t : m.entries()) out.at(t.row, t.col) += t.value.to_mpz();
  return out;
}

DenseIntMatrix DenseIntMatrix::identity(int64_t n) {
  DenseIntMatrix out(n, n);
  for (int64_t i = 0; i < n; ++i) out.at(i, i) = 1;
  return out;
}

SparseIntMatrix DenseIntMatrix::to_sparse() const {
  SparseIntMatrix out(rows, cols);
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j)
      if (sgn(at(i, j)) != 0) out.add(i, j, Integer(at(i, j)));
  return out;
}

DenseIntMatrix DenseIntMatrix::transposed() const {
  DenseIntMatrix out(cols, rows);
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j) out.at(j, i) = at(i, j);
  return out;
}

bool DenseIntMatrix::is_zero() const {
  return std::all_of(data.begin(), data.end(), [](const mpz_class& v) { return sgn(v) == 0; });
}

DenseIntMatrix operator*(const DenseIntMatrix& a, const DenseIntMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix shapes do not match");
  DenseIntMatrix out(a.rows, b.cols);
  for (int64_t i = 0; i < a.rows; ++i) {
    for (int64_t t = 0; t < a.cols; ++t) {
      const mpz_class& x = a.at(i, t);
      if (sgn(x) == 0) continue;
      for (int64_t j = 0; j < b.cols; ++j) {
        if (sgn(b.at(t, j)) != 0) out.at(i, j) += x * b.at(t, j);
      }
    }
  }
  return out;
}

std::vector<mpz_class> LatticeBasis::column(int64_t j) const {
  std::vector<mpz_class> out(static_cast<size_t>(basis.rows));
  for (int64_t i = 0; i < basis.rows; ++i) out[i] = basis.at(i, j);
  return out;
}

std::optional<std::vector<mpz_class>> LatticeBasis::solve(const std::vector<mpz_class>& x) const {
  if (static_cast<int64_t>(x.size()) != ambient()) throw std::invalid_argument("vector has the wrong length");
  std::vector<mpz_class> y(static_cast<size_t>(rank()));
  for (int64_t t = 0; t < rank(); ++t)
    for (int64_t i = 0; i < ambient(); ++i)
      if (sgn(x[i]) != 0 && sgn(coordinates.at(t, i)) != 0) y[t] += coordinates.at(t, i) * x[i];
  for (int64_t i = 0; i < ambient(); ++i) {
    mpz_class v = 0;
    for (int64_t t = 0; t < rank(); ++t)
      if (sgn(basis.at(i, t)) != 0) v += basis.at(i, t) * y[t];
    if (v != x[i]) return std::nullopt;
  }
  return y;
}

LatticeBasis kernel_saturated(const DenseIntMatrix& m) {
  const int64_t r = m.rows, c = m.cols;
  DenseIntMatrix a = m;

  // Unit pivots first: row operations only, so the pivot columns are solved
  // for exactly in terms of the remaining ones.
  std::vector<int64_t> pivot_col_of_row(r, -1);
  std::vector<char> col_used(c, 0);
  bool progress = true;
  while (progress) {
    progress = false;
    for (int64_t i = 0; i < r; ++i) {
      if (pivot_col_of_row[i] >= 0) continue;
      int64_t pj = -1;
      for (int64_t j = 0; j < c; ++j) {
        if (!col_used[j] && cmpabs(a.at(i, j), 1) == 0) {
          pj = j;
          break;
        }
      }
      if (pj < 0) continue;
      if (a.at(i, pj) < 0)
        for (int64_t j = 0; j < c; ++j) a.at(i, j) = -a.at(i, j);
      std::vector<int64_t> nz;
      for (int64_t j = 0; j < c; ++j)
        if (sgn(a.at(i, j)) != 0) nz.push_back(j);
      for (int64_t t = 0; t < r; ++t) {
        if (t == i || sgn(a.at(t, pj)) == 0) continue;
        const mpz_class f = a.at(t, pj);
        for (int64_t j : nz) a.at(t, j) -= f * a.at(i, j);
      }
      pivot_col_of_row[i] = pj;
      col_used[pj] = 1;
      progress = true;
    }
  }

  std::vector<int64_t> free_cols;
  for (int64_t j = 0; j < c; ++j)
    if (!col_used[j]) free_cols.push_back(j);
  const int64_t cf = static_cast<int64_t>(free_cols.size());

  std::vector<int64_t> residual_rows;
  for (int64_t i = 0; i < r; ++i) {
    if (pivot_col_of_row[i] >= 0) continue;
    bool nonzero = false;
    for (int64_t j : free_cols) nonzero = nonzero || sgn(a.at(i, j)) != 0;
    if (nonzero) residual_rows.push_back(i);
  }

  // Column echelon form of the residual block with a unimodular transform U
  // (tracked together with its inverse): R U = [H | 0].
  DenseIntMatrix res(static_cast<int64_t>(residual_rows.size()), cf);
  for (size_t q = 0; q < residual_rows.size(); ++q)
    for (int64_t j = 0; j < cf; ++j) res.at(static_cast<int64_t>(q), j) = a.at(residual_rows[q], free_cols[j]);
  DenseIntMatrix u = DenseIntMatrix::identity(cf);
  DenseIntMatrix uinv = DenseIntMatrix::identity(cf);
  int64_t cur = 0;
  mpz_class g, s, t, xg, yg, tmp1, tmp2;
  for (int64_t i = 0; i < res.rows && cur < cf; ++i) {
    for (int64_t j = cur + 1; j < cf; ++j) {
      if (sgn(res.at(i, j)) == 0) continue;
      if (sgn(res.at(i, cur)) == 0) {
        swap_cols(res, cur, j);
        swap_cols(u, cur, j);
        swap_rows(uinv, cur, j);
        continue;
      }
      const mpz_class x = res.at(i, cur), y = res.at(i, j);
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      mpz_divexact(xg.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(yg.get_mpz_t(), y.get_mpz_t(), g.get_mpz_t());
      // [col_cur col_j] <- [col_cur col_j] * [[s, -yg], [t, xg]]
      auto combine_cols = [&](DenseIntMatrix& mat) {
        for (int64_t row = 0; row < mat.rows; ++row) {
          mpz_class& p = mat.at(row, cur);
          mpz_class& q = mat.at(row, j);
          if (sgn(p) == 0 && sgn(q) == 0) continue;
          tmp1 = s * p + t * q;
          tmp2 = xg * q - yg * p;
          p = tmp1;
          q = tmp2;
        }
      };
      combine_cols(res);
      combine_cols(u);
      // Inverse acts on rows: [row_cur; row_j] <- [[xg, yg], [-t, s]] * [row_cur; row_j]
      for (int64_t col = 0; col < cf; ++col) {
        mpz_class& p = uinv.at(cur, col);
        mpz_class& q = uinv.at(j, col);
        if (sgn(p) == 0 && sgn(q) == 0) continue;
        tmp1 = xg * p + yg * q;
        tmp2 = s * q - t * p;
        p = tmp1;
        q = tmp2;
      }
    }
    if (sgn(res.at(i, cur)) != 0) ++cur;
  }
  const int64_t k = cf - cur;

  LatticeBasis out;
  out.basis = DenseIntMatrix(c, k);
  out.coordinates = DenseIntMatrix(k, c);
  for (int64_t f = 0; f < k; ++f) {
    const int64_t uc = cur + f;
    for (int64_t q = 0; q < cf; ++q) out.basis.at(free_cols[q], f) = u.at(q, uc);
    for (int64_t i = 0; i < r; ++i) {
      const int64_t pj = pivot_col_of_row[i];
      if (pj < 0) continue;
      mpz_class v = 0;
      for (int64_t q = 0; q < cf; ++q)
        if (sgn(a.at(i, free_cols[q])) != 0 && sgn(u.at(q, uc)) != 0) v -= a.at(i, free_cols[q]) * u.at(q, uc);
      out.basis.at(pj, f) = v;
    }
    for (int64_t q = 0; q < cf; ++q) out.coordinates.at(f, free_cols[q]) = uinv.at(uc, q);
    // Normalize so the first nonzero entry is positive.
    for (int64_t i = 0; i < c; ++i) {
      const int sg = sgn(out.basis.at(i, f));
      if (sg == 0) continue;
      if (sg < 0) {
        for (int64_t row = 0; row < c; ++row) out.basis.at(row, f) = -out.basis.at(row, f);
        for (int64_t col = 0; col < c; ++col) out.coordinates.at(f, col) = -out.coordinates.at(f, col);
      }
      break;
    }
  }
  return out;
}

LatticeBasis kernel_saturated(const SparseIntMatrix& m) { return kernel_saturated(DenseIntMatrix::from_sparse(m)); }

EliminationSummary bareiss(const DenseIntMatrix& m) {
  DenseIntMatrix a = m;
  const int64_t r = a.rows, c = a.cols;
  std::vector<int64_t> row_perm(r), col_perm(c);
  for (int64_t i = 0; i < r; ++i) row_perm[i] = i;
  for (int64_t j = 0; j < c; ++j) col_perm[j] = j;
  EliminationSummary out;
  mpz_class prev = 1;
  for (int64_t k = 0; k < std::min(r, c); ++k) {
    int64_t pi = -1, pj = -1;
    for (int64_t j = k; j < c && pi < 0; ++j) {
      for (int64_t i = k; i < r; ++i) {
        if (sgn(a.at(i, j)) != 0) {
          pi = i;
          pj = j;
          break;
        }
      }
    }
    if (pi < 0) break;
    swap_rows(a, k, pi);
    std::swap(row_perm[k], row_perm[pi]);
    swap_cols(a, k, pj);
    std::swap(col_perm[k], col_perm[pj]);
    const mpz_class& pivot = a.at(k, k);
    for (int64_t i = k + 1; i < r; ++i) {
      const mpz_class f = a.at(i, k);
      for (int64_t j = k + 1; j < c; ++j) {
        mpz_class& x = a.at(i, j);
        x *= pivot;
        if (sgn(f) != 0) x -= f * a.at(k, j);
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
      a.at(i, k) = 0;
    }
    prev = pivot;
    out.rank = k + 1;
  }
  out.pivot_rows.assign(row_perm.begin(), row_perm.begin() + out.rank);
  out.pivot_cols.assign(col_perm.begin(), col_perm.begin() + out.rank);
  out.minor = abs_mpz(prev);
  return out;
}

int64_t rank_over_q(const DenseIntMatrix& m) { return bareiss(m).rank; }

std::vector<mpz_class> elementary_divisors(const DenseIntMatrix& m, const SnfOptions& options) {
  if (m.rows == 0 || m.cols == 0) return {};
  if (std::min(m.rows, m.cols) <= options.dense_threshold) return smith(m, nullptr);
  EliminationSummary e = bareiss(m);
  if (e.rank == 0) return {};
  if (e.rank == m.rows) return smith(m, &e.minor);
  if (e.rank == m.cols) return smith(m.transposed(), &e.minor);
  return smith(m, nullptr);
}

std::vector<mpz_class> elementary_divisors(const SparseIntMatrix& m, const SnfOptions& options) {
  return elementary_divisors(DenseIntMatrix::from_sparse(m), options);
}

std::vector<mpz_class> prime_factors(const mpz_class& v) {
  std::vector<mpz_class> out;
  mpz_class n = abs_mpz(v);
  if (n < 2) return out;
  for (unsigned long p = 2; p <= 1000000; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.emplace_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
    if (n == 1 || mpz_class(p) * p > n) break;
  }
  // A leftover perfect power of a large prime is reduced to its root.
  for (unsigned long k = 2; n > 1 && mpz_sizeinbase(n.get_mpz_t(), 2) >= k; ++k) {
    mpz_class root;
    while (n > 1 && mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) n = root;
  }
  if (n > 1) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

bool SpanReport::spans_over(const mpz_class& n) const {
  if (!contained || !full_rank) return false;
  return std::all_of(bad_primes.begin(), bad_primes.end(),
                     [&](const mpz_class& p) { return mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0; });
}

std::string SpanReport::summary() const {
  std::ostringstream os;
  if (!contained) {
    os << "generator " << outside_generator << " lies outside the target lattice";
    return os.str();
  }
  os << "rank " << divisors.size() << "/" << target_rank << ", divisors";
  std::map<mpz_class, int64_t> counts;
  for (const mpz_class& d : divisors) ++counts[d];
  if (counts.empty()) os << " none";
  for (const auto& [d, count] : counts) os << ' ' << d.get_str() << '^' << count;
  os << ", bad primes {";
  for (size_t i = 0; i < bad_primes.size(); ++i) os << (i ? "," : "") << bad_primes[i].get_str();
  os << "}";
  return os.str();
}

SpanReport span_analysis(const SparseIntMatrix& generators, const LatticeBasis& target, const SnfOptions& options) {
  if (generators.rows() != target.ambient()) throw std::invalid_argument("generators and target have different ambient dimensions");
  const int64_t m = target.ambient(), k = target.rank();
  SpanReport report;
  report.target_rank = k;
  report.generator_count = generators.cols();

  std::vector<std::vector<std::pair<int64_t, const mpz_class*>>> basis_rows(m);
  for (int64_t i = 0; i < m; ++i)
    for (int64_t t = 0; t < k; ++t)
      if (sgn(target.basis.at(i, t)) != 0) basis_rows[i].emplace_back(t, &target.basis.at(i, t));

  const auto cols = generators.columns();
  DenseIntMatrix coords(k, generators.cols());
  std::vector<mpz_class> y(static_cast<size_t>(k));
  for (int64_t j = 0; j < generators.cols(); ++j) {
    std::fill(y.begin(), y.end(), mpz_class(0));
    std::vector<mpz_class> g(static_cast<size_t>(m));
    for (const auto& [row, value] : cols[j]) g[row] += value.to_mpz();
    for (const auto& [row, value] : cols[j]) {
      const mpz_class v = value.to_mpz();
      for (int64_t t = 0; t < k; ++t)
        if (sgn(target.coordinates.at(t, row)) != 0) y[t] += target.coordinates.at(t, row) * v;
    }
    for (int64_t i = 0; i < m; ++i) {
      mpz_class v = g[i];
      for (const auto& [t, b] : basis_rows[i]) v -= *b * y[t];
      if (sgn(v) != 0) report.residual.emplace_back(i, v);
    }
    if (!report.residual.empty()) {
      report.contained = false;
      report.outside_generator = j;
      return report;
    }
    for (int64_t t = 0; t < k; ++t) coords.at(t, j) = y[t];
  }
  report.divisors = elementary_divisors(coords, options);
  report.full_rank = static_cast<int64_t>(report.divisors.size()) == k;
  std::vector<mpz_class> primes;
  for (const mpz_class& d : report.divisors)
    for (const mpz_class& p : prime_factors(d)) primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  report.bad_primes = primes;
  return report;
}

}  // namespace kempe
