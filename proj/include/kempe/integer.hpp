#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

namespace kempe {

// Exact integer. Values that fit in int64 are stored inline; anything larger
// is promoted to a heap-allocated GMP integer and demoted again when it fits.
class Integer {
 public:
  Integer() = default;
  template <std::signed_integral T>
  Integer(T v) : small_(static_cast<int64_t>(v)) {}  // NOLINT(implicit)
  template <std::unsigned_integral T>
  Integer(T v) {  // NOLINT(implicit)
    if (v <= static_cast<uint64_t>(INT64_MAX)) {
      small_ = static_cast<int64_t>(v);
    } else {
      big_ = std::make_unique<mpz_class>();
      mpz_import(big_->get_mpz_t(), 1, 1, sizeof(T), 0, 0, &v);
    }
  }
  explicit Integer(const mpz_class& v);

  Integer(const Integer& other);
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& other);
  Integer& operator=(Integer&&) noexcept = default;
  ~Integer() = default;

  // Parses an optionally signed decimal string; throws std::invalid_argument.
  static Integer from_string(std::string_view text);

  std::string to_string() const;
  mpz_class to_mpz() const;

  bool is_zero() const { return !big_ && small_ == 0; }
  int sign() const;
  bool is_small() const { return !big_; }
  int64_t small_value() const { return small_; }

  // Residue in [0, p).
  uint32_t mod(uint32_t p) const;

  Integer operator-() const;
  Integer& operator+=(const Integer& rhs);
  Integer& operator-=(const Integer& rhs);
  Integer& operator*=(const Integer& rhs);

  friend Integer operator+(Integer lhs, const Integer& rhs) { return lhs += rhs; }
  friend Integer operator-(Integer lhs, const Integer& rhs) { return lhs -= rhs; }
  friend Integer operator*(Integer lhs, const Integer& rhs) { return lhs *= rhs; }

  friend bool operator==(const Integer& a, const Integer& b);
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b);

  friend std::ostream& operator<<(std::ostream& os, const Integer& v) {
    return os << v.to_string();
  }

 private:
  void demote();

  int64_t small_ = 0;
  std::unique_ptr<mpz_class> big_;
};

using Rational = mpq_class;

inline Rational to_rational(const Integer& v) { return Rational(v.to_mpz()); }

}  // namespace kempe
