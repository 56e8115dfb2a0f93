#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "kempe/integer.hpp"

namespace kempe {

// Element of the prime field F_p; the modulus travels with the value.
struct ModP {
  uint32_t value = 0;
  uint32_t modulus = 0;

  ModP() = default;
  ModP(int64_t v, uint32_t p) : value(static_cast<uint32_t>(((v % int64_t(p)) + p) % p)), modulus(p) {}

  friend ModP operator+(ModP a, ModP b) { return ModP(int64_t(a.value) + b.value, a.modulus); }
  friend ModP operator-(ModP a, ModP b) { return ModP(int64_t(a.value) - b.value, a.modulus); }
  friend ModP operator*(ModP a, ModP b) {
    return ModP(static_cast<int64_t>((uint64_t(a.value) * b.value) % a.modulus), a.modulus);
  }
  ModP operator-() const { return ModP(-int64_t(value), modulus); }
  ModP& operator+=(ModP b) { return *this = *this + b; }
  ModP& operator-=(ModP b) { return *this = *this - b; }
  ModP& operator*=(ModP b) { return *this = *this * b; }
  friend bool operator==(ModP a, ModP b) { return a.value == b.value && a.modulus == b.modulus; }
  friend std::ostream& operator<<(std::ostream& os, ModP a) { return os << a.value; }
};

uint32_t inverse_mod(uint32_t a, uint32_t p);
bool is_probable_prime(uint64_t p);

inline bool ring_is_zero(const Integer& v) { return v.is_zero(); }
inline bool ring_is_zero(const Rational& v) { return sgn(v) == 0; }
inline bool ring_is_zero(const ModP& v) { return v.value == 0; }

// Image of an integer in the ring of `like`.
inline Integer ring_from_integer(const Integer& v, const Integer&) { return v; }
inline Rational ring_from_integer(const Integer& v, const Rational&) { return Rational(v.to_mpz()); }
inline ModP ring_from_integer(const Integer& v, const ModP& like) { return ModP(v.mod(like.modulus), like.modulus); }

inline std::string ring_to_string(const Integer& v) { return v.to_string(); }
inline std::string ring_to_string(const Rational& v) { return v.get_str(); }
inline std::string ring_to_string(const ModP& v) { return std::to_string(v.value); }

}  // namespace kempe
