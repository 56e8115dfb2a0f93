#include "kempe/integer.hpp"

#include <stdexcept>

namespace kempe {

Integer::Integer(const mpz_class& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) {
    small_ = mpz_get_si(v.get_mpz_t());
  } else {
    big_ = std::make_unique<mpz_class>(v);
  }
}

Integer::Integer(const Integer& other) : small_(other.small_) {
  if (other.big_) big_ = std::make_unique<mpz_class>(*other.big_);
}

Integer& Integer::operator=(const Integer& other) {
  if (this == &other) return *this;
  small_ = other.small_;
  if (other.big_) {
    big_ = std::make_unique<mpz_class>(*other.big_);
  } else {
    big_.reset();
  }
  return *this;
}

Integer Integer::from_string(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("bad integer literal: " + s);
  for (size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal: " + s);
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(mpz_class(s, 10));
}

std::string Integer::to_string() const {
  return big_ ? big_->get_str() : std::to_string(small_);
}

mpz_class Integer::to_mpz() const {
  if (big_) return *big_;
  mpz_class out;
  mpz_set_si(out.get_mpz_t(), small_);
  return out;
}

int Integer::sign() const {
  if (big_) return sgn(*big_);
  return (small_ > 0) - (small_ < 0);
}

uint32_t Integer::mod(uint32_t p) const {
  if (!big_) {
    int64_t r = small_ % static_cast<int64_t>(p);
    if (r < 0) r += p;
    return static_cast<uint32_t>(r);
  }
  return static_cast<uint32_t>(mpz_fdiv_ui(big_->get_mpz_t(), p));
}

void Integer::demote() {
  if (big_ && mpz_fits_slong_p(big_->get_mpz_t())) {
    small_ = mpz_get_si(big_->get_mpz_t());
    big_.reset();
  }
}

Integer Integer::operator-() const {
  if (!big_ && small_ != INT64_MIN) return Integer(-small_);
  return Integer(mpz_class(-to_mpz()));
}

Integer& Integer::operator+=(const Integer& rhs) {
  int64_t out;
  if (!big_ && !rhs.big_ && !__builtin_add_overflow(small_, rhs.small_, &out)) {
    small_ = out;
    return *this;
  }
  *this = Integer(mpz_class(to_mpz() + rhs.to_mpz()));
  return *this;
}

Integer& Integer::operator-=(const Integer& rhs) {
  int64_t out;
  if (!big_ && !rhs.big_ && !__builtin_sub_overflow(small_, rhs.small_, &out)) {
    small_ = out;
    return *this;
  }
  *this = Integer(mpz_class(to_mpz() - rhs.to_mpz()));
  return *this;
}

Integer& Integer::operator*=(const Integer& rhs) {
  int64_t out;
  if (!big_ && !rhs.big_ && !__builtin_mul_overflow(small_, rhs.small_, &out)) {
    small_ = out;
    return *this;
  }
  *this = Integer(mpz_class(to_mpz() * rhs.to_mpz()));
  return *this;
}

bool operator==(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  // Both values are normalized, so a big value never equals a small one.
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;
}

std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  int c = cmp(a.to_mpz(), b.to_mpz());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace kempe
