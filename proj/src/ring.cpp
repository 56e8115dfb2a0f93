#include "kempe/ring.hpp"

namespace kempe {

uint32_t inverse_mod(uint32_t a, uint32_t p) {
  int64_t t = 0, new_t = 1;
  int64_t r = p, new_r = a % p;
  while (new_r != 0) {
    int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) throw std::invalid_argument("value " + std::to_string(a) + " is not invertible mod " + std::to_string(p));
  if (t < 0) t += p;
  return static_cast<uint32_t>(t);
}

bool is_probable_prime(uint64_t p) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

}  // namespace kempe
