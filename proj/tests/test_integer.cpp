#include <gtest/gtest.h>

#include <random>

#include "kempe/integer.hpp"
#include "kempe/ring.hpp"

using kempe::Integer;

TEST(Integer, SmallArithmetic) {
  Integer a = 7, b = -3;
  EXPECT_EQ((a + b).to_string(), "4");
  EXPECT_EQ((a - b).to_string(), "10");
  EXPECT_EQ((a * b).to_string(), "-21");
  EXPECT_EQ((-a).to_string(), "-7");
  EXPECT_TRUE(Integer(0).is_zero());
  EXPECT_EQ(b.sign(), -1);
}

TEST(Integer, PromotesOnOverflowAndDemotes) {
  Integer big = INT64_MAX;
  big += 1;
  EXPECT_FALSE(big.is_small());
  EXPECT_EQ(big.to_string(), "9223372036854775808");
  big -= 1;
  EXPECT_TRUE(big.is_small());
  EXPECT_EQ(big, Integer(INT64_MAX));
  Integer m = INT64_MIN;
  EXPECT_EQ((-m).to_string(), "9223372036854775808");
}

TEST(Integer, MatchesGmpOnRandomChains) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int64_t> dist(-(int64_t(1) << 40), int64_t(1) << 40);
  for (int trial = 0; trial < 200; ++trial) {
    Integer x = 1;
    mpz_class oracle = 1;
    for (int step = 0; step < 12; ++step) {
      int64_t v = dist(rng);
      mpz_class mv;
      mpz_set_si(mv.get_mpz_t(), v);
      switch (rng() % 3) {
        case 0: x += Integer(v); oracle += mv; break;
        case 1: x -= Integer(v); oracle -= mv; break;
        default: x *= Integer(v); oracle *= mv; break;
      }
      ASSERT_EQ(x.to_mpz(), oracle);
      ASSERT_EQ(x.is_small(), static_cast<bool>(mpz_fits_slong_p(oracle.get_mpz_t())));
    }
    EXPECT_EQ(x.mod(1000003), mpz_fdiv_ui(oracle.get_mpz_t(), 1000003));
    EXPECT_EQ(Integer::from_string(x.to_string()), x);
  }
}

TEST(Integer, Ordering) {
  Integer big = Integer::from_string("100000000000000000000000");
  EXPECT_LT(Integer(5), big);
  EXPECT_LT(-big, Integer(-5));
  EXPECT_GT(big, Integer(INT64_MAX));
}

TEST(Integer, RejectsBadLiterals) {
  EXPECT_THROW(Integer::from_string(""), std::invalid_argument);
  EXPECT_THROW(Integer::from_string("12a"), std::invalid_argument);
  EXPECT_THROW(Integer::from_string("-"), std::invalid_argument);
  EXPECT_EQ(Integer::from_string("+12").to_string(), "12");
}

TEST(ModP, FieldOperations) {
  kempe::ModP a(5, 7), b(-3, 7);
  EXPECT_EQ((a + b).value, 2u);
  EXPECT_EQ((a * b).value, 6u);
  EXPECT_EQ(kempe::inverse_mod(3, 7), 5u);
  EXPECT_THROW(kempe::inverse_mod(0, 7), std::invalid_argument);
  EXPECT_TRUE(kempe::is_probable_prime(1000000007));
  EXPECT_FALSE(kempe::is_probable_prime(1000000007ULL * 3));
}
