#include <gtest/gtest.h>

#include "kakeyalab/field.hpp"

using namespace kakeyalab;

namespace {

Elem E(int v) { return Elem{static_cast<std::uint16_t>(v)}; }

// GF(9) as Z_3[i], i^2 = -1, index = re + 3 im. Independent of the table path.
int gauss_mul(int a, int b) {
  const int ar = a % 3, ai = a / 3, br = b % 3, bi = b / 3;
  const int re = ((ar * br - ai * bi) % 3 + 3) % 3;
  const int im = (ar * bi + ai * br) % 3;
  return re + 3 * im;
}

}  // namespace

TEST(Field, PrimeField) {
  auto f = make_field(7);
  EXPECT_EQ(f->p(), 7);
  EXPECT_EQ(f->k(), 1);
  EXPECT_TRUE(f->modulus().empty());
}

TEST(Field, Gf9UsesXSquaredPlusOne) {
  auto f = make_field(9);
  EXPECT_EQ(f->p(), 3);
  EXPECT_EQ(f->k(), 2);
  EXPECT_EQ(f->modulus(), (std::vector<int>{1, 0, 1}));
  // x^2 + 1 has no root mod 3.
  for (int x = 0; x < 3; ++x) EXPECT_NE((x * x + 1) % 3, 0);
}

TEST(Field, RejectsNonOddPrimePowers) {
  for (long long q : {8LL, 1LL, 0LL, 2LL, 6LL, 15LL, 45LL, 100LL, -3LL}) EXPECT_THROW(make_field(q), NotOddPrimePower) << q;
  EXPECT_THROW(make_field(347), Error);  // prime, but above the supported range
}

TEST(Field, SupportedOrders) {
  const auto qs = supported_orders();
  EXPECT_EQ(qs.front(), 3);
  EXPECT_EQ(qs.back(), 343);
  for (int q : {9, 25, 27, 49, 81, 121, 125, 169, 243, 289, 343})
    EXPECT_NE(std::find(qs.begin(), qs.end(), q), qs.end()) << q;
  EXPECT_EQ(std::find(qs.begin(), qs.end(), 15), qs.end());
}

TEST(Field, InverseExamples) {
  auto f7 = make_field(7);
  EXPECT_EQ(f7->inv(E(3)), E(5));
  auto f5 = make_field(5);
  EXPECT_EQ(f5->inv(E(1)), E(1));
  auto f9 = make_field(9);
  EXPECT_EQ(f9->inv(E(3)), E(6));  // x -> -x
  EXPECT_THROW(f7->inv(E(0)), DivisionByZero);
}

TEST(Field, Gf9MatchesGaussianIntegers) {
  auto f = make_field(9);
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) EXPECT_EQ(f->mul(E(a), E(b)).v, gauss_mul(a, b)) << a << "*" << b;
}

TEST(Field, ProductOfNonzeroIsMinusOne) {
  EXPECT_EQ(make_field(7)->product_of_nonzero(), E(6));
  EXPECT_EQ(make_field(3)->product_of_nonzero(), E(2));
  EXPECT_EQ(make_field(9)->product_of_nonzero(), E(2));
  for (int q : supported_orders()) {
    auto f = make_field(q);
    EXPECT_EQ(f->product_of_nonzero(), f->neg(Field::one())) << q;
  }
}

TEST(Field, AxiomsExhaustiveUpTo27) {
  for (int q : {3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27}) {
    auto f = make_field(q);
    for (int a = 0; a < q; ++a) {
      if (a) {
        EXPECT_EQ(f->mul(E(a), f->inv(E(a))), Field::one());
        EXPECT_EQ(f->inv(f->inv(E(a))), E(a));
      }
      EXPECT_EQ(f->add(E(a), f->neg(E(a))), Field::zero());
      for (int b = 0; b < q; ++b) {
        EXPECT_EQ(f->add(E(a), E(b)), f->add(E(b), E(a)));
        EXPECT_EQ(f->mul(E(a), E(b)), f->mul(E(b), E(a)));
        for (int c = 0; c < q; ++c) {
          ASSERT_EQ(f->add(f->add(E(a), E(b)), E(c)), f->add(E(a), f->add(E(b), E(c))));
          ASSERT_EQ(f->mul(f->mul(E(a), E(b)), E(c)), f->mul(E(a), f->mul(E(b), E(c))));
          ASSERT_EQ(f->mul(E(a), f->add(E(b), E(c))), f->add(f->mul(E(a), E(b)), f->mul(E(a), E(c))));
        }
      }
    }
  }
}

TEST(Field, HalfTheNonzeroElementsAreSquares) {
  for (int q : supported_orders()) {
    auto f = make_field(q);
    int squares = 0;
    std::vector<bool> is_sq(q, false);
    for (int a = 1; a < q; ++a) is_sq[f->mul(E(a), E(a)).v] = true;
    for (int a = 1; a < q; ++a) {
      squares += is_sq[a];
      EXPECT_EQ(is_sq[a], f->is_square(E(a)));
    }
    EXPECT_EQ(squares, (q - 1) / 2) << q;
  }
}

TEST(Field, GeneratorIsSmallestPrimitiveIndex) {
  for (int q : {3, 5, 7, 9, 27, 49}) {
    auto f = make_field(q);
    const int g = f->generator().v;
    for (int c = 2; c < g; ++c) {
      int order = 1;
      for (Elem x = E(c); x != Field::one(); x = f->mul(x, E(c))) ++order;
      EXPECT_LT(order, q - 1);
    }
  }
}

TEST(FieldElement, RejectsMixedFields) {
  auto f5 = make_field(5);
  auto g5 = make_field(5);
  FieldElement a(f5, E(2)), b(f5, E(3)), c(g5, E(3));
  EXPECT_EQ((a * b).index(), 1);
  EXPECT_EQ(inv(a).index(), 3);
  EXPECT_EQ((a / b * b).index(), 2);
  EXPECT_EQ((-a).index(), 3);
  EXPECT_THROW(a + c, MixedFields);
  EXPECT_THROW((void)(a == c), MixedFields);
  EXPECT_EQ(product_of_nonzero(f5).index(), 4);
}

TEST(Field, DeterministicAcrossConstructions) {
  auto a = make_field(125), b = make_field(125);
  EXPECT_EQ(a->modulus(), b->modulus());
  EXPECT_EQ(a->generator(), b->generator());
  for (int i = 0; i < 125; ++i) EXPECT_EQ(a->mul(E(i), E(7)), b->mul(E(i), E(7)));
}
