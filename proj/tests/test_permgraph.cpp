#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "kakeyalab/permgraph.hpp"

using namespace kakeyalab;

namespace {

Elem E(int v) { return Elem{static_cast<std::uint16_t>(v)}; }
Point P(int x, int y) { return {E(x), E(y)}; }
std::vector<Elem> Es(std::initializer_list<int> xs) {
  std::vector<Elem> out;
  for (int x : xs) out.push_back(E(x));
  return out;
}

std::vector<int> random_semipermutation(std::mt19937_64& rng, int q) {
  std::vector<int> t(q);
  std::iota(t.begin(), t.end(), 0);
  std::shuffle(t.begin(), t.end(), rng);
  const int z1 = static_cast<int>(rng() % q);
  int z2 = static_cast<int>(rng() % (q - 1));
  if (z2 >= z1) ++z2;
  t[z2] = t[z1];
  return t;
}

}  // namespace

TEST(PermGraph, Classify) {
  auto f = make_field(5);
  EXPECT_EQ(classify(f, {0, 1, 2, 3, 4}).kind(), FunctionKind::kPermutation);
  auto s = classify(f, {0, 1, 2, 3, 0});
  ASSERT_EQ(s.kind(), FunctionKind::kSemipermutation);
  EXPECT_EQ(s.semi()->a, E(0));
  EXPECT_EQ(s.semi()->b, E(4));
  EXPECT_EQ(s.semi()->z1, E(0));
  EXPECT_EQ(s.semi()->z2, E(4));
  EXPECT_EQ(classify(f, {0, 0, 0, 1, 1}).kind(), FunctionKind::kOther);
  EXPECT_THROW(classify(f, {0, 1, 2}), Error);
  EXPECT_THROW(classify(f, {0, 1, 2, 3, 5}), Error);
}

TEST(PermGraph, InverseConstruction) {
  EXPECT_EQ(inverse_construction(make_field(5)).indices(), (std::vector<int>{0, 1, 3, 2, 4}));
  auto f7 = make_field(7);
  auto g = inverse_construction(f7);
  EXPECT_EQ(g.indices(), (std::vector<int>{0, 1, 4, 5, 2, 3, 6}));
  // Brute-force triple count over all C(7,3) = 35 triples.
  int triples = 0;
  const auto& v = g.points().points();
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b)
      for (int c = b + 1; c < 7; ++c) triples += collinear(*f7, v[a], v[b], v[c]);
  EXPECT_EQ(triples, 3);
  EXPECT_EQ(build_structure(*f7, g.points()).triple_count(), 3);
}

TEST(PermGraph, NoPermutationSlopeIsZeroOrVertical) {
  auto f = make_field(7);
  std::vector<int> sigma(7);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    auto g = classify(f, sigma);
    const auto& v = g.points().points();
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = a + 1; b < v.size(); ++b) {
        auto s = slope_between(*f, v[a], v[b]);
        ASSERT_FALSE(s.infinite);
        ASSERT_NE(s.m, E(0));
      }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
}

TEST(PermGraph, SlopeProfileExamples) {
  auto f5 = make_field(5);
  auto id5 = classify(f5, {0, 1, 2, 3, 4});
  auto prof = slope_profile(P(0, 0), id5);
  EXPECT_EQ(prof.m3plus, Es({1}));
  EXPECT_EQ(prof.intersection_sizes, (std::vector<int>{5}));
  EXPECT_TRUE(prof.m2.empty());
  EXPECT_EQ(prof.m1, Es({2, 3, 4}));

  auto f3 = make_field(3);
  auto p3 = slope_profile(P(1, 1), classify(f3, {0, 1, 2}));
  EXPECT_EQ(p3.m3plus, Es({1}));
  EXPECT_EQ(p3.m1, Es({2}));

  EXPECT_THROW(slope_profile(P(0, 1), id5), PointNotInSet);
}

TEST(PermGraph, InverseQ5ProductIdentityAtOrigin) {
  auto f = make_field(5);
  auto prof = slope_profile(P(0, 0), inverse_construction(f));
  // Other points (1,1),(2,3),(3,2),(4,4): slopes 1, 4, 4, 1.
  EXPECT_EQ(prof.m3plus, Es({1, 4}));
  EXPECT_EQ(prof.m1, Es({2, 3}));
  EXPECT_TRUE(prof.m2.empty());
  const Elem p1 = f->mul(E(2), E(3)), p3 = f->mul(E(1), E(4));
  EXPECT_EQ(p1, f->neg(p3));
  auto rep = verify_point_identities(inverse_construction(f));
  EXPECT_TRUE(rep.ok());
  EXPECT_GE(rep.checked["P2"], 1);
}

TEST(PermGraph, LonelyPointShape) {
  auto f = make_field(7);
  auto g = inverse_construction(f);
  auto cs = build_structure(*f, g.points());
  int lonely = 0;
  for (const auto& x : lonely_points(cs)) {
    ++lonely;
    auto prof = slope_profile(x, g);
    ASSERT_EQ(prof.m3plus.size(), 1u);
    EXPECT_EQ(prof.intersection_sizes[0], 3);
    ASSERT_EQ(prof.m1.size(), 1u);
    EXPECT_EQ(prof.m1[0], f->neg(prof.m3plus[0]));
  }
  EXPECT_GT(lonely, 0);
}

TEST(PermGraph, IdentitiesHoldForEveryPermutationUpTo7) {
  for (int q : {3, 5, 7}) {
    auto f = make_field(q);
    std::vector<int> sigma(q);
    std::iota(sigma.begin(), sigma.end(), 0);
    IdentityReport total;
    do {
      total.merge(verify_point_identities(classify(f, sigma)));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    EXPECT_TRUE(total.ok()) << q << ": " << total.violations.front().identity << " " << total.violations.front().detail;
    EXPECT_GT(total.checked["P3"], 0);
  }
}

TEST(PermGraph, SemipermutationIdentitiesSampledQ9) {
  auto f = make_field(9);
  std::mt19937_64 rng(2024);
  IdentityReport total;
  for (int i = 0; i < 3000; ++i) total.merge(verify_point_identities(classify(f, random_semipermutation(rng, 9))));
  EXPECT_TRUE(total.ok()) << total.violations.front().identity << " " << total.violations.front().detail;
  EXPECT_GT(total.checked["S1"], 0);
  EXPECT_GT(total.checked["S2"], 0);
  EXPECT_EQ(total.s2_swapped, 0);
}

TEST(PermGraph, IdentityChecksRejectOther) {
  auto f = make_field(5);
  EXPECT_THROW(verify_point_identities(classify(f, {0, 0, 0, 1, 1})), WrongKind);
}
