#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "kakeyalab/search.hpp"

using namespace kakeyalab;

namespace {

Elem E(int v) { return Elem{static_cast<std::uint16_t>(v)}; }

// Cross-product collinearity, no line bookkeeping.
long long brute_triple_count(const Field& f, const std::vector<int>& sigma, int upto) {
  long long n = 0;
  for (int a = 0; a < upto; ++a)
    for (int b = a + 1; b < upto; ++b)
      for (int c = b + 1; c < upto; ++c) {
        const Elem dx1 = f.sub(E(b), E(a)), dy1 = f.sub(E(sigma[b]), E(sigma[a]));
        const Elem dx2 = f.sub(E(c), E(a)), dy2 = f.sub(E(sigma[c]), E(sigma[a]));
        n += f.mul(dx1, dy2) == f.mul(dx2, dy1);
      }
  return n;
}

// Per-point triple membership by brute force.
std::vector<int> brute_membership(const Field& f, const std::vector<int>& sigma) {
  const int q = f.q();
  std::vector<int> m(q, 0);
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b)
      for (int c = b + 1; c < q; ++c) {
        const Elem dx1 = f.sub(E(b), E(a)), dy1 = f.sub(E(sigma[b]), E(sigma[a]));
        const Elem dx2 = f.sub(E(c), E(a)), dy2 = f.sub(E(sigma[c]), E(sigma[a]));
        if (f.mul(dx1, dy2) == f.mul(dx2, dy1)) ++m[a], ++m[b], ++m[c];
      }
  return m;
}

// Lexicographically least image over the whole group: independent canonical form.
std::vector<int> full_group_canon(const PermutationCanon& c, const std::vector<int>& sigma) {
  const int q = c.q();
  std::vector<int> best = sigma;
  for (int t = 0; t < 2; ++t)
    for (int a = 1; a < q; ++a)
      for (int b = 0; b < q; ++b)
        for (int cc = 1; cc < q; ++cc)
          for (int d = 0; d < q; ++d) best = std::min(best, c.act(sigma, t == 1, a, b, cc, d));
  return best;
}

struct Invariants {
  long long triples;
  Rational norm;
  std::size_t lonely;
  std::size_t matching;
  FunctionKind kind;
  bool operator==(const Invariants&) const = default;
};

Invariants invariants(const FieldPtr& f, const std::vector<int>& sigma) {
  const auto g = classify(f, sigma);
  const auto cs = build_structure(*f, g.points());
  return {cs.triple_count(), cs.norm(), lonely_points(cs).size(), max_isolated_matching(cs).edges.size(), g.kind()};
}

}  // namespace

TEST(Search, GroupActionPreservesInvariants) {
  std::mt19937_64 rng(31337);
  for (int q : {5, 7, 9, 11}) {
    auto f = make_field(q);
    const PermutationCanon c(*f);
    for (int i = 0; i < 1000; ++i) {
      std::vector<int> s(q);
      std::iota(s.begin(), s.end(), 0);
      std::shuffle(s.begin(), s.end(), rng);
      const bool t = rng() % 2;
      const int a = 1 + static_cast<int>(rng() % (q - 1)), b = static_cast<int>(rng() % q);
      const int cc = 1 + static_cast<int>(rng() % (q - 1)), d = static_cast<int>(rng() % q);
      const auto img = c.act(s, t, a, b, cc, d);
      ASSERT_EQ(invariants(f, img), invariants(f, s)) << q;
    }
  }
}

TEST(Search, GroupOrder) {
  EXPECT_EQ(PermutationCanon(*make_field(5)).group_order(), 2 * 25 * 16);
  EXPECT_EQ(PermutationCanon(*make_field(9)).group_order(), 2 * 81 * 64);
}

TEST(Search, RepresentativesMatchFullGroupCanonicalForms) {
  for (int q : {5, 7}) {
    auto f = make_field(q);
    const PermutationCanon c(*f);
    std::set<std::vector<int>> oracle;
    std::vector<int> s(q);
    std::iota(s.begin(), s.end(), 0);
    do oracle.insert(full_group_canon(c, s));
    while (std::next_permutation(s.begin(), s.end()));

    std::set<std::vector<int>> reps;
    long long orbit_sum = 0;
    std::size_t shards = 0;
    std::mutex m;
    auto cert = enumerate_permutation_orbits(f, {}, shards, [&](std::size_t, const OrbitVisit& v) {
      std::lock_guard lock(m);
      reps.insert(v.sigma);
      orbit_sum += v.orbit_size;
    });
    EXPECT_EQ(reps, oracle) << q;
    EXPECT_EQ(orbit_sum, q == 5 ? 120 : 5040);
    EXPECT_EQ(*cert.orbit_total, orbit_sum);
    EXPECT_EQ(cert.covered(), q == 5 ? 6 : 120);
  }
}

TEST(Search, OrbitCoverageAuditQ9) {
  std::size_t shards = 0;
  auto cert = enumerate_permutation_orbits(make_field(9), {}, shards, [](std::size_t, const OrbitVisit&) {});
  EXPECT_EQ(*cert.orbit_total, 362880);
  EXPECT_EQ(cert.covered(), 5040);
  EXPECT_EQ(shards, 42u);
}

TEST(Search, PartialTripleCountIsALowerBound) {
  std::mt19937_64 rng(5);
  for (int q : {5, 7, 9}) {
    auto f = make_field(q);
    const PermutationCanon c(*f);
    for (int i = 0; i < 300; ++i) {
      std::vector<int> s(q);
      std::iota(s.begin(), s.end(), 0);
      std::shuffle(s.begin(), s.end(), rng);
      long long prev = 0;
      for (int k = 0; k <= q; ++k) {
        const long long partial = brute_triple_count(*f, s, k);
        ASSERT_GE(partial, prev);
        prev = partial;
      }
      ASSERT_EQ(graph_counts(c, s).triples, prev);
      ASSERT_EQ(graph_counts(c, s).triples, build_structure(*f, classify(f, s).points()).triple_count());
    }
  }
}

TEST(Search, BranchAndBoundKeepsEveryRepresentativeUnderTheBound) {
  // For each bound b, the pruned search must reach exactly the representatives with triple count <= b.
  const int q = 5;
  auto f = make_field(q);
  const PermutationCanon c(*f);
  std::map<std::vector<int>, long long> oracle;
  std::vector<int> s(q);
  std::iota(s.begin(), s.end(), 0);
  do {
    auto rep = full_group_canon(c, s);
    oracle[rep] = brute_triple_count(*f, rep, q);
  } while (std::next_permutation(s.begin(), s.end()));

  for (long long b = 0; b <= 10; ++b) {
    std::set<std::vector<int>> reached, expected;
    for (auto& [r, t] : oracle)
      if (t <= b) expected.insert(r);
    for (const auto& prefix : permutation_shards(q)) {
      PermutationDfs dfs(c, PermutationDfs::Objective::kTriples, b, 0);
      std::function<void(const PermutationDfs::Leaf&)> cb = [&](const PermutationDfs::Leaf& leaf) {
        if (leaf.counts.triples <= b) reached.insert(leaf.sigma);
      };
      const auto rec = dfs.run(prefix, cb);
      EXPECT_EQ(rec.covered, 1);  // (q-2)! / shards
    }
    EXPECT_EQ(reached, expected) << "bound " << b;
  }
}

TEST(Search, MinimaAgreeWithPlainEnumeration) {
  for (int q : {3, 5, 7}) {
    auto f = make_field(q);
    long long min_t = -1;
    Rational min_n(-1);
    std::vector<int> s(q);
    std::iota(s.begin(), s.end(), 0);
    long long all_min = 0;
    do {
      const long long t = brute_triple_count(*f, s, q);
      const Rational n = build_structure(*f, classify(f, s).points()).norm();
      if (min_t < 0 || t < min_t) min_t = t;
      if (min_n < Rational(0) || n < min_n) min_n = n;
    } while (std::next_permutation(s.begin(), s.end()));
    std::iota(s.begin(), s.end(), 0);
    do all_min += brute_triple_count(*f, s, q) == min_t;
    while (std::next_permutation(s.begin(), s.end()));

    const auto rep = min_triples_over_permutations(f);
    EXPECT_TRUE(rep.exhaustive);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.value, Rational(min_t)) << q;
    EXPECT_EQ(parse_rational(rep.details["min_norm"].get<std::string>()), min_n) << q;
    if (q == 3) {
      EXPECT_EQ(all_min, 6);
    }
  }
}

TEST(Search, KnownPermutationMinima) {
  const long long expect[] = {1, 2, 3, 4};
  int i = 0;
  for (int q : {3, 5, 7, 9}) {
    const auto rep = min_triples_over_permutations(make_field(q));
    EXPECT_EQ(rep.value, Rational(expect[i++])) << q;
    EXPECT_GE(parse_rational(rep.details["min_norm"].get<std::string>()), permutation_norm_bound(q));
    EXPECT_TRUE(rep.ok());
  }
}

TEST(Search, WitnessReplay) {
  for (int q : {5, 7, 9}) {
    auto f = make_field(q);
    const auto rep = min_triples_over_permutations(f);
    ASSERT_FALSE(rep.witnesses.empty());
    EXPECT_TRUE(std::is_sorted(rep.witnesses.begin(), rep.witnesses.end()));
    for (const auto& w : rep.witnesses) {
      const auto g = classify(f, w);
      ASSERT_EQ(g.kind(), FunctionKind::kPermutation);
      EXPECT_EQ(Rational(build_structure(*f, g.points()).triple_count()), rep.value);
    }
    for (const auto& w : rep.details["norm_witnesses"])
      EXPECT_EQ(build_structure(*f, classify(f, w.get<std::vector<int>>()).points()).norm(),
                parse_rational(rep.details["min_norm"].get<std::string>()));

    const auto cov = min_besicovitch(f);
    for (const auto& w : cov.witnesses) {
      const auto c = build_cover(f, w);
      EXPECT_EQ(Rational(c.size()), cov.value);
      EXPECT_EQ(w[q], 0);
      EXPECT_EQ(w[0], 0);
    }
  }
}

TEST(Search, InverseIsAmongQ5Minimizers) {
  auto f = make_field(5);
  SearchOptions o;
  o.max_witnesses = 1000;
  const auto rep = min_triples_over_permutations(f, o);
  // Witnesses are orbit representatives; the inverse map appears through its canonical form.
  const auto rep_inv = full_group_canon(PermutationCanon(*f), inverse_construction(f).indices());
  EXPECT_NE(std::find(rep.witnesses.begin(), rep.witnesses.end(), rep_inv), rep.witnesses.end());
}

TEST(Search, BesicovitchMinimaAndPlainEnumeration) {
  for (int q : {3, 5}) {
    auto f = make_field(q);
    std::vector<int> keys(q + 1, 0);
    long long best = -1, at_best = 0;
    while (true) {
      const long long n = build_cover(f, keys).size();
      if (best < 0 || n < best) best = n, at_best = 0;
      at_best += n == best;
      int i = 0;
      while (i <= q && ++keys[i] == q) keys[i++] = 0;
      if (i > q) break;
    }
    const auto rep = min_besicovitch(f);
    EXPECT_EQ(rep.value, Rational(best));
    EXPECT_TRUE(rep.exhaustive);
    EXPECT_TRUE(rep.ok());
    // Translations act freely and each orbit has one pinned member.
    EXPECT_EQ(at_best, q * q * rep.details["minimal_pinned_covers"].get<long long>());
  }
  EXPECT_EQ(min_besicovitch(make_field(3)).value, Rational(7));
  EXPECT_EQ(min_besicovitch(make_field(5)).value, Rational(17));
  const auto r7 = min_besicovitch(make_field(7));
  EXPECT_EQ(r7.value, Rational(31));
  EXPECT_EQ(r7.certificate->covered(), 117649);
}

TEST(Search, BudgetFlagsNonExhaustive) {
  SearchOptions o;
  o.budget = 50;
  const auto rep = min_besicovitch(make_field(7), o);
  EXPECT_TRUE(rep.budget_exceeded);
  EXPECT_FALSE(rep.exhaustive);
  const auto rt = isolated_edge_probe(make_field(9), o);
  EXPECT_FALSE(rt.exhaustive);
}

TEST(Search, SampledModeIsSeeded) {
  SearchOptions o;
  o.exhaustive = false;
  o.samples = 500;
  o.seed = 77;
  auto f = make_field(11);
  const auto a = min_triples_over_permutations(f, o), b = min_triples_over_permutations(f, o);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.witnesses, b.witnesses);
  EXPECT_FALSE(a.exhaustive);
  EXPECT_TRUE(a.ok());
  const auto c = min_besicovitch(f, o), d = min_besicovitch(f, o);
  EXPECT_EQ(c.witnesses, d.witnesses);
  EXPECT_GE(c.value, besicovitch_lower_bound(11));
}

TEST(Search, IsolatedEdgeProbeAgainstBruteForce) {
  for (int q : {5, 7}) {
    auto f = make_field(q);
    long long hits = 0;
    std::vector<int> s(q);
    std::iota(s.begin(), s.end(), 0);
    do {
      if (brute_triple_count(*f, s, q) < 2) continue;
      const auto memb = brute_membership(*f, s);
      // An isolated edge: a collinear triple of three points each in exactly one triple.
      for (int a = 0; a < q; ++a)
        for (int b = a + 1; b < q; ++b)
          for (int c = b + 1; c < q; ++c)
            if (memb[a] == 1 && memb[b] == 1 && memb[c] == 1 &&
                f->mul(f->sub(E(b), E(a)), f->sub(E(s[c]), E(s[a]))) == f->mul(f->sub(E(c), E(a)), f->sub(E(s[b]), E(s[a]))))
              ++hits;
    } while (std::next_permutation(s.begin(), s.end()));
    const auto rep = isolated_edge_probe(f);
    EXPECT_EQ(hits > 0, rep.value > Rational(0)) << q;
    EXPECT_TRUE(rep.exhaustive);
  }
  const auto r3 = isolated_edge_probe(make_field(3));
  EXPECT_EQ(r3.details["single_edge_orbits"], 1);
  EXPECT_TRUE(r3.details.contains("trivial_case"));
}

TEST(Search, IsolatedEdgeWitnessAtQ9) {
  auto f = make_field(9);
  const auto rep = isolated_edge_probe(f);
  ASSERT_EQ(rep.details["outcome"], "witness");
  for (const auto& w : rep.witnesses) {
    ASSERT_GE(brute_triple_count(*f, w, 9), 2);
    const auto memb = brute_membership(*f, w);
    int lonely_triples = 0;
    for (int a = 0; a < 9; ++a)
      for (int b = a + 1; b < 9; ++b)
        for (int c = b + 1; c < 9; ++c)
          if (memb[a] == 1 && memb[b] == 1 && memb[c] == 1 &&
              f->mul(f->sub(E(b), E(a)), f->sub(E(w[c]), E(w[a]))) == f->mul(f->sub(E(c), E(a)), f->sub(E(w[b]), E(w[a]))))
            ++lonely_triples;
    EXPECT_GE(lonely_triples, 1);
  }
}

TEST(Search, MatchingExtremes) {
  for (int q : {5, 7}) {
    auto f = make_field(q);
    std::size_t best = 0;
    std::vector<int> s(q);
    std::iota(s.begin(), s.end(), 0);
    do best = std::max(best, max_isolated_matching(build_structure(*f, classify(f, s).points())).edges.size());
    while (std::next_permutation(s.begin(), s.end()));
    const auto rep = max_isolated_matching_extremes(f);
    EXPECT_EQ(rep.value, Rational(static_cast<long long>(best)));
    EXPECT_TRUE(rep.ok());
  }
  const auto r3 = max_isolated_matching_extremes(make_field(3));
  EXPECT_FALSE(r3.details["asserted"].get<bool>());
  EXPECT_TRUE(r3.ok());
  EXPECT_TRUE(max_isolated_matching_extremes(make_field(9)).ok());
}

TEST(Search, MatchingBoundIsExact) {
  // q=7: (7 - 1)/3 = 2 exactly, so |M| = 2 must fail.
  EXPECT_TRUE(matching_below_bound(7, 1));
  EXPECT_FALSE(matching_below_bound(7, 2));
  EXPECT_TRUE(matching_below_bound(5, 1));
  EXPECT_FALSE(matching_below_bound(3, 1));
  EXPECT_TRUE(matching_below_bound(9, 2));
}

TEST(Search, BoundAuditExamples) {
  auto f7 = make_field(7);
  const auto a = bound_audit(inverse_construction(f7));
  EXPECT_TRUE(a.ok());
  EXPECT_EQ(a.kind, "permutation");
  ASSERT_NE(a.find("norm_bound"), nullptr);
  EXPECT_EQ(a.find("norm_bound")->rhs, Rational(34, 14));

  auto f5 = make_field(5);
  std::vector<int> s(5);
  std::iota(s.begin(), s.end(), 0);
  do {
    const auto r = bound_audit(classify(f5, s));
    ASSERT_TRUE(r.ok());
    ASSERT_GE(build_structure(*f5, classify(f5, s).points()).triple_count(), 2);
  } while (std::next_permutation(s.begin(), s.end()));

  std::mt19937_64 rng(3);
  long long audited = 0;
  for (int i = 0; i < 3000; ++i) {
    std::vector<int> t(7);
    std::iota(t.begin(), t.end(), 0);
    std::shuffle(t.begin(), t.end(), rng);
    t[1 + rng() % 6] = t[0];
    const auto g = classify(f7, t);
    if (!isolated_points(build_structure(*f7, g.points())).empty()) {
      EXPECT_THROW(bound_audit(g), PreconditionViolated);
      continue;
    }
    const auto r = bound_audit(g);
    ++audited;
    ASSERT_TRUE(r.ok());
    ASSERT_GE(r.find("norm_bound")->lhs, Rational(30, 14));
  }
  EXPECT_GT(audited, 0);

  EXPECT_THROW(bound_audit(classify(f5, {0, 0, 0, 1, 1})), WrongKind);
  const auto cov = bound_audit(parabola_construction(f7));
  EXPECT_TRUE(cov.ok());
}
