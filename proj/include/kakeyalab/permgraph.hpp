#pragma once
/**
 * @file permgraph.hpp
 * @brief Graphs of functions GF(q) -> GF(q), their classification, slope
 * profiles at graph points, and pointwise checks of the slope-product
 * identities for permutations and semipermutations.
 */

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kakeyalab/collinear.hpp"
#include "kakeyalab/field.hpp"
#include "kakeyalab/plane.hpp"

namespace kakeyalab {

enum class FunctionKind { kPermutation, kSemipermutation, kOther };

inline const char* to_string(FunctionKind k) {
  switch (k) {
    case FunctionKind::kPermutation: return "permutation";
    case FunctionKind::kSemipermutation: return "semipermutation";
    default: return "other";
  }
}

/// sigma(z1) = sigma(z2) = a, b missing from the range, z1 < z2 in index order.
struct SemipermutationData {
  Elem a, b, z1, z2;
};

class FunctionGraph {
 public:
  FunctionGraph(FieldPtr field, std::vector<Elem> table) : field_(std::move(field)), table_(std::move(table)) {
    const int q = field_->q();
    if (static_cast<int>(table_.size()) != q)
      throw Error("function table has " + std::to_string(table_.size()) + " entries, expected " +
                  std::to_string(q));
    std::vector<int> hits(q, 0);
    for (auto v : table_) {
      if (v.v >= q) throw Error("function value outside the field");
      ++hits[v.v];
    }
    points_ = PointSet(q);
    for (int j = 0; j < q; ++j) points_.insert({Elem{static_cast<std::uint16_t>(j)}, table_[j]});

    const auto missing = std::count(hits.begin(), hits.end(), 0);
    if (missing == 0) {
      kind_ = FunctionKind::kPermutation;
    } else if (missing == 1) {
      kind_ = FunctionKind::kSemipermutation;
      SemipermutationData d{};
      d.b = Elem{static_cast<std::uint16_t>(std::find(hits.begin(), hits.end(), 0) - hits.begin())};
      d.a = Elem{static_cast<std::uint16_t>(std::find(hits.begin(), hits.end(), 2) - hits.begin())};
      std::vector<Elem> zs;
      for (int j = 0; j < q; ++j)
        if (table_[j] == d.a) zs.push_back(Elem{static_cast<std::uint16_t>(j)});
      d.z1 = zs[0];
      d.z2 = zs[1];
      semi_ = d;
    } else {
      kind_ = FunctionKind::kOther;
    }
  }

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<Elem>& table() const noexcept { return table_; }
  Elem operator()(Elem x) const noexcept { return table_[x.v]; }
  FunctionKind kind() const noexcept { return kind_; }
  const std::optional<SemipermutationData>& semi() const noexcept { return semi_; }
  const PointSet& points() const noexcept { return points_; }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (auto v : table_) out.push_back(v.v);
    return out;
  }

 private:
  FieldPtr field_;
  std::vector<Elem> table_;
  FunctionKind kind_ = FunctionKind::kOther;
  std::optional<SemipermutationData> semi_;
  PointSet points_;
};

inline FunctionGraph classify(const FieldPtr& field, const std::vector<int>& table) {
  std::vector<Elem> t;
  t.reserve(table.size());
  for (int v : table) {
    if (v < 0 || v >= field->q()) throw Error("function value " + std::to_string(v) + " outside GF(q)");
    t.push_back(Elem{static_cast<std::uint16_t>(v)});
  }
  return FunctionGraph(field, std::move(t));
}

/// s -> 1/s for s != 0 and 0 -> 0.
inline FunctionGraph inverse_construction(const FieldPtr& field) {
  std::vector<Elem> t(field->q());
  for (int s = 1; s < field->q(); ++s) t[s] = field->inv(Elem{static_cast<std::uint16_t>(s)});
  return FunctionGraph(field, std::move(t));
}

/// Nonzero slopes at a graph point, split by how many graph points the line through it holds.
struct SlopeProfile {
  Point at;
  std::vector<Elem> m1, m2, m3plus;       // ascending
  std::vector<int> intersection_sizes;  // aligned with m3plus

  int a_count() const noexcept { return static_cast<int>(m3plus.size()); }  // A
  int b_count() const noexcept { return static_cast<int>(m1.size()); }      // B
  int size_at(Elem m) const {
    if (std::binary_search(m1.begin(), m1.end(), m)) return 1;
    if (std::binary_search(m2.begin(), m2.end(), m)) return 2;
    auto it = std::lower_bound(m3plus.begin(), m3plus.end(), m);
    if (it != m3plus.end() && *it == m) return intersection_sizes[it - m3plus.begin()];
    return 0;
  }
};

inline SlopeProfile slope_profile(const Point& x, const FunctionGraph& g) {
  if (!g.points().contains(x)) throw PointNotInSet("point is not on the graph");
  const Field& f = *g.field();
  const int q = f.q();
  std::vector<int> count(q, 1);
  for (const auto& p : g.points()) {
    if (p == x) continue;
    const Slope s = slope_between(f, x, p);
    if (!s.infinite && s.m.v != 0) ++count[s.m.v];
  }
  SlopeProfile prof{x, {}, {}, {}, {}};
  for (int m = 1; m < q; ++m) {
    const Elem e{static_cast<std::uint16_t>(m)};
    if (count[m] == 1)
      prof.m1.push_back(e);
    else if (count[m] == 2)
      prof.m2.push_back(e);
    else {
      prof.m3plus.push_back(e);
      prof.intersection_sizes.push_back(count[m]);
    }
  }
  return prof;
}

struct IdentityViolation {
  std::string identity;
  Point at;
  std::string detail;
};

/**
 * Pointwise identity checks. Identity ids:
 *  - P1  no graph point is isolated in C (permutations)
 *  - P2  |M1| = |M3| and prod M1 = -prod M3 at quadruple-free points (permutations)
 *  - P3  lonely point: the empty direction is the negative of the triple's slope (permutations)
 *  - S1  lonely point off {z1,z2}: m_perp = -m (sigma(j)-b)/(sigma(j)-a) (semipermutations)
 *  - S2  lonely z_i: two empty directions with product m (a-b)/(z_other - z_i) (semipermutations)
 *  - C1  slope counting: sum of intersection sizes on rich lines is 2A+B (2A+B-1 at z1,z2)
 *  - N1  ||x|| >= B/3 ((B-1)/3 at z1,z2)
 */
struct IdentityReport {
  FunctionKind kind = FunctionKind::kOther;
  std::map<std::string, long long> checked;
  std::vector<IdentityViolation> violations;
  /// S2 orientation tally: which pairing of z_i with (z_other - z_i) held.
  long long s2_primary = 0, s2_swapped = 0;

  bool ok() const noexcept { return violations.empty(); }
  void merge(const IdentityReport& o) {
    for (const auto& [k, v] : o.checked) checked[k] += v;
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    s2_primary += o.s2_primary;
    s2_swapped += o.s2_swapped;
  }
};

namespace detail {

inline Elem product(const Field& f, const std::vector<Elem>& xs) {
  Elem acc = Field::one();
  for (auto x : xs) acc = f.mul(acc, x);
  return acc;
}

inline std::string elem_str(Elem e) { return std::to_string(e.v); }

}  // namespace detail

inline IdentityReport verify_point_identities(const FunctionGraph& g) {
  if (g.kind() == FunctionKind::kOther)
    throw WrongKind("identity checks need a permutation or a semipermutation");
  const Field& f = *g.field();
  const int q = f.q();
  const auto cs = build_structure(f, g.points());
  IdentityReport rep;
  rep.kind = g.kind();
  auto fail = [&](const char* id, const Point& p, std::string detail) {
    rep.violations.push_back({id, p, std::move(detail)});
  };
  const bool perm = g.kind() == FunctionKind::kPermutation;

  for (const auto& x : g.points()) {
    const auto prof = slope_profile(x, g);
    const long long triples = cs.triples_at(x);
    const int a_cnt = prof.a_count(), b_cnt = prof.b_count();
    int rich_sum = 0;
    for (int s : prof.intersection_sizes) rich_sum += s;
    const bool at_z = !perm && (x.x == g.semi()->z1 || x.x == g.semi()->z2);
    const int deficit = at_z ? 1 : 0;

    ++rep.checked["C1"];
    if (a_cnt > b_cnt - deficit || rich_sum != 2 * a_cnt + b_cnt - deficit)
      fail("C1", x,
           "A=" + std::to_string(a_cnt) + " B=" + std::to_string(b_cnt) + " sum=" + std::to_string(rich_sum));
    ++rep.checked["N1"];
    if (point_norm(x, cs) < Rational(b_cnt - deficit, 3))
      fail("N1", x, "norm " + to_string(point_norm(x, cs)) + " below (B-" + std::to_string(deficit) + ")/3");

    if (perm) {
      ++rep.checked["P1"];
      if (triples == 0) fail("P1", x, "point lies in no collinear triple");

      const bool quad_free = std::all_of(prof.intersection_sizes.begin(), prof.intersection_sizes.end(),
                                         [](int s) { return s <= 3; });
      if (quad_free) {
        ++rep.checked["P2"];
        const Elem p1 = detail::product(f, prof.m1), p3 = detail::product(f, prof.m3plus);
        if (prof.m1.size() != prof.m3plus.size() || p1 != f.neg(p3))
          fail("P2", x,
               "|M1|=" + std::to_string(prof.m1.size()) + " |M3|=" + std::to_string(prof.m3plus.size()) +
                   " prodM1=" + detail::elem_str(p1) + " prodM3=" + detail::elem_str(p3));
      }
      if (triples == 1) {
        ++rep.checked["P3"];
        const bool shape = prof.m3plus.size() == 1 && prof.intersection_sizes[0] == 3 && prof.m1.size() == 1 &&
                           static_cast<int>(prof.m2.size()) == q - 3;
        if (!shape)
          fail("P3", x, "lonely point without the one-rich/one-empty slope pattern");
        else if (prof.m1[0] != f.neg(prof.m3plus[0]))
          fail("P3", x, "m_perp=" + detail::elem_str(prof.m1[0]) + " m=" + detail::elem_str(prof.m3plus[0]));
      }
      continue;
    }

    if (triples != 1) continue;
    const auto& d = *g.semi();
    const bool shape_common = prof.m3plus.size() == 1 && prof.intersection_sizes[0] == 3;
    if (!at_z) {
      ++rep.checked["S1"];
      if (!shape_common || prof.m1.size() != 1 || static_cast<int>(prof.m2.size()) != q - 3) {
        fail("S1", x, "lonely point without the one-rich/one-empty slope pattern");
        continue;
      }
      const Elem sj = x.y;
      const Elem expect =
          f.neg(f.mul(prof.m3plus[0], f.div(f.sub(sj, d.b), f.sub(sj, d.a))));
      if (prof.m1[0] != expect)
        fail("S1", x, "m_perp=" + detail::elem_str(prof.m1[0]) + " expected " + detail::elem_str(expect));
    } else {
      ++rep.checked["S2"];
      if (!shape_common || prof.m1.size() != 2 || static_cast<int>(prof.m2.size()) != q - 4) {
        fail("S2", x, "lonely z-point without the one-rich/two-empty slope pattern");
        continue;
      }
      const Elem other = x.x == d.z1 ? d.z2 : d.z1;
      const Elem lhs = f.mul(prof.m1[0], prof.m1[1]);
      const Elem amb = f.sub(d.a, d.b);
      const Elem primary = f.mul(prof.m3plus[0], f.div(amb, f.sub(other, x.x)));
      const Elem swapped = f.mul(prof.m3plus[0], f.div(amb, f.sub(x.x, other)));
      if (lhs == primary)
        ++rep.s2_primary;
      else if (lhs == swapped)
        ++rep.s2_swapped;
      if (lhs != primary)
        fail("S2", x,
             "product " + detail::elem_str(lhs) + " expected " + detail::elem_str(primary) +
                 (lhs == swapped ? " (swapped orientation holds)" : ""));
    }
  }
  return rep;
}

}  // namespace kakeyalab
