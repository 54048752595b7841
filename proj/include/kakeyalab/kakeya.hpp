#pragma once
/**
 * @file kakeya.hpp
 * @brief Besicovitch covers of GF(q)^2 (one chosen line per slope), the
 * incidence formula, the excess rho(m), and the duality between covers and
 * graphs of (semi)permutations.
 *
 * A cover is stored as its line keys indexed by canonical slope index
 * (0..q-1 finite, q vertical).
 */

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kakeyalab/collinear.hpp"
#include "kakeyalab/field.hpp"
#include "kakeyalab/permgraph.hpp"
#include "kakeyalab/plane.hpp"
#include "kakeyalab/rational.hpp"

namespace kakeyalab {

class BesicovitchCover {
 public:
  BesicovitchCover(FieldPtr field, std::vector<Elem> keys) : field_(std::move(field)), keys_(std::move(keys)) {
    const Field& f = *field_;
    const int q = f.q();
    if (static_cast<int>(keys_.size()) != q + 1)
      throw MissingSlope("cover needs one line for each of the " + std::to_string(q + 1) + " slopes");
    mu_.assign(static_cast<std::size_t>(q) * q, 0);
    union_ = PointSet(q);
    for (int s = 0; s <= q; ++s) {
      if (keys_[s].v >= q) throw Error("line key outside the field");
      for (const auto& p : line_points(f, line(s))) {
        if (mu_[point_index(p, q)]++ == 0) union_.insert(p);
      }
    }
    rho_.assign(q + 1, 0);
    for (int s = 0; s <= q; ++s) {
      for (const auto& p : line_points(f, line(s))) {
        const int m = mu_[point_index(p, q)];
        if (m >= 3) rho_[s] += m - 2;
      }
    }
    r_min_ = *std::min_element(rho_.begin(), rho_.end());
  }

  const FieldPtr& field() const noexcept { return field_; }
  int q() const noexcept { return field_->q(); }
  const std::vector<Elem>& keys() const noexcept { return keys_; }
  Line line(int slope_idx) const { return {slope_from_index(slope_idx, q()), keys_.at(slope_idx)}; }
  /// The union P.
  const PointSet& points() const noexcept { return union_; }
  long long size() const noexcept { return static_cast<long long>(union_.size()); }
  int mu(const Point& p) const noexcept { return mu_[point_index(p, q())]; }
  const std::vector<long long>& rho() const noexcept { return rho_; }
  long long rho(int slope_idx) const { return rho_.at(slope_idx); }
  /// R = min over slopes of rho.
  long long r_min() const noexcept { return r_min_; }

  /// Multiplicities of the points of P, ascending.
  std::vector<int> mu_multiset() const {
    std::vector<int> out;
    for (const auto& p : union_) out.push_back(mu(p));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  FieldPtr field_;
  std::vector<Elem> keys_;
  std::vector<int> mu_;
  PointSet union_;
  std::vector<long long> rho_;
  long long r_min_ = 0;
};

inline BesicovitchCover build_cover(const FieldPtr& field, const std::vector<int>& keys) {
  std::vector<Elem> k;
  for (int v : keys) {
    if (v < 0 || v >= field->q()) throw Error("line key " + std::to_string(v) + " outside GF(q)");
    k.push_back(Elem{static_cast<std::uint16_t>(v)});
  }
  return BesicovitchCover(field, std::move(k));
}

/// Builds a cover from a slope-index -> key map; every slope must be present.
inline BesicovitchCover build_cover(const FieldPtr& field, const std::map<int, int>& assignment) {
  const int q = field->q();
  std::vector<int> keys(q + 1, -1);
  for (auto [s, k] : assignment) {
    if (s < 0 || s > q) throw Error("slope index " + std::to_string(s) + " out of range");
    keys[s] = k;
  }
  for (int s = 0; s <= q; ++s)
    if (keys[s] < 0)
      throw MissingSlope("no line assigned to slope " + (s == q ? std::string("inf") : std::to_string(s)));
  return build_cover(field, keys);
}

struct IncidenceSides {
  long long direct;   // |P|
  long long formula;  // q(q+1)/2 + sum over P of binom(mu-1, 2)
  bool equal() const noexcept { return direct == formula; }
};

inline IncidenceSides incidence_size(const BesicovitchCover& c) {
  const long long q = c.q();
  long long rhs = q * (q + 1) / 2;
  for (const auto& p : c.points()) rhs += choose2(c.mu(p) - 1);
  return {c.size(), rhs};
}

/// Number of slopes with rho = 0 (at most one for any cover).
inline int check_rho_zero(const BesicovitchCover& c) {
  return static_cast<int>(std::count(c.rho().begin(), c.rho().end(), 0));
}

struct RBoundAudit {
  Rational size;        // |P|
  Rational rho_bound;   // q(q+1)/2 + sum rho / 3
  Rational final_bound; // q(q+1)/2 + 2(q+1)/3
  bool holds() const noexcept { return size >= rho_bound && rho_bound >= final_bound && size >= final_bound; }
};

/// The R >= 2 chain: |P| >= q(q+1)/2 + sum rho/3 >= q(q+1)/2 + 2(q+1)/3.
inline RBoundAudit r_ge2_bound_audit(const BesicovitchCover& c) {
  if (c.r_min() < 2) throw PreconditionViolated("R >= 2 audit on a cover with R = " + std::to_string(c.r_min()));
  const long long q = c.q();
  long long rho_sum = 0;
  for (auto r : c.rho()) rho_sum += r;
  const Rational base(q * (q + 1), 2);
  return {Rational(c.size()), base + Rational(rho_sum, 3), base + Rational(2 * (q + 1), 3)};
}

/// q(q+1)/2 + 5q/14 - 1/14.
inline Rational besicovitch_lower_bound(long long q) { return Rational(q * (q + 1), 2) + Rational(5 * q - 1, 14); }
/// q(q+1)/2 + (q-1)/2.
inline long long conjectured_minimum(long long q) { return q * (q + 1) / 2 + (q - 1) / 2; }

/// (x, y) -> (a11 x + a12 y + b1, a21 x + a22 y + b2).
struct AffineMap {
  Elem a11, a12, a21, a22, b1, b2;

  Point apply(const Field& f, const Point& p) const {
    return {f.add(f.add(f.mul(a11, p.x), f.mul(a12, p.y)), b1), f.add(f.add(f.mul(a21, p.x), f.mul(a22, p.y)), b2)};
  }
  Line apply(const Field& f, const Line& l) const {
    const auto pts = line_points(f, l);
    const Point u = apply(f, pts[0]), v = apply(f, pts[1]);
    return line_through(f, u, slope_between(f, u, v));
  }
};

struct Dualization {
  FunctionGraph graph;
  long long r_min;
  int minimizer_slope;          // slope index whose line became x = 0
  AffineMap transform;
  BesicovitchCover normalized;  // the transformed cover; its vertical has key 0
};

/**
 * Moves the line achieving rho = R (smallest slope index among ties) to the
 * vertical through the origin, then sends every other line y = m x + b to the
 * point (m, b). The result is a permutation when R = 0 and a semipermutation
 * when R = 1.
 */
inline Dualization normalize_and_dualize(const BesicovitchCover& c) {
  if (c.r_min() > 1) throw PreconditionViolated("dualization needs R <= 1, got R = " + std::to_string(c.r_min()));
  const Field& f = *c.field();
  const int q = f.q();
  const int s0 = static_cast<int>(std::find(c.rho().begin(), c.rho().end(), c.r_min()) - c.rho().begin());
  const Line target = c.line(s0);
  const Elem z = Field::zero(), one = Field::one();
  AffineMap t{};
  if (target.slope.infinite) {
    t = {one, z, z, one, f.neg(target.key), z};  // translate x = c onto x = 0
  } else {
    // (x, y) -> (y - m x - b, x): nonsingular, sends y = m x + b to x = 0.
    t = {f.neg(target.slope.m), one, one, z, f.neg(target.key), z};
  }
  std::vector<Elem> keys(q + 1);
  for (int s = 0; s <= q; ++s) {
    const Line img = t.apply(f, c.line(s));
    keys[slope_index(img.slope, q)] = img.key;
  }
  BesicovitchCover normalized(c.field(), keys);
  std::vector<Elem> table(keys.begin(), keys.begin() + q);
  FunctionGraph g(c.field(), std::move(table));
  const auto want = c.r_min() == 0 ? FunctionKind::kPermutation : FunctionKind::kSemipermutation;
  if (g.kind() != want)
    throw DegenerateDual(std::string("dual of an R = ") + std::to_string(c.r_min()) + " cover is a " +
                         to_string(g.kind()));
  return {std::move(g), c.r_min(), s0, t, std::move(normalized)};
}

/// Line y = m x + sigma(m) for every finite m, plus the vertical x = vertical_key.
inline BesicovitchCover primalize(const FunctionGraph& g, Elem vertical_key) {
  if (g.kind() == FunctionKind::kOther) throw WrongKind("primalize needs a permutation or a semipermutation");
  std::vector<Elem> keys = g.table();
  keys.push_back(vertical_key);
  return BesicovitchCover(g.field(), std::move(keys));
}

/// primalize with the vertical key minimizing |P| (smallest key among ties).
inline BesicovitchCover primalize_best(const FunctionGraph& g) {
  std::optional<BesicovitchCover> best;
  for (int k = 0; k < g.field()->q(); ++k) {
    auto c = primalize(g, Elem{static_cast<std::uint16_t>(k)});
    if (!best || c.size() < best->size()) best = std::move(c);
  }
  return std::move(*best);
}

/// Tangent lines y = m x - m^2/4 of a parabola, plus the vertical minimizing |P|.
inline BesicovitchCover parabola_construction(const FieldPtr& field) {
  const Field& f = *field;
  const int q = f.q();
  const Elem quarter = f.inv(f.from_int(4));
  std::vector<Elem> keys(q + 1);
  for (int m = 0; m < q; ++m) {
    const Elem e{static_cast<std::uint16_t>(m)};
    keys[m] = f.neg(f.mul(f.mul(e, e), quarter));
  }
  // |P| for each vertical is the tangent envelope plus the points it adds.
  std::vector<Elem> finite(keys.begin(), keys.begin() + q);
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(q) * q, 0);
  for (int m = 0; m < q; ++m)
    for (const auto& p : line_points(f, {Slope::finite(Elem{static_cast<std::uint16_t>(m)}), finite[m]}))
      covered[point_index(p, q)] = 1;
  int best_key = 0, best_new = q + 1;
  for (int x = 0; x < q; ++x) {
    int fresh = 0;
    for (int y = 0; y < q; ++y) fresh += covered[x * q + y] == 0;
    if (fresh < best_new) best_new = fresh, best_key = x;
  }
  keys[q] = Elem{static_cast<std::uint16_t>(best_key)};
  return BesicovitchCover(field, std::move(keys));
}

}  // namespace kakeyalab
