#pragma once
/**
 * @file collinear.hpp
 * @brief Collinear-triple hypergraph C(S), maximal collinear sets L(S), and their norms.
 *
 * Maximal collinear subsets are found per line: S is bucketed by line key for
 * each of the q+1 slopes, and every bucket with at least two points is kept.
 * Two-point sets are stored (slope profiles need them) but contribute nothing
 * to any norm. All norms are exact rationals.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "kakeyalab/errors.hpp"
#include "kakeyalab/plane.hpp"
#include "kakeyalab/rational.hpp"

namespace kakeyalab {

struct MaximalSet {
  Line line;
  std::vector<Point> points;  // sorted
};

/// A collinear triple, points sorted.
using Triple = std::array<Point, 3>;

/// phi(k) = (k-1)(k-2) / (2k), the share of a maximal k-set carried by each of its points.
inline Rational phi(long long k) { return Rational((k - 1) * (k - 2), 2 * k); }

/// (k-1)(k-2)/2, the norm contribution of one maximal k-set.
inline long long set_norm(long long k) { return k < 3 ? 0 : (k - 1) * (k - 2) / 2; }

inline long long choose3(long long k) { return k < 3 ? 0 : k * (k - 1) * (k - 2) / 6; }
inline long long choose2(long long k) { return k < 2 ? 0 : k * (k - 1) / 2; }

class CollinearStructure {
 public:
  /// Builds C(S) and L(S) for S. Works for any S, including the empty set.
  static CollinearStructure build(const Field& f, const PointSet& s) {
    CollinearStructure out;
    out.points_ = s;
    const int q = f.q();
    out.q_ = q;
    out.sets_at_.assign(s.size(), {});
    out.triples_at_.assign(s.size(), 0);

    std::vector<std::vector<Point>> buckets(q);
    for (int si = 0; si <= q; ++si) {
      const Slope slope = slope_from_index(si, q);
      for (auto& b : buckets) b.clear();
      for (const auto& p : s) buckets[line_through(f, p, slope).key.v].push_back(p);
      for (int key = 0; key < q; ++key) {
        auto& b = buckets[key];
        if (b.size() < 2) continue;
        const int id = static_cast<int>(out.sets_.size());
        out.sets_.push_back({{slope, Elem{static_cast<std::uint16_t>(key)}}, b});
        const auto k = static_cast<long long>(b.size());
        out.triple_count_ += choose3(k);
        out.norm_ += set_norm(k);
        if (k >= 3) {
          out.edge_count_ += 1;
          out.edge_size_sum_ += k;
          for (const auto& p : b) {
            const int r = s.rank(p);
            out.sets_at_[r].push_back(id);
            out.triples_at_[r] += choose2(k - 1);
          }
        }
      }
    }
    return out;
  }

  int q() const noexcept { return q_; }
  const PointSet& points() const noexcept { return points_; }
  /// Maximal collinear subsets of size >= 2, ordered by (slope index, key).
  const std::vector<MaximalSet>& maximal_sets() const noexcept { return sets_; }
  long long triple_count() const noexcept { return triple_count_; }
  /// ||S|| = sum over maximal sets of (|e|-1)(|e|-2)/2.
  Rational norm() const noexcept { return Rational(norm_); }
  /// Number of maximal sets of size >= 3 (the edge count h of L(S) restricted to real edges).
  long long edge_count() const noexcept { return edge_count_; }
  /// Sum of |e| over maximal sets of size >= 3.
  long long edge_size_sum() const noexcept { return edge_size_sum_; }

  /// Indices into maximal_sets() of the sets of size >= 3 through p.
  const std::vector<int>& sets_at(const Point& p) const { return sets_at_[checked_rank(p)]; }
  /// Number of collinear triples containing p.
  long long triples_at(const Point& p) const { return triples_at_[checked_rank(p)]; }

  /// Every collinear triple, lexicographically sorted.
  std::vector<Triple> triples() const {
    std::vector<Triple> out;
    out.reserve(static_cast<std::size_t>(triple_count_));
    for (const auto& e : sets_) {
      const auto& v = e.points;
      for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b)
          for (std::size_t c = b + 1; c < v.size(); ++c) out.push_back({v[a], v[b], v[c]});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int checked_rank(const Point& p) const {
    const int r = points_.rank(p);
    if (r < 0) throw PointNotInSet();
    return r;
  }

  int q_ = 0;
  PointSet points_;
  std::vector<MaximalSet> sets_;
  std::vector<std::vector<int>> sets_at_;
  std::vector<long long> triples_at_;
  long long triple_count_ = 0;
  long long norm_ = 0;
  long long edge_count_ = 0;
  long long edge_size_sum_ = 0;
};

inline CollinearStructure build_structure(const Field& f, const PointSet& s) {
  return CollinearStructure::build(f, s);
}

/// ||x||: sum of phi(k) over the maximal k-sets (k >= 3) through x.
inline Rational point_norm(const Point& x, const CollinearStructure& cs) {
  Rational acc(0);
  for (int id : cs.sets_at(x)) acc += phi(static_cast<long long>(cs.maximal_sets()[id].points.size()));
  return acc;
}

/// Points lying in exactly one collinear triple.
inline std::vector<Point> lonely_points(const CollinearStructure& cs) {
  std::vector<Point> out;
  for (const auto& p : cs.points())
    if (cs.triples_at(p) == 1) out.push_back(p);
  return out;
}

/// Points lying in no collinear triple.
inline std::vector<Point> isolated_points(const CollinearStructure& cs) {
  std::vector<Point> out;
  for (const auto& p : cs.points())
    if (cs.triples_at(p) == 0) out.push_back(p);
  return out;
}

/// Triples whose three points are all lonely. Such a triple is a maximal
/// 3-set met by no other edge, so distinct isolated edges are disjoint.
inline std::vector<Triple> isolated_edges(const CollinearStructure& cs) {
  std::vector<Triple> out;
  for (const auto& e : cs.maximal_sets()) {
    if (e.points.size() != 3) continue;
    if (cs.triples_at(e.points[0]) == 1 && cs.triples_at(e.points[1]) == 1 &&
        cs.triples_at(e.points[2]) == 1)
      out.push_back({e.points[0], e.points[1], e.points[2]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct IsolatedMatching {
  std::vector<Triple> edges;
  PointSet rest;  // T = S minus the matched points
  std::size_t t() const noexcept { return rest.size(); }
};

/// Maximum isolated matching. Every isolated edge is disjoint from and untouched by
/// every other edge, so the maximum is exactly the set of isolated edges; it is unique.
inline IsolatedMatching max_isolated_matching(const CollinearStructure& cs) {
  IsolatedMatching m{isolated_edges(cs), cs.points()};
  for (const auto& e : m.edges)
    for (const auto& p : e) m.rest.erase(p);
  return m;
}

enum class SubsetNorm {
  kInduced,       // norm of the structure built on the subset alone
  kPointNormSum,  // sum of the parent's point norms over the subset
};

inline Rational subset_norm(const Field& f, const CollinearStructure& cs, const PointSet& subset,
                            SubsetNorm mode = SubsetNorm::kInduced) {
  if (mode == SubsetNorm::kInduced) return build_structure(f, subset).norm();
  Rational acc(0);
  for (const auto& p : subset) acc += point_norm(p, cs);
  return acc;
}

struct RatioCheck {
  Rational ratio;  // ||T|| / t
  bool holds;      // ratio >= 2/5
};

/// ||T|| / t for a structure built on T. Throws PreconditionViolated when T is
/// empty or has an isolated point or an isolated edge.
inline RatioCheck ratio_check(const CollinearStructure& t_struct) {
  const auto t = static_cast<long long>(t_struct.points().size());
  if (t == 0) throw PreconditionViolated("ratio check on an empty set");
  if (!isolated_points(t_struct).empty())
    throw PreconditionViolated("ratio check: the set has an isolated point");
  if (!isolated_edges(t_struct).empty())
    throw PreconditionViolated("ratio check: the set has an isolated edge");
  const Rational r = t_struct.norm() / t;
  return {r, r >= Rational(2, 5)};
}

}  // namespace kakeyalab
