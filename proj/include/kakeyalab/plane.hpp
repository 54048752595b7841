#pragma once
// Points, slopes (the projective line PG(1,q)) and lines of the affine plane GF(q)^2.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "kakeyalab/field.hpp"

namespace kakeyalab {

struct Point {
  Elem x, y;
  constexpr auto operator<=>(const Point&) const = default;
};

/// Position of a point in the q*q occupancy mask; sorts like (x, y).
inline int point_index(const Point& p, int q) noexcept { return p.x.v * q + p.y.v; }
inline Point point_at(int index, int q) noexcept {
  return {Elem{static_cast<std::uint16_t>(index / q)}, Elem{static_cast<std::uint16_t>(index % q)}};
}

/// Element of PG(1,q): a finite slope m or the vertical direction.
struct Slope {
  bool infinite = false;
  Elem m{};

  static constexpr Slope finite(Elem m) noexcept { return {false, m}; }
  static constexpr Slope vertical() noexcept { return {true, Elem{}}; }

  constexpr bool operator==(const Slope& o) const noexcept {
    return infinite == o.infinite && (infinite || m == o.m);
  }
};

/// Canonical slope index: m for finite slopes, q for the vertical.
inline int slope_index(const Slope& s, int q) noexcept { return s.infinite ? q : s.m.v; }
inline Slope slope_from_index(int index, int q) {
  if (index < 0 || index > q) throw Error("slope index out of range");
  return index == q ? Slope::vertical() : Slope::finite(Elem{static_cast<std::uint16_t>(index)});
}

/// y = m x + key for finite slopes, x = key for the vertical.
struct Line {
  Slope slope;
  Elem key;
  constexpr bool operator==(const Line&) const noexcept = default;
};

inline Slope slope_between(const Field& f, const Point& a, const Point& b) {
  if (a == b) throw IdenticalPoints();
  if (a.x == b.x) return Slope::vertical();
  return Slope::finite(f.div(f.sub(b.y, a.y), f.sub(b.x, a.x)));
}

inline Line line_through(const Field& f, const Point& base, const Slope& slope) {
  if (slope.infinite) return {slope, base.x};
  return {slope, f.sub(base.y, f.mul(slope.m, base.x))};
}

inline bool on_line(const Field& f, const Line& line, const Point& p) noexcept {
  if (line.slope.infinite) return p.x == line.key;
  return p.y == f.add(f.mul(line.slope.m, p.x), line.key);
}

/// The q points of a line, ordered by x (by y for verticals).
inline std::vector<Point> line_points(const Field& f, const Line& line) {
  std::vector<Point> out;
  out.reserve(f.q());
  for (int i = 0; i < f.q(); ++i) {
    const Elem t{static_cast<std::uint16_t>(i)};
    if (line.slope.infinite)
      out.push_back({line.key, t});
    else
      out.push_back({t, f.add(f.mul(line.slope.m, t), line.key)});
  }
  return out;
}

/// The q parallel lines of one slope, in key order; together they partition the plane.
inline std::vector<Line> lines_of_slope(const Field& f, const Slope& slope) {
  std::vector<Line> out;
  out.reserve(f.q());
  for (int i = 0; i < f.q(); ++i) out.push_back({slope, Elem{static_cast<std::uint16_t>(i)}});
  return out;
}

/// Canonical line index: slope_index * q + key, covering all q(q+1) lines.
inline int line_index(const Line& l, int q) noexcept { return slope_index(l.slope, q) * q + l.key.v; }

inline bool collinear(const Field& f, const Point& a, const Point& b, const Point& c) {
  return on_line(f, line_through(f, a, slope_between(f, a, b)), c);
}

/// A subset of the plane: occupancy mask for O(1) membership plus the sorted member list.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int q) : q_(q), mask_(static_cast<std::size_t>(q) * q, 0) {}
  PointSet(int q, std::initializer_list<Point> pts) : PointSet(q) {
    for (const auto& p : pts) insert(p);
  }
  PointSet(int q, const std::vector<Point>& pts) : PointSet(q) {
    for (const auto& p : pts) insert(p);
  }

  int q() const noexcept { return q_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  bool contains(const Point& p) const noexcept {
    return p.x.v < q_ && p.y.v < q_ && mask_[point_index(p, q_)] != 0;
  }
  const std::vector<Point>& points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  /// Returns false if already present.
  bool insert(const Point& p) {
    if (p.x.v >= q_ || p.y.v >= q_) throw Error("point outside the plane");
    auto& bit = mask_[point_index(p, q_)];
    if (bit) return false;
    bit = 1;
    points_.insert(std::lower_bound(points_.begin(), points_.end(), p), p);
    return true;
  }

  bool erase(const Point& p) {
    if (!contains(p)) return false;
    mask_[point_index(p, q_)] = 0;
    points_.erase(std::lower_bound(points_.begin(), points_.end(), p));
    return true;
  }

  /// Position of p in points(), or -1.
  int rank(const Point& p) const noexcept {
    if (!contains(p)) return -1;
    return static_cast<int>(std::lower_bound(points_.begin(), points_.end(), p) - points_.begin());
  }

  bool operator==(const PointSet& o) const noexcept { return q_ == o.q_ && points_ == o.points_; }

 private:
  int q_ = 0;
  std::vector<std::uint8_t> mask_;
  std::vector<Point> points_;
};

}  // namespace kakeyalab
