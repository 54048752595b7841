#pragma once
/**
 * @file field.hpp
 * @brief Exact arithmetic in GF(q) for odd prime powers q <= 343.
 *
 * Elements are identified by a canonical index in [0, q): the coefficient
 * vector of the polynomial representative read in base p (c0 + c1 p + ...).
 * For prime q the index is the residue itself. Index 0 is zero and index 1
 * is one; every "first/smallest" choice elsewhere in the library refers to
 * this order.
 *
 * Multiplication goes through log/antilog tables keyed by the smallest
 * generator of the multiplicative group; addition through a full q x q table.
 * Tables are immutable once the field is built, so a Field may be shared
 * freely between threads.
 */

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kakeyalab/errors.hpp"

namespace kakeyalab {

/// Canonical index of a field element. Carries no field context; use
/// FieldElement when mixed-field checking is wanted.
struct Elem {
  std::uint16_t v = 0;
  constexpr auto operator<=>(const Elem&) const = default;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

namespace detail {

// Polynomials over GF(p), coefficient vectors low degree first.
using Poly = std::vector<int>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inv_mod(int a, int p) {
  int r = 1;
  for (int e = p - 2, b = a % p; e > 0; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r;
}

inline Poly poly_mod(Poly a, const Poly& m, int p) {
  trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  const int lead_inv = inv_mod(m.back(), p);
  while (static_cast<int>(a.size()) - 1 >= dm) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    const int c = a.back() * lead_inv % p;
    for (int i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p digits of `code`.
inline Poly monic_from_code(int code, int deg, int p) {
  Poly f(deg + 1, 0);
  for (int i = 0; i < deg; ++i, code /= p) f[i] = code % p;
  f[deg] = 1;
  return f;
}

inline int ipow(int base, int e) {
  int r = 1;
  while (e-- > 0) r *= base;
  return r;
}

/// Irreducible iff no monic factor of degree 1..deg/2 divides it.
inline bool is_irreducible(const Poly& f, int p) {
  const int deg = static_cast<int>(f.size()) - 1;
  for (int d = 1; d <= deg / 2; ++d) {
    for (int code = 0, n = ipow(p, d); code < n; ++code) {
      if (poly_mod(f, monic_from_code(code, d, p), p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

class Field : public std::enable_shared_from_this<Field> {
 public:
  static constexpr int kMaxOrder = 343;

  int q() const noexcept { return q_; }
  int p() const noexcept { return p_; }
  int k() const noexcept { return k_; }
  /// Monic modulus, low degree first; empty for prime fields.
  const std::vector<int>& modulus() const noexcept { return modulus_; }

  static constexpr Elem zero() noexcept { return Elem{0}; }
  static constexpr Elem one() noexcept { return Elem{1}; }
  Elem generator() const noexcept { return generator_; }

  Elem add(Elem a, Elem b) const noexcept { return Elem{add_[a.v * q_ + b.v]}; }
  Elem neg(Elem a) const noexcept { return Elem{neg_[a.v]}; }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (a.v == 0 || b.v == 0) return zero();
    return Elem{exp_[log_[a.v] + log_[b.v]]};
  }
  Elem inv(Elem a) const {
    if (a.v == 0) throw DivisionByZero();
    return Elem{exp_[(q_ - 1 - log_[a.v]) % (q_ - 1)]};
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, long long e) const {
    if (a.v == 0) {
      if (e < 0) throw DivisionByZero();
      return e == 0 ? one() : zero();
    }
    long long l = (static_cast<long long>(log_[a.v]) * (e % (q_ - 1))) % (q_ - 1);
    if (l < 0) l += q_ - 1;
    return Elem{exp_[l]};
  }
  /// Discrete log base generator(); a must be nonzero.
  int log(Elem a) const {
    if (a.v == 0) throw DivisionByZero();
    return log_[a.v];
  }
  bool is_square(Elem a) const noexcept { return a.v == 0 || log_[a.v] % 2 == 0; }

  /// Image of an integer in the prime subfield.
  Elem from_int(long long n) const noexcept {
    return Elem{static_cast<std::uint16_t>(((n % p_) + p_) % p_)};
  }
  Elem element(int index) const {
    if (index < 0 || index >= q_) throw Error("element index out of range");
    return Elem{static_cast<std::uint16_t>(index)};
  }

  /// Product of all nonzero elements, computed by multiplication (not assumed to be -1).
  Elem product_of_nonzero() const noexcept {
    Elem acc = one();
    for (int i = 1; i < q_; ++i) acc = mul(acc, Elem{static_cast<std::uint16_t>(i)});
    return acc;
  }

  /// Row-major q x q addition table, for inner loops that index directly.
  std::span<const std::uint16_t> add_table() const noexcept { return add_; }

  std::string name() const {
    return k_ == 1 ? "GF(" + std::to_string(q_) + ")"
                   : "GF(" + std::to_string(p_) + "^" + std::to_string(k_) + ")";
  }

  friend FieldPtr make_field(long long q);

 private:
  Field(int q, int p, int k, std::vector<int> modulus)
      : q_(q), p_(p), k_(k), modulus_(std::move(modulus)) {
    build_tables();
  }

  static std::vector<int> choose_modulus(int p, int k) {
    // Fixed choices for the small extension fields; anything else takes the
    // first monic irreducible in index order of its lower coefficients.
    static const std::map<int, std::vector<int>> fixed{
        {9, {1, 0, 1}},    // x^2 + 1
        {25, {1, 1, 1}},   // x^2 + x + 1
        {49, {1, 0, 1}},   // x^2 + 1
    };
    const int q = detail::ipow(p, k);
    if (auto it = fixed.find(q); it != fixed.end()) return it->second;
    for (int code = 0, n = detail::ipow(p, k); code < n; ++code) {
      auto f = detail::monic_from_code(code, k, p);
      if (detail::is_irreducible(f, p)) return f;
    }
    throw Error("no irreducible polynomial found");  // unreachable for valid p, k
  }

  std::vector<int> digits(int index) const {
    std::vector<int> d(k_);
    for (int i = 0; i < k_; ++i, index /= p_) d[i] = index % p_;
    return d;
  }

  int undigits(const std::vector<int>& d) const {
    int index = 0;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) index = index * p_ + d[i];
    return index;
  }

  int slow_mul(int a, int b) const {
    if (k_ == 1) return a * b % p_;
    auto da = digits(a), db = digits(b);
    detail::Poly prod(2 * k_ - 1, 0);
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    auto r = detail::poly_mod(prod, modulus_, p_);
    r.resize(k_, 0);
    return undigits(r);
  }

  void build_tables() {
    add_.resize(static_cast<std::size_t>(q_) * q_);
    neg_.resize(q_);
    for (int a = 0; a < q_; ++a) {
      auto da = digits(a);
      std::vector<int> dn(k_);
      for (int i = 0; i < k_; ++i) dn[i] = (p_ - da[i]) % p_;
      neg_[a] = static_cast<std::uint16_t>(undigits(dn));
      for (int b = 0; b < q_; ++b) {
        auto db = digits(b);
        std::vector<int> ds(k_);
        for (int i = 0; i < k_; ++i) ds[i] = (da[i] + db[i]) % p_;
        add_[a * q_ + b] = static_cast<std::uint16_t>(undigits(ds));
      }
    }
    // Smallest index generating the multiplicative group.
    for (int cand = 2; cand < q_; ++cand) {
      int x = 1, order = 0;
      do {
        x = slow_mul(x, cand);
        ++order;
      } while (x != 1);
      if (order == q_ - 1) {
        generator_ = Elem{static_cast<std::uint16_t>(cand)};
        break;
      }
    }
    exp_.assign(2 * (q_ - 1), 0);
    log_.assign(q_, 0);
    int x = 1;
    for (int i = 0; i < q_ - 1; ++i) {
      exp_[i] = exp_[i + q_ - 1] = static_cast<std::uint16_t>(x);
      log_[x] = static_cast<std::uint16_t>(i);
      x = slow_mul(x, generator_.v);
    }
  }

  int q_, p_, k_;
  std::vector<int> modulus_;
  Elem generator_{};
  std::vector<std::uint16_t> add_, neg_, exp_, log_;
};

/// Factor q as p^k with p an odd prime, or nullopt.
inline std::optional<std::pair<int, int>> odd_prime_power(long long q) {
  if (q < 3 || q % 2 == 0) return std::nullopt;
  long long p = 3;
  while (p * p <= q && q % p != 0) p += 2;
  if (q % p != 0) p = q;
  int k = 0;
  long long r = q;
  while (r % p == 0) r /= p, ++k;
  if (r != 1) return std::nullopt;
  return std::pair<int, int>{static_cast<int>(p), k};
}

/// Builds GF(q). Throws NotOddPrimePower for even q, q = 1, or composite
/// non-prime-powers; q above Field::kMaxOrder is unsupported.
inline FieldPtr make_field(long long q) {
  auto pk = odd_prime_power(q);
  if (!pk) throw NotOddPrimePower(q);
  if (q > Field::kMaxOrder)
    throw Error("q = " + std::to_string(q) + " exceeds the supported maximum " +
                std::to_string(Field::kMaxOrder));
  auto [p, k] = *pk;
  std::vector<int> modulus;
  if (k > 1) modulus = Field::choose_modulus(p, k);
  return FieldPtr(new Field(static_cast<int>(q), p, k, std::move(modulus)));
}

/// Every supported field order, ascending.
inline std::vector<int> supported_orders() {
  std::vector<int> out;
  for (int q = 3; q <= Field::kMaxOrder; q += 2)
    if (odd_prime_power(q)) out.push_back(q);
  return out;
}

/// An element bound to its field; arithmetic between different fields throws MixedFields.
class FieldElement {
 public:
  FieldElement(FieldPtr field, Elem value) : field_(std::move(field)), value_(value) {
    if (!field_ || value_.v >= field_->q()) throw Error("element index out of range");
  }

  const FieldPtr& field() const noexcept { return field_; }
  Elem value() const noexcept { return value_; }
  int index() const noexcept { return value_.v; }
  bool is_zero() const noexcept { return value_.v == 0; }

  FieldElement inv() const { return {field_, field_->inv(value_)}; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    return {a.same(b), a.field_->add(a.value_, b.value_)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    return {a.same(b), a.field_->sub(a.value_, b.value_)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    return {a.same(b), a.field_->mul(a.value_, b.value_)};
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    return {a.same(b), a.field_->div(a.value_, b.value_)};
  }
  FieldElement operator-() const { return {field_, field_->neg(value_)}; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    a.same(b);
    return a.value_ == b.value_;
  }

 private:
  const FieldPtr& same(const FieldElement& other) const {
    if (field_.get() != other.field_.get()) throw MixedFields();
    return field_;
  }

  FieldPtr field_;
  Elem value_;
};

inline FieldElement inv(const FieldElement& a) { return a.inv(); }

inline FieldElement product_of_nonzero(const FieldPtr& field) {
  return {field, field->product_of_nonzero()};
}

}  // namespace kakeyalab
