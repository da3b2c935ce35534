#pragma once

// Arbitrary-precision integer with an inline 64-bit fast path.
//
// Values that fit in int64_t are stored inline; anything larger is promoted
// to a heap-allocated mpz_class and demoted again as soon as it fits. The
// presentation matrices we eliminate are overwhelmingly filled with tiny
// entries, so nearly every operation stays on the fast path.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>

namespace ceva {

class Integer {
 public:
  Integer() = default;
  Integer(std::int64_t v) : small_(v) {}  // NOLINT(google-explicit-constructor)
  Integer(int v) : small_(v) {}           // NOLINT(google-explicit-constructor)
  explicit Integer(const mpz_class& v) { assign_mpz(v); }
  explicit Integer(std::string_view text) {
    mpz_class v;
    if (v.set_str(std::string(text), 10) != 0) {
      throw std::invalid_argument("Integer: cannot parse '" + std::string(text) + "'");
    }
    assign_mpz(v);
  }

  Integer(const Integer& o) : small_(o.small_) {
    if (o.big_) big_ = std::make_unique<mpz_class>(*o.big_);
  }
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& o) {
    if (this != &o) {
      small_ = o.small_;
      big_ = o.big_ ? std::make_unique<mpz_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;
  ~Integer() = default;

  [[nodiscard]] bool is_small() const { return !big_; }
  [[nodiscard]] std::int64_t small_value() const { return small_; }

  [[nodiscard]] bool is_zero() const { return !big_ && small_ == 0; }
  [[nodiscard]] bool is_one() const { return !big_ && small_ == 1; }
  [[nodiscard]] bool is_unit() const { return !big_ && (small_ == 1 || small_ == -1); }
  [[nodiscard]] int sign() const {
    if (big_) return sgn(*big_);
    return (small_ > 0) - (small_ < 0);
  }

  [[nodiscard]] mpz_class to_mpz() const {
    if (big_) return *big_;
    mpz_class r;
    set_mpz_from_i64(r.get_mpz_t(), small_);
    return r;
  }

  /// Throws std::overflow_error if the value does not fit.
  [[nodiscard]] std::int64_t to_int64() const {
    if (big_) throw std::overflow_error("Integer: value does not fit in int64");
    return small_;
  }

  [[nodiscard]] std::string str() const { return big_ ? big_->get_str() : std::to_string(small_); }

  // Arithmetic ---------------------------------------------------------------

  friend Integer operator+(const Integer& a, const Integer& b) {
    std::int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_add_overflow(a.small_, b.small_, &r)) return Integer(r);
    return Integer(mpz_class(a.to_mpz() + b.to_mpz()));
  }
  friend Integer operator-(const Integer& a, const Integer& b) {
    std::int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_sub_overflow(a.small_, b.small_, &r)) return Integer(r);
    return Integer(mpz_class(a.to_mpz() - b.to_mpz()));
  }
  friend Integer operator*(const Integer& a, const Integer& b) {
    std::int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_mul_overflow(a.small_, b.small_, &r)) return Integer(r);
    return Integer(mpz_class(a.to_mpz() * b.to_mpz()));
  }
  Integer operator-() const { return Integer(0) - *this; }

  Integer& operator+=(const Integer& b) { return *this = *this + b; }
  Integer& operator-=(const Integer& b) { return *this = *this - b; }
  Integer& operator*=(const Integer& b) { return *this = *this * b; }

  /// a -= f * b, the inner kernel of every elimination step.
  void submul(const Integer& f, const Integer& b) {
    std::int64_t p, r;
    if (!big_ && !f.big_ && !b.big_ && !__builtin_mul_overflow(f.small_, b.small_, &p) &&
        !__builtin_sub_overflow(small_, p, &r)) {
      small_ = r;
      return;
    }
    mpz_class v = to_mpz();
    mpz_submul(v.get_mpz_t(), f.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    assign_mpz(v);
  }

  /// Floor division and its remainder (remainder has the sign of b).
  friend std::pair<Integer, Integer> floor_divmod(const Integer& a, const Integer& b) {
    if (b.is_zero()) throw std::domain_error("Integer: division by zero");
    if (!a.big_ && !b.big_ && !(a.small_ == std::numeric_limits<std::int64_t>::min() && b.small_ == -1)) {
      std::int64_t q = a.small_ / b.small_;
      std::int64_t r = a.small_ % b.small_;
      if (r != 0 && ((r < 0) != (b.small_ < 0))) {
        --q;
        r += b.small_;
      }
      return {Integer(q), Integer(r)};
    }
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return {Integer(q), Integer(r)};
  }

  /// Division known to be exact.
  friend Integer exact_div(const Integer& a, const Integer& b) {
    if (b.is_zero()) throw std::domain_error("Integer: division by zero");
    if (!a.big_ && !b.big_ && !(a.small_ == std::numeric_limits<std::int64_t>::min() && b.small_ == -1)) {
      return Integer(a.small_ / b.small_);
    }
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return Integer(q);
  }

  friend bool divides(const Integer& d, const Integer& a) {
    if (d.is_zero()) return a.is_zero();
    if (!a.big_ && !d.big_) {
      if (d.small_ == -1) return true;
      return a.small_ % d.small_ == 0;
    }
    return mpz_divisible_p(a.to_mpz().get_mpz_t(), d.to_mpz().get_mpz_t()) != 0;
  }

  friend Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

  friend Integer gcd(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_ && a.small_ != std::numeric_limits<std::int64_t>::min() &&
        b.small_ != std::numeric_limits<std::int64_t>::min()) {
      std::int64_t x = a.small_ < 0 ? -a.small_ : a.small_;
      std::int64_t y = b.small_ < 0 ? -b.small_ : b.small_;
      while (y != 0) {
        std::int64_t t = x % y;
        x = y;
        y = t;
      }
      return Integer(x);
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return Integer(g);
  }

  /// Returns (g, s, t) with g = gcd(a, b) >= 0 and g = s*a + t*b.
  friend std::tuple<Integer, Integer, Integer> xgcd(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_ && a.small_ != std::numeric_limits<std::int64_t>::min() &&
        b.small_ != std::numeric_limits<std::int64_t>::min()) {
      std::int64_t r0 = a.small_, r1 = b.small_, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
      while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_tuple(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_tuple(s1, s0 - q * s1);
        std::tie(t0, t1) = std::make_tuple(t1, t0 - q * t1);
      }
      if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
      }
      return {Integer(r0), Integer(s0), Integer(t0)};
    }
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return {Integer(g), Integer(s), Integer(t)};
  }

  friend Integer lcm(const Integer& a, const Integer& b) {
    if (a.is_zero() || b.is_zero()) return Integer(0);
    return abs(exact_div(a, gcd(a, b)) * b);
  }

  /// Residue in [0, p) for a word-sized modulus.
  [[nodiscard]] std::uint64_t mod_u64(std::uint64_t p) const {
    if (!big_) {
      auto r = static_cast<__int128>(small_) % static_cast<__int128>(p);
      if (r < 0) r += p;
      return static_cast<std::uint64_t>(r);
    }
    mpz_class r;
    mpz_class pp;
    mpz_import(pp.get_mpz_t(), 1, -1, sizeof(p), 0, 0, &p);
    mpz_fdiv_r(r.get_mpz_t(), big_->get_mpz_t(), pp.get_mpz_t());
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, r.get_mpz_t());
    return out;
  }

  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
    int c = cmp(a.to_mpz(), b.to_mpz());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  friend bool operator==(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ == b.small_;
    return (a <=> b) == std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Integer& a) { return os << a.str(); }

  [[nodiscard]] std::size_t hash() const {
    if (!big_) return std::hash<std::int64_t>{}(small_);
    return std::hash<std::string>{}(big_->get_str(16));
  }

 private:
  static void set_mpz_from_i64(mpz_ptr z, std::int64_t v) {
    // mpz_set_si takes long, which is 64 bits on the platforms we build for.
    static_assert(sizeof(long) == sizeof(std::int64_t));
    mpz_set_si(z, static_cast<long>(v));
  }

  void assign_mpz(const mpz_class& v) {
    if (mpz_fits_slong_p(v.get_mpz_t())) {
      small_ = mpz_get_si(v.get_mpz_t());
      big_.reset();
    } else {
      small_ = 0;
      big_ = std::make_unique<mpz_class>(v);
    }
  }

  std::int64_t small_ = 0;
  std::unique_ptr<mpz_class> big_;
};

}  // namespace ceva

template <>
struct std::hash<ceva::Integer> {
  std::size_t operator()(const ceva::Integer& v) const noexcept { return v.hash(); }
};
