#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace cantor {

using Rational = mpq_class;
using Integer = mpz_class;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or contract of an operation does not hold for its input.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An interval comparison stayed undecided at the maximum precision.
class UndecidedError : public Error {
 public:
  using Error::Error;
};

/// Three-valued outcome of comparing enclosures.
enum class Tri { False, True, Undecided };

inline Tri tri(bool b) { return b ? Tri::True : Tri::False; }

/// Working precision, in bits, of the directed-rounded transcendental
/// evaluations. Comparisons that stay undecided are retried at twice the
/// precision until `max_bits` is exceeded.
struct Precision {
  unsigned bits = 128;
  unsigned max_bits = 4096;

  Precision doubled() const { return {bits * 2, max_bits}; }
  bool exhausted() const { return bits > max_bits; }
};

/// A real quantity held either as an exact rational or as an outward-rounded
/// rational enclosure [lo, hi]. Arithmetic on enclosures is exact rational
/// arithmetic on the endpoints, so no rounding happens after construction.
class Value {
 public:
  Value() = default;
  Value(const Rational& r) : lo_(r) {}  // NOLINT(google-explicit-constructor)
  Value(long v) : lo_(v) {}             // NOLINT(google-explicit-constructor)
  Value(int v) : lo_(v) {}              // NOLINT(google-explicit-constructor)

  static Value interval(Rational lo, Rational hi);

  bool exact() const { return exact_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return exact_ ? lo_ : hi_; }
  Rational midpoint() const;
  Rational width() const;
  double to_double() const;

  Value operator-() const;
  Value& operator+=(const Value& o);
  Value& operator-=(const Value& o);
  Value& operator*=(const Value& o);
  /// Division by an enclosure bounded away from zero.
  Value& operator/=(const Value& o);

  friend Value operator+(Value a, const Value& b) { return a += b; }
  friend Value operator-(Value a, const Value& b) { return a -= b; }
  friend Value operator*(Value a, const Value& b) { return a *= b; }
  friend Value operator/(Value a, const Value& b) { return a /= b; }

  /// Exact equality of representations (same exactness and endpoints).
  bool same_as(const Value& o) const;

  /// "p/q" for exact values, "[p/q, r/s]" for enclosures.
  std::string str() const;

 private:
  void normalize();

  Rational lo_{0};
  Rational hi_{0};
  bool exact_ = true;
};

Value min(const Value& a, const Value& b);
Value max(const Value& a, const Value& b);

Tri less(const Value& a, const Value& b);
Tri less_equal(const Value& a, const Value& b);
inline Tri greater(const Value& a, const Value& b) { return less(b, a); }
inline Tri greater_equal(const Value& a, const Value& b) { return less_equal(b, a); }

/// 2^x for rational x, exact when x is an integer, otherwise an enclosure
/// whose endpoints are correctly rounded at `bits` of mantissa precision.
/// Satisfies pow2(x + 1) == 2 * pow2(x) endpoint-wise.
Value pow2(const Rational& x, unsigned bits);

/// Exact 2^k for an integer exponent.
Rational pow2_exact(long k);

/// Parses "p/q", "p", or a decimal like "0.05" into a canonical rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& r);

bool is_integer(const Rational& r);
Integer floor(const Rational& r);
Integer ceil(const Rational& r);

/// Runs `attempt(bits)` with growing precision until it returns a value.
/// `attempt` returns std::nullopt when a comparison was undecided.
template <class F>
auto escalate(Precision p, F&& attempt, const char* what)
    -> typename decltype(attempt(0u))::value_type {
  for (; !p.exhausted(); p = p.doubled()) {
    if (auto r = attempt(p.bits)) return std::move(*r);
  }
  throw UndecidedError(std::string(what) + ": undecided at maximum precision");
}

}  // namespace cantor
