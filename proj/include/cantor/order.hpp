#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cantor/numeric.hpp"

namespace cantor {

/// A nondecreasing, unbounded function h: N -> Q>=0 used as the exponent of
/// the Hausdorff premeasure 2^(-h(|σ|)).
///
/// Three forms:
///   linear    h(n) = s·n
///   ceil      h(n) = ⌈s·n⌉
///   table     explicit values h(0..L-1), then h(n) = h(L-1) + tail·(n-L+1)
class Order {
 public:
  enum class Kind { Linear, Ceil, Table };

  static Order linear(Rational slope);
  static Order ceil(Rational slope);
  /// `tail_slope` empty means the table has no declared extension.
  static Order table(std::vector<Rational> values, std::optional<Rational> tail_slope);

  Kind kind() const { return kind_; }
  const Rational& slope() const { return slope_; }
  const std::vector<Rational>& values() const { return values_; }
  const std::optional<Rational>& tail_slope() const { return tail_; }

  /// h(n). Throws DomainError for a table queried past its end without extension.
  Rational operator()(unsigned n) const;

  /// h(n+1) <= h(n) + 1 for all n < N, by exact comparison.
  bool convex_upto(unsigned N) const;
  /// Convexity including the declared extension, i.e. for all n.
  bool convex_everywhere() const;
  /// All h(n), n <= N, are integers (the Hausdorff premeasure is then exact).
  bool integer_valued_upto(unsigned N) const;

  /// Compact textual form: "s=1/2", "ceil=1/2", "table:0,1,1,2;tail=1".
  std::string str() const;

 private:
  Order() = default;
  Kind kind_ = Kind::Linear;
  Rational slope_{0};
  std::vector<Rational> values_;
  std::optional<Rational> tail_;
};

/// h(n+1) <= h(n) + 1 for all n < N.
bool check_convex(const Order& h, unsigned N);

/// Parses the CLI order flag: "s=p/q", "ceil=p/q", "table:v0,v1,...[;tail=slope]".
/// Throws Error on malformed text.
Order parse_order_flag(const std::string& text);

}  // namespace cantor
