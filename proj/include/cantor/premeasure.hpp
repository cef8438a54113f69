#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "cantor/bitstring.hpp"
#include "cantor/measure.hpp"
#include "cantor/numeric.hpp"
#include "cantor/order.hpp"

namespace cantor {

/// A nonnegative set function on strings.
///   hausdorff    γ·2^(-h(|σ|))
///   probability  the cylinder masses of a measure
///   table        explicit values on a finite domain
class Premeasure {
 public:
  enum class Kind { Hausdorff, Probability, Table };

  static Premeasure hausdorff(Order h, Rational gamma = Rational(1));
  static Premeasure probability(CylinderMeasure m);
  static Premeasure table(std::map<BitString, Rational> values);
  /// 2^(-|σ|) as a Hausdorff premeasure.
  static Premeasure lebesgue() { return hausdorff(Order::linear(Rational(1))); }

  Kind kind() const { return kind_; }
  bool length_invariant() const { return kind_ == Kind::Hausdorff; }
  bool is_probability() const { return kind_ == Kind::Probability; }

  const Order& order() const { return *order_; }
  const Rational& gamma() const { return gamma_; }
  const CylinderMeasure& measure() const { return *measure_; }
  const std::map<BitString, Rational>& values() const { return table_; }

  /// ρ(σ). Throws DomainError for strings outside a table's domain.
  Value eval(const BitString& s, unsigned bits) const;
  /// ρ at any string of length n; Hausdorff kind only.
  Value level(unsigned n, unsigned bits) const;
  /// Exact whenever h(n) is an integer.
  bool exact_at_level(unsigned n) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::Hausdorff;
  std::optional<Order> order_;
  Rational gamma_{1};
  std::shared_ptr<const CylinderMeasure> measure_;
  std::map<BitString, Rational> table_;
};

Value premeasure_eval(const Premeasure& rho, const BitString& s, Precision p = {});

/// Cantor distance of two strings: 2^(-k) at the first disagreement k;
/// 0 and unresolved when one is a prefix of the other.
struct Distance {
  Rational value;
  bool unresolved = false;
};
Distance cantor_distance(const BitString& a, const BitString& b);

/// Result of checking (G1)-(G3) to depth N.
struct GeometricalReport {
  bool ok = false;
  Value p;  // max child/parent ratio seen
  Value q;  // min (children sum)/parent ratio seen
  std::optional<Violation> violation;
};

GeometricalReport check_geometrical(const Premeasure& rho, unsigned N, Precision prec = {});

}  // namespace cantor
