#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantor/hausdorff.hpp"
#include "cantor/measure.hpp"
#include "cantor/order.hpp"
#include "cantor/tree.hpp"

namespace cantor {

/// A finite monotone machine: pairs (input τ, output σ) such that a longer
/// input never yields an incomparable or shorter output.
class MonotoneMachine {
 public:
  MonotoneMachine() = default;
  /// Throws DomainError("inconsistent machine table ...") on a monotonicity breach.
  static MonotoneMachine from_pairs(std::vector<std::pair<BitString, BitString>> pairs);
  /// (τ, τ) for |τ| ≤ L.
  static MonotoneMachine identity(unsigned L);
  /// (b1..bk, b1b1..bkbk) for k ≤ L.
  static MonotoneMachine bit_doubling(unsigned L);

  const std::vector<std::pair<BitString, BitString>>& pairs() const { return pairs_; }

  /// Φ(τ): the longest output among pairs whose input is a prefix of τ.
  std::optional<BitString> output(const BitString& tau) const;
  /// Pre(σ): minimal table inputs whose output extends σ, lexicographic order.
  std::vector<BitString> preimage(const BitString& sigma) const;

 private:
  std::vector<std::pair<BitString, BitString>> pairs_;
  std::map<BitString, BitString> by_input_;
};

/// λ(Pre(σ)) = Σ 2^(-|τ|) over the minimal inputs.
Rational machine_preimage_semimeasure(const MonotoneMachine& M, const BitString& sigma);

/// A function η with η(σ) ≥ η(σ0) + η(σ1) (checked, not assumed).
class Semimeasure {
 public:
  enum class Kind { Zero, Geometric, Table, Measure, Machine };

  static Semimeasure zero();
  /// a·r^|σ|.
  static Semimeasure geometric(Rational a, Rational r);
  /// Listed values; unlisted strings are 0.
  static Semimeasure table(std::map<BitString, Rational> values);
  static Semimeasure measure(CylinderMeasure m);
  static Semimeasure machine(MonotoneMachine M);

  Kind kind() const { return kind_; }
  bool length_invariant() const { return kind_ == Kind::Zero || kind_ == Kind::Geometric; }
  Rational eval(const BitString& s) const;
  Rational level(unsigned n) const;  // length-invariant kinds
  /// False only when every extension of s is known to have value 0.
  bool may_be_positive_below(const BitString& s) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Zero;
  Rational a_{0}, r_{0};
  std::map<BitString, Rational> table_;
  std::shared_ptr<const CylinderMeasure> measure_;
  std::shared_ptr<const MonotoneMachine> machine_;
};

/// η(ε) ≤ 1, values nonnegative, and η(σ) ≥ η(σ0) + η(σ1) for |σ| < N.
std::optional<Violation> semimeasure_validate(const Semimeasure& eta, unsigned N);

/// Re-check of the two conclusions of the construction, by exact comparison.
struct FrostmanAudit {
  bool additive = false;
  bool bounded = false;
  bool dominates = false;
  std::optional<Violation> failure;
  std::size_t clamps = 0;  // one-child splits where the parent mass was below the cap
  std::vector<std::string> log;
  bool ok() const { return additive && bounded && dominates; }
};

struct FrostmanResult {
  CylinderMeasure measure;
  Rational gamma;
  Order order;
  FrostmanAudit audit;
};

/// Builds, by induction along T to depth N, a probability measure with
/// μ(σ) ≤ γ·2^(-h(|σ|)) for all σ and η(τ) ≤ μ(τ) for τ in T.
FrostmanResult build_measure_along_tree(const TreeModel& T, const Semimeasure& eta, const Order& h,
                                        const Rational& gamma, unsigned N, Precision prec = {});

/// Independent audit of a constructed measure against the construction's
/// conclusions.
FrostmanAudit audit_frostman(const CylinderMeasure& mu, const TreeModel& T, const Semimeasure& eta, const Order& h,
                             const Rational& gamma, unsigned N, Precision prec = {});

struct FlowResult {
  Value value;  // min(1, min-cut)
  Value cut;    // min-cut of the capacities γ·2^(-h(n))
  std::optional<CylinderMeasure> measure;
};

/// Unit flow through T to depth N under node capacities γ·2^(-h(|σ|)).
FlowResult maxflow_measure(const TreeModel& T, const Order& h, const Rational& gamma, unsigned N,
                           Precision prec = {}, Exec exec = Exec::Parallel);

/// {σ : |σ| ≤ N, λ(Pre(σ↾n)) ≤ c·2^(-h(n)) for all n ≤ |σ|}.
TreeModel complexity_tree(const MonotoneMachine& M, const Order& h, const Rational& c, unsigned N,
                          Precision prec = {});

struct MassDistributionResult {
  Rational bound;  // 1/c
  Value dp_value;  // method1_value(T, 2^(-sn), N)
  bool holds = false;
};

/// Mass distribution principle: audits m(σ) ≤ c·2^(-s|σ|) for |σ| ≤ N and
/// m(T_N) = 1, then returns 1/c together with the recomputed Method-I value.
MassDistributionResult mass_distribution_bound(const CylinderMeasure& m, const TreeModel& T, const Rational& s,
                                               const Rational& c, unsigned N, Precision prec = {});

}  // namespace cantor
