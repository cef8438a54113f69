#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantor/bitstring.hpp"
#include "cantor/numeric.hpp"

namespace cantor {

inline constexpr unsigned kUnbounded = std::numeric_limits<unsigned>::max();

/// One node type of a measure: the conditional split between the two
/// children and the state each child continues in. A child with weight 0
/// has no state (-1).
struct SplitState {
  std::array<int, 2> next{-1, -1};
  std::array<Rational, 2> w{Rational(0), Rational(0)};

  friend bool operator==(const SplitState& a, const SplitState& b) {
    return a.next == b.next && a.w[0] == b.w[0] && a.w[1] == b.w[1];
  }
};

/// Declared (s, γ)-boundedness: μ(σ) ≤ γ·2^(-s|σ|) for every σ.
struct MassBound {
  Rational s;
  Rational gamma;
};

/// Where a measure's failure to satisfy an invariant was first seen.
struct Violation {
  BitString at;
  std::string clause;
};

/// A probability measure on Cantor space given by a finite split automaton:
/// μ(ε) = 1 and μ(σb) = μ(σ)·w_b(state(σ)). Additivity holds by construction.
///
/// `depth` is the depth of the data the measure was built from (a mass table,
/// a tree construction); below it the measure continues with its own states,
/// which for tables means uniform halving. Built-in closed forms have
/// unbounded depth.
class CylinderMeasure {
 public:
  enum class TailClass { None, Uniform, Point0, Point1 };

  CylinderMeasure();  // Lebesgue

  static CylinderMeasure from_states(std::vector<SplitState> states, int start, unsigned depth,
                                     std::string name = {});

  static CylinderMeasure lebesgue();
  /// Point mass on b b b ...
  static CylinderMeasure dirac(int bit);
  /// Equal split at even depths, all mass to 0 at odd depths.
  static CylinderMeasure natural_every_other();
  /// Independent bits with P(0) = p0.
  static CylinderMeasure bernoulli(const Rational& p0);

  const std::vector<SplitState>& states() const { return states_; }
  int start() const { return start_; }
  unsigned depth() const { return depth_; }
  const std::string& name() const { return name_; }
  const std::optional<MassBound>& bound() const { return bound_; }
  CylinderMeasure with_bound(MassBound b) const;
  CylinderMeasure with_name(std::string n) const;
  CylinderMeasure with_depth(unsigned d) const;

  Rational mass(const BitString& s) const;
  /// Mass of s and the state below it (-1 when the mass is 0).
  std::pair<Rational, int> walk(const BitString& s) const;

  TailClass tail_class(int q) const { return q < 0 ? TailClass::None : tail_[q]; }
  /// A run of weight-1 splits from q that never ends (q lies above an atom).
  bool atom_below(int q) const { return q >= 0 && atom_[q]; }

  /// Incoming edges (parent state, bit) of each state.
  const std::vector<std::vector<std::pair<int, int>>>& predecessors() const { return preds_; }

  /// Same split structure (ignores name, depth and bound).
  bool same_structure(const CylinderMeasure& o) const { return start_ == o.start_ && states_ == o.states_; }

 private:
  void analyse();

  std::vector<SplitState> states_;
  int start_ = 0;
  unsigned depth_ = kUnbounded;
  std::string name_;
  std::optional<MassBound> bound_;
  std::vector<TailClass> tail_;
  std::vector<bool> atom_;
  std::vector<std::vector<std::pair<int, int>>> preds_;
};

/// A raw table of cylinder masses, as read from a file. Nothing is assumed
/// about it until validate_probability accepts it.
struct MassTable {
  unsigned depth = 0;
  std::map<BitString, Rational> mass;
};

/// Fills in unlisted nodes to the table depth: a node whose sibling is
/// listed gets parent − sibling, otherwise half its parent.
MassTable complete_table(MassTable t);

/// Checks mass(ε) = 1, nonnegativity, and mass(σ) = mass(σ0) + mass(σ1) for
/// |σ| < depth. Missing nodes are reported as violations.
std::optional<Violation> validate_probability(const MassTable& t);
/// A constructed CylinderMeasure always satisfies the axioms; this re-checks
/// its split states.
std::optional<Violation> validate_probability(const CylinderMeasure& m);

/// Measure of a valid table, continuing with uniform halving below its depth.
CylinderMeasure measure_from_table(const MassTable& t);

/// The cylinder masses of m for |σ| ≤ depth (zero-mass nodes included).
MassTable table_of(const CylinderMeasure& m, unsigned depth);

/// Finitely many point masses at σ⌢000...
struct DyadicMeasure {
  std::vector<BitString> support;
  std::vector<Rational> weights;

  void validate() const;
  CylinderMeasure to_measure() const;
};

}  // namespace cantor
