#pragma once

#include <string>
#include <vector>

#include "cantor/frostman.hpp"
#include "cantor/hausdorff.hpp"
#include "cantor/kernels.hpp"
#include "cantor/measure.hpp"
#include "cantor/tree.hpp"

namespace cantor {

/// How the part of the sum beyond depth N is accounted for.
///   Exact      `tail` encloses it
///   Bound      it lies in [0, tail]
///   Divergent  the total is infinite; `value` is a lower bound
///   Unknown    no finite bound could be established
enum class TailKind { Exact, Bound, Divergent, Unknown };

std::string to_string(TailKind k);

struct EnergyReport {
  Value value;  // partial sum over depths < N
  TailKind tail_kind = TailKind::Unknown;
  Value tail{0};
  std::string tail_rule;
  Rational t;
  unsigned depth = 0;
  /// Q_n = Σ_{|σ|=n} 2·μ(σ0)·μ(σ1); the partial sum is Σ 2^(tn)·Q_n.
  std::vector<Rational> level_coefficients;

  bool finite() const { return tail_kind == TailKind::Exact || tail_kind == TailKind::Bound; }
  /// Upper end of the certified enclosure of the full energy.
  Rational upper() const;
  /// Lower end of the certified enclosure of the full energy.
  Rational lower() const;
};

/// t-energy ∫∫ d(x,y)^(-t) dμ dμ through the sibling-split identity
///   I_t(μ) = Σ_σ 2^(t|σ|)·2·μ(σ0)·μ(σ1),
/// which holds because pairs whose longest common prefix is σ are at
/// distance exactly 2^(-|σ|), plus a tail term for |σ| ≥ N.
EnergyReport energy(const CylinderMeasure& m, const Rational& t, unsigned N, Precision prec = {},
                    Exec exec = Exec::Parallel);

/// φ_t(x) = Σ_n 2^(tn)·μ(x↾n ⌢ (1 - x(n))) summed over n < N, plus tail.
EnergyReport potential(const CylinderMeasure& m, const BitString& x, const Rational& t, unsigned N,
                       Precision prec = {});

struct CapacityResult {
  Rational lower;          // certified lower bound for the s-capacity at depth N
  std::string candidate;   // "maxflow", "lemma" or "none"
  std::optional<CylinderMeasure> measure;
  std::optional<EnergyReport> energy;
};

CapacityResult capacity_lower(const TreeModel& T, const Rational& s, unsigned N, Precision prec = {});

/// Bisection over s in [0,1] for the largest s at which a unit flow under
/// capacities 2^(-sn) exists; `gamma` scales the capacities.
DimensionEstimate capdim_estimate(const TreeModel& T, unsigned N, const Rational& tol, Precision prec = {},
                                  const Rational& gamma = Rational(1), Exec exec = Exec::Parallel);

struct IterateLog {
  unsigned iteration;
  double energy;
  double gap;
  double step;
  std::size_t vertex;
};

struct MinimizeResult {
  CylinderMeasure measure;
  EnergyReport energy;
  std::vector<IterateLog> log;
  bool converged = false;
};

/// Conditional-gradient minimisation of the s-energy over probability
/// vectors on T's depth-N level (uniform below N), starting from the natural
/// measure. Each step moves toward the leaf of least potential with an exact
/// line search, so the energy never increases.
MinimizeResult minimize_energy(const TreeModel& T, const Rational& s, unsigned N, unsigned iters,
                               const Rational& tol);

/// The iterate log as CSV.
std::string iterate_log_csv(const std::vector<IterateLog>& log);

}  // namespace cantor
