#pragma once

#include <vector>

#include "cantor/measure.hpp"
#include "cantor/numeric.hpp"
#include "cantor/tree.hpp"

namespace cantor {

/// Execution policy of the level-synchronous kernels. Both variants compute
/// identical results; the serial one is the reference.
enum class Exec { Serial, Parallel };

/// Bottom-up min-cut over a layered tree:
///   best = w at depth N, 0 at childless nodes above N, else min(w, Σ best(children)).
/// Ties cut at the shallower node. `undecided` is set when an interval
/// comparison could not be resolved at the weights' precision.
struct CutTable {
  std::vector<std::vector<Value>> best;
  std::vector<std::vector<char>> cut;
  bool undecided = false;
};

CutTable mincut_levels(const LayeredTree& L, const std::vector<std::vector<Value>>& weight, Exec exec);

/// Squared-mass propagation through a measure's states:
///   S_0 = {start: 1},  S_{n+1}[q'] = Σ S_n[q]·w_b(q)²  over edges q -b-> q'
/// and the per-level sibling products Q_n = Σ_q S_n[q]·2·w_0(q)·w_1(q),
/// which equal Σ_{|σ|=n} 2·μ(σ0)·μ(σ1).
struct SplitProducts {
  std::vector<Rational> Q;           // n = 0 .. N-1
  std::vector<int> active;           // states carrying mass at depth N
  std::vector<Rational> squares;     // S_N on `active`
};

SplitProducts split_products(const CylinderMeasure& m, unsigned N, Exec exec);

}  // namespace cantor
