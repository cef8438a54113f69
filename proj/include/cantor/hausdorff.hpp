#pragma once

#include <cstddef>
#include <vector>

#include "cantor/kernels.hpp"
#include "cantor/premeasure.hpp"
#include "cantor/tree.hpp"

namespace cantor {

/// An optimal cover: a prefix-free set of tree nodes whose cylinders cover
/// the depth-N level. Large antichains are counted but not listed.
struct CutCertificate {
  std::vector<BitString> antichain;  // lexicographic order
  Integer size{0};
  bool truncated = false;
  Value weight;
};

struct Method1Result {
  Value value;
  CutCertificate certificate;
};

inline constexpr std::size_t kDefaultCertificateCap = std::size_t{1} << 16;

/// min over tree-node antichain covers of the depth-N level of Σ ρ(σ).
Method1Result method1_value(const TreeModel& T, const Premeasure& rho, unsigned N, Precision prec = {},
                            Exec exec = Exec::Parallel, std::size_t certificate_cap = kDefaultCertificateCap);

/// The cut table of method1_value at a fixed precision; nullopt when a
/// comparison stayed undecided. Shared with the flow construction.
std::optional<CutTable> method1_table(const LayeredTree& L, const Premeasure& rho, unsigned bits, Exec exec);

/// One bisection probe of a dimension search.
struct Probe {
  Rational s;
  bool above = false;  // hdim: value at or below the threshold; capdim: feasible
  Value value;
};

struct DimensionEstimate {
  Rational lo;
  Rational hi;
  Rational threshold;  // hdim only
  Rational slack;      // hdim only: the scale allowance subtracted from lo
  std::vector<Probe> probes;
};

/// Bisection over s in [0,1] for the s at which the depth-N Method-I value
/// of 2^(-sn) drops to the threshold 2^(-m), m = ⌊N·tol/2⌋. Values at or
/// below the threshold move the upper end; the lower end is widened by m/N.
DimensionEstimate hdim_estimate(const TreeModel& T, unsigned N, const Rational& tol, Precision prec = {},
                                Exec exec = Exec::Parallel);

}  // namespace cantor
