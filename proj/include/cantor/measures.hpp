#pragma once

#include <optional>
#include <vector>

#include "cantor/measure.hpp"
#include "cantor/premeasure.hpp"
#include "cantor/tree.hpp"

namespace cantor {

/// d_meas truncated at depth K. `value` is exact; the true distance lies in
/// [value, value + tail]. `tail` is 0 when every pair of cylinders froze
/// (their level differences stay constant from some depth on), in which case
/// `depth` is where that happened.
struct DmeasResult {
  Rational value;
  Rational tail;
  bool exact = false;
  unsigned depth = 0;
};

DmeasResult dmeas_distance(const CylinderMeasure& a, const CylinderMeasure& b, unsigned K);

/// The depth-n point approximant: weight m(σ) at σ⌢000... for each |σ| = n
/// with positive mass.
DyadicMeasure cauchy_approximate(const CylinderMeasure& m, unsigned n);

/// Strict membership q1 < ρ(σ) < q2, refining enclosures as needed.
bool rational_rep_query(const Premeasure& rho, const BitString& s, const Rational& q1, const Rational& q2,
                        Precision prec = {});

/// Conditions m on the depth-D level of T: ν(σ) = m(σ ∩ T_D)/m(T_D). Below
/// depth D the measure continues with m's own splits. D defaults to m.depth().
CylinderMeasure restrict_normalize(const CylinderMeasure& m, const TreeModel& T, std::optional<unsigned> D = {});

/// Σ m(σ) over the depth-N nodes σ of T.
Rational tree_mass(const CylinderMeasure& m, const TreeModel& T, unsigned N);

struct MaxMass {
  Rational value;
  BitString at;  // lexicographically first string attaining the maximum
};

/// max over |σ| = N of m(σ).
MaxMass max_cylinder_mass(const CylinderMeasure& m, unsigned N);

/// Level maxima for n = 0..N.
std::vector<MaxMass> level_max_masses(const CylinderMeasure& m, unsigned N);

/// Equal split among the children of T that reach depth N, uniform below N.
CylinderMeasure natural_measure(const TreeModel& T, unsigned N);

}  // namespace cantor
