#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cantor/bitstring.hpp"
#include "cantor/numeric.hpp"
#include "cantor/premeasure.hpp"

namespace cantor {

/// Levels W_1..W_L of a finite-stage test. Order inside a level is the
/// enumeration order and is kept.
struct TestObject {
  std::vector<std::vector<BitString>> levels;

  std::size_t size() const { return levels.size(); }
  /// W_n, 1-based.
  const std::vector<BitString>& level(unsigned n) const { return levels.at(n - 1); }
  unsigned max_length() const;
};

struct LevelVerdict {
  unsigned level = 0;
  Tri pass = Tri::Undecided;
  Value weight{0};
  Rational bound;                  // 2^(-n)
  std::vector<BitString> witness;  // strong: maximising antichain; vehement: optimal cover
  bool witness_truncated = false;
  unsigned bits = 0;               // precision that decided the level
};

struct TestVerdict {
  std::string notion;
  bool pass = false;  // every level decided and passing
  std::vector<LevelVerdict> levels;
  std::optional<unsigned> horizon;  // cover depth, vehement only
  std::string reason;               // first failure, solovay only
};

/// Weight of a single string at a given interval precision.
using WeightFn = std::function<Value(const BitString&, unsigned)>;

WeightFn weight_of(const Premeasure& rho);
/// 2^(-s|σ|) for any s ≥ 0.
WeightFn power_weight(const Rational& s);

/// Σ_{σ∈W_n} ρ(σ) ≤ 2^(-n) per level.
TestVerdict check_ml(const TestObject& W, const Premeasure& rho, Precision prec = {});
TestVerdict check_ml(const TestObject& W, const WeightFn& rho, Precision prec = {});

/// Nested levels, nonempty differences W_n \ W_{n+1} for n < L, and Σ_{W_1} ρ ≤ 1.
TestVerdict check_solovay(const TestObject& W, const Premeasure& rho, Precision prec = {});

/// Largest prefix-free subset weight of W_n against 2^(-n), by trie DP.
TestVerdict check_strong(const TestObject& W, const Premeasure& rho, Precision prec = {});
TestVerdict check_strong(const TestObject& W, const WeightFn& rho, Precision prec = {});

/// Cheapest cover of open(W_n) by strings of length ≤ N, against 2^(-n).
TestVerdict check_vehement(const TestObject& W, const Premeasure& rho, unsigned N, Precision prec = {},
                           std::size_t cover_cap = 1u << 16);

/// Prefix-free set with the same open set as the listed strings, built in
/// list order: skip a string below one already kept, keep it if nothing kept
/// lies below it, else keep its kept descendants and add the
/// lexicographically least strings completing its cylinder.
/// Output in lexicographic order.
std::vector<BitString> prefix_free_generators(const std::vector<BitString>& listed);

/// open(A) ⊆ open(B).
bool open_subset(const std::vector<BitString>& A, const std::vector<BitString>& B);
bool same_open_set(const std::vector<BitString>& A, const std::vector<BitString>& B);

struct LengthSum {
  unsigned length;
  Value sum;    // Σ 2^(-tj) over the strings of length j in W_n
  Value bound;  // 2^(-n)·2^(-(t-s)j)
};

struct ConversionLevel {
  unsigned output_level;  // m
  unsigned input_level;   // n = m + shift
  std::vector<LengthSum> by_length;
  Value total;
  Value bound;  // 2^(-n)/(1 - 2^(-(t-s)))
  Tri within = Tri::Undecided;
};

struct ConversionResult {
  TestObject output;
  unsigned shift = 0;
  Value factor{0};
  std::vector<ConversionLevel> certificate;
  TestVerdict ml;
  bool open_sets_equal = true;
};

/// Strong test for 2^(-sn) to ML test for 2^(-tn): V_m = W_{m+k} where
/// 2^(-k) ≤ 1 - 2^(-(t-s)) with k least.
ConversionResult convert_strong_to_ml(const TestObject& W, const Rational& s, const Rational& t,
                                      Precision prec = {});

/// Smallest k with 2^(-k) ≤ 1 - 2^(-(t-s)).
unsigned conversion_shift(const Rational& s, const Rational& t, Precision prec = {});

/// Vehement test for a probability measure to an ML test: U_n are the
/// prefix-free generators of W_n.
ConversionResult vehement_to_ml_probability(const TestObject& W, const Premeasure& rho, unsigned N,
                                            Precision prec = {});

}  // namespace cantor
