#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cantor/bitstring.hpp"

namespace cantor {

/// Deterministic automaton over {0,1}. Missing transitions are -1. The tree it
/// generates is the set of strings whose run stays in accepting states at
/// every prefix, which is prefix-closed by construction.
struct Automaton {
  int start = 0;
  std::vector<std::array<int, 2>> next;
  std::vector<bool> accept;

  std::size_t states() const { return next.size(); }
  void validate() const;
};

/// Prefix-closed node set truncated at a depth, one sorted level per length.
class ExpandedTree {
 public:
  ExpandedTree() = default;
  explicit ExpandedTree(std::vector<std::vector<BitString>> levels);

  unsigned depth() const { return static_cast<unsigned>(levels_.size()) - 1; }
  const std::vector<BitString>& level(unsigned d) const { return levels_.at(d); }
  const std::vector<std::vector<BitString>>& levels() const { return levels_; }
  bool contains(const BitString& s) const;
  std::size_t size() const;
  /// All nodes in shortlex order.
  std::vector<BitString> nodes() const;

  friend bool operator==(const ExpandedTree&, const ExpandedTree&) = default;

 private:
  std::vector<std::vector<BitString>> levels_;
};

/// Level-indexed tree with integer child links; the shape every tree DP in
/// the library consumes. When `compressed`, a node stands for all strings
/// whose run ends in the same automaton state at that depth (valid only for
/// weights that depend on the depth alone); otherwise nodes are strings.
struct LayeredTree {
  unsigned depth = 0;
  bool compressed = false;
  std::vector<std::vector<std::array<std::int32_t, 2>>> child;
  std::vector<std::vector<BitString>> label;   // explicit trees only
  std::vector<std::vector<int>> state;         // compressed trees only

  std::size_t level_size(unsigned d) const { return child[d].size(); }
  std::size_t size() const;
  bool empty() const { return child.empty() || child[0].empty(); }
};

/// A closed subset of Cantor space given by a (generator of a) tree.
class TreeModel {
 public:
  /// Explicit node list; duplicates are removed and prefix-closure is checked.
  static TreeModel explicit_nodes(std::vector<BitString> nodes, std::optional<unsigned> max_depth = {});
  static TreeModel automaton(Automaton a, std::optional<unsigned> max_depth = {});

  static TreeModel full();
  /// Branches at even depths, forced 0 at odd depths.
  static TreeModel every_other();
  /// The single path 000...
  static TreeModel single_path();
  /// Branches at depths that are multiples of `period`, forced 0 elsewhere.
  static TreeModel periodic_branching(unsigned period);

  bool is_automaton() const { return std::holds_alternative<Automaton>(gen_); }
  const Automaton& automaton_generator() const { return std::get<Automaton>(gen_); }
  const std::vector<BitString>& explicit_list() const { return std::get<std::vector<BitString>>(gen_); }
  std::optional<unsigned> max_depth_hint() const { return max_depth_; }

  bool is_empty() const;
  bool contains(const BitString& s) const;

  /// The explicit node set up to depth N. Throws DomainError for an empty tree.
  ExpandedTree expand(unsigned N) const;

  /// Level-indexed form to depth N; compressed when the generator is an
  /// automaton and `allow_compression` is set.
  LayeredTree layered(unsigned N, bool allow_compression) const;

 private:
  std::variant<std::vector<BitString>, Automaton> gen_;
  std::optional<unsigned> max_depth_;
};

/// tree_expand: explicit prefix-closed node set of T to depth N.
ExpandedTree tree_expand(const TreeModel& T, unsigned N);

/// Builds the explicit layered form of an expanded tree.
LayeredTree layered_from(const ExpandedTree& t);

}  // namespace cantor
