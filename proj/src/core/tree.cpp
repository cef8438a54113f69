#include "cantor/tree.hpp"

#include <algorithm>
#include <map>

#include "cantor/numeric.hpp"

namespace cantor {

void Automaton::validate() const {
  if (next.empty()) throw DomainError("automaton has no states");
  if (accept.size() != next.size()) throw DomainError("automaton accept vector has wrong size");
  auto ok = [&](int q) { return q >= -1 && q < static_cast<int>(next.size()); };
  if (start < 0 || start >= static_cast<int>(next.size())) throw DomainError("automaton start state out of range");
  for (const auto& t : next)
    if (!ok(t[0]) || !ok(t[1])) throw DomainError("automaton transition out of range");
}

ExpandedTree::ExpandedTree(std::vector<std::vector<BitString>> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) levels_.emplace_back();
  for (auto& l : levels_) std::sort(l.begin(), l.end());
}

bool ExpandedTree::contains(const BitString& s) const {
  unsigned d = s.length();
  if (d >= levels_.size()) return false;
  return std::binary_search(levels_[d].begin(), levels_[d].end(), s);
}

std::size_t ExpandedTree::size() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.size();
  return n;
}

std::vector<BitString> ExpandedTree::nodes() const {
  std::vector<BitString> out;
  out.reserve(size());
  for (const auto& l : levels_) out.insert(out.end(), l.begin(), l.end());
  return out;
}

std::size_t LayeredTree::size() const {
  std::size_t n = 0;
  for (const auto& l : child) n += l.size();
  return n;
}

TreeModel TreeModel::explicit_nodes(std::vector<BitString> nodes, std::optional<unsigned> max_depth) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (const auto& s : nodes) {
    if (!s.empty() && !std::binary_search(nodes.begin(), nodes.end(), s.parent()))
      throw DomainError("explicit tree is not prefix-closed: parent of '" + s.str() + "' missing");
  }
  TreeModel t;
  t.gen_ = std::move(nodes);
  t.max_depth_ = max_depth;
  return t;
}

TreeModel TreeModel::automaton(Automaton a, std::optional<unsigned> max_depth) {
  a.validate();
  TreeModel t;
  t.gen_ = std::move(a);
  t.max_depth_ = max_depth;
  return t;
}

TreeModel TreeModel::full() { return automaton({0, {{0, 0}}, {true}}); }

TreeModel TreeModel::every_other() { return periodic_branching(2); }

TreeModel TreeModel::single_path() { return automaton({0, {{0, -1}}, {true}}); }

TreeModel TreeModel::periodic_branching(unsigned period) {
  if (period == 0) throw DomainError("periodic_branching: period must be positive");
  Automaton a;
  a.start = 0;
  for (unsigned q = 0; q < period; ++q) {
    int nxt = static_cast<int>((q + 1) % period);
    a.next.push_back(q == 0 ? std::array<int, 2>{nxt, nxt} : std::array<int, 2>{nxt, -1});
    a.accept.push_back(true);
  }
  return automaton(std::move(a));
}

bool TreeModel::is_empty() const {
  if (auto* list = std::get_if<std::vector<BitString>>(&gen_)) return list->empty();
  const auto& a = std::get<Automaton>(gen_);
  return !a.accept[a.start];
}

bool TreeModel::contains(const BitString& s) const {
  if (auto* list = std::get_if<std::vector<BitString>>(&gen_))
    return std::binary_search(list->begin(), list->end(), s);
  const auto& a = std::get<Automaton>(gen_);
  int q = a.start;
  if (!a.accept[q]) return false;
  for (unsigned i = 0; i < s.length(); ++i) {
    q = a.next[q][s.bit(i)];
    if (q < 0 || !a.accept[q]) return false;
  }
  return true;
}

ExpandedTree TreeModel::expand(unsigned N) const {
  if (is_empty()) throw DomainError("empty tree: the generator accepts no root node");
  if (N > BitString::kMaxLength) throw DomainError("expansion depth exceeds the maximum string length");
  std::vector<std::vector<BitString>> levels(N + 1);
  if (auto* list = std::get_if<std::vector<BitString>>(&gen_)) {
    for (const auto& s : *list)
      if (s.length() <= N) levels[s.length()].push_back(s);
    return ExpandedTree(std::move(levels));
  }
  const auto& a = std::get<Automaton>(gen_);
  std::vector<std::pair<BitString, int>> frontier{{BitString(), a.start}};
  for (unsigned d = 0; d <= N; ++d) {
    std::vector<std::pair<BitString, int>> next;
    for (const auto& [s, q] : frontier) {
      levels[d].push_back(s);
      if (d == N) continue;
      for (int b = 0; b < 2; ++b) {
        int r = a.next[q][b];
        if (r >= 0 && a.accept[r]) next.emplace_back(s.child(b), r);
      }
    }
    frontier = std::move(next);
  }
  return ExpandedTree(std::move(levels));
}

ExpandedTree tree_expand(const TreeModel& T, unsigned N) { return T.expand(N); }

LayeredTree layered_from(const ExpandedTree& t) {
  LayeredTree L;
  L.depth = t.depth();
  L.compressed = false;
  L.child.resize(L.depth + 1);
  L.label = t.levels();
  for (unsigned d = 0; d <= L.depth; ++d) {
    const auto& cur = L.label[d];
    L.child[d].assign(cur.size(), {-1, -1});
    if (d == L.depth) continue;
    const auto& nxt = L.label[d + 1];
    // Children of sorted parents appear in the same order at the next level.
    std::size_t j = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (int b = 0; b < 2; ++b) {
        BitString c = cur[i].child(b);
        while (j < nxt.size() && nxt[j] < c) ++j;
        if (j < nxt.size() && nxt[j] == c) L.child[d][i][b] = static_cast<std::int32_t>(j);
      }
    }
  }
  return L;
}

LayeredTree TreeModel::layered(unsigned N, bool allow_compression) const {
  if (!(allow_compression && is_automaton())) return layered_from(expand(N));
  if (is_empty()) throw DomainError("empty tree: the generator accepts no root node");
  const auto& a = std::get<Automaton>(gen_);
  LayeredTree L;
  L.depth = N;
  L.compressed = true;
  L.child.resize(N + 1);
  L.state.resize(N + 1);
  L.state[0] = {a.start};
  for (unsigned d = 0; d <= N; ++d) {
    L.child[d].assign(L.state[d].size(), {-1, -1});
    if (d == N) break;
    std::map<int, std::int32_t> index;
    for (std::size_t i = 0; i < L.state[d].size(); ++i) {
      for (int b = 0; b < 2; ++b) {
        int r = a.next[L.state[d][i]][b];
        if (r < 0 || !a.accept[r]) continue;
        auto [it, inserted] = index.emplace(r, static_cast<std::int32_t>(L.state[d + 1].size()));
        if (inserted) L.state[d + 1].push_back(r);
        L.child[d][i][b] = it->second;
      }
    }
  }
  return L;
}

}  // namespace cantor
