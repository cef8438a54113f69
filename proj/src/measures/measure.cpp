#include "cantor/measure.hpp"

#include <algorithm>
#include <set>

namespace cantor {

namespace {

const Rational kHalf(1, 2);

}  // namespace

CylinderMeasure::CylinderMeasure()
    : states_{SplitState{{0, 0}, {kHalf, kHalf}}}, start_(0), depth_(kUnbounded), name_("lebesgue") {
  analyse();
}

CylinderMeasure CylinderMeasure::from_states(std::vector<SplitState> states, int start, unsigned depth,
                                             std::string name) {
  int n = static_cast<int>(states.size());
  if (start < 0 || start >= n) throw DomainError("measure start state out of range");
  for (auto& st : states) {
    for (int b = 0; b < 2; ++b) {
      st.w[b].canonicalize();
      if (sgn(st.w[b]) < 0) throw DomainError("measure split weight is negative");
      if (sgn(st.w[b]) == 0) {
        st.next[b] = -1;
      } else if (st.next[b] < 0 || st.next[b] >= n) {
        throw DomainError("measure split with positive weight has no continuation state");
      }
    }
    if (st.w[0] + st.w[1] != 1) throw DomainError("measure split weights do not sum to 1");
  }
  CylinderMeasure m;
  m.states_ = std::move(states);
  m.start_ = start;
  m.depth_ = depth;
  m.name_ = std::move(name);
  m.bound_.reset();
  m.analyse();
  return m;
}

void CylinderMeasure::analyse() {
  std::size_t n = states_.size();
  tail_.assign(n, TailClass::None);
  atom_.assign(n, false);
  preds_.assign(n, {});
  for (std::size_t q = 0; q < n; ++q)
    for (int b = 0; b < 2; ++b)
      if (states_[q].next[b] >= 0) preds_[states_[q].next[b]].emplace_back(static_cast<int>(q), b);

  // Greatest fixpoints: a state is uniform when it splits evenly and both
  // children are uniform; point-b when all mass goes to b and the b-child is point-b.
  auto fixpoint = [&](auto local, auto succ_ok) {
    std::vector<bool> in(n);
    for (std::size_t q = 0; q < n; ++q) in[q] = local(states_[q]);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t q = 0; q < n; ++q)
        if (in[q] && !succ_ok(states_[q], in)) in[q] = false, changed = true;
    }
    return in;
  };
  auto uni = fixpoint([](const SplitState& s) { return s.w[0] == kHalf; },
                      [](const SplitState& s, const std::vector<bool>& in) { return in[s.next[0]] && in[s.next[1]]; });
  for (int b = 0; b < 2; ++b) {
    auto pt = fixpoint([b](const SplitState& s) { return s.w[b] == 1; },
                       [b](const SplitState& s, const std::vector<bool>& in) { return bool(in[s.next[b]]); });
    for (std::size_t q = 0; q < n; ++q)
      if (pt[q]) tail_[q] = b == 0 ? TailClass::Point0 : TailClass::Point1;
  }
  for (std::size_t q = 0; q < n; ++q)
    if (uni[q]) tail_[q] = TailClass::Uniform;

  // Atoms: states from which a path of weight-1 edges reaches a cycle of
  // weight-1 edges. Those are exactly the states surviving the fixpoint
  // "has a weight-1 edge into the set".
  auto heavy = fixpoint([](const SplitState& s) { return s.w[0] == 1 || s.w[1] == 1; },
                        [](const SplitState& s, const std::vector<bool>& in) {
                          return (s.w[0] == 1 && in[s.next[0]]) || (s.w[1] == 1 && in[s.next[1]]);
                        });
  for (std::size_t q = 0; q < n; ++q) atom_[q] = heavy[q];
}

CylinderMeasure CylinderMeasure::lebesgue() {
  return CylinderMeasure();
}

CylinderMeasure CylinderMeasure::dirac(int bit) {
  SplitState s;
  s.w[bit & 1] = 1;
  s.next[bit & 1] = 0;
  return from_states({s}, 0, kUnbounded, bit ? "dirac1" : "dirac0");
}

CylinderMeasure CylinderMeasure::natural_every_other() {
  SplitState even{{1, 1}, {kHalf, kHalf}};
  SplitState odd{{0, -1}, {Rational(1), Rational(0)}};
  return from_states({even, odd}, 0, kUnbounded, "natural-every-other");
}

CylinderMeasure CylinderMeasure::bernoulli(const Rational& p0) {
  if (sgn(p0) < 0 || p0 > 1) throw DomainError("bernoulli parameter outside [0,1]");
  SplitState s{{0, 0}, {p0, Rational(1 - p0)}};
  return from_states({s}, 0, kUnbounded, "bernoulli(" + to_string(p0) + ")");
}

CylinderMeasure CylinderMeasure::with_bound(MassBound b) const {
  CylinderMeasure m = *this;
  m.bound_ = std::move(b);
  return m;
}

CylinderMeasure CylinderMeasure::with_name(std::string n) const {
  CylinderMeasure m = *this;
  m.name_ = std::move(n);
  return m;
}

CylinderMeasure CylinderMeasure::with_depth(unsigned d) const {
  CylinderMeasure m = *this;
  m.depth_ = d;
  return m;
}

std::pair<Rational, int> CylinderMeasure::walk(const BitString& s) const {
  Rational m(1);
  int q = start_;
  for (unsigned i = 0; i < s.length(); ++i) {
    int b = s.bit(i);
    const auto& st = states_[q];
    if (sgn(st.w[b]) == 0) return {Rational(0), -1};
    m *= st.w[b];
    q = st.next[b];
  }
  return {m, q};
}

Rational CylinderMeasure::mass(const BitString& s) const { return walk(s).first; }

MassTable complete_table(MassTable t) {
  if (!t.mass.count(BitString())) t.mass[BitString()] = Rational(1);
  for (unsigned d = 1; d <= t.depth; ++d) {
    for (const auto& s : strings_of_length(d)) {
      if (t.mass.count(s)) continue;
      auto parent = t.mass.find(s.parent());
      if (parent == t.mass.end()) continue;
      auto sib = t.mass.find(s.sibling());
      t.mass[s] = sib != t.mass.end() ? Rational(parent->second - sib->second) : Rational(parent->second / 2);
    }
  }
  return t;
}

std::optional<Violation> validate_probability(const MassTable& t) {
  auto get = [&](const BitString& s) -> const Rational* {
    auto it = t.mass.find(s);
    return it == t.mass.end() ? nullptr : &it->second;
  };
  for (const auto& [s, v] : t.mass) {
    if (s.length() > t.depth) return Violation{s, "node deeper than the table depth"};
    if (sgn(v) < 0) return Violation{s, "negative mass"};
  }
  const Rational* root = get(BitString());
  if (!root) return Violation{BitString(), "root mass missing"};
  if (*root != 1) return Violation{BitString(), "root mass is " + to_string(*root) + ", not 1"};
  // Map order is shortlex, so the first failure is the shallowest one.
  for (const auto& [s, mv] : t.mass) {
    if (s.length() >= t.depth) continue;
    {
      const Rational* m = &mv;
      const Rational* a = get(s.child(0));
      const Rational* b = get(s.child(1));
      if (!a || !b) return Violation{s, "child mass missing"};
      if (*a + *b != *m)
        return Violation{s, "additivity: " + to_string(*a) + " + " + to_string(*b) + " != " + to_string(*m)};
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate_probability(const CylinderMeasure& m) {
  for (std::size_t q = 0; q < m.states().size(); ++q) {
    const auto& st = m.states()[q];
    if (sgn(st.w[0]) < 0 || sgn(st.w[1]) < 0) return Violation{BitString(), "negative split weight"};
    if (st.w[0] + st.w[1] != 1) return Violation{BitString(), "split weights do not sum to 1"};
  }
  return std::nullopt;
}

CylinderMeasure measure_from_table(const MassTable& t) {
  if (auto v = validate_probability(t))
    throw DomainError("invalid mass table at '" + v->at.str() + "': " + v->clause);
  if (t.depth > 24) throw DomainError("mass table too deep");
  // One state per positive-mass node above the table depth, then a shared
  // uniform state.
  std::vector<SplitState> states;
  std::map<BitString, int> index;
  for (const auto& [s, v] : t.mass)
    if (s.length() < t.depth && sgn(v) > 0) index.emplace(s, static_cast<int>(index.size()));
  int uniform = static_cast<int>(index.size());
  states.resize(index.size() + 1);
  states[uniform] = SplitState{{uniform, uniform}, {kHalf, kHalf}};
  for (const auto& [s, q] : index) {
    const Rational& m = t.mass.at(s);
    for (int b = 0; b < 2; ++b) {
      BitString c = s.child(b);
      const Rational& mc = t.mass.at(c);
      states[q].w[b] = mc / m;
      if (sgn(mc) > 0) states[q].next[b] = c.length() == t.depth ? uniform : index.at(c);
    }
  }
  int start = t.depth == 0 ? uniform : index.at(BitString());
  return CylinderMeasure::from_states(std::move(states), start, t.depth, "table");
}

MassTable table_of(const CylinderMeasure& m, unsigned depth) {
  if (depth > 24) throw DomainError("table_of: depth too large to tabulate");
  MassTable t;
  t.depth = depth;
  std::vector<std::pair<BitString, std::pair<Rational, int>>> level{{BitString(), {Rational(1), m.start()}}};
  for (unsigned d = 0; d <= depth; ++d) {
    std::vector<std::pair<BitString, std::pair<Rational, int>>> next;
    for (const auto& [s, mq] : level) {
      t.mass[s] = mq.first;
      if (d == depth) continue;
      for (int b = 0; b < 2; ++b) {
        if (mq.second < 0) {
          next.push_back({s.child(b), {Rational(0), -1}});
          continue;
        }
        const auto& st = m.states()[mq.second];
        next.push_back({s.child(b), {Rational(mq.first * st.w[b]), st.next[b]}});
      }
    }
    level = std::move(next);
  }
  return t;
}

void DyadicMeasure::validate() const {
  if (support.empty()) throw DomainError("dyadic measure has empty support");
  if (support.size() != weights.size()) throw DomainError("dyadic measure: support and weights differ in size");
  std::set<BitString> seen;
  Rational total(0);
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!seen.insert(support[i]).second) throw DomainError("dyadic measure: repeated support string '" + support[i].str() + "'");
    if (sgn(weights[i]) <= 0) throw DomainError("dyadic measure: weights must be positive");
    total += weights[i];
  }
  if (total != 1) throw DomainError("dyadic measure: weights sum to " + to_string(total) + ", not 1");
}

CylinderMeasure DyadicMeasure::to_measure() const {
  validate();
  unsigned L = 0;
  for (const auto& s : support) L = std::max(L, s.length());
  // Pad every point to length L; masses accumulate on the trie of padded strings.
  std::map<BitString, Rational> mass;
  for (std::size_t i = 0; i < support.size(); ++i) {
    BitString p = support[i];
    while (p.length() < L) p = p.child(0);
    for (BitString q = p;; q = q.parent()) {
      mass[q] += weights[i];
      if (q.empty()) break;
    }
  }
  std::vector<SplitState> states;
  std::map<BitString, int> index;
  for (const auto& [s, v] : mass)
    if (s.length() < L) index.emplace(s, static_cast<int>(index.size()));
  int point = static_cast<int>(index.size());
  states.resize(index.size() + 1);
  states[point] = SplitState{{point, -1}, {Rational(1), Rational(0)}};
  for (const auto& [s, q] : index) {
    const Rational& m = mass.at(s);
    for (int b = 0; b < 2; ++b) {
      auto it = mass.find(s.child(b));
      if (it == mass.end()) continue;
      states[q].w[b] = it->second / m;
      states[q].next[b] = it->first.length() == L ? point : index.at(it->first);
    }
  }
  int start = L == 0 ? point : index.at(BitString());
  return CylinderMeasure::from_states(std::move(states), start, kUnbounded, "dyadic");
}

}  // namespace cantor
