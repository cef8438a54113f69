#include "cantor/measures.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace cantor {

namespace {

using Tail = CylinderMeasure::TailClass;

Rational abs_diff(const Rational& a, const Rational& b) { return a > b ? Rational(a - b) : Rational(b - a); }

}  // namespace

DmeasResult dmeas_distance(const CylinderMeasure& a, const CylinderMeasure& b, unsigned K) {
  using Key = std::tuple<int, int, Rational, Rational>;
  const bool same = a.same_structure(b);
  auto frozen = [&](const Key& k) {
    const auto& [qa, qb, ma, mb] = k;
    if (sgn(ma) == 0 || sgn(mb) == 0) return true;
    if (same && qa == qb) return true;
    Tail ta = a.tail_class(qa);
    return ta != Tail::None && ta == b.tail_class(qb);
  };

  std::map<Key, Integer> level{{Key{a.start(), b.start(), Rational(1), Rational(1)}, Integer(1)}};
  Rational sum(0), frozen_half_diff(0);
  for (unsigned n = 0;; ++n) {
    if (n > 0) {
      std::map<Key, Integer> next;
      for (const auto& [k, cnt] : level) {
        const auto& [qa, qb, ma, mb] = k;
        for (int bit = 0; bit < 2; ++bit) {
          Rational ca(0), cb(0);
          int na = -1, nb = -1;
          if (qa >= 0 && sgn(a.states()[qa].w[bit]) > 0) ca = ma * a.states()[qa].w[bit], na = a.states()[qa].next[bit];
          if (qb >= 0 && sgn(b.states()[qb].w[bit]) > 0) cb = mb * b.states()[qb].w[bit], nb = b.states()[qb].next[bit];
          if (sgn(ca) == 0 && sgn(cb) == 0) continue;
          next[Key{na, nb, ca, cb}] += cnt;
        }
      }
      level = std::move(next);
    }
    std::map<Key, Integer> open;
    Rational open_half_diff(0);
    for (const auto& [k, cnt] : level) {
      Rational hd = abs_diff(std::get<2>(k), std::get<3>(k)) * Rational(cnt) / 2;
      if (frozen(k)) {
        frozen_half_diff += hd;
      } else {
        open_half_diff += hd;
        open.emplace(k, cnt);
      }
    }
    if (n > 0) sum += (frozen_half_diff + open_half_diff) * pow2_exact(-static_cast<long>(n));
    level = std::move(open);
    Rational rest = frozen_half_diff * pow2_exact(-static_cast<long>(n));
    if (level.empty()) return {sum + rest, Rational(0), true, n};
    if (n == K) {
      Rational open_half_mass(0);
      for (const auto& [k, cnt] : level) open_half_mass += (std::get<2>(k) + std::get<3>(k)) * Rational(cnt) / 2;
      return {sum + rest, open_half_mass * pow2_exact(-static_cast<long>(K)), false, K};
    }
  }
}

DyadicMeasure cauchy_approximate(const CylinderMeasure& m, unsigned n) {
  if (n > 24) throw DomainError("cauchy_approximate: depth too large to enumerate");
  DyadicMeasure nu;
  std::vector<std::tuple<BitString, Rational, int>> stack{{BitString(), Rational(1), m.start()}};
  // Depth-first with the 1-child pushed first yields lexicographic order.
  while (!stack.empty()) {
    auto [s, mass, q] = stack.back();
    stack.pop_back();
    if (s.length() == n) {
      nu.support.push_back(s);
      nu.weights.push_back(mass);
      continue;
    }
    const auto& st = m.states()[q];
    for (int b = 1; b >= 0; --b)
      if (sgn(st.w[b]) > 0) stack.emplace_back(s.child(b), Rational(mass * st.w[b]), st.next[b]);
  }
  return nu;
}

bool rational_rep_query(const Premeasure& rho, const BitString& s, const Rational& q1, const Rational& q2,
                        Precision prec) {
  if (!(q1 < q2)) throw DomainError("rational representation query needs q1 < q2");
  return escalate(
      prec,
      [&](unsigned bits) -> std::optional<bool> {
        Value v = rho.eval(s, bits);
        Tri lo = less(Value(q1), v);
        Tri hi = less(v, Value(q2));
        if (lo == Tri::False || hi == Tri::False) return false;
        if (lo == Tri::Undecided || hi == Tri::Undecided) return std::nullopt;
        return true;
      },
      "rational_rep_query");
}

namespace {

// Pairs (tree node, measure state) per level, with child links; the common
// skeleton of restriction and tree mass.
struct Product {
  std::vector<std::vector<std::pair<int, int>>> keys;  // (node, state)
  std::vector<std::vector<std::array<int, 2>>> child;  // index into next level, -1 none
  std::vector<std::vector<Rational>> r;                // conditional restricted mass
};

Product product(const CylinderMeasure& m, const LayeredTree& L) {
  const unsigned D = L.depth;
  Product P;
  P.keys.resize(D + 1);
  P.child.resize(D + 1);
  P.r.resize(D + 1);
  P.keys[0].emplace_back(0, m.start());
  for (unsigned d = 0; d < D; ++d) {
    std::map<std::pair<int, int>, int> index;
    P.child[d].assign(P.keys[d].size(), {-1, -1});
    for (std::size_t i = 0; i < P.keys[d].size(); ++i) {
      auto [node, q] = P.keys[d][i];
      const auto& st = m.states()[q];
      for (int b = 0; b < 2; ++b) {
        int c = L.child[d][node][b];
        if (c < 0 || sgn(st.w[b]) == 0) continue;
        auto key = std::make_pair(c, st.next[b]);
        auto [it, fresh] = index.emplace(key, static_cast<int>(P.keys[d + 1].size()));
        if (fresh) P.keys[d + 1].push_back(key);
        P.child[d][i][b] = it->second;
      }
    }
  }
  P.child[D].assign(P.keys[D].size(), {-1, -1});
  P.r[D].assign(P.keys[D].size(), Rational(1));
  for (unsigned d = D; d-- > 0;) {
    P.r[d].assign(P.keys[d].size(), Rational(0));
    for (std::size_t i = 0; i < P.keys[d].size(); ++i) {
      const auto& st = m.states()[P.keys[d][i].second];
      for (int b = 0; b < 2; ++b)
        if (P.child[d][i][b] >= 0) P.r[d][i] += st.w[b] * P.r[d + 1][P.child[d][i][b]];
    }
  }
  return P;
}

}  // namespace

Rational tree_mass(const CylinderMeasure& m, const TreeModel& T, unsigned N) {
  if (T.is_empty()) return Rational(0);
  Product P = product(m, T.layered(N, true));
  return P.r[0][0];
}

CylinderMeasure restrict_normalize(const CylinderMeasure& m, const TreeModel& T, std::optional<unsigned> depth) {
  unsigned D = depth.value_or(m.depth());
  if (D == kUnbounded) throw DomainError("restrict_normalize: the measure has no finite depth; give one");
  if (T.is_empty()) throw DomainError("measure gives no mass to closed set approximation (empty tree)");
  Product P = product(m, T.layered(D, true));
  if (sgn(P.r[0][0]) == 0) throw DomainError("measure gives no mass to closed set approximation");

  // States: positive keys above depth D, then a copy of m's states.
  std::vector<std::vector<int>> id(D + 1);
  int count = 0;
  for (unsigned d = 0; d < D; ++d) {
    id[d].assign(P.keys[d].size(), -1);
    for (std::size_t i = 0; i < P.keys[d].size(); ++i)
      if (sgn(P.r[d][i]) > 0) id[d][i] = count++;
  }
  const int offset = count;
  std::vector<SplitState> states(static_cast<std::size_t>(offset) + m.states().size());
  for (std::size_t q = 0; q < m.states().size(); ++q) {
    SplitState st = m.states()[q];
    for (int b = 0; b < 2; ++b)
      if (st.next[b] >= 0) st.next[b] += offset;
    states[offset + q] = st;
  }
  for (unsigned d = 0; d < D; ++d) {
    for (std::size_t i = 0; i < P.keys[d].size(); ++i) {
      if (id[d][i] < 0) continue;
      const auto& src = m.states()[P.keys[d][i].second];
      SplitState& st = states[id[d][i]];
      for (int b = 0; b < 2; ++b) {
        int c = P.child[d][i][b];
        if (c < 0 || sgn(P.r[d + 1][c]) == 0) continue;
        st.w[b] = src.w[b] * P.r[d + 1][c] / P.r[d][i];
        st.next[b] = d + 1 == D ? offset + P.keys[D][c].second : id[d + 1][c];
      }
    }
  }
  int start = D == 0 ? offset + m.start() : id[0][0];
  return CylinderMeasure::from_states(std::move(states), start, D, "restricted");
}

std::vector<MaxMass> level_max_masses(const CylinderMeasure& m, unsigned N) {
  std::vector<MaxMass> out;
  std::map<int, MaxMass> level{{m.start(), {Rational(1), BitString()}}};
  for (unsigned n = 0;; ++n) {
    MaxMass best{Rational(0), BitString::zeros(n)};
    bool first = true;
    for (const auto& [q, mm] : level) {
      if (first || mm.value > best.value || (mm.value == best.value && mm.at < best.at)) best = mm;
      first = false;
    }
    out.push_back(best);
    if (n == N) break;
    std::map<int, MaxMass> next;
    for (const auto& [q, mm] : level) {
      const auto& st = m.states()[q];
      for (int b = 0; b < 2; ++b) {
        if (sgn(st.w[b]) == 0) continue;
        MaxMass c{Rational(mm.value * st.w[b]), mm.at.child(b)};
        auto it = next.find(st.next[b]);
        if (it == next.end()) {
          next.emplace(st.next[b], c);
        } else if (c.value > it->second.value || (c.value == it->second.value && c.at < it->second.at)) {
          it->second = c;
        }
      }
    }
    level = std::move(next);
  }
  return out;
}

MaxMass max_cylinder_mass(const CylinderMeasure& m, unsigned N) { return level_max_masses(m, N).back(); }

CylinderMeasure natural_measure(const TreeModel& T, unsigned N) {
  LayeredTree L = T.layered(N, true);
  std::vector<std::vector<char>> alive(N + 1);
  alive[N].assign(L.level_size(N), 1);
  for (unsigned d = N; d-- > 0;) {
    alive[d].assign(L.level_size(d), 0);
    for (std::size_t i = 0; i < L.level_size(d); ++i)
      for (int b = 0; b < 2; ++b)
        if (L.child[d][i][b] >= 0 && alive[d + 1][L.child[d][i][b]]) alive[d][i] = 1;
  }
  if (!alive[0][0]) throw DomainError("natural_measure: the tree has no node at depth " + std::to_string(N));
  std::vector<std::vector<int>> id(N + 1);
  int count = 0;
  for (unsigned d = 0; d < N; ++d) {
    id[d].assign(L.level_size(d), -1);
    for (std::size_t i = 0; i < L.level_size(d); ++i)
      if (alive[d][i]) id[d][i] = count++;
  }
  const int uniform = count;
  std::vector<SplitState> states(static_cast<std::size_t>(count) + 1);
  states[uniform] = SplitState{{uniform, uniform}, {Rational(1, 2), Rational(1, 2)}};
  for (unsigned d = 0; d < N; ++d) {
    for (std::size_t i = 0; i < L.level_size(d); ++i) {
      if (id[d][i] < 0) continue;
      std::array<bool, 2> ok{};
      for (int b = 0; b < 2; ++b) ok[b] = L.child[d][i][b] >= 0 && alive[d + 1][L.child[d][i][b]];
      Rational share = ok[0] && ok[1] ? Rational(1, 2) : Rational(1);
      for (int b = 0; b < 2; ++b) {
        if (!ok[b]) continue;
        states[id[d][i]].w[b] = share;
        states[id[d][i]].next[b] = d + 1 == N ? uniform : id[d + 1][L.child[d][i][b]];
      }
    }
  }
  return CylinderMeasure::from_states(std::move(states), N == 0 ? uniform : id[0][0], N, "natural");
}

}  // namespace cantor
