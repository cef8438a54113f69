#include "cantor/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>

#include "cantor/measures.hpp"

namespace cantor {

std::string to_string(TailKind k) {
  switch (k) {
    case TailKind::Exact:
      return "exact";
    case TailKind::Bound:
      return "bound";
    case TailKind::Divergent:
      return "divergent";
    case TailKind::Unknown:
      return "unknown";
  }
  return {};
}

Rational EnergyReport::upper() const {
  if (!finite()) throw DomainError("energy has no finite upper bound (" + cantor::to_string(tail_kind) + ")");
  return value.hi() + tail.hi();
}

Rational EnergyReport::lower() const {
  return tail_kind == TailKind::Exact ? Rational(value.lo() + tail.lo()) : value.lo();
}

namespace {

// Σ_{r<k} 2^(tr) / (1 − 2^(tk)·c_k) for the best k ≤ 8, where c_k bounds the
// mass ratio of any k-step descent from the given states. nullopt when no k
// gives a contraction.
std::optional<Value> chain_factor(const CylinderMeasure& m, const std::vector<int>& from, const Rational& t,
                                  unsigned bits) {
  std::vector<int> closure;
  std::set<int> seen(from.begin(), from.end());
  std::deque<int> queue(from.begin(), from.end());
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    closure.push_back(q);
    for (int b = 0; b < 2; ++b) {
      int n = m.states()[q].next[b];
      if (n >= 0 && seen.insert(n).second) queue.push_back(n);
    }
  }
  const auto& st = m.states();
  std::vector<Rational> best(st.size(), Rational(1)), next(st.size());
  std::optional<Value> out;
  Value partial(0);
  for (unsigned k = 1; k <= 8; ++k) {
    partial += pow2(Rational(t * (k - 1)), bits);
    for (int q : closure) {
      Rational b(0);
      for (int c = 0; c < 2; ++c)
        if (st[q].next[c] >= 0) {
          Rational v = st[q].w[c] * best[st[q].next[c]];
          if (v > b) b = v;
        }
      next[q] = b;
    }
    for (int q : closure) best[q] = next[q];
    Rational ck(0);
    for (int q : closure)
      if (best[q] > ck) ck = best[q];
    Value ratio = pow2(Rational(t * k), bits) * Value(ck);
    if (ratio.hi() >= 1) continue;
    Value f = partial / (Value(1) - ratio);
    if (!out || f.hi() < out->hi()) out = f;
  }
  return out;
}

// Some state reachable through positive-weight edges carries an atom.
bool reaches_atom(const CylinderMeasure& m, const std::vector<int>& from) {
  std::set<int> seen(from.begin(), from.end());
  std::deque<int> queue(from.begin(), from.end());
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    if (m.atom_below(q)) return true;
    for (int b = 0; b < 2; ++b) {
      int n = m.states()[q].next[b];
      if (n >= 0 && sgn(m.states()[q].w[b]) > 0 && seen.insert(n).second) queue.push_back(n);
    }
  }
  return false;
}

// Σ_{k≥0} 2^((t−1)k) / 2 = 1 / (2(1 − 2^(t−1))), t < 1.
Value uniform_factor(const Rational& t, unsigned bits) {
  return Value(1) / (Value(2) * (Value(1) - pow2(Rational(t - 1), bits)));
}

}  // namespace

EnergyReport energy(const CylinderMeasure& m, const Rational& t, unsigned N, Precision prec, Exec exec) {
  if (sgn(t) < 0) throw DomainError("energy needs t >= 0");
  const unsigned bits = prec.bits;
  EnergyReport rep;
  rep.t = t;
  rep.depth = N;
  SplitProducts sp = split_products(m, N, exec);
  rep.level_coefficients = sp.Q;
  rep.value = Value(0);
  for (unsigned n = 0; n < N; ++n)
    if (sgn(sp.Q[n]) != 0) rep.value += pow2(Rational(t * n), bits) * Value(sp.Q[n]);

  Rational S(0);
  for (const auto& x : sp.squares) S += x;
  if (sgn(S) == 0) {
    rep.tail_kind = TailKind::Exact;
    rep.tail = Value(0);
    rep.tail_rule = "no mass below depth N";
    return rep;
  }
  if (sgn(t) > 0 && reaches_atom(m, sp.active)) {
    rep.tail_kind = TailKind::Divergent;
    rep.tail_rule = "atom: a cylinder keeps all its mass along an infinite path";
    return rep;
  }

  std::optional<Value> bound;
  std::string bound_rule;
  auto offer = [&](Value v, std::string rule) {
    if (!bound || v.hi() < bound->hi()) bound = std::move(v), bound_rule = std::move(rule);
  };
  const bool declared = m.bound() && t < m.bound()->s;
  if (declared) {
    const auto& b = *m.bound();
    Value r = pow2(Rational(t - b.s), bits);
    offer(Value(b.gamma) * pow2(Rational((t - b.s) * N), bits) / (Value(1) - r),
          "declared (s,gamma)-bound: gamma*2^((t-s)N)/(1-2^(t-s))");
  }
  // the squares only shrink further down
  if (sgn(t) == 0) offer(Value(S), "t = 0: tail at most the sum of squared depth-N masses");
  bool all_uniform = std::all_of(sp.active.begin(), sp.active.end(), [&](int q) {
    return m.tail_class(q) == CylinderMeasure::TailClass::Uniform;
  });
  if (all_uniform) {
    if (t >= 1) {
      rep.tail_kind = TailKind::Divergent;
      rep.tail_rule = "uniform continuation has infinite t-energy for t >= 1";
      return rep;
    }
    rep.tail_kind = TailKind::Exact;
    rep.tail = pow2(Rational(t * N), bits) * Value(S) * uniform_factor(t, bits);
    rep.tail_rule = "uniform continuation: 2^(tN)*S_N/(2(1-2^(t-1)))";
    return rep;
  }
  if (auto f = chain_factor(m, sp.active, t, bits))
    offer(pow2(Rational(t * N), bits) * Value(S / 2) * *f, "split-chain contraction below depth N");
  if (bound) {
    rep.tail_kind = TailKind::Bound;
    rep.tail = *bound;
    rep.tail_rule = bound_rule;
  } else {
    rep.tail_kind = TailKind::Unknown;
    rep.tail_rule = "no contraction found for the states below depth N";
  }
  return rep;
}

EnergyReport potential(const CylinderMeasure& m, const BitString& x, const Rational& t, unsigned N,
                       Precision prec) {
  if (sgn(t) < 0) throw DomainError("potential needs t >= 0");
  if (x.length() < N) throw DomainError("potential needs |x| >= N");
  const unsigned bits = prec.bits;
  EnergyReport rep;
  rep.t = t;
  rep.depth = N;
  rep.value = Value(0);
  Rational mass(1);
  int q = m.start();
  for (unsigned n = 0; n < N && q >= 0; ++n) {
    const auto& st = m.states()[q];
    int b = x.bit(n);
    Rational sib = mass * st.w[1 - b];
    rep.level_coefficients.push_back(sib);
    if (sgn(sib) != 0) rep.value += pow2(Rational(t * n), bits) * Value(sib);
    mass *= st.w[b];
    q = sgn(st.w[b]) == 0 ? -1 : st.next[b];
  }
  rep.level_coefficients.resize(N, Rational(0));
  if (q < 0 || sgn(mass) == 0) {
    rep.tail_kind = TailKind::Exact;
    rep.tail = Value(0);
    rep.tail_rule = "no mass below x at depth N";
    return rep;
  }
  if (m.tail_class(q) == CylinderMeasure::TailClass::Uniform) {
    if (t >= 1) {
      rep.tail_kind = TailKind::Divergent;
      rep.tail_rule = "uniform continuation has infinite t-potential for t >= 1";
      return rep;
    }
    rep.tail_kind = TailKind::Exact;
    rep.tail = pow2(Rational(t * N), bits) * Value(mass) * uniform_factor(t, bits);
    rep.tail_rule = "uniform continuation: m(x|N)*2^(tN)/(2(1-2^(t-1)))";
    return rep;
  }
  std::optional<Value> bound;
  if (m.bound() && t < m.bound()->s) {
    const auto& b = *m.bound();
    bound = Value(b.gamma) * pow2(Rational(-b.s + (t - b.s) * N), bits) / (Value(1) - pow2(Rational(t - b.s), bits));
    rep.tail_rule = "declared (s,gamma)-bound";
  }
  if (auto f = chain_factor(m, {q}, t, bits)) {
    Value v = pow2(Rational(t * N), bits) * Value(mass) * *f;
    if (!bound || v.hi() < bound->hi()) bound = v, rep.tail_rule = "split-chain contraction below depth N";
  }
  if (bound) {
    rep.tail_kind = TailKind::Bound;
    rep.tail = *bound;
  } else {
    rep.tail_kind = TailKind::Unknown;
    rep.tail_rule = "mass below x does not contract";
  }
  return rep;
}

CapacityResult capacity_lower(const TreeModel& T, const Rational& s, unsigned N, Precision prec) {
  if (sgn(s) <= 0) throw DomainError("capacity_lower needs s > 0");
  if (T.is_empty()) throw DomainError("capacity_lower: empty tree");
  CapacityResult r;
  Order h = Order::linear(s);
  FlowResult flow = maxflow_measure(T, h, Rational(1), N, prec);
  if (flow.measure) {
    r.candidate = "maxflow";
    r.measure = *flow.measure;
  } else if (s <= 1) {
    FrostmanResult lemma = build_measure_along_tree(T, Semimeasure::zero(), h, Rational(1), N, prec);
    r.candidate = "lemma";
    r.measure = restrict_normalize(lemma.measure, T, N);
    if (max_cylinder_mass(*r.measure, N).value == 1) {
      r.candidate = "atomic";
      r.lower = 0;
      return r;
    }
  } else {
    r.candidate = "none";
    r.lower = 0;
    return r;
  }
  r.energy = energy(*r.measure, s, N, prec);
  r.lower = r.energy->finite() ? Rational(1 / r.energy->upper()) : Rational(0);
  return r;
}

DimensionEstimate capdim_estimate(const TreeModel& T, unsigned N, const Rational& tol, Precision prec,
                                  const Rational& gamma, Exec exec) {
  if (N < 1) throw DomainError("capdim_estimate needs N >= 1");
  if (sgn(tol) <= 0 || tol >= 1) throw DomainError("capdim_estimate needs 0 < tol < 1");
  if (sgn(gamma) <= 0) throw DomainError("gamma must be positive");
  if (T.is_empty()) throw DomainError("capdim_estimate: empty tree");
  LayeredTree L = T.layered(N, true);
  DimensionEstimate est;
  auto probe = [&](const Rational& s) {
    return escalate(
        prec,
        [&](unsigned bits) -> std::optional<Probe> {
          std::vector<std::vector<Value>> w(N + 1);
          for (unsigned d = 0; d <= N; ++d)
            w[d].assign(L.level_size(d), Value(gamma) * pow2(Rational(-s * d), bits));
          CutTable t = mincut_levels(L, w, exec);
          if (t.undecided) return std::nullopt;
          Tri ok = greater_equal(t.best[0][0], Value(1));
          if (ok == Tri::Undecided) return std::nullopt;
          return Probe{s, ok == Tri::True, t.best[0][0]};
        },
        "capdim_estimate");
  };
  Rational lo(0), hi(1);
  Probe top = probe(hi);
  est.probes.push_back(top);
  if (top.above) {
    est.lo = est.hi = hi;
    return est;
  }
  Probe bottom = probe(lo);
  est.probes.push_back(bottom);
  if (!bottom.above) {
    est.lo = est.hi = lo;
    return est;
  }
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    Probe p = probe(mid);
    est.probes.push_back(p);
    if (p.above) lo = mid;
    else hi = mid;
  }
  est.lo = lo;
  est.hi = hi;
  return est;
}

namespace {

// The alive part of T to depth N (nodes with a depth-N descendant), with
// doubles for the optimiser.
struct LeafTree {
  unsigned N = 0;
  std::vector<std::vector<std::array<int, 2>>> child;
  std::vector<std::vector<BitString>> label;
};

LeafTree leaf_tree(const TreeModel& T, unsigned N) {
  if (N > 22) throw DomainError("minimize_energy: depth too large for the explicit optimiser");
  LayeredTree L = layered_from(T.expand(N));
  std::vector<std::vector<int>> id(N + 1);
  id[N].resize(L.level_size(N));
  for (std::size_t i = 0; i < id[N].size(); ++i) id[N][i] = static_cast<int>(i);
  for (unsigned d = N; d-- > 0;) {
    id[d].assign(L.level_size(d), -1);
    int k = 0;
    for (std::size_t i = 0; i < L.level_size(d); ++i)
      for (int b = 0; b < 2; ++b)
        if (L.child[d][i][b] >= 0 && id[d + 1][L.child[d][i][b]] >= 0 && id[d][i] < 0) id[d][i] = k++;
  }
  if (id[0].empty() || id[0][0] < 0)
    throw DomainError("minimize_energy: infeasible tree, no node at depth " + std::to_string(N));
  LeafTree lt;
  lt.N = N;
  lt.child.resize(N + 1);
  lt.label.resize(N + 1);
  for (unsigned d = 0; d <= N; ++d) {
    for (std::size_t i = 0; i < L.level_size(d); ++i) {
      if (id[d][i] < 0) continue;
      lt.label[d].push_back(L.label[d][i]);
      std::array<int, 2> c{-1, -1};
      if (d < N)
        for (int b = 0; b < 2; ++b)
          if (L.child[d][i][b] >= 0) c[b] = id[d + 1][L.child[d][i][b]];
      lt.child[d].push_back(c);
    }
  }
  return lt;
}

template <class Num>
std::vector<std::vector<Num>> subtree_sums(const LeafTree& lt, const std::vector<Num>& p) {
  std::vector<std::vector<Num>> P(lt.N + 1);
  P[lt.N] = p;
  for (unsigned d = lt.N; d-- > 0;) {
    P[d].assign(lt.child[d].size(), Num(0));
    for (std::size_t i = 0; i < lt.child[d].size(); ++i)
      for (int b = 0; b < 2; ++b)
        if (lt.child[d][i][b] >= 0) P[d][i] += P[d + 1][lt.child[d][i][b]];
  }
  return P;
}

}  // namespace

MinimizeResult minimize_energy(const TreeModel& T, const Rational& s, unsigned N, unsigned iters,
                               const Rational& tol) {
  if (sgn(s) < 0 || s >= 1) throw DomainError("minimize_energy needs 0 <= s < 1 (uniform continuation energy)");
  if (sgn(tol) < 0) throw DomainError("minimize_energy needs tol >= 0");
  if (T.is_empty()) throw DomainError("minimize_energy: infeasible tree (empty)");
  LeafTree lt = leaf_tree(T, N);
  const double t = s.get_d();
  const double tolerance = tol.get_d();
  const double diag = std::exp2(t * N) / (2.0 * (1.0 - std::exp2(t - 1.0)));
  std::vector<double> scale(N);
  for (unsigned d = 0; d < N; ++d) scale[d] = std::exp2(t * d);

  // Natural start: equal split among alive children.
  std::vector<std::vector<double>> mass(N + 1);
  mass[0] = {1.0};
  for (unsigned d = 0; d < N; ++d) {
    mass[d + 1].assign(lt.child[d + 1].size(), 0.0);
    for (std::size_t i = 0; i < lt.child[d].size(); ++i) {
      const auto& c = lt.child[d][i];
      int k = (c[0] >= 0) + (c[1] >= 0);
      for (int b = 0; b < 2; ++b)
        if (c[b] >= 0) mass[d + 1][c[b]] = mass[d][i] / k;
    }
  }
  std::vector<double> p = mass[N];

  auto evaluate = [&](const std::vector<double>& v, std::vector<double>& kp) {
    auto P = subtree_sums(lt, v);
    double e = 0;
    for (unsigned d = 0; d < N; ++d)
      for (std::size_t i = 0; i < lt.child[d].size(); ++i) {
        const auto& c = lt.child[d][i];
        if (c[0] >= 0 && c[1] >= 0) e += scale[d] * 2.0 * P[d + 1][c[0]] * P[d + 1][c[1]];
      }
    std::vector<double> acc{0.0}, nacc;
    for (unsigned d = 0; d < N; ++d) {
      nacc.assign(lt.child[d + 1].size(), 0.0);
      for (std::size_t i = 0; i < lt.child[d].size(); ++i) {
        const auto& c = lt.child[d][i];
        for (int b = 0; b < 2; ++b)
          if (c[b] >= 0) nacc[c[b]] = acc[i] + (c[1 - b] >= 0 ? scale[d] * P[d + 1][c[1 - b]] : 0.0);
      }
      acc.swap(nacc);
    }
    kp.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      kp[i] = acc[i] + diag * v[i];
      e += diag * v[i] * v[i];
    }
    return e;
  };

  MinimizeResult res;
  std::vector<double> kp;
  for (unsigned k = 0; k < iters; ++k) {
    double e = evaluate(p, kp);
    std::size_t best = static_cast<std::size_t>(std::min_element(kp.begin(), kp.end()) - kp.begin());
    double g = 2.0 * kp[best];
    double gap = 2.0 * e - g;
    if (gap <= tolerance * e) {
      res.log.push_back({k, e, gap, 0.0, best});
      res.converged = true;
      break;
    }
    double curvature = e + diag - g;
    double a = curvature > 0 ? std::clamp(gap / (2.0 * curvature), 0.0, 1.0) : 1.0;
    for (auto& x : p) x *= 1.0 - a;
    p[best] += a;
    double e_new = e - a * gap + a * a * curvature;
    res.log.push_back({k, e, gap, a, best});
    if (e - e_new < tolerance * e) {
      res.converged = true;
      break;
    }
  }

  // Exact measure from the final iterate.
  std::vector<Rational> q(p.size());
  Rational total(0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    q[i] = Rational(std::max(0.0, p[i]));
    total += q[i];
  }
  for (auto& x : q) x /= total;
  auto P = subtree_sums(lt, q);
  std::vector<std::vector<int>> id(N);
  int count = 0;
  for (unsigned d = 0; d < N; ++d) {
    id[d].assign(lt.child[d].size(), -1);
    for (std::size_t i = 0; i < lt.child[d].size(); ++i)
      if (sgn(P[d][i]) > 0) id[d][i] = count++;
  }
  const int uniform = count;
  std::vector<SplitState> states(static_cast<std::size_t>(count) + 1);
  states[uniform] = SplitState{{uniform, uniform}, {Rational(1, 2), Rational(1, 2)}};
  for (unsigned d = 0; d < N; ++d)
    for (std::size_t i = 0; i < lt.child[d].size(); ++i) {
      if (id[d][i] < 0) continue;
      for (int b = 0; b < 2; ++b) {
        int c = lt.child[d][i][b];
        if (c < 0 || sgn(P[d + 1][c]) == 0) continue;
        states[id[d][i]].w[b] = P[d + 1][c] / P[d][i];
        states[id[d][i]].next[b] = d + 1 == N ? uniform : id[d + 1][c];
      }
    }
  res.measure = CylinderMeasure::from_states(std::move(states), N == 0 ? uniform : id[0][0], N, "minimized");
  res.energy = energy(res.measure, s, N);
  return res;
}

std::string iterate_log_csv(const std::vector<IterateLog>& log) {
  std::string out = "iteration,energy,gap,step,vertex\n";
  char buf[160];
  for (const auto& r : log) {
    std::snprintf(buf, sizeof buf, "%u,%.17g,%.17g,%.17g,%zu\n", r.iteration, r.energy, r.gap, r.step, r.vertex);
    out += buf;
  }
  return out;
}

}  // namespace cantor
