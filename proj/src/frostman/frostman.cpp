#include "cantor/frostman.hpp"

#include <map>

#include "cantor/measures.hpp"

namespace cantor {

namespace {

const Rational kHalf(1, 2);

std::optional<MassBound> declared_bound(const Order& h, const Rational& gamma) {
  if ((h.kind() == Order::Kind::Linear || h.kind() == Order::Kind::Ceil) && h.slope() <= 1)
    return MassBound{h.slope(), gamma};
  return std::nullopt;
}

Value cap(const Order& h, const Rational& gamma, unsigned n, unsigned bits) {
  return Value(gamma) * pow2(Rational(-h(n)), bits);
}

Rational eta_at(const Semimeasure& eta, const LayeredTree& L, unsigned d, std::size_t i) {
  return L.compressed ? eta.level(d) : eta.eval(L.label[d][i]);
}

BitString node_name(const LayeredTree& L, unsigned d, std::size_t i) {
  return L.compressed ? BitString::zeros(d) : L.label[d][i];
}

std::optional<FrostmanResult> build_at(const TreeModel& T, const LayeredTree& L, const Semimeasure& eta,
                                       const Order& h, const Rational& gamma, unsigned N, unsigned bits) {
  std::vector<Rational> lo(N + 2);
  for (unsigned n = 0; n <= N + 1; ++n) {
    Value c = cap(h, gamma, n, bits);
    lo[n] = c.lo();
    if (n == 0 && Rational(1) > c.hi())
      throw DomainError("gamma " + to_string(gamma) + " is below 2^h(0); the root mass 1 exceeds its bound");
  }
  if (Rational(1) > lo[0]) return std::nullopt;
  for (unsigned n = 0; n < N; ++n)
    if (2 * lo[n + 1] < lo[n]) return std::nullopt;
  for (unsigned d = 0; d <= N; ++d) {
    for (std::size_t i = 0; i < L.level_size(d); ++i) {
      Rational e = eta_at(eta, L, d, i);
      if (e <= lo[d]) continue;
      if (Value(e).lo() > cap(h, gamma, d, bits).hi())
        throw DomainError("semimeasure exceeds gamma*2^-h at '" + node_name(L, d, i).str() + "': " + to_string(e));
      return std::nullopt;
    }
  }

  FrostmanAudit audit;
  // Keys (tree node, mass) per level; nodes of explicit trees have one key each.
  struct Edge {
    Rational w;
    int key = -1;  // index into the next level, -1 for the uniform tail
  };
  std::vector<std::vector<std::pair<int, Rational>>> keys(N + 1);
  std::vector<std::vector<std::array<Edge, 2>>> edges(N + 1);
  keys[0].emplace_back(0, Rational(1));
  for (unsigned d = 0; d < N; ++d) {
    std::map<std::pair<int, Rational>, int> index;
    edges[d].resize(keys[d].size());
    for (std::size_t k = 0; k < keys[d].size(); ++k) {
      auto [node, mu] = keys[d][k];
      const auto& ch = L.child[d][node];
      std::array<bool, 2> in{ch[0] >= 0, ch[1] >= 0};
      std::array<Rational, 2> a{Rational(0), Rational(0)};
      const Rational& c = lo[d + 1];
      if (in[0] && in[1]) {
        Rational e0 = eta_at(eta, L, d + 1, ch[0]), e1 = eta_at(eta, L, d + 1, ch[1]);
        Rational slack = mu - e0 - e1;
        Rational h0 = c - e0, h1 = c - e1;
        if (sgn(h0 + h1) == 0) {
          a[0] = e0 + slack / 2;
          a[1] = e1 + slack / 2;
        } else {
          a[0] = e0 + slack * h0 / (h0 + h1);
          a[1] = mu - a[0];
        }
      } else if (in[0] || in[1]) {
        int b = in[0] ? 0 : 1;
        if (mu < c) {
          ++audit.clamps;
          if (audit.log.size() < 32)
            audit.log.push_back("clamp at '" + node_name(L, d, node).str() + "': mass " + to_string(mu) +
                                " below the child cap");
        }
        a[b] = mu < c ? mu : c;
        a[1 - b] = mu - a[b];
      } else {
        a[0] = mu / 2;
        a[1] = mu / 2;
      }
      for (int b = 0; b < 2; ++b) {
        Edge& e = edges[d][k][b];
        e.w = a[b] / mu;
        if (!in[b] || sgn(a[b]) == 0) continue;
        auto key = std::make_pair(static_cast<int>(ch[b]), a[b]);
        auto [it, fresh] = index.emplace(key, static_cast<int>(keys[d + 1].size()));
        if (fresh) keys[d + 1].push_back(key);
        e.key = it->second;
      }
    }
  }

  std::vector<int> offset(N + 1, 0);
  int count = 0;
  for (unsigned d = 0; d < N; ++d) {
    offset[d] = count;
    count += static_cast<int>(keys[d].size());
  }
  const int uniform = count;
  std::vector<SplitState> states(static_cast<std::size_t>(count) + 1);
  states[uniform] = SplitState{{uniform, uniform}, {kHalf, kHalf}};
  for (unsigned d = 0; d < N; ++d) {
    for (std::size_t k = 0; k < keys[d].size(); ++k) {
      SplitState& st = states[offset[d] + k];
      for (int b = 0; b < 2; ++b) {
        const Edge& e = edges[d][k][b];
        st.w[b] = e.w;
        st.next[b] = (e.key < 0 || d + 1 == N) ? uniform : offset[d + 1] + e.key;
      }
    }
  }
  CylinderMeasure mu = CylinderMeasure::from_states(std::move(states), N == 0 ? uniform : 0, N, "frostman");
  if (auto b = declared_bound(h, gamma)) mu = mu.with_bound(*b);
  (void)T;
  return FrostmanResult{std::move(mu), gamma, h, std::move(audit)};
}

}  // namespace

FrostmanResult build_measure_along_tree(const TreeModel& T, const Semimeasure& eta, const Order& h,
                                        const Rational& gamma, unsigned N, Precision prec) {
  if (sgn(gamma) <= 0) throw DomainError("gamma must be positive");
  for (unsigned n = 0; n < N; ++n)
    if (h(n + 1) > h(n) + 1)
      throw DomainError("order is not convex: h(" + std::to_string(n + 1) + ") > h(" + std::to_string(n) + ") + 1");
  if (auto v = semimeasure_validate(eta, N))
    throw DomainError("not a semimeasure at '" + v->at.str() + "': " + v->clause);
  if (T.is_empty()) throw DomainError("build_measure_along_tree: empty tree");
  LayeredTree L = T.layered(N, eta.length_invariant());
  FrostmanResult r = escalate(
      prec, [&](unsigned bits) { return build_at(T, L, eta, h, gamma, N, bits); }, "build_measure_along_tree");
  FrostmanAudit a = audit_frostman(r.measure, T, eta, h, gamma, N, prec);
  a.clamps = r.audit.clamps;
  a.log = std::move(r.audit.log);
  r.audit = std::move(a);
  return r;
}

FrostmanAudit audit_frostman(const CylinderMeasure& mu, const TreeModel& T, const Semimeasure& eta, const Order& h,
                             const Rational& gamma, unsigned N, Precision prec) {
  FrostmanAudit audit;
  auto fail = [&](BitString at, std::string why) {
    if (!audit.failure) audit.failure = Violation{at, std::move(why)};
  };

  // Additivity, recomputed on the tabulated masses when that is affordable.
  audit.additive = !validate_probability(mu);
  if (audit.additive && N <= 14) {
    if (auto v = validate_probability(table_of(mu, N))) {
      audit.additive = false;
      fail(v->at, v->clause);
    }
  }

  // Bound on every string up to depth N.
  auto maxima = level_max_masses(mu, N);
  audit.bounded = true;
  for (unsigned n = 0; n <= N && audit.bounded; ++n) {
    bool le = escalate(
        prec,
        [&](unsigned bits) -> std::optional<bool> {
          Tri t = less_equal(Value(maxima[n].value), cap(h, gamma, n, bits));
          if (t == Tri::Undecided) return std::nullopt;
          return t == Tri::True;
        },
        "audit_frostman");
    if (!le) {
      audit.bounded = false;
      fail(maxima[n].at, "mass " + to_string(maxima[n].value) + " exceeds gamma*2^-h");
    }
  }

  // Domination on T: smallest mass per tree node via (node, state) pairs.
  audit.dominates = true;
  if (!T.is_empty()) {
    LayeredTree L = T.layered(N, eta.length_invariant());
    std::vector<std::map<int, Rational>> min_mass(N + 1);
    std::map<std::pair<int, int>, Rational> level{{{0, mu.start()}, Rational(1)}};
    for (unsigned d = 0;; ++d) {
      for (const auto& [key, m] : level) {
        auto it = min_mass[d].find(key.first);
        if (it == min_mass[d].end() || m < it->second) min_mass[d][key.first] = m;
      }
      if (d == N) break;
      std::map<std::pair<int, int>, Rational> next;
      for (const auto& [key, m] : level) {
        const auto& st = mu.states()[key.second];
        for (int b = 0; b < 2; ++b) {
          int c = L.child[d][key.first][b];
          if (c < 0 || sgn(st.w[b]) == 0) continue;
          Rational cm = m * st.w[b];
          auto k2 = std::make_pair(c, st.next[b]);
          auto it = next.find(k2);
          if (it == next.end() || cm < it->second) next[k2] = cm;
        }
      }
      level = std::move(next);
    }
    for (unsigned d = 0; d <= N && audit.dominates; ++d) {
      for (std::size_t i = 0; i < L.level_size(d); ++i) {
        auto it = min_mass[d].find(static_cast<int>(i));
        Rational m = it == min_mass[d].end() ? Rational(0) : it->second;
        Rational e = eta_at(eta, L, d, i);
        if (e > m) {
          audit.dominates = false;
          fail(node_name(L, d, i), "semimeasure " + to_string(e) + " exceeds mass " + to_string(m));
          break;
        }
      }
    }
  }
  return audit;
}

FlowResult maxflow_measure(const TreeModel& T, const Order& h, const Rational& gamma, unsigned N, Precision prec,
                           Exec exec) {
  if (sgn(gamma) <= 0) throw DomainError("gamma must be positive");
  if (T.is_empty()) throw DomainError("maxflow_measure: empty tree");
  LayeredTree L = T.layered(N, true);
  Premeasure rho = Premeasure::hausdorff(h, gamma);
  return escalate(
      prec,
      [&](unsigned bits) -> std::optional<FlowResult> {
        auto t = method1_table(L, rho, bits, exec);
        if (!t) return std::nullopt;
        FlowResult r;
        r.cut = t->best[0][0];
        r.value = min(Value(1), r.cut);
        Tri feasible = greater_equal(r.cut, Value(1));
        if (feasible == Tri::Undecided) return std::nullopt;
        if (feasible == Tri::False) return r;

        // Lower capacities give an exact flow that respects the true caps.
        std::vector<std::vector<Value>> w(N + 1);
        for (unsigned d = 0; d <= N; ++d) w[d].assign(L.level_size(d), Value(rho.level(d, bits).lo()));
        CutTable f = mincut_levels(L, w, exec);
        if (f.undecided || f.best[0][0].lo() < 1) return std::nullopt;

        std::vector<std::vector<int>> id(N + 1);
        int count = 0;
        for (unsigned d = 0; d < N; ++d) {
          id[d].assign(L.level_size(d), -1);
          for (std::size_t i = 0; i < L.level_size(d); ++i)
            if (sgn(f.best[d][i].lo()) > 0) id[d][i] = count++;
        }
        const int uniform = count;
        std::vector<SplitState> states(static_cast<std::size_t>(count) + 1);
        states[uniform] = SplitState{{uniform, uniform}, {kHalf, kHalf}};
        for (unsigned d = 0; d < N; ++d) {
          for (std::size_t i = 0; i < L.level_size(d); ++i) {
            if (id[d][i] < 0) continue;
            const auto& ch = L.child[d][i];
            Rational total(0);
            for (int b = 0; b < 2; ++b)
              if (ch[b] >= 0) total += f.best[d + 1][ch[b]].lo();
            for (int b = 0; b < 2; ++b) {
              if (ch[b] < 0) continue;
              const Rational& fb = f.best[d + 1][ch[b]].lo();
              if (sgn(fb) == 0) continue;
              states[id[d][i]].w[b] = fb / total;
              states[id[d][i]].next[b] = d + 1 == N ? uniform : id[d + 1][ch[b]];
            }
          }
        }
        CylinderMeasure mu = CylinderMeasure::from_states(std::move(states), N == 0 ? uniform : id[0][0], N, "maxflow");
        if (auto b = declared_bound(h, gamma)) mu = mu.with_bound(*b);
        r.measure = std::move(mu);
        return r;
      },
      "maxflow_measure");
}

MassDistributionResult mass_distribution_bound(const CylinderMeasure& m, const TreeModel& T, const Rational& s,
                                               const Rational& c, unsigned N, Precision prec) {
  if (sgn(c) <= 0) throw DomainError("mass_distribution_bound needs c > 0");
  if (sgn(s) <= 0) throw DomainError("mass_distribution_bound needs s > 0");
  if (T.is_empty()) throw DomainError("mass_distribution_bound: empty tree");
  Rational on_tree = tree_mass(m, T, N);
  if (on_tree != 1)
    throw DomainError("measure is not supported on the tree at depth " + std::to_string(N) + ": mass " +
                      to_string(on_tree) + " on the tree level");
  auto maxima = level_max_masses(m, N);
  for (unsigned n = 0; n <= N; ++n) {
    bool le = escalate(
        prec,
        [&](unsigned bits) -> std::optional<bool> {
          Tri t = less_equal(Value(maxima[n].value), Value(c) * pow2(Rational(-s * n), bits));
          if (t == Tri::Undecided) return std::nullopt;
          return t == Tri::True;
        },
        "mass_distribution_bound");
    if (!le)
      throw DomainError("mass bound violated at '" + maxima[n].at.str() + "': " + to_string(maxima[n].value) +
                        " > c*2^(-s*" + std::to_string(n) + ")");
  }
  MassDistributionResult r;
  r.bound = 1 / c;
  auto dp = method1_value(T, Premeasure::hausdorff(Order::linear(s)), N, prec);
  r.dp_value = dp.value;
  r.holds = escalate(
      prec,
      [&](unsigned bits) -> std::optional<bool> {
        Value v = method1_value(T, Premeasure::hausdorff(Order::linear(s)), N, Precision{bits, bits}).value;
        Tri t = greater_equal(v, Value(r.bound));
        if (t == Tri::Undecided) return std::nullopt;
        return t == Tri::True;
      },
      "mass_distribution_bound");
  if (!r.holds) throw Error("mass distribution principle failed to recompute: Method-I value below 1/c");
  return r;
}

}  // namespace cantor
