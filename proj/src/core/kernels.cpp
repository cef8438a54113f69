#include "cantor/kernels.hpp"

#include <algorithm>

namespace cantor {

namespace {

// One node of the min-cut recursion; returns false when undecided.
bool cut_node(const LayeredTree& L, const std::vector<std::vector<Value>>& weight, CutTable& t, unsigned d,
              std::size_t i) {
  const Value& w = weight[d][i];
  if (d == L.depth) {
    t.best[d][i] = w;
    t.cut[d][i] = 1;
    return true;
  }
  const auto& ch = L.child[d][i];
  if (ch[0] < 0 && ch[1] < 0) {
    t.best[d][i] = Value(0);
    t.cut[d][i] = 0;
    return true;
  }
  Value sum(0);
  for (int b = 0; b < 2; ++b)
    if (ch[b] >= 0) sum += t.best[d + 1][ch[b]];
  Tri le = less_equal(w, sum);
  if (le == Tri::Undecided && w.same_as(sum)) le = Tri::True;
  if (le == Tri::Undecided) return false;
  bool c = le == Tri::True;
  t.cut[d][i] = c ? 1 : 0;
  t.best[d][i] = c ? w : sum;
  return true;
}

}  // namespace

CutTable mincut_levels(const LayeredTree& L, const std::vector<std::vector<Value>>& weight, Exec exec) {
  CutTable t;
  t.best.resize(L.depth + 1);
  t.cut.resize(L.depth + 1);
  for (unsigned d = 0; d <= L.depth; ++d) {
    t.best[d].resize(L.level_size(d));
    t.cut[d].resize(L.level_size(d));
  }
  for (unsigned d = L.depth + 1; d-- > 0;) {
    const long n = static_cast<long>(L.level_size(d));
    bool undecided = false;
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(|| : undecided)
      for (long i = 0; i < n; ++i)
        if (!cut_node(L, weight, t, d, static_cast<std::size_t>(i))) undecided = true;
    } else {
      for (long i = 0; i < n; ++i)
        if (!cut_node(L, weight, t, d, static_cast<std::size_t>(i))) undecided = true;
    }
    if (undecided) {
      t.undecided = true;
      return t;
    }
  }
  return t;
}

SplitProducts split_products(const CylinderMeasure& m, unsigned N, Exec exec) {
  const auto& states = m.states();
  const auto& preds = m.predecessors();
  std::vector<int> pos(states.size(), -1);
  std::vector<int> active{m.start()};
  std::vector<Rational> sq{Rational(1)};
  SplitProducts out;
  out.Q.reserve(N);
  for (unsigned n = 0; n < N; ++n) {
    const long na = static_cast<long>(active.size());
    std::vector<Rational> terms(active.size());
    auto term = [&](long k) {
      const auto& st = states[active[k]];
      terms[k] = sq[k] * st.w[0] * st.w[1] * 2;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (long k = 0; k < na; ++k) term(k);
    } else {
      for (long k = 0; k < na; ++k) term(k);
    }
    Rational q(0);
    for (const auto& x : terms) q += x;
    out.Q.push_back(q);

    for (long k = 0; k < na; ++k) pos[active[k]] = static_cast<int>(k);
    std::vector<int> next;
    for (int a : active)
      for (int b = 0; b < 2; ++b)
        if (states[a].next[b] >= 0) next.push_back(states[a].next[b]);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    std::vector<Rational> nsq(next.size());
    auto pull = [&](long k) {
      Rational s(0);
      for (const auto& [p, b] : preds[next[k]])
        if (pos[p] >= 0) {
          const Rational& w = states[p].w[b];
          s += sq[pos[p]] * w * w;
        }
      nsq[k] = s;
    };
    const long nn = static_cast<long>(next.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
      for (long k = 0; k < nn; ++k) pull(k);
    } else {
      for (long k = 0; k < nn; ++k) pull(k);
    }
    for (int a : active) pos[a] = -1;
    active = std::move(next);
    sq = std::move(nsq);
  }
  out.active = std::move(active);
  out.squares = std::move(sq);
  return out;
}

}  // namespace cantor
