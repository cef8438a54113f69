#include "cantor/hausdorff.hpp"

#include <algorithm>

namespace cantor {

std::optional<CutTable> method1_table(const LayeredTree& L, const Premeasure& rho, unsigned bits, Exec exec) {
  std::vector<std::vector<Value>> w(L.depth + 1);
  for (unsigned d = 0; d <= L.depth; ++d) {
    if (L.compressed) {
      w[d].assign(L.level_size(d), rho.level(d, bits));
    } else {
      w[d].reserve(L.level_size(d));
      for (const auto& s : L.label[d]) w[d].push_back(rho.eval(s, bits));
    }
  }
  CutTable t = mincut_levels(L, w, exec);
  if (t.undecided) return std::nullopt;
  return t;
}

namespace {

CutCertificate certificate(const LayeredTree& L, const CutTable& t, std::size_t cap) {
  CutCertificate c;
  c.weight = t.best[0][0];
  // Number of antichain strings below each node.
  std::vector<std::vector<Integer>> count(L.depth + 1);
  for (unsigned d = L.depth + 1; d-- > 0;) {
    count[d].assign(L.level_size(d), Integer(0));
    for (std::size_t i = 0; i < L.level_size(d); ++i) {
      if (t.cut[d][i]) {
        count[d][i] = 1;
        continue;
      }
      if (d == L.depth) continue;
      for (int b = 0; b < 2; ++b)
        if (L.child[d][i][b] >= 0) count[d][i] += count[d + 1][L.child[d][i][b]];
    }
  }
  c.size = count[0][0];
  if (c.size > Integer(static_cast<unsigned long>(cap))) {
    c.truncated = true;
    return c;
  }
  struct Item {
    unsigned d;
    std::int32_t i;
    BitString s;
  };
  std::vector<Item> stack{{0, 0, BitString()}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (t.cut[it.d][it.i]) {
      c.antichain.push_back(it.s);
      continue;
    }
    if (it.d == L.depth) continue;
    for (int b = 1; b >= 0; --b) {
      std::int32_t ch = L.child[it.d][it.i][b];
      if (ch >= 0 && count[it.d + 1][ch] > 0) stack.push_back({it.d + 1, ch, it.s.child(b)});
    }
  }
  return c;
}

}  // namespace

Method1Result method1_value(const TreeModel& T, const Premeasure& rho, unsigned N, Precision prec, Exec exec,
                            std::size_t certificate_cap) {
  if (T.is_empty()) return {Value(0), CutCertificate{{}, Integer(0), false, Value(0)}};
  LayeredTree L = T.layered(N, rho.length_invariant());
  CutTable t = escalate(prec, [&](unsigned bits) { return method1_table(L, rho, bits, exec); }, "method1_value");
  Method1Result r;
  r.value = t.best[0][0];
  r.certificate = certificate(L, t, certificate_cap);
  return r;
}

DimensionEstimate hdim_estimate(const TreeModel& T, unsigned N, const Rational& tol, Precision prec, Exec exec) {
  if (N < 1) throw DomainError("hdim_estimate needs N >= 1");
  if (sgn(tol) <= 0 || tol >= 1) throw DomainError("hdim_estimate needs 0 < tol < 1");
  if (T.is_empty()) throw DomainError("hdim_estimate: empty tree");
  // every value is at most ρ(ε) = 1, so the threshold has to sit strictly below it
  const long m = std::max(1L, floor(Rational(tol * N / 2)).get_si());
  DimensionEstimate est;
  est.threshold = pow2_exact(-m);
  est.slack = Rational(m, N);
  est.slack.canonicalize();
  if (est.slack >= tol) throw DomainError("hdim_estimate needs N*tol > 1");
  LayeredTree L = T.layered(N, true);

  auto probe = [&](const Rational& s) {
    Premeasure rho = Premeasure::hausdorff(Order::linear(s));
    return escalate(
        prec,
        [&](unsigned bits) -> std::optional<Probe> {
          auto t = method1_table(L, rho, bits, exec);
          if (!t) return std::nullopt;
          Value v = t->best[0][0];
          Tri le = less_equal(v, Value(est.threshold));
          if (le == Tri::Undecided) return std::nullopt;
          return Probe{s, le == Tri::True, v};
        },
        "hdim_estimate");
  };

  Rational lo(0), hi(1);
  const Rational stop = tol - est.slack;
  while (hi - lo > stop) {
    Rational mid = (lo + hi) / 2;
    Probe p = probe(mid);
    est.probes.push_back(p);
    if (p.above) hi = mid;
    else lo = mid;
  }
  est.lo = lo > est.slack ? Rational(lo - est.slack) : Rational(0);
  est.hi = hi;
  return est;
}

}  // namespace cantor
