#include "cantor/randomtests.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cantor {

unsigned TestObject::max_length() const {
  unsigned m = 0;
  for (const auto& lv : levels)
    for (const auto& s : lv) m = std::max(m, s.length());
  return m;
}

WeightFn weight_of(const Premeasure& rho) {
  return [rho](const BitString& s, unsigned bits) { return rho.eval(s, bits); };
}

WeightFn power_weight(const Rational& s) {
  if (sgn(s) < 0) throw DomainError("power weight needs s >= 0");
  return [s](const BitString& x, unsigned bits) { return pow2(Rational(-s * x.length()), bits); };
}

namespace {

// Runs attempt(bits) -> LevelVerdict with weight filled in, doubling the
// precision while weight ≤ bound is undecided.
template <class F>
LevelVerdict decide(unsigned n, const Rational& bound, Precision prec, F&& attempt) {
  for (unsigned bits = prec.bits;; bits *= 2) {
    LevelVerdict v = attempt(bits);
    v.level = n;
    v.bound = bound;
    v.bits = bits;
    v.pass = less_equal(v.weight, Value(bound));
    if (v.pass != Tri::Undecided || bits * 2 > prec.max_bits) return v;
  }
}

bool all_pass(const std::vector<LevelVerdict>& v) {
  return std::all_of(v.begin(), v.end(), [](const LevelVerdict& l) { return l.pass == Tri::True; });
}

std::set<BitString> prefixes_of(const std::vector<BitString>& strings) {
  std::set<BitString> p;
  for (auto s : strings) {
    while (p.insert(s).second && !s.empty()) s = s.parent();
  }
  return p;
}

void sort_lex(std::vector<BitString>& v) { std::sort(v.begin(), v.end(), BitString::lex_less); }

}  // namespace

TestVerdict check_ml(const TestObject& W, const WeightFn& rho, Precision prec) {
  TestVerdict out;
  out.notion = "ml";
  for (unsigned n = 1; n <= W.size(); ++n) {
    out.levels.push_back(decide(n, pow2_exact(-static_cast<long>(n)), prec, [&](unsigned bits) {
      LevelVerdict v;
      for (const auto& s : W.level(n)) v.weight += rho(s, bits);
      return v;
    }));
  }
  out.pass = all_pass(out.levels);
  return out;
}

TestVerdict check_ml(const TestObject& W, const Premeasure& rho, Precision prec) {
  return check_ml(W, weight_of(rho), prec);
}

TestVerdict check_solovay(const TestObject& W, const Premeasure& rho, Precision prec) {
  TestVerdict out;
  out.notion = "solovay";
  for (unsigned n = 1; n < W.size() && out.reason.empty(); ++n) {
    std::set<BitString> cur(W.level(n).begin(), W.level(n).end());
    std::set<BitString> nxt(W.level(n + 1).begin(), W.level(n + 1).end());
    for (const auto& s : nxt)
      if (!cur.count(s)) {
        out.reason = "not nested: '" + s.str() + "' in W_" + std::to_string(n + 1) + " but not in W_" +
                     std::to_string(n);
        break;
      }
    if (out.reason.empty() && cur.size() == nxt.size())
      out.reason = "empty difference W_" + std::to_string(n) + " \\ W_" + std::to_string(n + 1);
  }
  if (W.size() > 0) {
    out.levels.push_back(decide(1, Rational(1), prec, [&](unsigned bits) {
      LevelVerdict v;
      for (const auto& s : W.level(1)) v.weight += rho.eval(s, bits);
      return v;
    }));
    if (out.reason.empty() && out.levels[0].pass != Tri::True)
      out.reason = out.levels[0].pass == Tri::False ? "level-1 weight exceeds 1" : "level-1 weight undecided";
  }
  out.pass = out.reason.empty();
  return out;
}

TestVerdict check_strong(const TestObject& W, const WeightFn& rho, Precision prec) {
  TestVerdict out;
  out.notion = "strong";
  for (unsigned n = 1; n <= W.size(); ++n) {
    const auto& lv = W.level(n);
    std::set<BitString> members(lv.begin(), lv.end());
    std::set<BitString> trie = prefixes_of(lv);
    out.levels.push_back(decide(n, pow2_exact(-static_cast<long>(n)), prec, [&](unsigned bits) {
      std::map<BitString, Value> best;
      std::set<BitString> take;
      // Longest first: the set's order is shortlex.
      for (auto it = trie.rbegin(); it != trie.rend(); ++it) {
        const BitString& s = *it;
        Value kids(0);
        for (int b = 0; b < 2; ++b) {
          auto c = best.find(s.child(b));
          if (c != best.end()) kids += c->second;
        }
        if (members.count(s)) {
          Value self = rho(s, bits);
          if (less(self, kids) != Tri::True) {
            take.insert(s);
            best[s] = max(self, kids);
            continue;
          }
        }
        best[s] = kids;
      }
      LevelVerdict v;
      v.weight = best.count(BitString()) ? best[BitString()] : Value(0);
      std::vector<BitString> stack;
      if (!trie.empty()) stack.push_back(BitString());
      while (!stack.empty()) {
        BitString s = stack.back();
        stack.pop_back();
        if (take.count(s)) {
          v.witness.push_back(s);
          continue;
        }
        for (int b = 0; b < 2; ++b)
          if (trie.count(s.child(b))) stack.push_back(s.child(b));
      }
      sort_lex(v.witness);
      return v;
    }));
  }
  out.pass = all_pass(out.levels);
  return out;
}

TestVerdict check_strong(const TestObject& W, const Premeasure& rho, Precision prec) {
  return check_strong(W, weight_of(rho), prec);
}

namespace {

// Cheapest covers of whole cylinders by strings of length ≤ N.
class FullCover {
 public:
  FullCover(const Premeasure& rho, unsigned N, unsigned bits) : rho_(rho), N_(N), bits_(bits) {
    if (rho.kind() == Premeasure::Kind::Table) {
      for (const auto& [k, v] : rho.values())
        for (BitString p = k; !p.empty();) {
          p = p.parent();
          if (!above_table_.insert(p).second) break;
        }
    }
  }

  // nullopt: no cover exists.
  std::optional<Value> self(const BitString& s) const {
    if (rho_.kind() == Premeasure::Kind::Table && !rho_.values().count(s)) return std::nullopt;
    return rho_.eval(s, bits_);
  }

  std::optional<Value> full(const BitString& s) { return choice(s).first; }

  // (value, whether s itself is chosen)
  std::pair<std::optional<Value>, bool> choice(const BitString& s) {
    switch (rho_.kind()) {
      case Premeasure::Kind::Probability:
        return {rho_.eval(s, bits_), true};
      case Premeasure::Kind::Hausdorff:
        return by_depth(s.length());
      case Premeasure::Kind::Table:
        break;
    }
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    std::optional<Value> kids;
    if (s.length() < N_ && above_table_.count(s)) {
      auto a = full(s.child(0)), b = full(s.child(1));
      if (a && b) kids = *a + *b;
    }
    auto r = combine(self(s), kids);
    memo_.emplace(s, r);
    return r;
  }

  void materialize(const BitString& s, std::vector<BitString>& out, std::size_t cap, bool& truncated) {
    if (out.size() >= cap) {
      truncated = true;
      return;
    }
    if (choice(s).second) {
      out.push_back(s);
      return;
    }
    materialize(s.child(0), out, cap, truncated);
    materialize(s.child(1), out, cap, truncated);
  }

  static std::pair<std::optional<Value>, bool> combine(const std::optional<Value>& self,
                                                       const std::optional<Value>& kids) {
    if (!kids) return {self, true};
    if (!self) return {kids, false};
    if (less(*kids, *self) == Tri::True) return {kids, false};
    return {min(*self, *kids), true};
  }

 private:
  std::pair<std::optional<Value>, bool> by_depth(unsigned d) {
    if (depth_.empty()) {
      depth_.resize(N_ + 1);
      depth_[N_] = {rho_.level(N_, bits_), true};
      for (unsigned k = N_; k-- > 0;) {
        Value kids = *depth_[k + 1].first * Value(2);
        depth_[k] = combine(rho_.level(k, bits_), kids);
      }
    }
    return depth_.at(d);
  }

  const Premeasure& rho_;
  unsigned N_;
  unsigned bits_;
  std::set<BitString> above_table_;
  std::map<BitString, std::pair<std::optional<Value>, bool>> memo_;
  std::vector<std::pair<std::optional<Value>, bool>> depth_;
};

}  // namespace

TestVerdict check_vehement(const TestObject& W, const Premeasure& rho, unsigned N, Precision prec,
                           std::size_t cover_cap) {
  if (W.max_length() > N)
    throw DomainError("check_vehement: test string longer than the horizon N=" + std::to_string(N));
  TestVerdict out;
  out.notion = "vehement";
  out.horizon = N;
  for (unsigned n = 1; n <= W.size(); ++n) {
    const auto& lv = W.level(n);
    std::set<BitString> members(lv.begin(), lv.end());
    std::set<BitString> trie = prefixes_of(lv);
    out.levels.push_back(decide(n, pow2_exact(-static_cast<long>(n)), prec, [&](unsigned bits) {
      FullCover fc(rho, N, bits);
      // value, self chosen; members use the whole-cylinder cover
      std::map<BitString, std::pair<std::optional<Value>, bool>> cover;
      for (auto it = trie.rbegin(); it != trie.rend(); ++it) {
        const BitString& s = *it;
        if (members.count(s)) {
          cover[s] = {fc.full(s), false};
          continue;
        }
        std::optional<Value> kids = Value(0);
        for (int b = 0; b < 2; ++b) {
          auto c = cover.find(s.child(b));
          if (c == cover.end()) continue;
          if (!c->second.first) kids.reset();
          else if (kids) *kids += *c->second.first;
        }
        cover[s] = FullCover::combine(fc.self(s), kids);
      }
      LevelVerdict v;
      if (trie.empty()) return v;
      if (!cover[BitString()].first)
        throw DomainError("check_vehement: no cover of level " + std::to_string(n) + " by table strings");
      v.weight = *cover[BitString()].first;
      std::vector<BitString> stack{BitString()};
      while (!stack.empty()) {
        BitString s = stack.back();
        stack.pop_back();
        if (members.count(s)) {
          fc.materialize(s, v.witness, cover_cap, v.witness_truncated);
          continue;
        }
        if (cover[s].second) {
          v.witness.push_back(s);
          continue;
        }
        for (int b = 0; b < 2; ++b)
          if (trie.count(s.child(b))) stack.push_back(s.child(b));
      }
      sort_lex(v.witness);
      return v;
    }));
  }
  out.pass = all_pass(out.levels);
  return out;
}

namespace {

// Lexicographically least prefix-free strings that, with `kept`, generate N_s.
void complete(const BitString& s, const std::set<BitString>& kept, std::vector<BitString>& out) {
  if (kept.count(s)) return;
  bool below = false;
  for (auto it = kept.begin(); it != kept.end() && !below; ++it) below = s.is_prefix_of(*it);
  if (!below) {
    out.push_back(s);
    return;
  }
  complete(s.child(0), kept, out);
  complete(s.child(1), kept, out);
}

bool covered(const std::set<BitString>& B, const BitString& a) {
  for (BitString p = a;; p = p.parent()) {
    if (B.count(p)) return true;
    if (p.empty()) break;
  }
  bool below = false;
  for (const auto& b : B)
    if (a.is_prefix_of(b)) {
      below = true;
      break;
    }
  return below && covered(B, a.child(0)) && covered(B, a.child(1));
}

}  // namespace

std::vector<BitString> prefix_free_generators(const std::vector<BitString>& listed) {
  std::set<BitString> U;
  for (const auto& x : listed) {
    bool ancestor = false;
    for (BitString p = x;; p = p.parent()) {
      if (U.count(p)) {
        ancestor = true;
        break;
      }
      if (p.empty()) break;
    }
    if (ancestor) continue;
    std::vector<BitString> extra;
    complete(x, U, extra);
    U.insert(extra.begin(), extra.end());
  }
  std::vector<BitString> out(U.begin(), U.end());
  sort_lex(out);
  return out;
}

bool open_subset(const std::vector<BitString>& A, const std::vector<BitString>& B) {
  std::set<BitString> b(B.begin(), B.end());
  return std::all_of(A.begin(), A.end(), [&](const BitString& a) { return covered(b, a); });
}

bool same_open_set(const std::vector<BitString>& A, const std::vector<BitString>& B) {
  return open_subset(A, B) && open_subset(B, A);
}

unsigned conversion_shift(const Rational& s, const Rational& t, Precision prec) {
  if (t <= s) throw DomainError("the theorem's factor 1/(1-2^-(t-s)) diverges for t <= s");
  return escalate(
      prec,
      [&](unsigned bits) -> std::optional<unsigned> {
        Value gap = Value(1) - pow2(Rational(s - t), bits);
        for (unsigned k = 0; k < 4096; ++k) {
          Tri ok = less_equal(Value(pow2_exact(-static_cast<long>(k))), gap);
          if (ok == Tri::Undecided) return std::nullopt;
          if (ok == Tri::True) return k;
        }
        return std::nullopt;
      },
      "conversion_shift");
}

ConversionResult convert_strong_to_ml(const TestObject& W, const Rational& s, const Rational& t, Precision prec) {
  if (sgn(s) < 0) throw DomainError("convert_strong_to_ml needs s >= 0");
  ConversionResult r;
  r.shift = conversion_shift(s, t, prec);
  const unsigned k = r.shift;
  if (W.size() <= k)
    throw DomainError("insufficient input levels: shift " + std::to_string(k) + " needs more than " +
                      std::to_string(k) + " levels, got " + std::to_string(W.size()));
  TestVerdict strong = check_strong(W, power_weight(s), prec);
  for (const auto& lv : strong.levels)
    if (lv.level > k && lv.pass != Tri::True)
      throw DomainError("input is not a strong test for 2^(-" + to_string(s) + "n) at level " +
                        std::to_string(lv.level));
  const unsigned bits = prec.bits;
  r.factor = Value(1) / (Value(1) - pow2(Rational(s - t), bits));
  for (unsigned m = 1; m + k <= W.size(); ++m) {
    const unsigned n = m + k;
    r.output.levels.push_back(W.level(n));
    ConversionLevel c;
    c.output_level = m;
    c.input_level = n;
    std::map<unsigned, unsigned> count;
    for (const auto& x : W.level(n)) ++count[x.length()];
    const Rational scale = pow2_exact(-static_cast<long>(n));
    c.total = Value(0);
    for (auto [j, cnt] : count) {
      LengthSum ls{j, Value(Rational(cnt)) * pow2(Rational(-t * j), bits),
                   Value(scale) * pow2(Rational((s - t) * j), bits)};
      c.total += ls.sum;
      c.by_length.push_back(ls);
    }
    c.bound = Value(scale) * r.factor;
    c.within = less_equal(c.total, c.bound);
    r.certificate.push_back(std::move(c));
  }
  r.ml = check_ml(r.output, power_weight(t), prec);
  return r;
}

ConversionResult vehement_to_ml_probability(const TestObject& W, const Premeasure& rho, unsigned N, Precision prec) {
  if (!rho.is_probability()) throw DomainError("prefix-free additivity requires a measure");
  TestVerdict v = check_vehement(W, rho, N, prec);
  for (const auto& lv : v.levels)
    if (lv.pass != Tri::True)
      throw DomainError("input is not vehement-correct at level " + std::to_string(lv.level));
  ConversionResult r;
  r.factor = Value(1);
  for (const auto& lv : W.levels) {
    r.output.levels.push_back(prefix_free_generators(lv));
    r.open_sets_equal = r.open_sets_equal && same_open_set(lv, r.output.levels.back());
  }
  r.ml = check_ml(r.output, rho, prec);
  return r;
}

}  // namespace cantor
