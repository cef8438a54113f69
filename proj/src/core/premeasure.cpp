#include "cantor/premeasure.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cantor {

Premeasure Premeasure::hausdorff(Order h, Rational gamma) {
  if (sgn(gamma) <= 0) throw DomainError("premeasure constant must be positive");
  Premeasure r;
  r.kind_ = Kind::Hausdorff;
  r.order_ = std::move(h);
  r.gamma_ = std::move(gamma);
  return r;
}

Premeasure Premeasure::probability(CylinderMeasure m) {
  Premeasure r;
  r.kind_ = Kind::Probability;
  r.measure_ = std::make_shared<const CylinderMeasure>(std::move(m));
  return r;
}

Premeasure Premeasure::table(std::map<BitString, Rational> values) {
  for (const auto& [s, v] : values)
    if (sgn(v) < 0) throw DomainError("premeasure value at '" + s.str() + "' is negative");
  Premeasure r;
  r.kind_ = Kind::Table;
  r.table_ = std::move(values);
  return r;
}

Value Premeasure::level(unsigned n, unsigned bits) const {
  if (kind_ != Kind::Hausdorff) throw DomainError("premeasure is not length-invariant");
  Value v = pow2(Rational(-(*order_)(n)), bits);
  if (gamma_ != 1) v *= Value(gamma_);
  return v;
}

bool Premeasure::exact_at_level(unsigned n) const {
  return kind_ != Kind::Hausdorff || is_integer((*order_)(n));
}

Value Premeasure::eval(const BitString& s, unsigned bits) const {
  switch (kind_) {
    case Kind::Hausdorff:
      return level(s.length(), bits);
    case Kind::Probability:
      return Value(measure_->mass(s));
    case Kind::Table: {
      auto it = table_.find(s);
      if (it == table_.end()) throw DomainError("string '" + s.str() + "' outside the premeasure table");
      return Value(it->second);
    }
  }
  return Value(0);
}

std::string Premeasure::describe() const {
  switch (kind_) {
    case Kind::Hausdorff:
      return gamma_ == 1 ? "hausdorff(" + order_->str() + ")"
                         : "hausdorff(" + order_->str() + ", gamma=" + to_string(gamma_) + ")";
    case Kind::Probability:
      return "probability(" + (measure_->name().empty() ? std::string("measure") : measure_->name()) + ")";
    case Kind::Table:
      return "table(" + std::to_string(table_.size()) + " values)";
  }
  return {};
}

Value premeasure_eval(const Premeasure& rho, const BitString& s, Precision p) { return rho.eval(s, p.bits); }

Distance cantor_distance(const BitString& a, const BitString& b) {
  unsigned k = common_prefix(a, b).length();
  if (k == a.length() || k == b.length()) return {Rational(0), true};
  return {pow2_exact(-static_cast<long>(k)), false};
}

namespace {

std::optional<GeometricalReport> geometrical_hausdorff(const Premeasure& rho, unsigned N, unsigned bits) {
  GeometricalReport rep;
  const Order& h = rho.order();
  bool first = true;
  for (unsigned n = 0; n <= N; ++n) {
    Value r = pow2(Rational(h(n) - h(n + 1)), bits);
    Value two_r = r * Value(2);
    rep.p = first ? r : max(rep.p, r);
    rep.q = first ? two_r : min(rep.q, two_r);
    first = false;
    Tri g2 = less(r, Value(1));
    Tri g3 = less_equal(Value(1), two_r);
    if (g2 == Tri::Undecided || g3 == Tri::Undecided) return std::nullopt;
    if (g2 == Tri::False) {
      rep.violation = Violation{BitString::zeros(n), "(G2) child/parent ratio " + r.str() + " is not below 1"};
      return rep;
    }
    if (g3 == Tri::False) {
      rep.violation = Violation{BitString::zeros(n), "(G3) children sum/parent ratio " + two_r.str() + " is below 1"};
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

GeometricalReport geometrical_probability(const Premeasure& rho, unsigned N) {
  const CylinderMeasure& m = rho.measure();
  GeometricalReport rep;
  rep.q = Value(1);
  Rational p(0);
  // Ratios depend only on the state; walk the reachable states level by level
  // with the lexicographically first string reaching each.
  std::map<int, BitString> level{{m.start(), BitString()}};
  for (unsigned n = 0; n <= N; ++n) {
    std::vector<std::pair<BitString, int>> ordered;
    for (const auto& [q, s] : level) ordered.emplace_back(s, q);
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::map<int, BitString> next;
    for (const auto& [s, q] : ordered) {
      const auto& st = m.states()[q];
      for (int b = 0; b < 2; ++b) {
        if (st.w[b] > p) p = st.w[b];
        if (st.w[b] == 1) {
          rep.p = Value(p);
          rep.violation = Violation{s, "(G2) child/parent ratio 1 is not below 1"};
          return rep;
        }
        if (st.next[b] >= 0) next.emplace(st.next[b], s.child(b));
      }
    }
    level = std::move(next);
  }
  rep.p = Value(p);
  rep.ok = true;
  return rep;
}

GeometricalReport geometrical_table(const Premeasure& rho, unsigned N) {
  if (N > 20) throw DomainError("check_geometrical: table depth too large to enumerate");
  GeometricalReport rep;
  std::optional<Rational> p, q;
  auto get = [&](const BitString& s) { return rho.eval(s, 0).lo(); };
  for (unsigned n = 0; n <= N; ++n) {
    for (const auto& s : strings_of_length(n)) {
      Rational v = get(s), a = get(s.child(0)), b = get(s.child(1));
      if (sgn(v) == 0) {
        if (sgn(a) > 0 || sgn(b) > 0) {
          rep.violation = Violation{s, "(G2) positive child below a zero value"};
          break;
        }
        continue;
      }
      Rational ra = a / v, rb = b / v, rs = (a + b) / v;
      Rational hi = ra > rb ? ra : rb;
      if (!p || hi > *p) p = hi;
      if (!q || rs < *q) q = rs;
      if (hi >= 1) {
        rep.violation = Violation{s, "(G2) child/parent ratio " + to_string(hi) + " is not below 1"};
        break;
      }
      if (rs < 1) {
        rep.violation = Violation{s, "(G3) children sum/parent ratio " + to_string(rs) + " is below 1"};
        break;
      }
    }
    if (rep.violation) break;
  }
  rep.p = Value(p.value_or(Rational(0)));
  rep.q = Value(q.value_or(Rational(1)));
  rep.ok = !rep.violation;
  return rep;
}

}  // namespace

GeometricalReport check_geometrical(const Premeasure& rho, unsigned N, Precision prec) {
  switch (rho.kind()) {
    case Premeasure::Kind::Hausdorff:
      return escalate(prec, [&](unsigned bits) { return geometrical_hausdorff(rho, N, bits); }, "check_geometrical");
    case Premeasure::Kind::Probability:
      return geometrical_probability(rho, N);
    case Premeasure::Kind::Table:
      return geometrical_table(rho, N);
  }
  return {};
}

}  // namespace cantor
