#include <algorithm>
#include <deque>
#include <set>

#include "cantor/frostman.hpp"

namespace cantor {

MonotoneMachine MonotoneMachine::from_pairs(std::vector<std::pair<BitString, BitString>> pairs) {
  MonotoneMachine M;
  for (auto& [in, out] : pairs) {
    auto [it, fresh] = M.by_input_.emplace(in, out);
    if (!fresh) {
      if (it->second != out)
        throw DomainError("inconsistent machine table: input '" + in.str() + "' has two outputs");
      continue;
    }
    M.pairs_.emplace_back(in, out);
  }
  for (const auto& [in, out] : M.pairs_) {
    for (BitString p = in; !p.empty();) {
      p = p.parent();
      auto it = M.by_input_.find(p);
      if (it != M.by_input_.end() && !it->second.is_prefix_of(out))
        throw DomainError("inconsistent machine table: '" + p.str() + "' -> '" + it->second.str() + "' but '" +
                          in.str() + "' -> '" + out.str() + "'");
    }
  }
  return M;
}

MonotoneMachine MonotoneMachine::identity(unsigned L) {
  if (L > 20) throw DomainError("identity machine: length too large");
  std::vector<std::pair<BitString, BitString>> pairs;
  for (unsigned k = 0; k <= L; ++k)
    for (const auto& s : strings_of_length(k)) pairs.emplace_back(s, s);
  return from_pairs(std::move(pairs));
}

MonotoneMachine MonotoneMachine::bit_doubling(unsigned L) {
  if (L > 16) throw DomainError("bit-doubling machine: length too large");
  std::vector<std::pair<BitString, BitString>> pairs;
  for (unsigned k = 0; k <= L; ++k) {
    for (const auto& s : strings_of_length(k)) {
      BitString out;
      for (unsigned i = 0; i < k; ++i) out = out.child(s.bit(i)).child(s.bit(i));
      pairs.emplace_back(s, out);
    }
  }
  return from_pairs(std::move(pairs));
}

std::optional<BitString> MonotoneMachine::output(const BitString& tau) const {
  for (BitString p = tau;; p = p.parent()) {
    auto it = by_input_.find(p);
    if (it != by_input_.end()) return it->second;
    if (p.empty()) return std::nullopt;
  }
}

std::vector<BitString> MonotoneMachine::preimage(const BitString& sigma) const {
  std::set<BitString> cand;
  for (const auto& [in, out] : pairs_)
    if (sigma.is_prefix_of(out)) cand.insert(in);
  std::vector<BitString> minimal;
  for (const auto& t : cand) {
    bool has_prefix = false;
    for (BitString p = t; !p.empty() && !has_prefix;) {
      p = p.parent();
      has_prefix = cand.count(p) > 0;
    }
    if (!has_prefix) minimal.push_back(t);
  }
  std::sort(minimal.begin(), minimal.end(), BitString::lex_less);
  return minimal;
}

Rational machine_preimage_semimeasure(const MonotoneMachine& M, const BitString& sigma) {
  Rational sum(0);
  for (const auto& t : M.preimage(sigma)) sum += pow2_exact(-static_cast<long>(t.length()));
  return sum;
}

Semimeasure Semimeasure::zero() { return Semimeasure(); }

Semimeasure Semimeasure::geometric(Rational a, Rational r) {
  if (sgn(a) < 0 || sgn(r) < 0) throw DomainError("geometric semimeasure needs a, r >= 0");
  Semimeasure e;
  e.kind_ = Kind::Geometric;
  e.a_ = std::move(a);
  e.r_ = std::move(r);
  return e;
}

Semimeasure Semimeasure::table(std::map<BitString, Rational> values) {
  Semimeasure e;
  e.kind_ = Kind::Table;
  e.table_ = std::move(values);
  return e;
}

Semimeasure Semimeasure::measure(CylinderMeasure m) {
  Semimeasure e;
  e.kind_ = Kind::Measure;
  e.measure_ = std::make_shared<const CylinderMeasure>(std::move(m));
  return e;
}

Semimeasure Semimeasure::machine(MonotoneMachine M) {
  Semimeasure e;
  e.kind_ = Kind::Machine;
  e.machine_ = std::make_shared<const MonotoneMachine>(std::move(M));
  return e;
}

Rational Semimeasure::level(unsigned n) const {
  if (kind_ == Kind::Zero) return Rational(0);
  if (kind_ != Kind::Geometric) throw DomainError("semimeasure is not length-invariant");
  Rational v = a_;
  for (unsigned i = 0; i < n; ++i) v *= r_;
  return v;
}

Rational Semimeasure::eval(const BitString& s) const {
  switch (kind_) {
    case Kind::Zero:
    case Kind::Geometric:
      return level(s.length());
    case Kind::Table: {
      auto it = table_.find(s);
      return it == table_.end() ? Rational(0) : it->second;
    }
    case Kind::Measure:
      return measure_->mass(s);
    case Kind::Machine:
      return machine_preimage_semimeasure(*machine_, s);
  }
  return Rational(0);
}

bool Semimeasure::may_be_positive_below(const BitString& s) const {
  switch (kind_) {
    case Kind::Zero:
      return false;
    case Kind::Geometric:
      return sgn(a_) > 0 && sgn(r_) > 0;
    case Kind::Table:
      for (const auto& [k, v] : table_)
        if (k.length() > s.length() && s.is_prefix_of(k) && sgn(v) != 0) return true;
      return false;
    case Kind::Measure:
      return sgn(measure_->mass(s)) > 0;
    case Kind::Machine:
      for (const auto& [in, out] : machine_->pairs())
        if (out.length() > s.length() && s.is_prefix_of(out)) return true;
      return false;
  }
  return true;
}

std::string Semimeasure::describe() const {
  switch (kind_) {
    case Kind::Zero:
      return "zero";
    case Kind::Geometric:
      return "geometric(" + to_string(a_) + "*" + to_string(r_) + "^n)";
    case Kind::Table:
      return "table(" + std::to_string(table_.size()) + " values)";
    case Kind::Measure:
      return "measure(" + measure_->name() + ")";
    case Kind::Machine:
      return "machine(" + std::to_string(machine_->pairs().size()) + " pairs)";
  }
  return {};
}

std::optional<Violation> semimeasure_validate(const Semimeasure& eta, unsigned N) {
  Rational root = eta.eval(BitString());
  if (sgn(root) < 0) return Violation{BitString(), "negative value"};
  if (root > 1) return Violation{BitString(), "root value " + to_string(root) + " exceeds 1"};
  switch (eta.kind()) {
    case Semimeasure::Kind::Zero:
    case Semimeasure::Kind::Measure:
      return std::nullopt;
    case Semimeasure::Kind::Geometric:
      // a·r^n ≥ 2·a·r^(n+1) at every level iff the first level holds.
      if (N > 0 && eta.level(0) < 2 * eta.level(1))
        return Violation{BitString(), "superadditivity: " + to_string(eta.level(0)) + " < " +
                                          to_string(Rational(2 * eta.level(1)))};
      return std::nullopt;
    default:
      break;
  }
  std::deque<BitString> queue{BitString()};
  while (!queue.empty()) {
    BitString s = queue.front();
    queue.pop_front();
    if (s.length() >= N) continue;
    Rational v = eta.eval(s), a = eta.eval(s.child(0)), b = eta.eval(s.child(1));
    if (sgn(a) < 0) return Violation{s.child(0), "negative value"};
    if (sgn(b) < 0) return Violation{s.child(1), "negative value"};
    if (v < a + b)
      return Violation{s, "superadditivity: " + to_string(v) + " < " + to_string(a) + " + " + to_string(b)};
    for (int c = 0; c < 2; ++c) {
      BitString ch = s.child(c);
      if (sgn(eta.eval(ch)) > 0 || eta.may_be_positive_below(ch)) queue.push_back(ch);
    }
  }
  return std::nullopt;
}

TreeModel complexity_tree(const MonotoneMachine& M, const Order& h, const Rational& c, unsigned N,
                          Precision prec) {
  if (sgn(c) <= 0) throw DomainError("complexity_tree needs c > 0");
  auto admitted = [&](const BitString& s) {
    Rational lam = machine_preimage_semimeasure(M, s);
    return escalate(
        prec,
        [&](unsigned bits) -> std::optional<bool> {
          Tri le = less_equal(Value(lam), Value(c) * pow2(Rational(-h(s.length())), bits));
          if (le == Tri::Undecided) return std::nullopt;
          return le == Tri::True;
        },
        "complexity_tree");
  };
  std::vector<BitString> nodes;
  std::deque<BitString> queue;
  if (admitted(BitString())) queue.push_back(BitString());
  while (!queue.empty()) {
    BitString s = queue.front();
    queue.pop_front();
    nodes.push_back(s);
    if (s.length() >= N) continue;
    for (int b = 0; b < 2; ++b)
      if (admitted(s.child(b))) queue.push_back(s.child(b));
  }
  return TreeModel::explicit_nodes(std::move(nodes), N);
}

}  // namespace cantor
