#include "cantor/numeric.hpp"

#include <mpfr.h>

#include <cctype>

namespace cantor {

Value Value::interval(Rational lo, Rational hi) {
  if (lo > hi) throw Error("Value::interval: lo > hi");
  Value v;
  v.lo_ = std::move(lo);
  v.hi_ = std::move(hi);
  v.exact_ = false;
  v.normalize();
  return v;
}

void Value::normalize() {
  if (!exact_ && lo_ == hi_) {
    exact_ = true;
    hi_ = 0;
  }
}

Rational Value::midpoint() const {
  if (exact_) return lo_;
  Rational m = (lo_ + hi_) / 2;
  m.canonicalize();
  return m;
}

Rational Value::width() const { return exact_ ? Rational(0) : Rational(hi_ - lo_); }

double Value::to_double() const { return midpoint().get_d(); }

Value Value::operator-() const {
  if (exact_) return Value(Rational(-lo_));
  return interval(-hi_, -lo_);
}

Value& Value::operator+=(const Value& o) {
  if (exact_ && o.exact_) {
    lo_ += o.lo_;
    return *this;
  }
  Rational l = lo_ + o.lo_;
  Rational h = hi() + o.hi();
  return *this = interval(std::move(l), std::move(h));
}

Value& Value::operator-=(const Value& o) {
  if (exact_ && o.exact_) {
    lo_ -= o.lo_;
    return *this;
  }
  Rational l = lo_ - o.hi();
  Rational h = hi() - o.lo_;
  return *this = interval(std::move(l), std::move(h));
}

Value& Value::operator*=(const Value& o) {
  if (exact_ && o.exact_) {
    lo_ *= o.lo_;
    return *this;
  }
  const Rational& a = lo_;
  const Rational& b = hi();
  const Rational& c = o.lo_;
  const Rational& d = o.hi();
  if (sgn(a) >= 0 && sgn(c) >= 0) {
    Rational lo = a * c;
    Rational hi = b * d;
    return *this = interval(std::move(lo), std::move(hi));
  }
  Rational p[4] = {a * c, a * d, b * c, b * d};
  Rational lo = p[0];
  Rational hi = p[0];
  for (const auto& x : p) {
    if (x < lo) lo = x;
    if (x > hi) hi = x;
  }
  return *this = interval(std::move(lo), std::move(hi));
}

Value& Value::operator/=(const Value& o) {
  if (sgn(o.lo_) <= 0 && sgn(o.hi()) >= 0) throw Error("Value: division by an enclosure containing 0");
  if (o.exact_) {
    if (exact_) {
      lo_ /= o.lo_;
      return *this;
    }
    Rational x = lo_ / o.lo_;
    Rational y = hi_ / o.lo_;
    if (x > y) std::swap(x, y);
    return *this = interval(std::move(x), std::move(y));
  }
  Rational inv_lo = 1 / o.hi();
  Rational inv_hi = 1 / o.lo_;
  return *this *= interval(std::move(inv_lo), std::move(inv_hi));
}

bool Value::same_as(const Value& o) const {
  return exact_ == o.exact_ && lo_ == o.lo_ && hi() == o.hi();
}

std::string Value::str() const {
  if (exact_) return to_string(lo_);
  return "[" + to_string(lo_) + ", " + to_string(hi_) + "]";
}

Value min(const Value& a, const Value& b) {
  if (a.exact() && b.exact()) return a.lo() <= b.lo() ? a : b;
  if (a.hi() <= b.lo()) return a;
  if (b.hi() <= a.lo()) return b;
  return Value::interval(a.lo() < b.lo() ? a.lo() : b.lo(), a.hi() < b.hi() ? a.hi() : b.hi());
}

Value max(const Value& a, const Value& b) {
  if (a.exact() && b.exact()) return a.lo() >= b.lo() ? a : b;
  if (a.lo() >= b.hi()) return a;
  if (b.lo() >= a.hi()) return b;
  return Value::interval(a.lo() > b.lo() ? a.lo() : b.lo(), a.hi() > b.hi() ? a.hi() : b.hi());
}

Tri less(const Value& a, const Value& b) {
  if (a.hi() < b.lo()) return Tri::True;
  if (a.lo() >= b.hi()) return Tri::False;
  return Tri::Undecided;
}

Tri less_equal(const Value& a, const Value& b) {
  if (a.hi() <= b.lo()) return Tri::True;
  if (a.lo() > b.hi()) return Tri::False;
  return Tri::Undecided;
}

Rational pow2_exact(long k) {
  Rational r(1);
  if (k >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-k));
  }
  return r;
}

namespace {

// Enclosure of 2^f for 0 < f < 1.
std::pair<Rational, Rational> pow2_fraction(const Rational& f, unsigned bits) {
  mpfr_t flo, fhi, ylo, yhi;
  mpfr_inits2(static_cast<mpfr_prec_t>(bits), flo, fhi, ylo, yhi, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(flo, f.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(fhi, f.get_mpq_t(), MPFR_RNDU);
  mpfr_exp2(ylo, flo, MPFR_RNDD);
  mpfr_exp2(yhi, fhi, MPFR_RNDU);
  Rational lo, hi;
  mpfr_get_q(lo.get_mpq_t(), ylo);
  mpfr_get_q(hi.get_mpq_t(), yhi);
  mpfr_clears(flo, fhi, ylo, yhi, static_cast<mpfr_ptr>(nullptr));
  return {std::move(lo), std::move(hi)};
}

}  // namespace

Value pow2(const Rational& x, unsigned bits) {
  Integer k = floor(x);
  Rational frac = x - Rational(k);
  Rational scale = pow2_exact(k.get_si());
  if (sgn(frac) == 0) return Value(scale);
  auto [lo, hi] = pow2_fraction(frac, bits);
  return Value::interval(lo * scale, hi * scale);
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return Error("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  auto digits_ok = [](std::string_view d, bool allow_sign) {
    if (d.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (d[0] == '-' || d[0] == '+')) i = 1;
    if (i == d.size()) return false;
    for (; i < d.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    return true;
  };
  Rational r;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg || (!ip.empty() && ip[0] == '+')) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    if (!digits_ok(ip, false) || !digits_ok(fp, false)) throw bad();
    Integer num(ip + fp, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    r = Rational(num, den);
    if (neg) r = -r;
  } else if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string n = s.substr(0, slash);
    std::string d = s.substr(slash + 1);
    if (!digits_ok(n, true) || !digits_ok(d, false)) throw bad();
    if (n[0] == '+') n = n.substr(1);
    Integer den(d, 10);
    if (den == 0) throw bad();
    r = Rational(Integer(n, 10), den);
  } else {
    if (!digits_ok(s, true)) throw bad();
    if (s[0] == '+') s = s.substr(1);
    r = Rational(Integer(s, 10));
  }
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_str();
}

}  // namespace cantor
