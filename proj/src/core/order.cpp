#include "cantor/order.hpp"

#include <sstream>

namespace cantor {

Order Order::linear(Rational slope) {
  if (sgn(slope) <= 0) throw DomainError("linear order needs a positive slope");
  Order h;
  h.kind_ = Kind::Linear;
  h.slope_ = std::move(slope);
  return h;
}

Order Order::ceil(Rational slope) {
  if (sgn(slope) <= 0) throw DomainError("ceil order needs a positive slope");
  Order h;
  h.kind_ = Kind::Ceil;
  h.slope_ = std::move(slope);
  return h;
}

Order Order::table(std::vector<Rational> values, std::optional<Rational> tail_slope) {
  if (values.empty()) throw DomainError("order table is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (sgn(values[i]) < 0) throw DomainError("order values must be nonnegative");
    if (i > 0 && values[i] < values[i - 1]) throw DomainError("order table must be nondecreasing");
  }
  if (tail_slope && sgn(*tail_slope) <= 0)
    throw DomainError("order tail slope must be positive (unbounded extension)");
  Order h;
  h.kind_ = Kind::Table;
  h.values_ = std::move(values);
  h.tail_ = std::move(tail_slope);
  return h;
}

Rational Order::operator()(unsigned n) const {
  switch (kind_) {
    case Kind::Linear:
      return Rational(slope_ * n);
    case Kind::Ceil:
      return Rational(cantor::ceil(Rational(slope_ * n)));
    case Kind::Table: {
      if (n < values_.size()) return values_[n];
      if (!tail_)
        throw DomainError("order table has " + std::to_string(values_.size()) +
                          " values and no extension; queried at n=" + std::to_string(n));
      unsigned past = n - static_cast<unsigned>(values_.size()) + 1;
      return Rational(values_.back() + *tail_ * past);
    }
  }
  return Rational(0);
}

bool Order::convex_upto(unsigned N) const {
  for (unsigned n = 0; n < N; ++n)
    if ((*this)(n + 1) > (*this)(n) + 1) return false;
  return true;
}

bool Order::convex_everywhere() const {
  switch (kind_) {
    case Kind::Linear:
    case Kind::Ceil:
      return slope_ <= 1;
    case Kind::Table:
      return convex_upto(static_cast<unsigned>(values_.size())) && tail_ && *tail_ <= 1;
  }
  return false;
}

bool Order::integer_valued_upto(unsigned N) const {
  if (kind_ == Kind::Ceil) return true;
  if (kind_ == Kind::Linear) return N == 0 || is_integer(slope_);
  for (unsigned n = 0; n <= N; ++n)
    if (!is_integer((*this)(n))) return false;
  return true;
}

std::string Order::str() const {
  switch (kind_) {
    case Kind::Linear:
      return "s=" + to_string(slope_);
    case Kind::Ceil:
      return "ceil=" + to_string(slope_);
    case Kind::Table: {
      std::string s = "table:";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) s += ",";
        s += to_string(values_[i]);
      }
      if (tail_) s += ";tail=" + to_string(*tail_);
      return s;
    }
  }
  return {};
}

bool check_convex(const Order& h, unsigned N) { return h.convex_upto(N); }

Order parse_order_flag(const std::string& text) {
  auto fail = [&] { return Error("malformed order '" + text + "'"); };
  try {
    if (text.rfind("s=", 0) == 0) {
      if (text.size() == 2) throw fail();
      return Order::linear(parse_rational(text.substr(2)));
    }
    if (text.rfind("ceil=", 0) == 0) {
      if (text.size() == 5) throw fail();
      return Order::ceil(parse_rational(text.substr(5)));
    }
    if (text.rfind("table:", 0) == 0) {
      std::string body = text.substr(6);
      std::optional<Rational> tail;
      if (auto semi = body.find(';'); semi != std::string::npos) {
        std::string ext = body.substr(semi + 1);
        body = body.substr(0, semi);
        if (ext.rfind("tail=", 0) != 0 || ext.size() == 5) throw fail();
        tail = parse_rational(ext.substr(5));
      }
      std::vector<Rational> values;
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) values.push_back(parse_rational(item));
      if (values.empty()) throw fail();
      return Order::table(std::move(values), std::move(tail));
    }
  } catch (const DomainError& e) {
    throw Error("malformed order '" + text + "': " + e.what());
  }
  throw fail();
}

}  // namespace cantor
