#pragma once

#include "doctest.h"
#include "oracles.hpp"

namespace doctest {
template <>
struct StringMaker<mpq_class> {
  static String convert(const mpq_class& r) { return r.get_str().c_str(); }
};
template <>
struct StringMaker<cantor::Tri> {
  static String convert(cantor::Tri t) {
    return t == cantor::Tri::True ? "True" : t == cantor::Tri::False ? "False" : "Undecided";
  }
};
template <>
struct StringMaker<cantor::BitString> {
  static String convert(const cantor::BitString& s) { return ("'" + s.str() + "'").c_str(); }
};
}  // namespace doctest

using namespace cantor;
using oracle::bs;
using Q = Rational;

inline std::vector<BitString> strs(std::initializer_list<const char*> l) {
  std::vector<BitString> v;
  for (const char* s : l) v.push_back(BitString::parse(s));
  return v;
}
