#include "cantor/bitstring.hpp"

#include <algorithm>

#include "cantor/numeric.hpp"

namespace cantor {

BitString BitString::parse(std::string_view text) {
  if (text.size() > kMaxLength)
    throw Error("bit string longer than " + std::to_string(kMaxLength) + ": '" + std::string(text) + "'");
  std::uint64_t code = 1;
  for (char c : text) {
    if (c != '0' && c != '1') throw Error("not a bit string: '" + std::string(text) + "'");
    code = (code << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return BitString(code);
}

BitString BitString::zeros(unsigned n) {
  if (n > kMaxLength) throw Error("bit string too long");
  return BitString(std::uint64_t{1} << n);
}

BitString BitString::child(int b) const {
  if (length() >= kMaxLength) throw Error("bit string too long");
  return BitString((code_ << 1) | static_cast<std::uint64_t>(b & 1));
}

bool BitString::is_prefix_of(const BitString& other) const {
  unsigned n = length();
  unsigned m = other.length();
  return n <= m && (other.code_ >> (m - n)) == code_;
}

std::string BitString::str() const {
  unsigned n = length();
  std::string s(n, '0');
  for (unsigned i = 0; i < n; ++i) s[i] = static_cast<char>('0' + bit(i));
  return s;
}

bool BitString::lex_less(const BitString& a, const BitString& b) {
  unsigned n = a.length();
  unsigned m = b.length();
  unsigned k = std::min(n, m);
  std::uint64_t pa = a.code_ >> (n - k);
  std::uint64_t pb = b.code_ >> (m - k);
  if (pa != pb) return pa < pb;
  return n < m;
}

BitString common_prefix(const BitString& a, const BitString& b) {
  unsigned n = std::min(a.length(), b.length());
  BitString x = a.prefix(n);
  BitString y = b.prefix(n);
  while (x != y) {
    x = x.parent();
    y = y.parent();
  }
  return x;
}

std::vector<BitString> strings_of_length(unsigned n) {
  if (n > 30) throw Error("strings_of_length: length too large to enumerate");
  std::vector<BitString> out;
  out.reserve(std::size_t{1} << n);
  std::uint64_t first = std::uint64_t{1} << n;
  for (std::uint64_t c = first; c < 2 * first; ++c) out.push_back(BitString::from_code(c));
  return out;
}

bool prefix_free(const std::vector<BitString>& strings) {
  std::vector<BitString> s = strings;
  std::sort(s.begin(), s.end(), BitString::lex_less);
  // In lexicographic order any prefix relation shows up between neighbours.
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1].is_prefix_of(s[i])) return false;
  return true;
}

}  // namespace cantor
