#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cantor {

/// A finite binary string of length at most 63.
///
/// Stored as its heap index: a leading 1 followed by the bits, so the empty
/// string is 1, "0" is 2, "1" is 3, "01" is 5. Children of `code` are
/// `2*code` and `2*code+1`; the natural integer order is shortlex order.
class BitString {
 public:
  static constexpr unsigned kMaxLength = 63;

  constexpr BitString() = default;

  static BitString parse(std::string_view text);
  static constexpr BitString from_code(std::uint64_t code) { return BitString(code); }
  static BitString zeros(unsigned n);

  constexpr std::uint64_t code() const { return code_; }
  constexpr unsigned length() const { return static_cast<unsigned>(std::bit_width(code_)) - 1; }
  constexpr bool empty() const { return code_ == 1; }

  /// Bit at position i (0-based from the left).
  int bit(unsigned i) const { return static_cast<int>((code_ >> (length() - 1 - i)) & 1u); }
  int last_bit() const { return static_cast<int>(code_ & 1u); }

  BitString child(int b) const;
  BitString parent() const { return BitString(code_ >> 1); }
  BitString sibling() const { return BitString(code_ ^ 1u); }
  BitString prefix(unsigned n) const { return BitString(code_ >> (length() - n)); }

  /// Non-strict prefix relation: *this ⊆ other.
  bool is_prefix_of(const BitString& other) const;
  bool comparable(const BitString& other) const {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  std::string str() const;

  /// Lexicographic order on the bit sequences (prefixes first).
  static bool lex_less(const BitString& a, const BitString& b);

  friend constexpr auto operator<=>(const BitString&, const BitString&) = default;

 private:
  constexpr explicit BitString(std::uint64_t code) : code_(code) {}
  std::uint64_t code_ = 1;
};

/// Longest common prefix.
BitString common_prefix(const BitString& a, const BitString& b);

/// All strings of length exactly n, in lexicographic order.
std::vector<BitString> strings_of_length(unsigned n);

/// True when no element of the set is a proper prefix of another.
bool prefix_free(const std::vector<BitString>& strings);

}  // namespace cantor

template <>
struct std::hash<cantor::BitString> {
  std::size_t operator()(const cantor::BitString& s) const noexcept {
    return std::hash<std::uint64_t>()(s.code());
  }
};
