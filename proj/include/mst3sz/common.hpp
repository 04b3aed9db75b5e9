#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mst3sz {

// Field elements, nonces and cover indices for n <= 127 all fit in one word.
using u128 = unsigned __int128;

/// Base class for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad field size, bad signature type, out-of-range index or similar misuse.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// Algebraic failure: division by zero, malformed ciphertext, bad message padding.
class CryptoError : public Error {
 public:
  using Error::Error;
};

/// Truncated or inconsistent serialized data.
class ParseError : public Error {
 public:
  using Error::Error;
};

inline constexpr u128 bit(unsigned i) { return u128{1} << i; }

/// Index of the highest set bit, or -1 for zero.
inline constexpr int degree(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 127 - __builtin_clzll(hi);
  const auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return 63 - __builtin_clzll(lo);
  return -1;
}

/// Index of the lowest set bit; v must be nonzero.
inline constexpr unsigned lowest_bit(u128 v) {
  const auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return static_cast<unsigned>(__builtin_ctzll(lo));
  return 64u + static_cast<unsigned>(__builtin_ctzll(static_cast<std::uint64_t>(v >> 64)));
}

inline constexpr int popcount(u128 v) {
  return __builtin_popcountll(static_cast<std::uint64_t>(v)) +
         __builtin_popcountll(static_cast<std::uint64_t>(v >> 64));
}

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return out;
}

inline std::string to_hex(u128 v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  if (v == 0) return "0x0";
  std::string out;
  while (v != 0) {
    out.insert(out.begin(), kDigits[static_cast<int>(v & 0xf)]);
    v >>= 4;
  }
  return "0x" + out;
}

}  // namespace mst3sz
