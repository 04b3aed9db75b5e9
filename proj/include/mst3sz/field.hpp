#pragma once

// Arithmetic in GF(2^n) for odd n = 2s + 1, 3 <= n <= 127.
//
// Elements are polynomials over GF(2) packed into one 128-bit word, bit i
// holding the coefficient of x^i. Multiplication is shift-and-add with
// on-the-fly reduction. Nothing here is constant time.

#include <array>
#include <compare>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mst3sz/common.hpp"

namespace mst3sz {

namespace detail {

/// a * b mod `modulus` where `modulus` has degree n and a, b < 2^n.
inline constexpr u128 clmul_mod(u128 a, u128 b, u128 modulus, unsigned n) {
  u128 acc = 0;
  for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
    acc <<= 1;
    if ((acc >> n) & 1) acc ^= modulus;
    if ((b >> i) & 1) acc ^= a;
  }
  return acc;
}

inline constexpr u128 poly_mod(u128 a, u128 b) {
  const int db = degree(b);
  for (int da = degree(a); da >= db; da = degree(a)) a ^= b << (da - db);
  return a;
}

inline constexpr u128 poly_gcd(u128 a, u128 b) {
  while (b != 0) {
    const u128 r = poly_mod(a, b);
    a = b;
    b = r;
  }
  return a;
}

/// Rabin's test: f of degree n is irreducible iff x^(2^n) = x mod f and
/// gcd(x^(2^(n/p)) - x, f) = 1 for every prime p dividing n.
inline bool is_irreducible(u128 f, unsigned n) {
  if (n < 1 || n > 127 || degree(f) != static_cast<int>(n)) return false;
  const u128 x = 2;
  std::vector<u128> frob(n + 1);
  frob[0] = x;
  for (unsigned k = 1; k <= n; ++k) frob[k] = clmul_mod(frob[k - 1], frob[k - 1], f, n);
  if (frob[n] != x) return false;
  unsigned rest = n;
  for (unsigned p = 2; p <= rest; ++p) {
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    if (poly_gcd(f, frob[n / p] ^ x) != 1) return false;
  }
  return true;
}

// Low-order terms of the lexicographically least irreducible polynomial
// x^n + ... of each odd degree n = 3, 5, ..., 127.
inline constexpr std::array<std::uint64_t, 63> kModulusTails = {
    0x3,   0x5,  0x3,  0x3,  0x5,  0x1b,  0x3,  0x9,  0x27, 0x5,  0x21,
    0x9,   0x27, 0x5,  0x9,  0x4b, 0x5,   0x3f, 0x11, 0x9,  0x59, 0x1b,
    0x21,  0x71, 0x4b, 0x47, 0x47, 0x11,  0x7b, 0x27, 0x3,  0x1b, 0x27,
    0x65,  0x2b, 0x1d, 0x4b, 0x65, 0x1d,  0x11, 0x95, 0x107, 0xa3, 0x69,
    0xed,  0x5,  0x77, 0x41, 0x4b, 0xc3,  0xbd, 0x11, 0xaf, 0x35, 0x95,
    0x2d,  0xaf, 0x27, 0x101, 0x123, 0x5, 0xaf, 0x3,
};

}  // namespace detail

inline constexpr unsigned kMinFieldBits = 3;
inline constexpr unsigned kMaxFieldBits = 127;

struct FieldParams {
  unsigned n = 0;    // extension degree, odd
  unsigned s = 0;    // n = 2s + 1
  u128 q0 = 0;       // 2^s
  u128 q = 0;        // 2^n = 2 * q0^2
  u128 modulus = 0;  // irreducible, degree n, bit n set

  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

/// Canonical modulus for degree n (see the table in the README).
inline u128 canonical_modulus(unsigned n) {
  if (n % 2 == 0 || n < kMinFieldBits || n > kMaxFieldBits) {
    throw ParamError("no canonical modulus for n = " + std::to_string(n));
  }
  return bit(n) | detail::kModulusTails[(n - kMinFieldBits) / 2];
}

/// Parameters for GF(2^n) with an explicit modulus, which must be irreducible.
inline FieldParams make_params(unsigned n, u128 modulus) {
  if (n % 2 == 0) throw ParamError("n must be odd, got " + std::to_string(n));
  if (n < kMinFieldBits || n > kMaxFieldBits) {
    throw ParamError("n must lie in [3, 127], got " + std::to_string(n));
  }
  if (!detail::is_irreducible(modulus, n)) {
    throw ParamError("modulus " + to_hex(modulus) + " is not an irreducible polynomial of degree " +
                     std::to_string(n));
  }
  FieldParams p;
  p.n = n;
  p.s = (n - 1) / 2;
  p.q0 = bit(p.s);
  p.q = bit(n);
  p.modulus = modulus;
  return p;
}

inline FieldParams make_params(unsigned n) {
  if (n % 2 == 0) throw ParamError("n must be odd, got " + std::to_string(n));
  return make_params(n, canonical_modulus(n));
}

/// An element of GF(2^n). Carries no parameters; the owning Field does.
struct FieldElement {
  u128 bits = 0;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(u128 v) : bits(v) {}

  constexpr bool is_zero() const { return bits == 0; }

  // Characteristic 2: addition and subtraction are both XOR.
  friend constexpr FieldElement operator+(FieldElement x, FieldElement y) {
    return FieldElement{x.bits ^ y.bits};
  }
  friend constexpr FieldElement operator-(FieldElement x, FieldElement y) { return x + y; }
  constexpr FieldElement& operator+=(FieldElement y) {
    bits ^= y.bits;
    return *this;
  }

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement x, FieldElement y) { return x.bits <=> y.bits; }
};

class Field {
 public:
  explicit Field(FieldParams params) : p_(params) {
    if (p_.n == 0) throw ParamError("uninitialized field parameters");
    // a -> a^(2q0) is GF(2)-linear; cache the images of the basis monomials.
    pow_2q0_columns_.resize(p_.n);
    for (unsigned i = 0; i < p_.n; ++i) {
      pow_2q0_columns_[i] = frob_pow(FieldElement{bit(i)}, p_.s + 1).bits;
    }
  }

  const FieldParams& params() const { return p_; }
  unsigned bits() const { return p_.n; }
  u128 order() const { return p_.q; }

  FieldElement zero() const { return FieldElement{0}; }
  FieldElement one() const { return FieldElement{1}; }

  /// Checked construction from a raw bit pattern.
  FieldElement element(u128 value) const {
    if (value >= p_.q) throw ParamError("value " + to_hex(value) + " does not fit in GF(2^" +
                                        std::to_string(p_.n) + ")");
    return FieldElement{value};
  }

  bool contains(FieldElement a) const { return a.bits < p_.q; }

  FieldElement add(FieldElement a, FieldElement b) const { return a + b; }
  FieldElement sub(FieldElement a, FieldElement b) const { return a + b; }

  FieldElement mul(FieldElement a, FieldElement b) const {
    return FieldElement{detail::clmul_mod(a.bits, b.bits, p_.modulus, p_.n)};
  }

  FieldElement sqr(FieldElement a) const { return mul(a, a); }

  /// Inverse by the binary-polynomial extended Euclidean algorithm.
  FieldElement inv(FieldElement a) const {
    if (a.is_zero()) throw CryptoError("inverse of zero in GF(2^" + std::to_string(p_.n) + ")");
    u128 u = a.bits;
    u128 v = p_.modulus;
    u128 g1 = 1;
    u128 g2 = 0;
    while (u != 1) {
      int j = degree(u) - degree(v);
      if (j < 0) {
        std::swap(u, v);
        std::swap(g1, g2);
        j = -j;
      }
      u ^= v << j;
      g1 ^= g2 << j;
    }
    return FieldElement{g1};
  }

  /// Inverse as a^(q-2); slower, kept as an independent cross-check of inv().
  FieldElement inv_fermat(FieldElement a) const {
    if (a.is_zero()) throw CryptoError("inverse of zero in GF(2^" + std::to_string(p_.n) + ")");
    return pow(a, p_.q - 2);
  }

  FieldElement pow(FieldElement a, u128 e) const {
    FieldElement result = one();
    for (int i = degree(e); i >= 0; --i) {
      result = sqr(result);
      if ((e >> i) & 1) result = mul(result, a);
    }
    return result;
  }

  /// a^(2^k) by k squarings.
  FieldElement frob_pow(FieldElement a, unsigned k) const {
    for (unsigned i = 0; i < k; ++i) a = sqr(a);
    return a;
  }

  /// a^(2 q0) = a^(2^(s+1)), evaluated through the cached linear map.
  FieldElement pow_2q0(FieldElement a) const {
    u128 out = 0;
    for (u128 v = a.bits; v != 0; v &= v - 1) out ^= pow_2q0_columns_[lowest_bit(v)];
    return FieldElement{out};
  }

  FieldElement pow_2q0_plus_1(FieldElement a) const { return mul(pow_2q0(a), a); }

  /// Uniform element of GF(2^n).
  template <std::uniform_random_bit_generator Rng>
  FieldElement random(Rng& rng) const {
    std::uniform_int_distribution<std::uint64_t> word;
    const u128 v = (u128{word(rng)} << 64) | u128{word(rng)};
    return FieldElement{v & (p_.q - 1)};
  }

  template <std::uniform_random_bit_generator Rng>
  FieldElement random_nonzero(Rng& rng) const {
    for (;;) {
      const FieldElement v = random(rng);
      if (!v.is_zero()) return v;
    }
  }

  friend bool operator==(const Field& x, const Field& y) { return x.p_ == y.p_; }

 private:
  FieldParams p_;
  std::vector<u128> pow_2q0_columns_;
};

}  // namespace mst3sz
