#pragma once

// MST3-style public-key encryption over A(P_inf) with tame logarithmic
// signatures on the b coordinate (beta1, entries S(1, b, 0)) and on the
// center coordinate (beta2, entries S(1, 0, c)).
//
// Key generation, for k = 1, 2 and every block i, digit j:
//
//   gamma_k[i][j] = t_k[i]^-1 * f_k(alpha_k[i][j]) * beta_k[i][j] * t_k[i+1]
//
// with t_1[s_1] = t_2[0]. Every quantity is a product of whole group
// elements; nothing is expanded coordinate by coordinate.
//
// Encryption with nonce (R1, R2) and message m:
//
//   y1 = alpha1'(R1) * alpha2'(R2) * m
//   y2 = gamma1'(R1) * gamma2'(R2)
//   y3 = prod_i f1(alpha1[i][j_i(R1)])
//   y4 = prod_i f2(alpha2[i][j_i(R2)])
//
// y3 and y4 are products of f-images of the selected entries, not f applied
// to the product: f1 is not a homomorphism and only the product of images
// cancels against the f1 factors hidden in y2.
//
// Decryption telescopes the t-chains away:
//
//   t_1[0] * y2 * t_2[s_2]^-1 = U * V,
//   U = prod_i f1(alpha1 entry) * beta1 entry   (in U(q))
//   V = prod_i f2(alpha2 entry) * beta2 entry   (in the center of U(q))
//
// so the b coordinate of y3^-1 * U * V is beta1(R1), which factors to R1.
// Stripping gamma1'(R1) and repeating with y4 yields beta2(R2) and R2.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mst3sz/common.hpp"
#include "mst3sz/field.hpp"
#include "mst3sz/group.hpp"
#include "mst3sz/logsig.hpp"

namespace mst3sz {

struct SessionNonce {
  Index r1 = 0;
  Index r2 = 0;

  friend bool operator==(const SessionNonce&, const SessionNonce&) = default;
};

struct PublicKey {
  Group group;
  Cover alpha1;
  Cover alpha2;
  Cover gamma1;
  Cover gamma2;

  const FieldParams& params() const { return group.params(); }
};

struct PrivateKey {
  Group group;
  TameSignature beta1;
  TameSignature beta2;
  std::vector<GroupElement> t1;  // t_(0(1)), ..., t_(s(1))
  std::vector<GroupElement> t2;  // t_(0(2)), ..., t_(s(2)); t2.front() == t1.back()

  const FieldParams& params() const { return group.params(); }
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
};

struct Ciphertext {
  GroupElement y1;
  GroupElement y2;
  GroupElement y3;  // a = 1
  GroupElement y4;  // a = 1, b = 0

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Intermediate values of one decryption.
struct DecryptionTrace {
  GroupElement d1;        // t_1[0] * y2 * t_2[s]^-1 = U * V
  GroupElement d1_star;   // y3^-1 * d1; b coordinate = beta1(R1)
  GroupElement y2_strip;  // gamma1'(R1)^-1 * y2 = gamma2'(R2)
  GroupElement d2;        // t_2[0] * y2_strip * t_2[s]^-1 = V
  GroupElement d2_star;   // y4^-1 * d2; c coordinate = beta2(R2)
  SessionNonce nonce;
  GroupElement message;
};

/// S(1, b, 0): a beta1 entry as a group element.
inline GroupElement embed_b(const Group& g, FieldElement b) {
  return GroupElement{g.field().one(), b, g.field().zero()};
}

/// S(1, 0, c): a beta2 entry as a group element.
inline GroupElement embed_c(const Group& g, FieldElement c) {
  return GroupElement{g.field().one(), g.field().zero(), c};
}

inline GroupElement f1_image_product(const Group& g, const Cover& alpha1, Index r1) {
  const auto digits = tau_inv(alpha1.type, r1);
  GroupElement acc = g.identity();
  for (std::size_t i = 0; i < digits.size(); ++i) acc = g.mul(acc, g.f1(alpha1.at(i, digits[i])));
  return acc;
}

inline GroupElement f2_image_product(const Group& g, const Cover& alpha2, Index r2) {
  const auto digits = tau_inv(alpha2.type, r2);
  GroupElement acc = g.identity();
  for (std::size_t i = 0; i < digits.size(); ++i) acc = g.mul(acc, g.f2(alpha2.at(i, digits[i])));
  return acc;
}

/// gamma entries from the private data: t[i]^-1 * f(alpha[i][j]) * beta[i][j] * t[i+1].
template <class FMap, class Embed>
Cover make_gamma(const Group& g, const Cover& alpha, const TameSignature& beta,
                 const std::vector<GroupElement>& t, FMap f, Embed embed) {
  Cover gamma{alpha.type, {}};
  gamma.blocks.resize(alpha.type.blocks());
  for (std::size_t i = 0; i < alpha.type.blocks(); ++i) {
    const GroupElement left = g.inv(t[i]);
    for (std::size_t j = 0; j < alpha.type.block_size(i); ++j) {
      const GroupElement core = g.mul(f(alpha.at(i, j)), embed(beta.at(i, j)));
      gamma.blocks[i].push_back(g.mul(g.mul(left, core), t[i + 1]));
    }
  }
  return gamma;
}

template <std::uniform_random_bit_generator Rng>
KeyPair keygen(const FieldParams& params, const SignatureType& type1, const SignatureType& type2, Rng& rng) {
  type1.chunk_bits(params.n);
  type2.chunk_bits(params.n);
  const Group g(params);

  TameSignature beta1 = gen_tame(g.field(), type1, rng);
  TameSignature beta2 = gen_tame(g.field(), type2, rng);
  Cover alpha1 = gen_random_cover(g, type1, rng, Constraint::kAllNonzero);
  Cover alpha2 = gen_random_cover(g, type2, rng, Constraint::kAllNonzero);

  std::vector<GroupElement> t1;
  std::vector<GroupElement> t2;
  for (std::size_t i = 0; i <= type1.blocks(); ++i) t1.push_back(g.random_element(rng, Constraint::kNonzeroAB));
  t2.push_back(t1.back());
  for (std::size_t i = 1; i <= type2.blocks(); ++i) t2.push_back(g.random_element(rng, Constraint::kNonzeroAB));

  Cover gamma1 = make_gamma(
      g, alpha1, beta1, t1, [&](const GroupElement& e) { return g.f1(e); },
      [&](FieldElement b) { return embed_b(g, b); });
  Cover gamma2 = make_gamma(
      g, alpha2, beta2, t2, [&](const GroupElement& e) { return g.f2(e); },
      [&](FieldElement c) { return embed_c(g, c); });

  return KeyPair{
      PublicKey{g, std::move(alpha1), std::move(alpha2), std::move(gamma1), std::move(gamma2)},
      PrivateKey{g, std::move(beta1), std::move(beta2), std::move(t1), std::move(t2)},
  };
}

template <std::uniform_random_bit_generator Rng>
KeyPair keygen(const FieldParams& params, Rng& rng) {
  return keygen(params, default_type(params.n), default_type(params.n), rng);
}

template <std::uniform_random_bit_generator Rng>
SessionNonce random_nonce(const FieldParams& params, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> word;
  const u128 mask = params.q - 1;
  SessionNonce nonce;
  nonce.r1 = ((u128{word(rng)} << 64) | u128{word(rng)}) & mask;
  nonce.r2 = ((u128{word(rng)} << 64) | u128{word(rng)}) & mask;
  return nonce;
}

/// Throws ParamError unless covers have matching shapes and alpha entries are all nonzero.
inline void check_public_key(const PublicKey& pk) {
  const unsigned n = pk.params().n;
  for (const Cover* c : {&pk.alpha1, &pk.alpha2, &pk.gamma1, &pk.gamma2}) {
    c->check_shape();
    c->type.chunk_bits(n);
    for (const auto& block : c->blocks) {
      for (const auto& e : block) {
        if (!pk.group.is_valid(e)) throw ParamError("public key holds an invalid group element");
      }
    }
  }
  if (!(pk.gamma1.type == pk.alpha1.type) || !(pk.gamma2.type == pk.alpha2.type)) {
    throw ParamError("gamma and alpha covers differ in type");
  }
  for (const Cover* c : {&pk.alpha1, &pk.alpha2}) {
    for (const auto& block : c->blocks) {
      for (const auto& e : block) {
        if (e.b.is_zero() || e.c.is_zero()) throw ParamError("alpha entry with a zero coordinate");
      }
    }
  }
}

inline void check_private_key(const PrivateKey& sk) {
  const unsigned n = sk.params().n;
  if (sk.beta1.field_bits() != n || sk.beta2.field_bits() != n) {
    throw ParamError("tame signature field does not match the key");
  }
  if (sk.t1.size() != sk.beta1.type().blocks() + 1 || sk.t2.size() != sk.beta2.type().blocks() + 1) {
    throw ParamError("t-chain length does not match the signature type");
  }
  if (!(sk.t1.back() == sk.t2.front())) throw ParamError("t-chains are not linked: t_s(1) != t_0(2)");
  for (const auto* chain : {&sk.t1, &sk.t2}) {
    for (const auto& t : *chain) {
      if (!sk.group.is_valid(t) || t.b.is_zero()) throw ParamError("t-chain element must have a != 0 and b != 0");
    }
  }
}

inline void check_key_pair(const PublicKey& pk, const PrivateKey& sk) {
  if (!(pk.params() == sk.params())) throw ParamError("public and private keys use different fields");
  if (!(pk.alpha1.type == sk.beta1.type()) || !(pk.alpha2.type == sk.beta2.type())) {
    throw ParamError("public and private keys use different signature types");
  }
}

inline Ciphertext encrypt(const PublicKey& pk, const GroupElement& m, const SessionNonce& nonce) {
  const Group& g = pk.group;
  if (m.a.is_zero()) throw CryptoError("message first coordinate must be nonzero");
  if (!g.is_valid(m)) throw CryptoError("message coordinate outside the field");
  if (nonce.r1 >= pk.params().q || nonce.r2 >= pk.params().q) throw ParamError("nonce out of range");

  Ciphertext ct;
  ct.y1 = g.mul(g.mul(induced_map(g, pk.alpha1, nonce.r1), induced_map(g, pk.alpha2, nonce.r2)), m);
  ct.y2 = g.mul(induced_map(g, pk.gamma1, nonce.r1), induced_map(g, pk.gamma2, nonce.r2));
  ct.y3 = f1_image_product(g, pk.alpha1, nonce.r1);
  ct.y4 = f2_image_product(g, pk.alpha2, nonce.r2);
  return ct;
}

template <std::uniform_random_bit_generator Rng>
Ciphertext encrypt(const PublicKey& pk, const GroupElement& m, Rng& rng) {
  return encrypt(pk, m, random_nonce(pk.params(), rng));
}

/// Throws CryptoError unless the fixed coordinates of y3 and y4 hold.
inline void check_ciphertext(const Group& g, const Ciphertext& ct) {
  for (const GroupElement* y : {&ct.y1, &ct.y2, &ct.y3, &ct.y4}) {
    if (!g.is_valid(*y)) throw CryptoError("malformed ciphertext: invalid group element");
  }
  if (!g.in_unipotent(ct.y3)) throw CryptoError("malformed ciphertext: y3 must have first coordinate 1");
  if (!g.in_center(ct.y4)) throw CryptoError("malformed ciphertext: y4 must be central");
}

inline DecryptionTrace decrypt_trace(const PublicKey& pk, const PrivateKey& sk, const Ciphertext& ct) {
  check_key_pair(pk, sk);
  const Group& g = pk.group;
  check_ciphertext(g, ct);

  DecryptionTrace tr;
  const GroupElement ts_inv = g.inv(sk.t2.back());
  tr.d1 = g.mul(g.mul(sk.t1.front(), ct.y2), ts_inv);
  tr.d1_star = g.mul(g.inv(ct.y3), tr.d1);
  tr.nonce.r1 = sk.beta1.factor(tr.d1_star.b);

  tr.y2_strip = g.mul(g.inv(induced_map(g, pk.gamma1, tr.nonce.r1)), ct.y2);
  tr.d2 = g.mul(g.mul(sk.t2.front(), tr.y2_strip), ts_inv);
  tr.d2_star = g.mul(g.inv(ct.y4), tr.d2);
  tr.nonce.r2 = sk.beta2.factor(tr.d2_star.c);

  const GroupElement a1 = induced_map(g, pk.alpha1, tr.nonce.r1);
  const GroupElement a2 = induced_map(g, pk.alpha2, tr.nonce.r2);
  tr.message = g.mul(g.mul(g.inv(a2), g.inv(a1)), ct.y1);
  return tr;
}

inline GroupElement decrypt(const PublicKey& pk, const PrivateKey& sk, const Ciphertext& ct) {
  return decrypt_trace(pk, sk, ct).message;
}

// Message encoding. The 3n bits of (m1, m2, m3) hold a guard bit at the top
// of m1 (so m1 != 0) and a (3n - 1)-bit stream filled from bit 0 of m1
// upward, then m2, then m3: one length byte, then the payload bytes, then
// zero padding.

inline constexpr unsigned kMessageOverheadBits = 9;

/// Largest payload, in bytes, one message element can carry.
inline std::size_t message_capacity(const FieldParams& p) { return (3 * p.n - kMessageOverheadBits) / 8; }

namespace detail {

inline FieldElement& stream_word(GroupElement& m, unsigned n, unsigned& pos) {
  if (pos < n - 1) return m.a;
  if (pos < 2 * n - 1) {
    pos -= n - 1;
    return m.b;
  }
  pos -= 2 * n - 1;
  return m.c;
}

inline void set_stream_bit(GroupElement& m, unsigned n, unsigned pos) {
  FieldElement& w = stream_word(m, n, pos);
  w.bits |= bit(pos);
}

inline bool get_stream_bit(const GroupElement& m, unsigned n, unsigned pos) {
  GroupElement copy = m;
  const FieldElement& w = stream_word(copy, n, pos);
  return ((w.bits >> pos) & 1) != 0;
}

}  // namespace detail

inline GroupElement encode_message(const FieldParams& p, std::span<const std::uint8_t> payload) {
  if (payload.size() > message_capacity(p)) {
    throw ParamError("payload of " + std::to_string(payload.size()) + " bytes exceeds the " +
                     std::to_string(message_capacity(p)) + "-byte capacity at n = " + std::to_string(p.n));
  }
  GroupElement m{FieldElement{bit(p.n - 1)}, FieldElement{0}, FieldElement{0}};
  auto put_byte = [&](unsigned pos, std::uint8_t v) {
    for (unsigned k = 0; k < 8; ++k) {
      if ((v >> k) & 1) detail::set_stream_bit(m, p.n, pos + k);
    }
  };
  put_byte(0, static_cast<std::uint8_t>(payload.size()));
  for (std::size_t i = 0; i < payload.size(); ++i) put_byte(8 + 8 * static_cast<unsigned>(i), payload[i]);
  return m;
}

inline std::vector<std::uint8_t> decode_message(const FieldParams& p, const GroupElement& m) {
  if (((m.a.bits >> (p.n - 1)) & 1) == 0) throw CryptoError("malformed message padding: guard bit clear");
  if (m.a.bits >= p.q || m.b.bits >= p.q || m.c.bits >= p.q) {
    throw CryptoError("malformed message padding: coordinate outside the field");
  }
  auto get_byte = [&](unsigned pos) {
    std::uint8_t v = 0;
    for (unsigned k = 0; k < 8; ++k) {
      if (detail::get_stream_bit(m, p.n, pos + k)) v |= static_cast<std::uint8_t>(1u << k);
    }
    return v;
  };
  const std::size_t len = get_byte(0);
  if (len > message_capacity(p)) throw CryptoError("malformed message padding: bad length");
  std::vector<std::uint8_t> payload(len);
  for (std::size_t i = 0; i < len; ++i) payload[i] = get_byte(8 + 8 * static_cast<unsigned>(i));
  for (unsigned pos = 8 + 8 * static_cast<unsigned>(len); pos < 3 * p.n - 1; ++pos) {
    if (detail::get_stream_bit(m, p.n, pos)) throw CryptoError("malformed message padding: nonzero tail");
  }
  return payload;
}

/// True when decode_message() would accept m.
inline bool is_encoded_message(const FieldParams& p, const GroupElement& m) {
  try {
    decode_message(p, m);
    return true;
  } catch (const CryptoError&) {
    return false;
  }
}

}  // namespace mst3sz
