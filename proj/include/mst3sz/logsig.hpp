#pragma once

// Logarithmic signatures and covers.
//
// A signature type (r_1, ..., r_s) indexes Z_m, m = r_1 * ... * r_s, by
// mixed-radix digits with j_1 the least significant digit:
//
//   tau(j_1, ..., j_s) = sum_i j_i * m_i,   m_1 = 1, m_i = r_1 * ... * r_(i-1).
//
// A cover assigns a group element to every (block, digit) pair; its induced
// map sends x to the left-to-right product of the entries selected by
// tau^-1(x).
//
// Tame signatures live in the additive group of GF(2^n). The canonical
// transversal gives block i a chunk of h_i = log2(r_i) bits and entry j the
// value j << offset_i, so the blockwise sum of a selection reproduces the
// bit pattern of the index. A secret invertible GF(2)-linear map L and
// per-block offsets d_i disguise the blocks:
//
//   b_ij = L(j << offset_i) + d_i,   sum_i b_(i, j_i(R)) = L(R) + sum_i d_i,
//
// so factoring is R = L^-1(v + sum_i d_i).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mst3sz/common.hpp"
#include "mst3sz/field.hpp"
#include "mst3sz/group.hpp"

namespace mst3sz {

/// Index into Z_m for m <= 2^127.
using Index = u128;

class SignatureType {
 public:
  static constexpr std::uint64_t kMaxBlockSize = std::numeric_limits<std::uint32_t>::max();

  SignatureType() = default;

  explicit SignatureType(std::vector<std::uint64_t> sizes) : r_(std::move(sizes)) {
    if (r_.empty()) throw ParamError("signature type needs at least one block");
    radix_.reserve(r_.size());
    u128 m = 1;
    for (const std::uint64_t ri : r_) {
      if (ri < 2) throw ParamError("block size must be at least 2");
      if (ri > kMaxBlockSize) throw ParamError("block size " + std::to_string(ri) + " too large");
      radix_.push_back(m);
      if (m > (bit(127) / ri)) throw ParamError("signature type order exceeds 2^127");
      m *= ri;
    }
    m_ = m;
  }

  std::size_t blocks() const { return r_.size(); }
  std::uint64_t block_size(std::size_t i) const { return r_.at(i); }
  const std::vector<std::uint64_t>& sizes() const { return r_; }

  /// m = r_1 * ... * r_s.
  Index order() const { return m_; }

  /// m_i = r_1 * ... * r_(i-1) (zero-based i).
  Index radix(std::size_t i) const { return radix_.at(i); }

  /// Total number of entries, sum of r_i.
  std::size_t entries() const { return std::accumulate(r_.begin(), r_.end(), std::size_t{0}); }

  /// True when every r_i is a power of two and the chunk widths sum to n.
  bool covers_field(unsigned n) const {
    unsigned total = 0;
    for (const std::uint64_t ri : r_) {
      if ((ri & (ri - 1)) != 0) return false;
      total += static_cast<unsigned>(__builtin_ctzll(ri));
    }
    return total == n;
  }

  /// h_i = log2(r_i); throws unless the type covers GF(2^n).
  std::vector<unsigned> chunk_bits(unsigned n) const {
    if (!covers_field(n)) {
      throw ParamError("signature type " + to_string() + " does not cover GF(2^" + std::to_string(n) + ")");
    }
    std::vector<unsigned> h;
    h.reserve(r_.size());
    for (const std::uint64_t ri : r_) h.push_back(static_cast<unsigned>(__builtin_ctzll(ri)));
    return h;
  }

  std::string to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < r_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(r_[i]);
    }
    return out + ")";
  }

  friend bool operator==(const SignatureType& x, const SignatureType& y) { return x.r_ == y.r_; }

 private:
  std::vector<std::uint64_t> r_;
  std::vector<Index> radix_;
  Index m_ = 0;
};

/// (n - 3) / 2 blocks of 2 bits followed by one block of 3 bits.
inline SignatureType default_type(unsigned n) {
  if (n % 2 == 0 || n < kMinFieldBits) throw ParamError("default type needs odd n >= 3");
  std::vector<std::uint64_t> r((n - 3) / 2, 4);
  r.push_back(8);
  return SignatureType(std::move(r));
}

inline Index tau(const SignatureType& type, std::span<const std::uint64_t> digits) {
  if (digits.size() != type.blocks()) throw ParamError("digit count does not match signature type");
  Index x = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= type.block_size(i)) throw ParamError("digit out of range for block " + std::to_string(i));
    x += Index{digits[i]} * type.radix(i);
  }
  return x;
}

inline std::vector<std::uint64_t> tau_inv(const SignatureType& type, Index x) {
  if (x >= type.order()) throw ParamError("index " + to_string(x) + " out of range for type " + type.to_string());
  std::vector<std::uint64_t> digits(type.blocks());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const std::uint64_t r = type.block_size(i);
    digits[i] = static_cast<std::uint64_t>(x % r);
    x /= r;
  }
  return digits;
}

/// Blocks of group elements of a declared type (random covers and their
/// gamma transforms).
struct Cover {
  SignatureType type;
  std::vector<std::vector<GroupElement>> blocks;

  const GroupElement& at(std::size_t i, std::size_t j) const { return blocks.at(i).at(j); }

  /// Throws unless block lengths match the type.
  void check_shape() const {
    if (blocks.size() != type.blocks()) throw ParamError("cover block count does not match its type");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (blocks[i].size() != type.block_size(i)) {
        throw ParamError("cover block " + std::to_string(i) + " has wrong length");
      }
    }
  }

  friend bool operator==(const Cover&, const Cover&) = default;
};

/// The entries selected by tau^-1(x), one per block.
inline std::vector<GroupElement> select_entries(const Cover& cover, Index x) {
  const auto digits = tau_inv(cover.type, x);
  std::vector<GroupElement> out;
  out.reserve(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) out.push_back(cover.at(i, digits[i]));
  return out;
}

/// Induced map alpha'(x) = a_(1,j_1) * a_(2,j_2) * ... * a_(s,j_s).
inline GroupElement induced_map(const Group& group, const Cover& cover, Index x) {
  const auto digits = tau_inv(cover.type, x);
  GroupElement acc = cover.at(0, digits[0]);
  for (std::size_t i = 1; i < digits.size(); ++i) acc = group.mul(acc, cover.at(i, digits[i]));
  return acc;
}

template <std::uniform_random_bit_generator Rng>
Cover gen_random_cover(const Group& group, const SignatureType& type, Rng& rng,
                       Constraint constraint = Constraint::kAllNonzero) {
  Cover cover{type, {}};
  cover.blocks.resize(type.blocks());
  for (std::size_t i = 0; i < type.blocks(); ++i) {
    cover.blocks[i].reserve(type.block_size(i));
    for (std::uint64_t j = 0; j < type.block_size(i); ++j) {
      cover.blocks[i].push_back(group.random_element(rng, constraint));
    }
  }
  return cover;
}

/// Invertible GF(2)-linear map on n-bit vectors, stored by columns.
class LinearMap {
 public:
  LinearMap() = default;

  /// Columns are the images of the unit vectors e_0, ..., e_(n-1).
  explicit LinearMap(std::vector<u128> columns) : cols_(std::move(columns)) {
    if (cols_.empty() || cols_.size() > kMaxFieldBits) throw ParamError("linear map dimension out of range");
    const u128 mask = bit(static_cast<unsigned>(cols_.size())) - 1;
    for (const u128 c : cols_) {
      if ((c & ~mask) != 0) throw ParamError("linear map column exceeds its dimension");
    }
  }

  static LinearMap identity(unsigned n) {
    std::vector<u128> cols(n);
    for (unsigned i = 0; i < n; ++i) cols[i] = bit(i);
    return LinearMap(std::move(cols));
  }

  /// Uniform over GL(n, 2) by rejection.
  template <std::uniform_random_bit_generator Rng>
  static LinearMap random_invertible(unsigned n, Rng& rng) {
    std::uniform_int_distribution<std::uint64_t> word;
    const u128 mask = bit(n) - 1;
    for (;;) {
      std::vector<u128> cols(n);
      for (auto& c : cols) c = ((u128{word(rng)} << 64) | u128{word(rng)}) & mask;
      LinearMap m(std::move(cols));
      if (m.is_invertible()) return m;
    }
  }

  unsigned dimension() const { return static_cast<unsigned>(cols_.size()); }
  const std::vector<u128>& columns() const { return cols_; }

  u128 apply(u128 v) const {
    u128 out = 0;
    for (; v != 0; v &= v - 1) out ^= cols_.at(lowest_bit(v));
    return out;
  }

  bool is_invertible() const { return invert_columns().has_value(); }

  LinearMap inverse() const {
    auto inv = invert_columns();
    if (!inv) throw ParamError("linear map is singular");
    return LinearMap(std::move(*inv));
  }

  friend bool operator==(const LinearMap&, const LinearMap&) = default;

 private:
  // Column-wise Gauss-Jordan: reduce the columns to the unit vectors while
  // replaying every column operation on the identity.
  std::optional<std::vector<u128>> invert_columns() const {
    const auto n = cols_.size();
    std::vector<u128> a = cols_;
    std::vector<u128> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = bit(static_cast<unsigned>(i));
    for (std::size_t row = 0; row < n; ++row) {
      std::size_t pivot = row;
      while (pivot < n && ((a[pivot] >> row) & 1) == 0) ++pivot;
      if (pivot == n) return std::nullopt;
      std::swap(a[row], a[pivot]);
      std::swap(e[row], e[pivot]);
      for (std::size_t k = 0; k < n; ++k) {
        if (k != row && ((a[k] >> row) & 1)) {
          a[k] ^= a[row];
          e[k] ^= e[row];
        }
      }
    }
    return e;
  }

  std::vector<u128> cols_;
};

/// Secret data that makes a tame signature factorable.
struct TameTrapdoor {
  LinearMap map;                      // L
  std::vector<FieldElement> offsets;  // d_i, one per block

  friend bool operator==(const TameTrapdoor&, const TameTrapdoor&) = default;
};

/// A tame logarithmic signature for (GF(2^n), +).
class TameSignature {
 public:
  TameSignature() = default;

  /// Builds the blocks b_ij = L(j << offset_i) + d_i from the trapdoor.
  TameSignature(unsigned n, SignatureType type, TameTrapdoor trapdoor)
      : n_(n), type_(std::move(type)), trapdoor_(std::move(trapdoor)) {
    const auto h = type_.chunk_bits(n_);
    if (trapdoor_.map.dimension() != n_) throw ParamError("trapdoor map dimension does not match the field");
    if (trapdoor_.offsets.size() != type_.blocks()) throw ParamError("trapdoor needs one offset per block");
    for (const auto d : trapdoor_.offsets) {
      if (d.bits >= bit(n_)) throw ParamError("trapdoor offset outside the field");
    }
    inverse_ = trapdoor_.map.inverse();
    blocks_.resize(type_.blocks());
    unsigned shift = 0;
    for (std::size_t i = 0; i < type_.blocks(); ++i) {
      blocks_[i].reserve(type_.block_size(i));
      for (std::uint64_t j = 0; j < type_.block_size(i); ++j) {
        blocks_[i].push_back(FieldElement{trapdoor_.map.apply(u128{j} << shift)} + trapdoor_.offsets[i]);
      }
      shift += h[i];
    }
    for (const auto d : trapdoor_.offsets) offset_sum_ += d;
  }

  unsigned field_bits() const { return n_; }
  const SignatureType& type() const { return type_; }
  const TameTrapdoor& trapdoor() const { return trapdoor_; }
  const std::vector<std::vector<FieldElement>>& blocks() const { return blocks_; }
  const FieldElement& at(std::size_t i, std::size_t j) const { return blocks_.at(i).at(j); }

  /// Sum over blocks of the selected entries.
  FieldElement evaluate(Index r) const {
    const auto digits = tau_inv(type_, r);
    FieldElement acc;
    for (std::size_t i = 0; i < digits.size(); ++i) acc += blocks_[i][digits[i]];
    return acc;
  }

  /// The unique R with evaluate(R) = v.
  Index factor(FieldElement v) const {
    if (v.bits >= bit(n_)) throw ParamError("value outside the field");
    const u128 canonical = inverse_.apply((v + offset_sum_).bits);
    const auto h = type_.chunk_bits(n_);
    std::vector<std::uint64_t> digits(h.size());
    unsigned shift = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      digits[i] = static_cast<std::uint64_t>((canonical >> shift) & (bit(h[i]) - 1));
      shift += h[i];
    }
    return tau(type_, digits);
  }

  friend bool operator==(const TameSignature& x, const TameSignature& y) {
    return x.n_ == y.n_ && x.type_ == y.type_ && x.trapdoor_ == y.trapdoor_;
  }

 private:
  unsigned n_ = 0;
  SignatureType type_;
  TameTrapdoor trapdoor_;
  LinearMap inverse_;
  std::vector<std::vector<FieldElement>> blocks_;
  FieldElement offset_sum_;
};

inline FieldElement evaluate_tame(const TameSignature& sig, Index r) { return sig.evaluate(r); }
inline Index factor_tame(const TameSignature& sig, FieldElement v) { return sig.factor(v); }

template <std::uniform_random_bit_generator Rng>
TameSignature gen_tame(const Field& field, const SignatureType& type, Rng& rng) {
  const unsigned n = field.bits();
  type.chunk_bits(n);
  TameTrapdoor td{LinearMap::random_invertible(n, rng), {}};
  td.offsets.reserve(type.blocks());
  for (std::size_t i = 0; i < type.blocks(); ++i) td.offsets.push_back(field.random(rng));
  return TameSignature(n, type, std::move(td));
}

}  // namespace mst3sz
