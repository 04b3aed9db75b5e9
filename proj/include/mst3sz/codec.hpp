#pragma once

// Binary file formats. All integers and field elements are little-endian;
// a field element takes ceil(n/8) bytes with the unused high bits zero.
//
//   header      magic "MST3SZ1" | version u8 | n u8 | modulus ceil((n+1)/8) bytes | kind u8
//   type        s u16 | r_1 ... r_s u32
//   cover       type | entries in block order, 3 field elements (a, b, c) each
//   tame sig    type | entries in block order | trapdoor: n map columns, s offsets
//   chain       count u16 | group elements
//
//   public key  header(kind 1) | alpha1 | alpha2 | gamma1 | gamma2
//   private key header(kind 2) | beta1 | beta2 | t-chain 1 | t-chain 2
//   ciphertext  header(kind 3) | y1 (a,b,c) | y2 (a,b,c) | y3 (b,c) | y4 (c)

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mst3sz/common.hpp"
#include "mst3sz/field.hpp"
#include "mst3sz/group.hpp"
#include "mst3sz/logsig.hpp"
#include "mst3sz/scheme.hpp"

namespace mst3sz {

inline constexpr std::string_view kMagic = "MST3SZ1";
inline constexpr std::uint8_t kFormatVersion = 1;

enum class FileKind : std::uint8_t {
  kPublicKey = 1,
  kPrivateKey = 2,
  kCiphertext = 3,
};

using Bytes = std::vector<std::uint8_t>;

inline std::size_t element_bytes(unsigned n) { return (n + 7) / 8; }
inline std::size_t modulus_bytes(unsigned n) { return (n + 8) / 8; }
inline std::size_t header_bytes(unsigned n) { return kMagic.size() + 3 + modulus_bytes(n); }
inline std::size_t ciphertext_bytes(unsigned n) { return header_bytes(n) + 9 * element_bytes(n); }

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }

  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }

  void le(u128 v, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void raw(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }

  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }

  u128 le(std::size_t width) {
    need(width);
    u128 v = 0;
    for (std::size_t i = 0; i < width; ++i) v |= u128{in_[pos_ + i]} << (8 * i);
    pos_ += width;
    return v;
  }

  std::string_view raw(std::size_t width) {
    need(width);
    const auto* p = reinterpret_cast<const char*>(in_.data() + pos_);
    pos_ += width;
    return {p, width};
  }

  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t width) const {
    if (in_.size() - pos_ < width) throw ParseError("truncated input");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

namespace detail {

inline void write_header(ByteWriter& w, const FieldParams& p, FileKind kind) {
  w.raw(kMagic);
  w.u8(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(p.n));
  w.le(p.modulus, modulus_bytes(p.n));
  w.u8(static_cast<std::uint8_t>(kind));
}

inline FieldParams read_header(ByteReader& r, FileKind expected) {
  if (r.raw(kMagic.size()) != kMagic) throw ParseError("bad magic");
  const std::uint8_t version = r.u8();
  if (version != kFormatVersion) throw ParseError("unsupported format version " + std::to_string(version));
  const unsigned n = r.u8();
  if (n % 2 == 0 || n < kMinFieldBits || n > kMaxFieldBits) throw ParseError("bad field size " + std::to_string(n));
  const u128 modulus = r.le(modulus_bytes(n));
  const auto kind = static_cast<FileKind>(r.u8());
  if (kind != expected) throw ParseError("unexpected file kind " + std::to_string(static_cast<int>(kind)));
  try {
    return make_params(n, modulus);
  } catch (const ParamError& e) {
    throw ParseError(e.what());
  }
}

inline void write_element(ByteWriter& w, unsigned n, FieldElement x) { w.le(x.bits, element_bytes(n)); }

inline FieldElement read_element(ByteReader& r, unsigned n) {
  const u128 v = r.le(element_bytes(n));
  if (v >= bit(n)) throw ParseError("field element has bits above degree " + std::to_string(n));
  return FieldElement{v};
}

inline void write_group_element(ByteWriter& w, unsigned n, const GroupElement& g) {
  write_element(w, n, g.a);
  write_element(w, n, g.b);
  write_element(w, n, g.c);
}

inline GroupElement read_group_element(ByteReader& r, unsigned n) {
  GroupElement g{read_element(r, n), read_element(r, n), read_element(r, n)};
  if (g.a.is_zero()) throw ParseError("group element with a = 0");
  return g;
}

inline void write_type(ByteWriter& w, const SignatureType& t) {
  w.u16(static_cast<std::uint16_t>(t.blocks()));
  for (const auto r : t.sizes()) w.u32(static_cast<std::uint32_t>(r));
}

inline SignatureType read_type(ByteReader& r, unsigned n) {
  const std::uint16_t s = r.u16();
  if (s == 0 || s > n) throw ParseError("bad block count " + std::to_string(s));
  std::vector<std::uint64_t> sizes(s);
  for (auto& ri : sizes) ri = r.u32();
  try {
    SignatureType t(std::move(sizes));
    t.chunk_bits(n);
    return t;
  } catch (const ParamError& e) {
    throw ParseError(e.what());
  }
}

inline void write_cover(ByteWriter& w, unsigned n, const Cover& c) {
  write_type(w, c.type);
  for (const auto& block : c.blocks) {
    for (const auto& e : block) write_group_element(w, n, e);
  }
}

inline Cover read_cover(ByteReader& r, unsigned n) {
  Cover c{read_type(r, n), {}};
  c.blocks.resize(c.type.blocks());
  for (std::size_t i = 0; i < c.type.blocks(); ++i) {
    for (std::uint64_t j = 0; j < c.type.block_size(i); ++j) c.blocks[i].push_back(read_group_element(r, n));
  }
  return c;
}

inline void write_tame(ByteWriter& w, const TameSignature& sig) {
  const unsigned n = sig.field_bits();
  write_type(w, sig.type());
  for (const auto& block : sig.blocks()) {
    for (const auto& e : block) write_element(w, n, e);
  }
  for (const u128 col : sig.trapdoor().map.columns()) w.le(col, element_bytes(n));
  for (const auto d : sig.trapdoor().offsets) write_element(w, n, d);
}

inline TameSignature read_tame(ByteReader& r, unsigned n) {
  const SignatureType type = read_type(r, n);
  std::vector<std::vector<FieldElement>> entries(type.blocks());
  for (std::size_t i = 0; i < type.blocks(); ++i) {
    for (std::uint64_t j = 0; j < type.block_size(i); ++j) entries[i].push_back(read_element(r, n));
  }
  std::vector<u128> cols(n);
  for (auto& col : cols) col = read_element(r, n).bits;
  TameTrapdoor td{};
  td.offsets.resize(type.blocks());
  for (auto& d : td.offsets) d = read_element(r, n);
  try {
    td.map = LinearMap(std::move(cols));
    TameSignature sig(n, type, std::move(td));
    if (sig.blocks() != entries) throw ParseError("tame signature entries disagree with their trapdoor");
    return sig;
  } catch (const ParamError& e) {
    throw ParseError(e.what());
  }
}

inline void write_chain(ByteWriter& w, unsigned n, const std::vector<GroupElement>& chain) {
  w.u16(static_cast<std::uint16_t>(chain.size()));
  for (const auto& t : chain) write_group_element(w, n, t);
}

inline std::vector<GroupElement> read_chain(ByteReader& r, unsigned n) {
  const std::uint16_t count = r.u16();
  std::vector<GroupElement> chain;
  chain.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) chain.push_back(read_group_element(r, n));
  return chain;
}

inline void expect_end(const ByteReader& r) {
  if (!r.done()) throw ParseError("trailing bytes after payload");
}

}  // namespace detail

inline Bytes serialize(const PublicKey& pk) {
  const unsigned n = pk.params().n;
  ByteWriter w;
  detail::write_header(w, pk.params(), FileKind::kPublicKey);
  for (const Cover* c : {&pk.alpha1, &pk.alpha2, &pk.gamma1, &pk.gamma2}) detail::write_cover(w, n, *c);
  return w.take();
}

inline Bytes serialize(const PrivateKey& sk) {
  const unsigned n = sk.params().n;
  ByteWriter w;
  detail::write_header(w, sk.params(), FileKind::kPrivateKey);
  detail::write_tame(w, sk.beta1);
  detail::write_tame(w, sk.beta2);
  detail::write_chain(w, n, sk.t1);
  detail::write_chain(w, n, sk.t2);
  return w.take();
}

inline Bytes serialize(const FieldParams& p, const Ciphertext& ct) {
  ByteWriter w;
  detail::write_header(w, p, FileKind::kCiphertext);
  detail::write_group_element(w, p.n, ct.y1);
  detail::write_group_element(w, p.n, ct.y2);
  detail::write_element(w, p.n, ct.y3.b);
  detail::write_element(w, p.n, ct.y3.c);
  detail::write_element(w, p.n, ct.y4.c);
  return w.take();
}

inline PublicKey parse_public_key(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const FieldParams p = detail::read_header(r, FileKind::kPublicKey);
  Cover a1 = detail::read_cover(r, p.n);
  Cover a2 = detail::read_cover(r, p.n);
  Cover g1 = detail::read_cover(r, p.n);
  Cover g2 = detail::read_cover(r, p.n);
  detail::expect_end(r);
  PublicKey pk{Group(p), std::move(a1), std::move(a2), std::move(g1), std::move(g2)};
  try {
    check_public_key(pk);
  } catch (const ParamError& e) {
    throw ParseError(e.what());
  }
  return pk;
}

inline PrivateKey parse_private_key(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const FieldParams p = detail::read_header(r, FileKind::kPrivateKey);
  TameSignature b1 = detail::read_tame(r, p.n);
  TameSignature b2 = detail::read_tame(r, p.n);
  auto t1 = detail::read_chain(r, p.n);
  auto t2 = detail::read_chain(r, p.n);
  detail::expect_end(r);
  PrivateKey sk{Group(p), std::move(b1), std::move(b2), std::move(t1), std::move(t2)};
  try {
    check_private_key(sk);
  } catch (const ParamError& e) {
    throw ParseError(e.what());
  }
  return sk;
}

struct ParsedCiphertext {
  FieldParams params;
  Ciphertext ct;
};

/// Parses a ciphertext blob; the fixed coordinates of y3 and y4 are re-imposed.
inline ParsedCiphertext parse_ciphertext(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const FieldParams p = detail::read_header(r, FileKind::kCiphertext);
  const FieldElement one{1};
  const FieldElement zero{0};
  Ciphertext ct;
  ct.y1 = detail::read_group_element(r, p.n);
  ct.y2 = detail::read_group_element(r, p.n);
  const FieldElement y3b = detail::read_element(r, p.n);
  const FieldElement y3c = detail::read_element(r, p.n);
  ct.y3 = GroupElement{one, y3b, y3c};
  ct.y4 = GroupElement{one, zero, detail::read_element(r, p.n)};
  detail::expect_end(r);
  return {p, ct};
}

// Storage accounting.

struct StorageReport {
  unsigned n = 0;
  SignatureType type1;
  SignatureType type2;
  std::size_t beta1_entries = 0;  // field elements
  std::size_t beta2_entries = 0;
  std::size_t alpha1_entries = 0;  // group elements
  std::size_t alpha2_entries = 0;
  std::size_t gamma1_entries = 0;
  std::size_t gamma2_entries = 0;
  std::size_t entry_bits = 0;  // bits per field element
  std::size_t beta_bits = 0;   // both tame signatures, entries only
  std::size_t alpha_bits = 0;  // both alpha covers
  std::size_t gamma_bits = 0;  // both gamma covers
  std::size_t public_key_bytes = 0;
  std::size_t private_key_bytes = 0;
  std::size_t ciphertext_bytes = 0;
  std::vector<std::string> notes;
};

inline StorageReport storage_report(const FieldParams& p, const SignatureType& type1, const SignatureType& type2) {
  type1.chunk_bits(p.n);
  type2.chunk_bits(p.n);
  StorageReport rep;
  rep.n = p.n;
  rep.type1 = type1;
  rep.type2 = type2;
  rep.beta1_entries = rep.alpha1_entries = rep.gamma1_entries = type1.entries();
  rep.beta2_entries = rep.alpha2_entries = rep.gamma2_entries = type2.entries();
  rep.entry_bits = p.n;
  const std::size_t total = type1.entries() + type2.entries();
  rep.beta_bits = total * p.n;
  rep.alpha_bits = 3 * total * p.n;
  rep.gamma_bits = 3 * total * p.n;

  const std::size_t eb = element_bytes(p.n);
  auto type_bytes = [](const SignatureType& t) { return 2 + 4 * t.blocks(); };
  rep.public_key_bytes = header_bytes(p.n) + 2 * (type_bytes(type1) + type_bytes(type2)) + 2 * 3 * total * eb;
  rep.private_key_bytes = header_bytes(p.n) + type_bytes(type1) + type_bytes(type2) + total * eb +
                          2 * p.n * eb + (type1.blocks() + type2.blocks()) * eb + 2 * 2 +
                          (type1.blocks() + type2.blocks() + 2) * 3 * eb;
  rep.ciphertext_bytes = ciphertext_bytes(p.n);

  const bool uniform_pairs = [&] {
    for (const auto& t : {type1, type2}) {
      for (const auto r : t.sizes()) {
        if (r != 4) return false;
      }
    }
    return true;
  }();
  if (!uniform_pairs) {
    rep.notes.push_back("odd n cannot be tiled by 2-bit blocks alone; layout deviates from uniform r_i = 4");
  }
  return rep;
}

/// Storage for the uniform r_i = 4 layout at field size `target_n`. An even
/// target cannot host the Suzuki field; the report then covers the nearest
/// odd sizes n - 1 and n + 1 with the default layout and says so.
inline std::vector<StorageReport> uniform_layout_report(unsigned target_n) {
  std::vector<StorageReport> out;
  auto add = [&](unsigned n, const std::string& note) {
    const FieldParams p = make_params(n);
    out.push_back(storage_report(p, default_type(n), default_type(n)));
    if (!note.empty()) out.back().notes.push_back(note);
  };
  if (target_n % 2 == 1) {
    add(target_n, "");
    return out;
  }
  const std::string note = "requested n = " + std::to_string(target_n) +
                           " is even, so q = 2^" + std::to_string(target_n) +
                           " admits no Suzuki function field; nearest odd realization shown";
  if (target_n - 1 >= kMinFieldBits) add(target_n - 1, note);
  if (target_n + 1 <= kMaxFieldBits) add(target_n + 1, note);
  return out;
}

}  // namespace mst3sz
