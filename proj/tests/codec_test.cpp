#include <gtest/gtest.h>

#include <random>

#include "mst3sz/codec.hpp"
#include "test_util.hpp"

using namespace mst3sz;

namespace {

SignatureType type_of(std::vector<std::uint64_t> r) { return SignatureType(std::move(r)); }

bool same_public(const PublicKey& x, const PublicKey& y) {
  return x.params() == y.params() && x.alpha1 == y.alpha1 && x.alpha2 == y.alpha2 && x.gamma1 == y.gamma1 &&
         x.gamma2 == y.gamma2;
}

bool same_private(const PrivateKey& x, const PrivateKey& y) {
  return x.params() == y.params() && x.beta1 == y.beta1 && x.beta2 == y.beta2 && x.t1 == y.t1 && x.t2 == y.t2;
}

}  // namespace

TEST(Codec, SizeHelpers) {
  EXPECT_EQ(element_bytes(3), 1u);
  EXPECT_EQ(element_bytes(65), 9u);
  EXPECT_EQ(modulus_bytes(7), 1u);
  EXPECT_EQ(modulus_bytes(63), 8u);
  EXPECT_EQ(modulus_bytes(127), 16u);
  EXPECT_EQ(header_bytes(3), 11u);
  EXPECT_EQ(ciphertext_bytes(3), 20u);
  EXPECT_EQ(ciphertext_bytes(65), header_bytes(65) + 81u);
}

TEST(Codec, HeaderLayout) {
  std::mt19937_64 rng(71);
  const auto kp = keygen(make_params(3), rng);
  const auto ct = encrypt(kp.pub, kp.pub.group.element(1, 2, 3), rng);
  const auto blob = serialize(kp.pub.params(), ct);
  ASSERT_EQ(blob.size(), 20u);
  EXPECT_EQ(std::string(blob.begin(), blob.begin() + 7), "MST3SZ1");
  EXPECT_EQ(blob[7], 1);       // version
  EXPECT_EQ(blob[8], 3);       // n
  EXPECT_EQ(blob[9], 0b1011);  // modulus
  EXPECT_EQ(blob[10], 3);      // ciphertext kind
  EXPECT_EQ(blob[11], ct.y1.a.bits);
  EXPECT_EQ(blob[19], ct.y4.c.bits);
}

TEST(Codec, RoundTripAcrossSizes) {
  std::mt19937_64 rng(72);
  for (const unsigned n : testutil::kSampleSizes) {
    const auto p = make_params(n);
    const auto kp = keygen(p, rng);
    const auto pub_blob = serialize(kp.pub);
    const auto priv_blob = serialize(kp.priv);
    const auto pk = parse_public_key(pub_blob);
    const auto sk = parse_private_key(priv_blob);
    EXPECT_TRUE(same_public(pk, kp.pub)) << n;
    EXPECT_TRUE(same_private(sk, kp.priv)) << n;
    EXPECT_EQ(serialize(pk), pub_blob);
    EXPECT_EQ(serialize(sk), priv_blob);

    const auto rep = storage_report(p, default_type(n), default_type(n));
    EXPECT_EQ(pub_blob.size(), rep.public_key_bytes) << n;
    EXPECT_EQ(priv_blob.size(), rep.private_key_bytes) << n;

    for (int i = 0; i < 20; ++i) {
      const auto m = kp.pub.group.random_element(rng);
      const auto ct = encrypt(kp.pub, m, rng);
      const auto blob = serialize(p, ct);
      ASSERT_EQ(blob.size(), ciphertext_bytes(n));
      const auto parsed = parse_ciphertext(blob);
      ASSERT_EQ(parsed.params, p);
      ASSERT_EQ(parsed.ct, ct);
      ASSERT_EQ(serialize(p, parsed.ct), blob);
      ASSERT_EQ(decrypt(pk, sk, parsed.ct), m);
    }
  }
}

TEST(Codec, NonDefaultTypesRoundTrip) {
  std::mt19937_64 rng(73);
  const auto p = make_params(3);
  const auto kp = keygen(p, type_of({2, 2, 2}), type_of({2, 4}), rng);
  const auto pk = parse_public_key(serialize(kp.pub));
  const auto sk = parse_private_key(serialize(kp.priv));
  EXPECT_TRUE(same_public(pk, kp.pub));
  EXPECT_TRUE(same_private(sk, kp.priv));
  const auto rep = storage_report(p, type_of({2, 2, 2}), type_of({2, 4}));
  EXPECT_EQ(serialize(kp.pub).size(), rep.public_key_bytes);
  EXPECT_EQ(serialize(kp.priv).size(), rep.private_key_bytes);
}

TEST(Codec, CorruptionRejected) {
  std::mt19937_64 rng(74);
  const auto p = make_params(3);
  const auto kp = keygen(p, type_of({2, 2, 2}), type_of({2, 2, 2}), rng);
  const auto pub = serialize(kp.pub);
  const auto priv = serialize(kp.priv);
  const auto ct = serialize(p, encrypt(kp.pub, kp.pub.group.element(1, 2, 3), rng));

  auto expect_parse_error = [](auto parse, Bytes b) { EXPECT_THROW(parse(b), ParseError); };
  auto pp = [](const Bytes& b) { return parse_public_key(b); };
  auto ps = [](const Bytes& b) { return parse_private_key(b); };
  auto pc = [](const Bytes& b) { return parse_ciphertext(b); };

  for (const Bytes* blob : {&pub, &priv, &ct}) {
    auto parse_any = [&](const Bytes& b) {
      if (blob == &pub) return (void)pp(b);
      if (blob == &priv) return (void)ps(b);
      (void)pc(b);
    };
    {
      Bytes b = *blob;
      b[0] = 'X';
      expect_parse_error(parse_any, b);  // magic
    }
    {
      Bytes b = *blob;
      b[7] = 2;
      expect_parse_error(parse_any, b);  // version
    }
    {
      Bytes b = *blob;
      b[8] = 4;
      expect_parse_error(parse_any, b);  // even n
    }
    {
      Bytes b = *blob;
      b[9] = 0b1001;
      expect_parse_error(parse_any, b);  // reducible modulus
    }
    {
      Bytes b = *blob;
      b.pop_back();
      expect_parse_error(parse_any, b);  // truncated
    }
    {
      Bytes b = *blob;
      b.push_back(0);
      expect_parse_error(parse_any, b);  // trailing
    }
    {
      Bytes b(blob->begin(), blob->begin() + 5);
      expect_parse_error(parse_any, b);
    }
  }

  // wrong kind
  expect_parse_error(pp, priv);
  expect_parse_error(ps, ct);
  expect_parse_error(pc, pub);

  // header 11, type 2 + 3 * 4 = 14, first alpha entry starts at 25
  {
    Bytes b = pub;
    b[25] = 0;
    expect_parse_error(pp, b);  // a = 0
  }
  {
    Bytes b = pub;
    b[26] = 0x08;
    expect_parse_error(pp, b);  // bit above degree
  }
  {
    Bytes b = pub;
    b[27] = 0;
    expect_parse_error(pp, b);  // alpha entry with c = 0
  }
  {
    Bytes b = pub;
    b[13] = 3;
    expect_parse_error(pp, b);  // block size 3 does not cover the field
  }
  {
    Bytes b = priv;
    b[25] ^= 1;
    expect_parse_error(ps, b);  // tame entry disagrees with the trapdoor
  }
  {
    Bytes b = ct;
    b[11] = 0;
    expect_parse_error(pc, b);  // y1.a = 0
  }
}

TEST(Codec, PrivateKeyChainMismatchRejected) {
  std::mt19937_64 rng(75);
  const auto p = make_params(3);
  auto kp = keygen(p, rng);
  kp.priv.t2.front() = kp.pub.group.element(1, 1, 1);
  ASSERT_NE(kp.priv.t2.front(), kp.priv.t1.back());
  EXPECT_THROW(parse_private_key(serialize(kp.priv)), ParseError);
}

TEST(Codec, CiphertextCompressionReimposesFixedCoordinates) {
  std::mt19937_64 rng(76);
  const auto p = make_params(5);
  const auto kp = keygen(p, rng);
  const auto ct = encrypt(kp.pub, kp.pub.group.random_element(rng), rng);
  auto altered = ct;
  altered.y3.a = FieldElement{7};
  altered.y4.a = FieldElement{3};
  altered.y4.b = FieldElement{9};
  // Only y3.(b,c) and y4.c are stored.
  EXPECT_EQ(serialize(p, altered), serialize(p, ct));
  EXPECT_EQ(parse_ciphertext(serialize(p, altered)).ct, ct);
}

TEST(StorageReport, N3) {
  const auto rep = storage_report(make_params(3), type_of({2, 2, 2}), type_of({2, 2, 2}));
  EXPECT_EQ(rep.beta1_entries, 6u);
  EXPECT_EQ(rep.entry_bits, 3u);
  EXPECT_EQ(rep.alpha1_entries, 6u);
  EXPECT_EQ(rep.gamma2_entries, 6u);
  EXPECT_EQ(rep.beta_bits, 36u);
  EXPECT_EQ(rep.alpha_bits, 108u);
  EXPECT_EQ(rep.ciphertext_bytes, 20u);
  EXPECT_FALSE(rep.notes.empty());
}

TEST(StorageReport, N65DefaultLayout) {
  const auto rep = storage_report(make_params(65), default_type(65), default_type(65));
  EXPECT_EQ(rep.beta1_entries, 31u * 4 + 8);
  EXPECT_EQ(rep.beta1_entries, 132u);
  EXPECT_EQ(rep.entry_bits, 65u);
  EXPECT_EQ(rep.ciphertext_bytes, header_bytes(65) + 9u * 9);
}

TEST(StorageReport, EvenTargetReportsNeighbours) {
  const auto reps = uniform_layout_report(64);
  ASSERT_EQ(reps.size(), 2u);
  EXPECT_EQ(reps[0].n, 63u);
  EXPECT_EQ(reps[1].n, 65u);
  EXPECT_EQ(reps[0].beta1_entries, 30u * 4 + 8);
  for (const auto& r : reps) {
    ASSERT_FALSE(r.notes.empty());
    EXPECT_NE(r.notes.back().find("even"), std::string::npos);
  }
  const auto odd = uniform_layout_report(9);
  ASSERT_EQ(odd.size(), 1u);
  EXPECT_EQ(odd[0].n, 9u);
}

TEST(StorageReport, InvalidTypesRejected) {
  EXPECT_THROW(storage_report(make_params(5), type_of({4, 4}), default_type(5)), ParamError);
}
