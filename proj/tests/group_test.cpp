#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "mst3sz/group.hpp"
#include "test_util.hpp"

using namespace mst3sz;

namespace {

const FieldParams kP3 = make_params(3);

// GF(64) = GF(2)[w]/(w^6 + w + 1) via the oracle; GF(8) sits inside as the
// fixed field of z -> z^8.
struct Gf64 {
  oracle::Field f{6, 0b1000011};
  u128 add(u128 a, u128 b) const { return f.add(a, b); }
  u128 mul(u128 a, u128 b) const { return f.mul(a, b); }
  u128 frob_pow(u128 a, unsigned k) const { return f.frob_pow(a, k); }
};

struct Pt64 {
  u128 x, y;
};

}  // namespace

TEST(GroupLaw, Examples) {
  const Group g(kP3);
  const auto e = g.identity();
  EXPECT_EQ(e, g.element(1, 0, 0));
  const auto x = g.element(1, 1, 0);
  EXPECT_EQ(g.mul(x, x), g.element(1, 0, 1));
  const auto h = g.element(3, 5, 6);
  EXPECT_EQ(g.mul(h, e), h);
  EXPECT_EQ(g.mul(e, h), h);
  EXPECT_EQ(g.mul(h, g.inv(h)), e);
  EXPECT_EQ(g.mul(g.inv(h), h), e);
}

TEST(GroupLaw, InvalidElementsRejected) {
  const Group g(kP3);
  EXPECT_THROW(g.element(0, 1, 1), ParamError);
  EXPECT_THROW(g.element(1, 8, 0), ParamError);
  EXPECT_THROW(g.element(1, 0, 9), ParamError);
  EXPECT_FALSE(g.is_valid(GroupElement{FieldElement{0}, FieldElement{0}, FieldElement{0}}));
}

TEST(GroupLaw, MulAndInvMatchOracleExhaustivelyAtQ8) {
  const Group g(kP3);
  const auto ref = testutil::oracle_group(kP3);
  const auto all = testutil::all_elements(g);
  ASSERT_EQ(all.size(), 448u);
  for (const auto& x : all) {
    ASSERT_EQ(testutil::to_triple(g.inv(x)), ref.inv(testutil::to_triple(x)));
    for (const auto& y : all) {
      ASSERT_EQ(testutil::to_triple(g.mul(x, y)), ref.mul(testutil::to_triple(x), testutil::to_triple(y)));
    }
  }
}

TEST(GroupLaw, MulAndInvMatchOracleRandomized) {
  std::mt19937_64 rng(21);
  for (const unsigned n : testutil::kSampleSizes) {
    const auto p = make_params(n);
    const Group g(p);
    const auto ref = testutil::oracle_group(p);
    for (int i = 0; i < 200; ++i) {
      const auto x = g.random_element(rng);
      const auto y = g.random_element(rng);
      ASSERT_EQ(testutil::to_triple(g.mul(x, y)), ref.mul(testutil::to_triple(x), testutil::to_triple(y)));
      ASSERT_EQ(testutil::to_triple(g.inv(x)), ref.inv(testutil::to_triple(x)));
    }
  }
}

TEST(GroupLaw, AxiomsRandomized) {
  std::mt19937_64 rng(22);
  for (const unsigned n : testutil::kSampleSizes) {
    const Group g(make_params(n));
    for (int i = 0; i < 2000; ++i) {
      const auto x = g.random_element(rng);
      const auto y = g.random_element(rng);
      const auto z = g.random_element(rng);
      ASSERT_EQ(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z))) << "n=" << n;
      ASSERT_EQ(g.mul(x, g.inv(x)), g.identity());
      ASSERT_EQ(g.inv(g.mul(x, y)), g.mul(g.inv(y), g.inv(x)));
    }
  }
}

TEST(GroupLaw, UnipotentAxiomsExhaustive) {
  const Group g(kP3);
  const auto u = testutil::unipotent_elements(g);
  ASSERT_EQ(u.size(), 64u);
  for (const auto& x : u) {
    ASSERT_TRUE(g.in_unipotent(g.inv(x)));
    for (const auto& y : u) {
      ASSERT_TRUE(g.in_unipotent(g.mul(x, y)));
      for (const auto& z : u) ASSERT_EQ(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
    }
  }
}

TEST(GroupAction, ApplyPointExamples) {
  const Group g(kP3);
  const CurvePoint origin{FieldElement{0}, FieldElement{0}};
  EXPECT_EQ(g.apply_point(g.identity(), origin), origin);
  EXPECT_EQ(g.apply_point(g.element(1, 0, 5), origin), (CurvePoint{FieldElement{0}, FieldElement{5}}));
  EXPECT_EQ(g.apply_point(g.element(1, 3, 0), origin), (CurvePoint{FieldElement{3}, FieldElement{0}}));
}

TEST(GroupAction, ProductActsAsComposition) {
  std::mt19937_64 rng(23);
  for (const unsigned n : testutil::kSampleSizes) {
    const Group g(make_params(n));
    for (int i = 0; i < 500; ++i) {
      const auto x = g.random_element(rng);
      const auto y = g.random_element(rng);
      const CurvePoint p{g.field().random(rng), g.field().random(rng)};
      ASSERT_EQ(g.apply_point(g.mul(x, y), p), g.apply_point(y, g.apply_point(x, p)));
    }
  }
}

TEST(GroupAction, OnCurveOverGF8) {
  const Group g(kP3);
  // Over GF(q) itself y^q + y = 0 and x^q + x = 0, so every affine point is rational.
  for (u128 x = 0; x < 8; ++x) {
    for (u128 y = 0; y < 8; ++y) EXPECT_TRUE(g.on_curve(CurvePoint{FieldElement{x}, FieldElement{y}}));
  }
}

TEST(GroupAction, OnCurveInExtensionField) {
  // y^8 + y = x^4 (x^8 + x) over GF(64). The curve has q^2 + 1 places over
  // GF(q^2), so the affine solutions are exactly the 64 points of GF(8)^2.
  const Gf64 f;
  std::size_t on = 0;
  std::size_t off = 0;
  for (u128 x = 0; x < 64; ++x) {
    for (u128 y = 0; y < 64; ++y) {
      const Pt64 pt{x, y};
      if (satisfies_suzuki_curve(f, 3, 1, pt)) {
        ++on;
        EXPECT_EQ(f.frob_pow(x, 3), x);
        EXPECT_EQ(f.frob_pow(y, 3), y);
      } else {
        ++off;
      }
    }
  }
  EXPECT_EQ(on, 64u);
  EXPECT_EQ(off, 64u * 64u - 64u);
  // x = w, y = 0 is off the curve.
  EXPECT_FALSE(satisfies_suzuki_curve(f, 3, 1, Pt64{2, 0}));
}

TEST(GroupStructure, CenterPredicate) {
  const Group g(kP3);
  EXPECT_TRUE(g.in_center(g.element(1, 0, 7)));
  EXPECT_TRUE(g.in_center(g.identity()));
  EXPECT_FALSE(g.in_center(g.element(1, 1, 0)));
  EXPECT_FALSE(g.in_center(g.element(2, 0, 0)));
}

TEST(GroupStructure, EnumerationCountsAtQ8) {
  const Group g(kP3);
  const auto all = testutil::all_elements(g);
  EXPECT_EQ(all.size(), 448u);
  EXPECT_EQ(std::set<GroupElement>(all.begin(), all.end()).size(), 448u);
  std::size_t central = 0;
  for (const auto& x : all) central += g.in_center(x) ? 1 : 0;
  EXPECT_EQ(central, 8u);
}

TEST(GroupStructure, CentralElementsCommuteWithUnipotentSubgroup) {
  const Group g(kP3);
  const auto u = testutil::unipotent_elements(g);
  std::size_t commuting = 0;
  for (const auto& z : u) {
    bool all = true;
    for (const auto& x : u) all = all && g.mul(z, x) == g.mul(x, z);
    if (all) {
      ++commuting;
      EXPECT_TRUE(g.in_center(z));
    }
  }
  EXPECT_EQ(commuting, 8u);
}

// (1,0,c) does not commute with elements whose first coordinate is not 1,
// because a^(2q0+1) = 1 forces a = 1 when gcd(2q0+1, q-1) = 1.
TEST(GroupStructure, FullGroupCenterIsTrivial) {
  const Group g(kP3);
  const auto all = testutil::all_elements(g);
  std::size_t commuting = 0;
  for (const auto& z : all) {
    bool ok = true;
    for (const auto& x : all) {
      if (!(g.mul(z, x) == g.mul(x, z))) {
        ok = false;
        break;
      }
    }
    commuting += ok ? 1 : 0;
  }
  EXPECT_EQ(commuting, 1u);
  EXPECT_NE(g.mul(g.element(1, 0, 1), g.element(2, 0, 0)), g.mul(g.element(2, 0, 0), g.element(1, 0, 1)));
}

TEST(GroupStats, Q8) {
  const auto st = stats(kP3);
  EXPECT_EQ(st.group_order, 448);
  EXPECT_EQ(st.center_order, 8);
  EXPECT_EQ(st.genus, 14);
  EXPECT_EQ(st.rational_places, 65);
  EXPECT_EQ(st.full_aut_order, 29120);
}

TEST(GroupStats, LargeFieldExact) {
  const auto st = stats(make_params(127));
  const BigInt q = BigInt(1) << 127;
  EXPECT_EQ(st.group_order, q * q * (q - 1));
  EXPECT_EQ(st.genus, (BigInt(1) << 63) * (q - 1));
  EXPECT_EQ(st.rational_places, q * q + 1);
}

TEST(GroupMaps, F1F2Examples) {
  const Group g(kP3);
  const auto x = g.element(3, 5, 6);
  EXPECT_EQ(g.f1(x), g.element(1, 3, 5));
  EXPECT_EQ(g.f2(x), g.element(1, 0, 5));
  EXPECT_TRUE(g.in_center(g.f2(x)));
  EXPECT_TRUE(g.in_unipotent(g.f1(x)));
}

TEST(GroupMaps, F2IsHomomorphismOnUnipotent) {
  const Group g(kP3);
  const auto u = testutil::unipotent_elements(g);
  for (const auto& x : u) {
    for (const auto& y : u) ASSERT_EQ(g.f2(g.mul(x, y)), g.mul(g.f2(x), g.f2(y)));
  }
}

TEST(GroupMaps, SecondCoordinateAddsOnUnipotent) {
  const Group g(kP3);
  const auto u = testutil::unipotent_elements(g);
  for (const auto& x : u) {
    for (const auto& y : u) ASSERT_EQ(g.mul(x, y).b, x.b + y.b);
  }
}

TEST(GroupMaps, F1IsNotHomomorphism) {
  const Group g(kP3);
  const auto all = testutil::all_elements(g);
  std::size_t mismatches = 0;
  for (const auto& x : all) {
    for (const auto& y : all) mismatches += g.f1(g.mul(x, y)) == g.mul(g.f1(x), g.f1(y)) ? 0 : 1;
  }
  EXPECT_GT(mismatches, 0u);
  // a concrete counterexample
  const auto x = g.element(2, 0, 0);
  const auto y = g.element(2, 0, 0);
  EXPECT_NE(g.f1(g.mul(x, y)), g.mul(g.f1(x), g.f1(y)));
}

TEST(GroupRandom, ConstraintsRespected) {
  std::mt19937_64 rng(25);
  const Group g(kP3);
  for (int i = 0; i < 2000; ++i) {
    EXPECT_TRUE(g.is_valid(g.random_element(rng)));
    EXPECT_FALSE(g.in_center(g.random_element(rng, Constraint::kNonCentral)));
    const auto all = g.random_element(rng, Constraint::kAllNonzero);
    EXPECT_FALSE(all.b.is_zero() || all.c.is_zero());
    EXPECT_FALSE(g.random_element(rng, Constraint::kNonzeroAB).b.is_zero());
  }
}

// Chi-square over the 448 elements; 447 degrees of freedom, 0.1% critical value ~ 556.
TEST(GroupRandom, UniformOverGroup) {
  std::mt19937_64 rng(26);
  const Group g(kP3);
  std::map<GroupElement, int> counts;
  const int draws = 448 * 200;
  for (int i = 0; i < draws; ++i) ++counts[g.random_element(rng)];
  ASSERT_EQ(counts.size(), 448u);
  double chi2 = 0;
  for (const auto& [k, c] : counts) chi2 += (c - 200.0) * (c - 200.0) / 200.0;
  EXPECT_LT(chi2, 556.0);
}

TEST(GroupFormat, ToString) {
  const Group g(kP3);
  EXPECT_EQ(to_string(g.element(1, 2, 7)), "(0x1, 0x2, 0x7)");
}

TEST(GroupLaw, FullGroupAxiomsAtQ8) {
  const Group g(kP3);
  const auto all = testutil::all_elements(g);
  for (const auto& x : all) {
    ASSERT_EQ(g.mul(x, g.identity()), x);
    ASSERT_EQ(g.mul(g.identity(), x), x);
    ASSERT_EQ(g.mul(x, g.inv(x)), g.identity());
    ASSERT_EQ(g.mul(g.inv(x), x), g.identity());
  }
  std::mt19937_64 rng(27);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (int i = 0; i < 100000; ++i) {
    const auto& x = all[pick(rng)];
    const auto& y = all[pick(rng)];
    const auto& z = all[pick(rng)];
    ASSERT_EQ(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
  }
}
