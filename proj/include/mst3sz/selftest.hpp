#pragma once

// Exhaustive checks at q = 8 (n = 3), run by `mst3sz selftest`.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mst3sz/field.hpp"
#include "mst3sz/group.hpp"
#include "mst3sz/logsig.hpp"
#include "mst3sz/scheme.hpp"

namespace mst3sz {

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

// Schoolbook product followed by long division; shares no code with Field::mul.
inline std::uint32_t schoolbook_mul_gf8(std::uint32_t a, std::uint32_t b) {
  std::uint32_t prod = 0;
  for (int i = 0; i < 3; ++i) {
    if ((b >> i) & 1) prod ^= a << i;
  }
  for (int d = 4; d >= 3; --d) {
    if ((prod >> d) & 1) prod ^= 0b1011u << (d - 3);
  }
  return prod;
}

inline std::vector<GroupElement> all_elements(const Group& g) {
  std::vector<GroupElement> out;
  const auto q = static_cast<std::uint64_t>(g.params().q);
  for (std::uint64_t a = 1; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      for (std::uint64_t c = 0; c < q; ++c) out.push_back(g.element(a, b, c));
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<SelfTestCheck> run_selftest(std::uint64_t seed = 20240601) {
  std::vector<SelfTestCheck> out;
  auto record = [&](std::string name, std::uint64_t failures, std::uint64_t total) {
    out.push_back({std::move(name), failures == 0,
                   std::to_string(total - failures) + "/" + std::to_string(total) + " ok"});
  };

  const FieldParams p3 = make_params(3);
  const Group g(p3);
  const Field& f = g.field();
  std::mt19937_64 rng(seed);

  {
    std::uint64_t bad = 0;
    for (std::uint32_t a = 0; a < 8; ++a) {
      for (std::uint32_t b = 0; b < 8; ++b) {
        if (f.mul(FieldElement{a}, FieldElement{b}).bits != detail::schoolbook_mul_gf8(a, b)) ++bad;
      }
    }
    record("field: GF(8) multiplication table", bad, 64);
  }
  {
    std::uint64_t bad = 0;
    for (std::uint32_t a = 1; a < 8; ++a) {
      const FieldElement x{a};
      if (f.mul(x, f.inv(x)) != f.one() || f.inv(x) != f.inv_fermat(x)) ++bad;
    }
    record("field: inverses (Euclid and Fermat agree)", bad, 7);
  }

  const auto elems = detail::all_elements(g);
  {
    std::uint64_t center = 0;
    for (const auto& e : elems) center += g.in_center(e) ? 1 : 0;
    const auto st = stats(p3);
    const bool ok = elems.size() == st.group_order && center == st.center_order;
    out.push_back({"group: order 448, center 8", ok,
                   std::to_string(elems.size()) + " elements, " + std::to_string(center) + " central"});
  }
  {
    std::uint64_t bad = 0;
    const auto e = g.identity();
    for (const auto& x : elems) {
      if (!(g.mul(e, x) == x) || !(g.mul(x, e) == x) || !(g.mul(x, g.inv(x)) == e) || !(g.mul(g.inv(x), x) == e)) ++bad;
    }
    record("group: identity and inverse laws", bad, elems.size());
  }
  {
    std::vector<GroupElement> unip;
    for (const auto& x : elems) {
      if (g.in_unipotent(x)) unip.push_back(x);
    }
    std::uint64_t bad = 0;
    std::uint64_t total = 0;
    for (const auto& x : unip) {
      for (const auto& y : unip) {
        for (const auto& z : unip) {
          ++total;
          if (!(g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z)))) ++bad;
        }
      }
    }
    record("group: associativity on U(q)", bad, total);
  }
  {
    std::uint64_t bad = 0;
    const CurvePoint pts[] = {{FieldElement{0}, FieldElement{0}}, {FieldElement{1}, FieldElement{5}},
                              {FieldElement{6}, FieldElement{3}}};
    for (int k = 0; k < 5000; ++k) {
      const auto g1 = elems[rng() % elems.size()];
      const auto g2 = elems[rng() % elems.size()];
      for (const auto& pt : pts) {
        if (!(g.apply_point(g2, g.apply_point(g1, pt)) == g.apply_point(g.mul(g1, g2), pt))) ++bad;
      }
    }
    record("group: product matches point-map composition", bad, 15000);
  }
  {
    std::uint64_t bad = 0;
    for (unsigned n : {3u, 9u}) {
      const Field fn(make_params(n));
      const auto type = n == 3 ? SignatureType({2, 2, 2}) : SignatureType({8, 8, 8});
      for (int k = 0; k < 5; ++k) {
        const auto sig = gen_tame(fn, type, rng);
        for (Index r = 0; r < fn.order(); ++r) {
          if (sig.factor(sig.evaluate(r)) != r) ++bad;
        }
      }
    }
    record("logsig: tame factorization round trip", bad, 5 * (8 + 512));
  }
  {
    std::uint64_t bad = 0;
    std::uint64_t total = 0;
    const SignatureType t({2, 2, 2});
    for (int k = 0; k < 5; ++k) {
      const auto kp = keygen(p3, t, t, rng);
      for (Index r1 = 0; r1 < 8; ++r1) {
        for (Index r2 = 0; r2 < 8; ++r2) {
          const auto m = g.random_element(rng);
          ++total;
          if (!(decrypt(kp.pub, kp.priv, encrypt(kp.pub, m, SessionNonce{r1, r2})) == m)) ++bad;
        }
      }
    }
    record("scheme: decrypt(encrypt(m)) = m for every nonce", bad, total);
  }
  return out;
}

}  // namespace mst3sz
