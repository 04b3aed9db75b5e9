#pragma once

// The decomposition group A(P_inf) of the Suzuki function field
// y^q + y = x^(2q0) (x^q + x) over GF(q): triples [a, b, c] with a != 0,
// acting on the plane by
//
//   x -> a x + b
//   y -> a^(2q0+1) y + a b^(2q0) x + c.
//
// Product convention: g1 * g2 applies g1's point map first, then g2's.
// That is the only order under which the multiplication formula agrees with
// composition of point maps, and the telescoping of the t-chains in the
// scheme depends on it.

#include <boost/multiprecision/cpp_int.hpp>

#include <random>
#include <string>

#include "mst3sz/common.hpp"
#include "mst3sz/field.hpp"

namespace mst3sz {

using BigInt = boost::multiprecision::cpp_int;

struct GroupElement {
  FieldElement a{1};
  FieldElement b{0};
  FieldElement c{0};

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

struct CurvePoint {
  FieldElement x;
  FieldElement y;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct GroupStats {
  BigInt group_order;      // |A(P_inf)| = q^2 (q - 1)
  BigInt center_order;     // |{S(1, 0, c)}| = q
  BigInt full_aut_order;   // |Aut(S/K)| = |Sz(q)| = (q^2 + 1) q^2 (q - 1)
  BigInt genus;            // q0 (q - 1)
  BigInt rational_places;  // q^2 + 1
};

inline GroupStats stats(const FieldParams& p) {
  const BigInt q = BigInt(1) << p.n;
  const BigInt q0 = BigInt(1) << p.s;
  GroupStats st;
  st.group_order = q * q * (q - 1);
  st.center_order = q;
  st.full_aut_order = (q * q + 1) * q * q * (q - 1);
  st.genus = q0 * (q - 1);
  st.rational_places = q * q + 1;
  return st;
}

/// Restrictions for random_element().
enum class Constraint {
  kAny,          // any valid triple
  kNonCentral,   // not of the form (1, 0, c)
  kAllNonzero,   // a, b, c all nonzero (cover entries)
  kNonzeroAB,    // a, b nonzero, c arbitrary (t-chain elements)
};

/// y^(2^k) + y = x^(2^(s+1)) (x^(2^k) + x) evaluated in any binary field that
/// provides add/mul/frob_pow; k is the degree of the curve's base field.
template <class AnyField, class Point>
bool satisfies_suzuki_curve(const AnyField& f, unsigned base_n, unsigned base_s, const Point& p) {
  const auto lhs = f.add(f.frob_pow(p.y, base_n), p.y);
  const auto rhs = f.mul(f.frob_pow(p.x, base_s + 1), f.add(f.frob_pow(p.x, base_n), p.x));
  return lhs == rhs;
}

class Group {
 public:
  explicit Group(Field field) : f_(std::move(field)) {}
  explicit Group(const FieldParams& params) : f_(params) {}

  const Field& field() const { return f_; }
  const FieldParams& params() const { return f_.params(); }

  GroupElement identity() const { return GroupElement{f_.one(), f_.zero(), f_.zero()}; }

  /// Checked construction; rejects a = 0 and coordinates outside GF(q).
  GroupElement element(FieldElement a, FieldElement b, FieldElement c) const {
    if (a.is_zero()) throw ParamError("group element needs a != 0");
    if (!f_.contains(a) || !f_.contains(b) || !f_.contains(c)) {
      throw ParamError("group element coordinate outside GF(2^" + std::to_string(f_.bits()) + ")");
    }
    return GroupElement{a, b, c};
  }

  GroupElement element(u128 a, u128 b, u128 c) const {
    return element(FieldElement{a}, FieldElement{b}, FieldElement{c});
  }

  bool is_valid(const GroupElement& g) const {
    return !g.a.is_zero() && f_.contains(g.a) && f_.contains(g.b) && f_.contains(g.c);
  }

  // [a1,b1,c1][a2,b2,c2] = [a1 a2, a2 b1 + b2, a2^(2q0+1) c1 + a2 b2^(2q0) b1 + c2]
  GroupElement mul(const GroupElement& g1, const GroupElement& g2) const {
    return GroupElement{
        f_.mul(g1.a, g2.a),
        f_.mul(g2.a, g1.b) + g2.b,
        f_.mul(f_.pow_2q0_plus_1(g2.a), g1.c) + f_.mul(f_.mul(g2.a, f_.pow_2q0(g2.b)), g1.b) + g2.c,
    };
  }

  // [a,b,c]^-1 = [a^-1, a^-1 b, (a^-1 b)^(2q0+1) + a^-(2q0+1) c]; signs vanish in characteristic 2.
  GroupElement inv(const GroupElement& g) const {
    const FieldElement ai = f_.inv(g.a);
    const FieldElement aib = f_.mul(ai, g.b);
    return GroupElement{ai, aib, f_.pow_2q0_plus_1(aib) + f_.mul(f_.pow_2q0_plus_1(ai), g.c)};
  }

  /// Point action of the automorphism on the affine point (x, y).
  CurvePoint apply_point(const GroupElement& g, const CurvePoint& p) const {
    return CurvePoint{
        f_.mul(g.a, p.x) + g.b,
        f_.mul(f_.pow_2q0_plus_1(g.a), p.y) + f_.mul(f_.mul(g.a, f_.pow_2q0(g.b)), p.x) + g.c,
    };
  }

  /// Curve equation check. Over GF(q) itself both sides vanish for every
  /// affine point, so this is only informative for points from an extension.
  bool on_curve(const CurvePoint& p) const {
    return satisfies_suzuki_curve(f_, params().n, params().s, p);
  }

  /// Membership in {S(1, 0, c)}: the center of U(q) = {S(1, b, c)}.
  bool in_center(const GroupElement& g) const { return g.a == f_.one() && g.b.is_zero(); }

  bool in_unipotent(const GroupElement& g) const { return g.a == f_.one(); }

  /// f1(S(a, b, c)) = S(1, a, b).
  GroupElement f1(const GroupElement& g) const { return GroupElement{f_.one(), g.a, g.b}; }

  /// f2(S(a, b, c)) = S(1, 0, b); the first coordinate is ignored.
  GroupElement f2(const GroupElement& g) const { return GroupElement{f_.one(), f_.zero(), g.b}; }

  template <std::uniform_random_bit_generator Rng>
  GroupElement random_element(Rng& rng, Constraint constraint = Constraint::kAny) const {
    for (;;) {
      GroupElement g{f_.random_nonzero(rng), f_.random(rng), f_.random(rng)};
      switch (constraint) {
        case Constraint::kAny:
          return g;
        case Constraint::kNonCentral:
          if (!in_center(g)) return g;
          break;
        case Constraint::kAllNonzero:
          if (!g.b.is_zero() && !g.c.is_zero()) return g;
          break;
        case Constraint::kNonzeroAB:
          if (!g.b.is_zero()) return g;
          break;
      }
    }
  }

 private:
  Field f_;
};

inline std::string to_string(const GroupElement& g) {
  return "(" + to_hex(g.a.bits) + ", " + to_hex(g.b.bits) + ", " + to_hex(g.c.bits) + ")";
}

}  // namespace mst3sz
