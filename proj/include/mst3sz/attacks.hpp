#pragma once

// Brute-force attack oracles for small fields, plus the complexity figures
// claimed for the scheme.
//
// Nonces are enumerated in the order k = R1 + q * R2, so "lowest index" and
// "trial count" are well defined and independent of how the search is split
// across threads.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mst3sz/common.hpp"
#include "mst3sz/group.hpp"
#include "mst3sz/logsig.hpp"
#include "mst3sz/scheme.hpp"

namespace mst3sz {

/// Enumeration oracles refuse fields larger than this.
inline constexpr unsigned kMaxAttackBits = 5;

struct AttackResult {
  int attack = 0;
  unsigned n = 0;
  bool success = false;
  std::optional<SessionNonce> nonce;
  std::optional<GroupElement> message;
  std::uint64_t trials = 0;         // candidate nonces (or nonce halves) evaluated
  std::uint64_t verifications = 0;  // attack 3 only: candidate pairs checked against y2
  double elapsed_ms = 0.0;
};

using MessagePredicate = std::function<bool(const GroupElement&)>;

/// Accepts exactly the group elements produced by encode_message().
inline MessagePredicate padding_predicate(const FieldParams& p) {
  return [p](const GroupElement& m) { return is_encoded_message(p, m); };
}

namespace detail {

inline void require_small(const FieldParams& p) {
  if (p.n > kMaxAttackBits) {
    throw ParamError("brute-force oracles are limited to n <= " + std::to_string(kMaxAttackBits) +
                     ", got n = " + std::to_string(p.n));
  }
}

inline std::vector<GroupElement> induced_table(const Group& g, const Cover& cover, std::uint64_t q) {
  std::vector<GroupElement> out;
  out.reserve(q);
  for (std::uint64_t r = 0; r < q; ++r) out.push_back(induced_map(g, cover, r));
  return out;
}

/// Lowest k in [0, count) with match(k), searching `threads` contiguous
/// ranges concurrently. The answer does not depend on `threads`.
inline std::optional<std::uint64_t> first_match(std::uint64_t count, unsigned threads,
                                                const std::function<bool(std::uint64_t)>& match) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(count, 64))));
  if (threads == 1) {
    for (std::uint64_t k = 0; k < count; ++k) {
      if (match(k)) return k;
    }
    return std::nullopt;
  }
  constexpr auto kNone = std::numeric_limits<std::uint64_t>::max();
  std::atomic<std::uint64_t> best{kNone};
  const std::uint64_t chunk = (count + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const std::uint64_t lo = t * chunk;
      const std::uint64_t hi = std::min(count, lo + chunk);
      for (std::uint64_t k = lo; k < hi && k < best.load(std::memory_order_relaxed); ++k) {
        if (match(k)) {
          std::uint64_t cur = best.load();
          while (k < cur && !best.compare_exchange_weak(cur, k)) {
          }
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (best.load() == kNone) return std::nullopt;
  return best.load();
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// Attack 1: try every (R1, R2), unmask y1 and keep the first candidate
/// message the predicate recognizes. At most q^2 trials.
inline AttackResult attack1_bruteforce_ciphertext(const PublicKey& pk, const Ciphertext& ct,
                                                  const MessagePredicate& recognizes, unsigned threads = 1) {
  detail::require_small(pk.params());
  const detail::Stopwatch clock;
  const Group& g = pk.group;
  const auto q = static_cast<std::uint64_t>(pk.params().q);
  const auto mask1 = detail::induced_table(g, pk.alpha1, q);
  const auto mask2 = detail::induced_table(g, pk.alpha2, q);

  auto candidate = [&](std::uint64_t k) {
    return g.mul(g.mul(g.inv(mask2[k / q]), g.inv(mask1[k % q])), ct.y1);
  };
  const auto hit = detail::first_match(q * q, threads, [&](std::uint64_t k) { return recognizes(candidate(k)); });

  AttackResult res;
  res.attack = 1;
  res.n = pk.params().n;
  res.success = hit.has_value();
  res.trials = hit ? *hit + 1 : q * q;
  if (hit) {
    res.nonce = SessionNonce{*hit % q, *hit / q};
    res.message = candidate(*hit);
  }
  res.elapsed_ms = clock.elapsed_ms();
  return res;
}

/// Attack 2: try every (R1, R2) until gamma1'(R1) * gamma2'(R2) = y2.
/// y2 alone does not identify the nonce for small q, so a y2 match must
/// also reproduce y3 and y4; those three values pin the nonce down. At most
/// q^2 trials.
inline AttackResult attack2_bruteforce_nonce(const PublicKey& pk, const Ciphertext& ct, unsigned threads = 1) {
  detail::require_small(pk.params());
  const detail::Stopwatch clock;
  const Group& g = pk.group;
  const auto q = static_cast<std::uint64_t>(pk.params().q);
  const auto gam1 = detail::induced_table(g, pk.gamma1, q);
  const auto gam2 = detail::induced_table(g, pk.gamma2, q);

  const auto hit = detail::first_match(q * q, threads, [&](std::uint64_t k) {
    const std::uint64_t r1 = k % q;
    const std::uint64_t r2 = k / q;
    return g.mul(gam1[r1], gam2[r2]) == ct.y2 && f1_image_product(g, pk.alpha1, r1) == ct.y3 &&
           f2_image_product(g, pk.alpha2, r2) == ct.y4;
  });

  AttackResult res;
  res.attack = 2;
  res.n = pk.params().n;
  res.success = hit.has_value();
  res.trials = hit ? *hit + 1 : q * q;
  if (hit) {
    res.nonce = SessionNonce{*hit % q, *hit / q};
    const GroupElement mask =
        g.mul(induced_map(g, pk.alpha1, res.nonce->r1), induced_map(g, pk.alpha2, res.nonce->r2));
    res.message = g.mul(g.inv(mask), ct.y1);
  }
  res.elapsed_ms = clock.elapsed_ms();
  return res;
}

/// Attack 3: search the two nonce halves separately, R1 against y3 and R2
/// against y4. Each half value is evaluated at most once, so at most 2q
/// trials. Several values may map to the same y3 (or y4); candidate pairs
/// are checked against y2 and counted as verifications.
inline AttackResult attack3_session_key(const PublicKey& pk, const Ciphertext& ct) {
  detail::require_small(pk.params());
  const detail::Stopwatch clock;
  const Group& g = pk.group;
  const auto q = static_cast<std::uint64_t>(pk.params().q);

  AttackResult res;
  res.attack = 3;
  res.n = pk.params().n;

  std::vector<std::uint64_t> r2_candidates;
  std::uint64_t r2_next = 0;  // R2 values below this have been evaluated
  auto next_r2_candidate = [&](std::size_t idx) -> std::optional<std::uint64_t> {
    while (idx >= r2_candidates.size() && r2_next < q) {
      ++res.trials;
      if (f2_image_product(g, pk.alpha2, r2_next) == ct.y4) r2_candidates.push_back(r2_next);
      ++r2_next;
    }
    if (idx < r2_candidates.size()) return r2_candidates[idx];
    return std::nullopt;
  };

  for (std::uint64_t r1 = 0; r1 < q && !res.success; ++r1) {
    ++res.trials;
    if (!(f1_image_product(g, pk.alpha1, r1) == ct.y3)) continue;
    const GroupElement gam1 = induced_map(g, pk.gamma1, r1);
    for (std::size_t idx = 0;; ++idx) {
      const auto r2 = next_r2_candidate(idx);
      if (!r2) break;
      ++res.verifications;
      if (g.mul(gam1, induced_map(g, pk.gamma2, *r2)) == ct.y2) {
        res.success = true;
        res.nonce = SessionNonce{r1, *r2};
        break;
      }
    }
  }
  if (res.success) {
    const GroupElement mask =
        g.mul(induced_map(g, pk.alpha1, res.nonce->r1), induced_map(g, pk.alpha2, res.nonce->r2));
    res.message = g.mul(g.inv(mask), ct.y1);
  }
  res.elapsed_ms = clock.elapsed_ms();
  return res;
}

/// Claimed attack costs: q^2, q^2, q, q^3 and q^2 for attacks 1 to 5.
/// Attacks 4 and 5 have no executable oracle.
struct ComplexityReport {
  BigInt attack1;
  BigInt attack2;
  BigInt attack3;
  BigInt attack4;
  BigInt attack5;
};

inline ComplexityReport complexity_report(const FieldParams& p) {
  const BigInt q = BigInt(1) << p.n;
  return ComplexityReport{q * q, q * q, q, q * q * q, q * q};
}

}  // namespace mst3sz
