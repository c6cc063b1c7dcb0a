#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smseq/nat.hpp"

namespace smseq {

/// Floor integer square root by Newton iteration: start above the root, the
/// iterates decrease monotonically, stop when they no longer do.
inline Nat isqrt(const Nat& x) {
    if (x <= std::uint64_t{1}) return x;
    // 2^ceil(bits/2) >= sqrt(x)
    Nat r = Nat(1) << (x.bit_length() + 1) / 2;
    for (;;) {
        const Nat next = (r + x / r) >> 1;
        if (next >= r) break;
        r = next;
    }
    // Guard the loop's invariant explicitly; never expected to fire.
    while (r * r > x) r = r - std::uint64_t{1};
    while ((r + 1) * (r + 1) <= x) r = r + std::uint64_t{1};
    return r;
}

/// The root r with r*r == x, or nullopt.
inline std::optional<Nat> is_perfect_square(const Nat& x) {
    Nat r = isqrt(x);
    if (r * r == x) return r;
    return std::nullopt;
}

/// The k >= 1 with k(k+1)/2 == x, or nullopt. x is triangular exactly when
/// 8x + 1 is a perfect (odd) square, and then k = (sqrt(8x+1) - 1) / 2.
inline std::optional<Nat> is_triangular(const Nat& x) {
    if (x < std::uint64_t{1})
        throw std::invalid_argument("is_triangular: defined for x >= 1 only");
    const auto root = is_perfect_square(x * std::uint64_t{8} + 1);
    if (!root) return std::nullopt;
    return (*root - std::uint64_t{1}) / std::uint64_t{2};
}

/// Knobs of the probable-prime pipeline. Identical policy and input always
/// produce the identical verdict: witness choices derive from (seed, value).
struct PrimalityPolicy {
    std::uint64_t trial_division_bound = 10000;  // >= 2
    std::uint32_t extra_mr_rounds = 16;
    std::uint64_t seed = 0;
};

enum class PrimalityStatus { composite, prime, probable_prime };

inline std::string_view to_string(PrimalityStatus s) {
    switch (s) {
        case PrimalityStatus::composite: return "composite";
        case PrimalityStatus::prime: return "prime";
        case PrimalityStatus::probable_prime: return "probable_prime";
    }
    throw std::logic_error("unreachable PrimalityStatus");
}

inline PrimalityStatus parse_primality_status(std::string_view s) {
    if (s == "composite") return PrimalityStatus::composite;
    if (s == "prime") return PrimalityStatus::prime;
    if (s == "probable_prime") return PrimalityStatus::probable_prime;
    throw std::invalid_argument("unknown primality status: \"" + std::string(s) + "\"");
}

/// `prime` is only ever issued inside a deterministic regime (trial division
/// or the 12-base strong test below its published cutoff); `composite` is
/// always definitive and the evidence names the reason.
struct PrimalityVerdict {
    PrimalityStatus status;
    std::string evidence;
};

/// All primes <= bound, cached per bound. Concurrent callers share entries.
inline const std::vector<std::uint32_t>& primes_up_to(std::uint64_t bound) {
    static std::shared_mutex mutex;
    static std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cache;
    {
        std::shared_lock lock(mutex);
        auto it = cache.find(bound);
        if (it != cache.end()) return it->second;
    }
    std::vector<bool> composite(bound + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t p = 2; p <= bound; ++p) {
        if (composite[p]) continue;
        primes.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t m = p * p; m <= bound; m += p) composite[m] = true;
    }
    std::unique_lock lock(mutex);
    return cache.emplace(bound, std::move(primes)).first->second;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a over the seed and the decimal rendering of the tested value; the
/// witness stream is a pure function of (seed, x), independent of scheduling.
inline std::uint64_t witness_stream_seed(std::uint64_t seed, const std::string& decimal) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto mix = [&h](unsigned char byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
    mix(':');
    for (char c : decimal) mix(static_cast<unsigned char>(c));
    return h;
}

inline Nat mul_mod(const Nat& a, const Nat& b, const Nat& n) { return (a * b) % n; }

inline Nat add_mod(const Nat& a, const Nat& b, const Nat& n) {
    Nat s = a + b;
    return s >= n ? s - n : s;
}

inline Nat sub_mod(const Nat& a, const Nat& b, const Nat& n) {
    return a >= b ? a - b : (a + n) - b;
}

/// (a / 2) mod n for odd n, a < n.
inline Nat halve_mod(const Nat& a, const Nat& n) {
    return (a.is_even() ? a : a + n) >> 1;
}

/// Strong (Miller-Rabin) probable-prime test to the given base.
/// Requires odd x >= 3. Bases congruent to 0 or +-1 mod x pass vacuously.
inline bool strong_probable_prime(const Nat& x, const Nat& base) {
    const Nat x_minus_1 = x - std::uint64_t{1};
    const Nat a = base % x;
    if (a <= std::uint64_t{1} || a == x_minus_1) return true;
    const std::uint64_t s = x_minus_1.trailing_zero_bits();
    const Nat d = x_minus_1 >> s;
    Nat y = Nat::pow_mod(a, d, x);
    if (y == std::uint64_t{1} || y == x_minus_1) return true;
    for (std::uint64_t r = 1; r < s; ++r) {
        y = mul_mod(y, y, x);
        if (y == x_minus_1) return true;
        if (y == std::uint64_t{1}) return false;  // nontrivial sqrt of 1
    }
    return false;
}

/// Strong Lucas probable-prime test with P = 1 and the supplied Selfridge D
/// (kronecker(D, x) == -1), Q = (1 - D) / 4. Requires odd x, not a square.
inline bool strong_lucas_probable_prime(const Nat& x, std::int64_t d_param) {
    const std::int64_t q_param = (1 - d_param) / 4;
    const Nat d_mod = d_param >= 0 ? Nat(static_cast<std::uint64_t>(d_param)) % x
                                   : x - Nat(static_cast<std::uint64_t>(-d_param)) % x;
    const Nat q_mod = q_param >= 0 ? Nat(static_cast<std::uint64_t>(q_param)) % x
                                   : x - Nat(static_cast<std::uint64_t>(-q_param)) % x;

    const Nat delta = x + std::uint64_t{1};
    const std::uint64_t s = delta.trailing_zero_bits();
    const Nat d = delta >> s;

    // Ladder over the bits of d from U_0 = 0, V_0 = 2, Q^0 = 1:
    //   double: U <- U*V, V <- V^2 - 2Q^k, Q^k <- (Q^k)^2
    //   add:    U <- (U + V)/2, V <- (D*U + V)/2, Q^k <- Q^k * Q
    Nat u(0), v(2), qk(1);
    for (std::uint64_t i = d.bit_length(); i-- > 0;) {
        Nat u2 = mul_mod(u, v, x);
        Nat v2 = sub_mod(mul_mod(v, v, x), add_mod(qk, qk, x), x);
        qk = mul_mod(qk, qk, x);
        if (d.test_bit(i)) {
            u = halve_mod(add_mod(u2, v2, x), x);
            v = halve_mod(add_mod(mul_mod(d_mod, u2, x), v2, x), x);
            qk = mul_mod(qk, q_mod, x);
        } else {
            u = std::move(u2);
            v = std::move(v2);
        }
    }
    if (u.is_zero()) return true;  // U_d == 0
    for (std::uint64_t r = 0; r < s; ++r) {
        if (v.is_zero()) return true;  // V_{d*2^r} == 0
        v = sub_mod(mul_mod(v, v, x), add_mod(qk, qk, x), x);
        qk = mul_mod(qk, qk, x);
    }
    return false;
}

/// Largest x for which the 12 bases {2..37} decide primality exactly.
inline const Nat& deterministic_witness_cutoff() {
    static const Nat cutoff{std::string_view("3317044064679887385961981")};
    return cutoff;
}

inline constexpr std::uint64_t kDeterministicBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace detail

/// Probable-prime pipeline:
///   (a) x < 2: composite by convention;
///   (b) trial division by every prime <= policy.trial_division_bound
///       (a proper divisor is definitive; dividing by x itself proves x prime);
///   (c) below the 12-base deterministic cutoff: strong test on bases 2..37,
///       verdict exact;
///   (d) otherwise strong base-2 + strong Lucas (Selfridge parameters), then
///       policy.extra_mr_rounds strong rounds on bases derived from
///       (policy.seed, x). Survivors are probable_prime, never prime.
inline PrimalityVerdict is_probable_prime(const Nat& x, const PrimalityPolicy& policy = {}) {
    if (policy.trial_division_bound < 2)
        throw std::invalid_argument("PrimalityPolicy: trial_division_bound must be >= 2");

    if (x < std::uint64_t{2}) return {PrimalityStatus::composite, "below 2"};

    for (std::uint32_t p : primes_up_to(policy.trial_division_bound)) {
        if (x < std::uint64_t{p}) break;
        if (!x.divisible_by(p)) continue;
        if (x == std::uint64_t{p})
            return {PrimalityStatus::prime, "trial division: equals prime " + std::to_string(p)};
        return {PrimalityStatus::composite, "trial division: divisible by " + std::to_string(p)};
    }
    // Past here x > trial_division_bound: any x <= bound either matched a
    // sieve prime or surrendered a proper divisor above.

    if (x < detail::deterministic_witness_cutoff()) {
        for (std::uint64_t b : detail::kDeterministicBases) {
            if (!detail::strong_probable_prime(x, Nat(b)))
                return {PrimalityStatus::composite,
                        "strong witness " + std::to_string(b) + " (deterministic range)"};
        }
        return {PrimalityStatus::prime, "deterministic 12-base strong test"};
    }

    if (!detail::strong_probable_prime(x, Nat(2)))
        return {PrimalityStatus::composite, "strong base-2 witness"};
    if (is_perfect_square(x))
        return {PrimalityStatus::composite, "perfect square"};

    std::int64_t d_param = 5;
    for (std::int64_t magnitude = 5;; magnitude += 2) {
        d_param = (magnitude % 4 == 1) ? magnitude : -magnitude;
        const int j = kronecker(d_param, x);
        if (j == -1) break;
        if (j == 0)
            return {PrimalityStatus::composite,
                    "shares factor " + std::to_string(magnitude) + " with Lucas discriminant"};
        if (magnitude > 1000000)
            throw std::logic_error("Selfridge parameter search failed for a non-square");
    }
    if (!detail::strong_lucas_probable_prime(x, d_param))
        return {PrimalityStatus::composite,
                "strong Lucas test failed (D=" + std::to_string(d_param) + ")"};

    // x exceeds the ~2^81 cutoff here, so any 2 + u64 base lies in [2, x-2].
    const std::string decimal = x.to_string();
    std::uint64_t stream = detail::witness_stream_seed(policy.seed, decimal);
    for (std::uint32_t round = 1; round <= policy.extra_mr_rounds; ++round) {
        const Nat base = Nat(std::uint64_t{2} + detail::splitmix64(stream));
        if (!detail::strong_probable_prime(x, base))
            return {PrimalityStatus::composite,
                    "Miller-Rabin witness in seeded round " + std::to_string(round)};
    }
    return {PrimalityStatus::probable_prime,
            "BPSW pass + " + std::to_string(policy.extra_mr_rounds) + " seeded Miller-Rabin rounds"};
}

}  // namespace smseq
