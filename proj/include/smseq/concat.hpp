#pragma once

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "smseq/nat.hpp"

namespace smseq {

/// Number of characters in the canonical decimal rendering of n.
/// digit_length(0) == 1, so conc(n, 0) == 10n and bld/conc stay inverse.
inline std::uint64_t digit_length(const Nat& n) {
    if (n.fits_u64()) {
        std::uint64_t v = n.to_u64();
        std::uint64_t len = 1;
        while (v >= 10) {
            v /= 10;
            ++len;
        }
        return len;
    }
    // mpz_sizeinbase may report one digit too many for base 10.
    std::uint64_t d = n.decimal_size_estimate();
    if (d > 1 && n < Nat::ten_pow(d - 1)) --d;
    return d;
}

/// 10^k with a monotone cache: entries are never evicted, so repeated calls
/// with the same exponent are O(1) after the first. Safe for concurrent use.
inline Nat pow10(std::uint64_t k) {
    static std::shared_mutex mutex;
    static std::unordered_map<std::uint64_t, Nat> cache;
    {
        std::shared_lock lock(mutex);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
    }
    Nat value = Nat::ten_pow(k);
    {
        std::unique_lock lock(mutex);
        cache.emplace(k, value);
    }
    return value;
}

namespace detail {
// Right operands wider than this bypass the pow10 cache: sequence generation
// touches each large exponent exactly once, and caching those powers would
// grow memory quadratically in the term length.
inline constexpr std::uint64_t kCachedConcExponentCap = 64;
}  // namespace detail

/// Decimal concatenation with a caller-supplied right-operand digit count:
/// left * 10^right_digits + right. right_digits must equal digit_length(right).
inline Nat conc(const Nat& left, const Nat& right, std::uint64_t right_digits) {
    const Nat shift = right_digits <= detail::kCachedConcExponentCap
                          ? pow10(right_digits)
                          : Nat::ten_pow(right_digits);
    return left * shift + right;
}

/// Decimal concatenation: the integer whose digits are those of left followed
/// by those of right (for left > 0). conc(0, m) == m.
inline Nat conc(const Nat& left, const Nat& right) {
    return conc(left, right, digit_length(right));
}

/// "But last digit": floor(n / 10). Single-digit inputs yield 0.
inline Nat bld(const Nat& n) { return n / std::uint64_t{10}; }

}  // namespace smseq
