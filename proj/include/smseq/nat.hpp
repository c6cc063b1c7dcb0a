#pragma once

#include <gmp.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace smseq {

static_assert(sizeof(unsigned long) >= sizeof(std::uint64_t),
              "Nat assumes LP64: GMP's unsigned-long entry points must carry 64 bits");

/// Arbitrary-precision natural number: a value-semantic wrapper around a GMP
/// integer. Values are always >= 0; operations whose mathematical result would
/// be negative throw. Distinct Nat values may be used freely from different
/// threads; a single value must not be mutated concurrently.
class Nat {
public:
    Nat() noexcept { mpz_init(z_); }

    Nat(std::uint64_t v) {
        mpz_init(z_);
        mpz_set_ui(z_, static_cast<unsigned long>(v));
    }

    /// Parses a decimal string. Accepts digits only (no sign, no whitespace).
    explicit Nat(std::string_view decimal) {
        if (decimal.empty())
            throw std::invalid_argument("Nat: empty decimal string");
        for (char c : decimal)
            if (c < '0' || c > '9')
                throw std::invalid_argument("Nat: invalid decimal digit in \"" +
                                            std::string(decimal) + "\"");
        mpz_init(z_);
        if (mpz_set_str(z_, std::string(decimal).c_str(), 10) != 0) {
            mpz_clear(z_);
            throw std::invalid_argument("Nat: unparsable decimal string");
        }
    }

    Nat(const Nat& other) { mpz_init_set(z_, other.z_); }

    Nat(Nat&& other) noexcept {
        mpz_init(z_);
        mpz_swap(z_, other.z_);
    }

    Nat& operator=(const Nat& other) {
        if (this != &other) mpz_set(z_, other.z_);
        return *this;
    }

    Nat& operator=(Nat&& other) noexcept {
        mpz_swap(z_, other.z_);
        return *this;
    }

    ~Nat() { mpz_clear(z_); }

    friend void swap(Nat& a, Nat& b) noexcept { mpz_swap(a.z_, b.z_); }

    /// Canonical decimal rendering: no leading zeros, "0" for zero.
    std::string to_string() const {
        std::string buf(mpz_sizeinbase(z_, 10) + 1, '\0');
        mpz_get_str(buf.data(), 10, z_);
        buf.resize(std::char_traits<char>::length(buf.c_str()));
        return buf;
    }

    bool is_zero() const { return mpz_sgn(z_) == 0; }
    bool is_even() const { return mpz_even_p(z_) != 0; }
    bool is_odd() const { return mpz_odd_p(z_) != 0; }

    bool fits_u64() const { return mpz_fits_ulong_p(z_) != 0; }

    std::uint64_t to_u64() const {
        if (!fits_u64()) throw std::overflow_error("Nat: value does not fit in 64 bits");
        return static_cast<std::uint64_t>(mpz_get_ui(z_));
    }

    std::uint64_t bit_length() const {
        return is_zero() ? 0 : mpz_sizeinbase(z_, 2);
    }

    /// Decimal digit count as reported by GMP: exact or one too large.
    std::uint64_t decimal_size_estimate() const { return mpz_sizeinbase(z_, 10); }

    bool test_bit(std::uint64_t i) const { return mpz_tstbit(z_, i) != 0; }

    /// Index of the lowest set bit. Undefined for zero.
    std::uint64_t trailing_zero_bits() const { return mpz_scan1(z_, 0); }

    bool divisible_by(std::uint64_t d) const {
        return mpz_divisible_ui_p(z_, static_cast<unsigned long>(d)) != 0;
    }

    static Nat ten_pow(std::uint64_t k) {
        Nat r;
        mpz_ui_pow_ui(r.z_, 10, static_cast<unsigned long>(k));
        return r;
    }

    /// base^exp mod mod. Requires mod > 0.
    static Nat pow_mod(const Nat& base, const Nat& exp, const Nat& mod) {
        Nat r;
        mpz_powm(r.z_, base.z_, exp.z_, mod.z_);
        return r;
    }

    friend Nat operator+(const Nat& a, const Nat& b) {
        Nat r;
        mpz_add(r.z_, a.z_, b.z_);
        return r;
    }

    friend Nat operator+(const Nat& a, std::uint64_t b) {
        Nat r;
        mpz_add_ui(r.z_, a.z_, static_cast<unsigned long>(b));
        return r;
    }

    friend Nat operator-(const Nat& a, const Nat& b) {
        if (mpz_cmp(a.z_, b.z_) < 0)
            throw std::invalid_argument("Nat: subtraction underflow");
        Nat r;
        mpz_sub(r.z_, a.z_, b.z_);
        return r;
    }

    friend Nat operator-(const Nat& a, std::uint64_t b) {
        if (mpz_cmp_ui(a.z_, static_cast<unsigned long>(b)) < 0)
            throw std::invalid_argument("Nat: subtraction underflow");
        Nat r;
        mpz_sub_ui(r.z_, a.z_, static_cast<unsigned long>(b));
        return r;
    }

    friend Nat operator*(const Nat& a, const Nat& b) {
        Nat r;
        mpz_mul(r.z_, a.z_, b.z_);
        return r;
    }

    friend Nat operator*(const Nat& a, std::uint64_t b) {
        Nat r;
        mpz_mul_ui(r.z_, a.z_, static_cast<unsigned long>(b));
        return r;
    }

    /// Floor division.
    friend Nat operator/(const Nat& a, const Nat& b) {
        if (b.is_zero()) throw std::invalid_argument("Nat: division by zero");
        Nat r;
        mpz_fdiv_q(r.z_, a.z_, b.z_);
        return r;
    }

    friend Nat operator/(const Nat& a, std::uint64_t b) {
        if (b == 0) throw std::invalid_argument("Nat: division by zero");
        Nat r;
        mpz_fdiv_q_ui(r.z_, a.z_, static_cast<unsigned long>(b));
        return r;
    }

    friend Nat operator%(const Nat& a, const Nat& b) {
        if (b.is_zero()) throw std::invalid_argument("Nat: modulo by zero");
        Nat r;
        mpz_fdiv_r(r.z_, a.z_, b.z_);
        return r;
    }

    friend std::uint64_t operator%(const Nat& a, std::uint64_t b) {
        if (b == 0) throw std::invalid_argument("Nat: modulo by zero");
        return static_cast<std::uint64_t>(mpz_fdiv_ui(a.z_, static_cast<unsigned long>(b)));
    }

    /// Logical right shift by `bits`.
    friend Nat operator>>(const Nat& a, std::uint64_t bits) {
        Nat r;
        mpz_fdiv_q_2exp(r.z_, a.z_, static_cast<mp_bitcnt_t>(bits));
        return r;
    }

    friend Nat operator<<(const Nat& a, std::uint64_t bits) {
        Nat r;
        mpz_mul_2exp(r.z_, a.z_, static_cast<mp_bitcnt_t>(bits));
        return r;
    }

    friend bool operator==(const Nat& a, const Nat& b) { return mpz_cmp(a.z_, b.z_) == 0; }

    friend bool operator==(const Nat& a, std::uint64_t b) {
        return mpz_cmp_ui(a.z_, static_cast<unsigned long>(b)) == 0;
    }

    friend std::strong_ordering operator<=>(const Nat& a, const Nat& b) {
        const int c = mpz_cmp(a.z_, b.z_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::strong_ordering operator<=>(const Nat& a, std::uint64_t b) {
        const int c = mpz_cmp_ui(a.z_, static_cast<unsigned long>(b));
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    /// Kronecker symbol (a / n) with a signed small numerator.
    friend int kronecker(std::int64_t a, const Nat& n) {
        return mpz_si_kronecker(static_cast<long>(a), n.z_);
    }

private:
    mpz_t z_;
};

}  // namespace smseq
