#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "smseq/concat.hpp"
#include "smseq/nat.hpp"

namespace smseq {

/// The four concatenation constructions.
enum class SequenceKind { consecutive, reversed, mirror, symmetric };

/// Base integer sequence the construction runs over. Closed set for now; a
/// new base needs an enumerator here plus a case in base_term(), and must
/// keep every term >= 1.
enum class BaseSpec { natural, triangular };

inline std::string_view to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::consecutive: return "consecutive";
        case SequenceKind::reversed: return "reversed";
        case SequenceKind::mirror: return "mirror";
        case SequenceKind::symmetric: return "symmetric";
    }
    throw std::logic_error("unreachable SequenceKind");
}

inline std::string_view to_string(BaseSpec base) {
    switch (base) {
        case BaseSpec::natural: return "natural";
        case BaseSpec::triangular: return "triangular";
    }
    throw std::logic_error("unreachable BaseSpec");
}

/// Accepts the full name or the conventional short form (scs/rss/sms/sss).
inline SequenceKind parse_sequence_kind(std::string_view s) {
    if (s == "scs" || s == "consecutive") return SequenceKind::consecutive;
    if (s == "rss" || s == "reversed") return SequenceKind::reversed;
    if (s == "sms" || s == "mirror") return SequenceKind::mirror;
    if (s == "sss" || s == "symmetric") return SequenceKind::symmetric;
    throw std::invalid_argument("unknown sequence kind: \"" + std::string(s) + "\"");
}

inline BaseSpec parse_base_spec(std::string_view s) {
    if (s == "natural") return BaseSpec::natural;
    if (s == "triangular") return BaseSpec::triangular;
    throw std::invalid_argument("unknown base sequence: \"" + std::string(s) + "\"");
}

/// One emitted sequence element. Immutable once produced; digits always
/// equals digit_length(value).
struct Term {
    std::uint64_t index;
    Nat value;
    std::uint64_t digits;
};

/// u_n of the base sequence. n >= 1; every base term is >= 1.
inline Nat base_term(BaseSpec base, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("base_term: index must be >= 1");
    switch (base) {
        case BaseSpec::natural: return Nat(n);
        case BaseSpec::triangular: return (Nat(n) * (Nat(n) + 1)) / std::uint64_t{2};
    }
    throw std::logic_error("unreachable BaseSpec");
}

/// S_n = sum of digit_length(u_i) for i = 1..n, computed by counting how many
/// base terms reach each decimal length (base terms increase strictly, so the
/// first index at each length is found by binary search). No term is built.
inline std::uint64_t base_digit_sum(BaseSpec base, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("base_digit_sum: index must be >= 1");
    const std::uint64_t top_len = digit_length(base_term(base, n));
    std::uint64_t total = n;  // every term has at least one digit
    for (std::uint64_t d = 2; d <= top_len; ++d) {
        const Nat threshold = Nat::ten_pow(d - 1);
        std::uint64_t lo = 1, hi = n;  // least i with u_i >= 10^(d-1)
        while (lo < hi) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            if (base_term(base, mid) >= threshold)
                hi = mid;
            else
                lo = mid + 1;
        }
        total += n - lo + 1;
    }
    return total;
}

namespace detail {
/// Term length of the construction given the base digit sum. For symmetric
/// the sum is S_k at the half index and parity picks the form.
inline std::uint64_t term_digits_from_sum(SequenceKind kind, std::uint64_t digit_sum,
                                          std::uint64_t first_term_digits, bool odd_index) {
    switch (kind) {
        case SequenceKind::consecutive:
        case SequenceKind::reversed:
            return digit_sum;
        case SequenceKind::mirror:
            return 2 * digit_sum - first_term_digits;
        case SequenceKind::symmetric:
            return odd_index ? 2 * digit_sum - 1 : 2 * digit_sum;
    }
    throw std::logic_error("unreachable SequenceKind");
}
}  // namespace detail

/// Digit count of the n-th term, without constructing it.
inline std::uint64_t digits_at(SequenceKind kind, BaseSpec base, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("digits_at: index must be >= 1");
    const bool odd = (n % 2) == 1;
    const std::uint64_t half = odd ? (n + 1) / 2 : n / 2;
    const std::uint64_t sum_index = kind == SequenceKind::symmetric ? half : n;
    const std::uint64_t s = base_digit_sum(base, sum_index);
    const std::uint64_t first = digit_length(base_term(base, 1));
    return detail::term_digits_from_sum(kind, s, first, odd);
}

/// Incremental generator for one (kind, base) stream. Single-owner: advance
/// with next(); replaying a fresh generator reproduces the same terms.
///
/// Recurrences (u_n the base term, k the half index):
///   consecutive_n = conc(consecutive_{n-1}, u_n)
///   reversed_n    = conc(u_n, reversed_{n-1})
///   mirror_n      = conc(conc(u_n, mirror_{n-1}), u_n)
///   symmetric_{2k-1} = conc(bld(consecutive_k), reversed_k)
///   symmetric_{2k}   = conc(consecutive_k, reversed_k)
/// with every stream starting from u_1 at n = 1.
class Generator {
public:
    Generator(SequenceKind kind, BaseSpec base) : kind_(kind), base_(base) {}

    SequenceKind kind() const { return kind_; }
    BaseSpec base() const { return base_; }
    std::uint64_t next_index() const { return next_index_; }

    /// S_k over the base terms consumed so far.
    std::uint64_t consumed_digit_sum() const { return digit_sum_; }

    Term next() {
        const std::uint64_t index = next_index_++;
        const bool odd = (index % 2) == 1;
        const std::uint64_t want = kind_ == SequenceKind::symmetric
                                       ? (odd ? (index + 1) / 2 : index / 2)
                                       : index;
        while (consumed_ < want) consume_base_term();
        const std::uint64_t digits =
            detail::term_digits_from_sum(kind_, digit_sum_, first_term_digits_, odd);
        switch (kind_) {
            case SequenceKind::consecutive: return {index, consecutive_, digits};
            case SequenceKind::reversed: return {index, reversed_, digits};
            case SequenceKind::mirror: return {index, mirror_, digits};
            case SequenceKind::symmetric: {
                // bld drops one digit of consecutive_k (to zero when k = 1).
                Nat value = odd ? conc(bld(consecutive_), reversed_, digit_sum_)
                                : conc(consecutive_, reversed_, digit_sum_);
                return {index, std::move(value), digits};
            }
        }
        throw std::logic_error("unreachable SequenceKind");
    }

private:
    void consume_base_term() {
        const Nat u = base_term(base_, consumed_ + 1);
        const std::uint64_t u_digits = digit_length(u);
        const bool first = consumed_ == 0;
        if (first) first_term_digits_ = u_digits;
        switch (kind_) {
            case SequenceKind::consecutive:
                consecutive_ = first ? u : conc(consecutive_, u, u_digits);
                break;
            case SequenceKind::reversed:
                reversed_ = first ? u : conc(u, reversed_, digit_sum_);
                break;
            case SequenceKind::mirror:
                mirror_ = first ? u
                                : conc(conc(u, mirror_, 2 * digit_sum_ - first_term_digits_), u,
                                       u_digits);
                break;
            case SequenceKind::symmetric:
                consecutive_ = first ? u : conc(consecutive_, u, u_digits);
                reversed_ = first ? u : conc(u, reversed_, digit_sum_);
                break;
        }
        ++consumed_;
        digit_sum_ += u_digits;
    }

    SequenceKind kind_;
    BaseSpec base_;
    std::uint64_t next_index_ = 1;
    std::uint64_t consumed_ = 0;
    std::uint64_t digit_sum_ = 0;
    std::uint64_t first_term_digits_ = 0;
    Nat consecutive_;
    Nat reversed_;
    Nat mirror_;
};

/// n-th term by sequential replay; there is no closed form.
inline Term term_at(SequenceKind kind, BaseSpec base, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("term_at: index must be >= 1");
    Generator gen(kind, base);
    for (std::uint64_t i = 1; i < n; ++i) gen.next();
    return gen.next();
}

}  // namespace smseq
