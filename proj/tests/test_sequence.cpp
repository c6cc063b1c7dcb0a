#include <catch2/catch_amalgamated.hpp>

#include "oracle.hpp"
#include "smseq/concat.hpp"
#include "smseq/sequence.hpp"

using smseq::BaseSpec;
using smseq::Generator;
using smseq::Nat;
using smseq::SequenceKind;
using smseq::Term;

namespace {
constexpr SequenceKind kKinds[] = {SequenceKind::consecutive, SequenceKind::reversed,
                                   SequenceKind::mirror, SequenceKind::symmetric};
constexpr BaseSpec kBases[] = {BaseSpec::natural, BaseSpec::triangular};
}  // namespace

TEST_CASE("base_term evaluates the base sequences") {
    CHECK(smseq::base_term(BaseSpec::triangular, 20) == Nat(210));
    CHECK(smseq::base_term(BaseSpec::triangular, 1) == Nat(1));
    CHECK(smseq::base_term(BaseSpec::natural, 7) == Nat(7));
    CHECK_THROWS_AS(smseq::base_term(BaseSpec::natural, 0), std::invalid_argument);
}

TEST_CASE("a fresh generator emits u_1 first for every kind") {
    for (SequenceKind kind : kKinds) {
        for (BaseSpec base : kBases) {
            Generator gen(kind, base);
            const Term t = gen.next();
            CHECK(t.index == 1);
            CHECK(t.value == Nat(1));  // u_1 = 1 for both bases
            CHECK(t.digits == 1);
        }
    }
}

TEST_CASE("advance reproduces known terms") {
    const auto nth = [](SequenceKind kind, BaseSpec base, std::uint64_t n) {
        Generator gen(kind, base);
        Term t = gen.next();
        for (std::uint64_t i = 1; i < n; ++i) t = gen.next();
        return t;
    };
    CHECK(nth(SequenceKind::consecutive, BaseSpec::triangular, 4).value == Nat(13610));
    CHECK(nth(SequenceKind::reversed, BaseSpec::triangular, 10).value ==
          Nat("55453628211510631"));
    CHECK(nth(SequenceKind::mirror, BaseSpec::triangular, 4).value == Nat(106313610));
    CHECK(nth(SequenceKind::symmetric, BaseSpec::triangular, 7).value == Nat(136110631));
}

TEST_CASE("term_at replays the recurrence") {
    CHECK(smseq::term_at(SequenceKind::consecutive, BaseSpec::natural, 10).value ==
          Nat("12345678910"));
    CHECK(smseq::term_at(SequenceKind::symmetric, BaseSpec::natural, 10).value ==
          Nat("1234554321"));
    CHECK(smseq::term_at(SequenceKind::reversed, BaseSpec::triangular, 5).value == Nat(1510631));
    CHECK_THROWS_AS(smseq::term_at(SequenceKind::reversed, BaseSpec::natural, 0),
                    std::invalid_argument);
}

TEST_CASE("terms match the string oracle through index 200") {
    for (SequenceKind kind : kKinds) {
        for (BaseSpec base : kBases) {
            Generator gen(kind, base);
            for (std::uint64_t n = 1; n <= 200; ++n) {
                const Term t = gen.next();
                const std::string expect = oracle::term_str(kind, base, n);
                REQUIRE(t.value.to_string() == expect);
                REQUIRE(t.digits == expect.size());
                REQUIRE(t.digits == smseq::digit_length(t.value));
                REQUIRE(smseq::digits_at(kind, base, n) == expect.size());
            }
        }
    }
}

TEST_CASE("digit counts of deep terms, with materialized cross-check") {
    const struct {
        SequenceKind kind;
        std::uint64_t index;
        std::uint64_t expect;
    } cases[] = {
        {SequenceKind::consecutive, 1000, 5354}, {SequenceKind::reversed, 1000, 5354},
        {SequenceKind::mirror, 1000, 10707},     {SequenceKind::symmetric, 1000, 4708},
        {SequenceKind::mirror, 600, 5907},
    };
    for (const auto& c : cases) {
        CHECK(smseq::digits_at(c.kind, BaseSpec::triangular, c.index) == c.expect);
        const Term t = smseq::term_at(c.kind, BaseSpec::triangular, c.index);
        CHECK(t.digits == c.expect);
        CHECK(smseq::digit_length(t.value) == c.expect);
    }
}

TEST_CASE("digits_at rejects index 0 and stays cheap for huge indices") {
    CHECK_THROWS_AS(smseq::digits_at(SequenceKind::mirror, BaseSpec::triangular, 0),
                    std::invalid_argument);
    // closed form vs incremental accumulation
    for (BaseSpec base : kBases) {
        std::uint64_t sum = 0;
        for (std::uint64_t n = 1; n <= 2000; ++n) {
            sum += smseq::digit_length(smseq::base_term(base, n));
            REQUIRE(smseq::base_digit_sum(base, n) == sum);
        }
    }
    // index 10^6 must complete without materializing anything
    const std::uint64_t big = smseq::digits_at(SequenceKind::mirror, BaseSpec::triangular, 1000000);
    std::uint64_t sum = 0;
    for (std::uint64_t n = 1; n <= 1000000; ++n)
        sum += smseq::digit_length(smseq::base_term(BaseSpec::triangular, n));
    CHECK(big == 2 * sum - 1);
}

TEST_CASE("mirror and symmetric terms are palindromes while base terms are single digits") {
    for (std::uint64_t n = 1; n <= 9; ++n)
        CHECK(oracle::is_palindrome(
            smseq::term_at(SequenceKind::mirror, BaseSpec::natural, n).value.to_string()));
    for (std::uint64_t n = 1; n <= 18; ++n)
        CHECK(oracle::is_palindrome(
            smseq::term_at(SequenceKind::symmetric, BaseSpec::natural, n).value.to_string()));
}

TEST_CASE("consecutive and reversed terms at equal index have equal digit counts") {
    for (BaseSpec base : kBases)
        for (std::uint64_t n = 1; n <= 100; ++n)
            CHECK(smseq::digits_at(SequenceKind::consecutive, base, n) ==
                  smseq::digits_at(SequenceKind::reversed, base, n));
}

TEST_CASE("replaying a generator is deterministic") {
    Generator a(SequenceKind::symmetric, BaseSpec::triangular);
    Generator b(SequenceKind::symmetric, BaseSpec::triangular);
    for (int i = 0; i < 50; ++i) {
        const Term ta = a.next();
        const Term tb = b.next();
        CHECK(ta.index == tb.index);
        CHECK(ta.value == tb.value);
        CHECK(ta.digits == tb.digits);
    }
}

TEST_CASE("kind and base names round-trip through their parsers") {
    for (SequenceKind kind : kKinds)
        CHECK(smseq::parse_sequence_kind(smseq::to_string(kind)) == kind);
    for (BaseSpec base : kBases) CHECK(smseq::parse_base_spec(smseq::to_string(base)) == base);
    CHECK(smseq::parse_sequence_kind("scs") == SequenceKind::consecutive);
    CHECK(smseq::parse_sequence_kind("rss") == SequenceKind::reversed);
    CHECK(smseq::parse_sequence_kind("sms") == SequenceKind::mirror);
    CHECK(smseq::parse_sequence_kind("sss") == SequenceKind::symmetric);
    CHECK_THROWS_AS(smseq::parse_sequence_kind("xyz"), std::invalid_argument);
    CHECK_THROWS_AS(smseq::parse_base_spec("fib"), std::invalid_argument);
}
