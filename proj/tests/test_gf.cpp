#include <doctest.h>

#include <random>

#include "fpselberg/gf.hpp"

using namespace fpsel;

namespace {
const std::uint32_t test_primes[] = {3, 5, 7, 11, 13, 101, 32749};
}

TEST_CASE("FpContext rejects bad moduli")
{
    CHECK_THROWS_AS(FpContext(2), precondition_violation);
    CHECK_THROWS_AS(FpContext(9), precondition_violation);
    CHECK_THROWS_AS(FpContext(1), precondition_violation);
    CHECK_THROWS_AS(FpContext(32771), precondition_violation); // prime but above the supported range
    CHECK_NOTHROW(FpContext(32749));
}

TEST_CASE("factorial table")
{
    for (auto p : test_primes) {
        const FpContext ctx(p);
        const auto& table = ctx.factorial_table();
        REQUIRE(table.size() == p);
        CHECK(table[0] == 1);
        CHECK(table[p - 1] == p - 1);
        for (std::uint32_t n = 1; n < p; ++n) {
            CHECK(checked_factorial(ctx, n) == ctx.element(n) * checked_factorial(ctx, n - 1));
        }
    }
}

TEST_CASE("checked_factorial")
{
    const FpContext ctx(7);
    CHECK(checked_factorial(ctx, 6).value() == 6);
    CHECK(checked_factorial(ctx, 0).value() == 1);
    CHECK_THROWS_AS(checked_factorial(ctx, 7), out_of_range_error);
    try {
        checked_factorial(ctx, -3);
        FAIL("expected out_of_range_error");
    } catch (const out_of_range_error& e) {
        CHECK(e.argument() == -3);
    }
}

TEST_CASE("wilson_cancel")
{
    CHECK(wilson_cancel(FpContext(5), 2, 2).value() == 4);
    CHECK(wilson_cancel(FpContext(7), 3, 3).value() == 1);
    CHECK(wilson_cancel(FpContext(5), 0, 4).value() == 4);
    CHECK_THROWS_AS(wilson_cancel(FpContext(5), 1, 1), precondition_violation);
    CHECK_THROWS_AS(wilson_cancel(FpContext(5), -1, 5), precondition_violation);
}

TEST_CASE("Wilson cancellation holds exhaustively")
{
    for (auto p : test_primes) {
        const FpContext ctx(p);
        for (std::int64_t a = 0; a < p; ++a) {
            CHECK(checked_factorial(ctx, a) * checked_factorial(ctx, p - 1 - a) == sign_pow(ctx, a + 1));
        }
    }
}

TEST_CASE("sign_pow")
{
    CHECK(sign_pow(FpContext(5), 0).value() == 1);
    CHECK(sign_pow(FpContext(5), 3).value() == 4);
    CHECK(sign_pow(FpContext(7), -2).value() == 1);
    CHECK(sign_pow(FpContext(7), -1).value() == 6);
}

TEST_CASE("element arithmetic")
{
    const FpContext ctx(11);
    const FpElement x = ctx.element(-3);
    CHECK(x.value() == 8);
    CHECK((x + ctx.element(5)).value() == 2);
    CHECK((x * x).value() == 9);
    CHECK((ctx.one() / ctx.element(2)).value() == 6);
    CHECK(ctx.element(2).pow(10) == ctx.one());
    CHECK_THROWS_AS(ctx.zero().inverse(), precondition_violation);
    CHECK_THROWS_AS(ctx.one() + FpContext(7).one(), precondition_violation);
}

TEST_CASE("field axioms on random triples")
{
    std::mt19937_64 rng(7);
    for (auto p : test_primes) {
        const FpContext ctx(p);
        for (int trial = 0; trial < 200; ++trial) {
            const FpElement x = ctx.element(static_cast<std::int64_t>(rng() % p));
            const FpElement y = ctx.element(static_cast<std::int64_t>(rng() % p));
            const FpElement z = ctx.element(static_cast<std::int64_t>(rng() % p));
            CHECK((x + y) + z == x + (y + z));
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
            CHECK(x - x == ctx.zero());
            if (!x.is_zero()) {
                CHECK(x * x.inverse() == ctx.one());
            }
        }
    }
}
