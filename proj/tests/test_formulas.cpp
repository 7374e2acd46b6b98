#include <doctest.h>

#include "fpselberg/admissible.hpp"
#include "fpselberg/formulas.hpp"

using namespace fpsel;

TEST_CASE("beta_rhs")
{
    CHECK(beta_rhs(2, 2, FpContext(5)).value() == 1);
    CHECK(beta_rhs(1, 1, FpContext(5)).value() == 0);
    CHECK(beta_rhs(6, 6, FpContext(7)).value() == 1);
    CHECK_THROWS_AS(beta_rhs(5, 0, FpContext(5)), precondition_violation);
    CHECK_THROWS_AS(beta_rhs(0, -1, FpContext(5)), precondition_violation);
}

TEST_CASE("dyson_constant")
{
    const FpContext ctx(7);
    CHECK(dyson_constant(2, 1, ctx).value() == 2);
    CHECK(dyson_constant(3, 1, ctx).value() == 6);
    CHECK(dyson_constant(1, 5, ctx).value() == 1);
    CHECK_THROWS_AS(dyson_constant(2, 4, ctx), out_of_range_error);
}

TEST_CASE("r_value")
{
    SUBCASE("k=(1) agrees with the beta integral")
    {
        CHECK(r_value(KComposition({1}), {2, {2}, 1}, FpContext(5)).value().value() == 1);
    }
    SUBCASE("distinguished point factors through the induction step")
    {
        const FpContext ctx(11);
        const FpElement full = r_value(KComposition({2, 1}), {2, {5, 5}, 3}, ctx).value();
        const FpElement reduced = r_value(KComposition({2}), {2, {5}, 3}, ctx).value();
        CHECK(full == induction_factor(KComposition({2, 1}), 3, ctx) * reduced);
        CHECK(full.value() == 9);
    }
    SUBCASE("b1 below its lower bound is out of range")
    {
        const FormulaResult r = r_value(KComposition({2, 1}), {2, {4, 5}, 3}, FpContext(11));
        REQUIRE_FALSE(r.has_value());
        CHECK(r.report().argument < 0);
        CHECK(r.report().description.find("denominator") != std::string::npos);
        CHECK_THROWS_AS(r.value(), out_of_range_error);
    }
    CHECK_THROWS_AS(r_value(KComposition({1, 1}), {1, {1, 1}, 1}, FpContext(5)), precondition_violation);
    CHECK_THROWS_AS(r_value(KComposition({2, 1}), {1, {1}, 1}, FpContext(5)), precondition_violation);
}

TEST_CASE("r_a2 matches the general formula")
{
    const FpContext ctx(11);
    CHECK(r_a2(2, 1, {2, {5, 5}, 3}, ctx).value() == r_value(KComposition({2, 1}), {2, {5, 5}, 3}, ctx).value());
    const FpContext ctx13(13);
    for (const auto& pt : enumerate_admissible(KComposition({3, 1}), ctx13)) {
        CHECK(r_a2(3, 1, pt, ctx13).value() == r_value(KComposition({3, 1}), pt, ctx13).value());
    }
    // b1 + b2 too large: an s = 1 numerator leaves [0, p)
    const FormulaResult r = r_a2(2, 1, {9, {9, 9}, 1}, ctx);
    REQUIRE_FALSE(r.has_value());
    CHECK(r.report().argument >= 11);
}

TEST_CASE("rhs_3_11")
{
    const FpContext ctx(5);
    CHECK(rhs_3_11(1, 3, 2, 2, ctx).value().value() == 3);
    CHECK(rhs_3_11(2, 3, 2, 2, ctx).value() == selberg_integral(KComposition({1, 1}), {2, {3, 2}, 2}, ctx));
    CHECK_THROWS_AS(rhs_3_11(0, 0, 1, 2, ctx), precondition_violation);
}

TEST_CASE("rhs_4_111")
{
    const FpContext ctx(5);
    std::size_t checked = 0;
    for (std::int64_t a = 0; a < 5; ++a) {
        for (std::int64_t b = 1; b < 5; ++b) {
            for (std::int64_t c = 1; c <= 5; ++c) {
                for (std::int64_t b1 = 0; b1 < 8; ++b1) {
                    const FormulaResult r = rhs_4_111(a, b1, b, b, c, ctx); // symmetric b2 = b3
                    if (r) {
                        CHECK(r.value() == selberg_integral(KComposition({1, 1, 1}), {a, {b1, b, b}, c}, ctx));
                        ++checked;
                    }
                }
            }
        }
    }
    CHECK(checked > 0);
    // c = p: cross factors disappear on both sides
    CHECK(rhs_4_111(2, 3, 4, 4, 5, ctx).value()
          == selberg_integral(KComposition({1, 1, 1}), {2, {3, 4, 4}, 5}, ctx));
    CHECK_FALSE(rhs_4_111(0, 0, 0, 0, 1, ctx).has_value());
}

TEST_CASE("contiguous factors")
{
    const FpContext ctx(11);
    const ParamPoint pt{2, {5, 5}, 3};
    const BFactors b = b_factors(2, 1, pt, ctx);
    CHECK(b.b0 == -(ctx.element(6) / ctx.element(5)));
    CHECK_THROWS_AS(b1_factor(2, 1, {2, {11, 5}, 3}, ctx), zero_factor);
    CHECK_THROWS_AS(b0_factor(2, 1, {2, {5, 11}, 3}, ctx), zero_factor);
    CHECK_THROWS_AS(b_factors(1, 1, pt, ctx), precondition_violation);
}

TEST_CASE("i000_rhs")
{
    const FpContext ctx(7);
    SUBCASE("boundary b2 = (k1-k2+1)c reduces to the A_1 closed form")
    {
        const FpContext ctx11(11);
        for (const auto& [k1, k2] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {3, 1}, {3, 2}}) {
            std::size_t hits = 0;
            for (std::int64_t a = 1; a < 11; ++a) {
                for (std::int64_t c = 1; c * k1 < 11; ++c) {
                    for (std::int64_t b1 = 1; b1 < 22; ++b1) {
                        const std::int64_t b2 = (k1 - k2 + 1) * c;
                        const ParamPoint pt{a, {b1, b2}, c};
                        if (!is_admissible_I(k1, k2, pt, ctx11).admissible) {
                            continue;
                        }
                        const FormulaResult a1 = r_value(KComposition({k1}), {a - 1, {b1}, c}, ctx11);
                        if (!a1) {
                            continue;
                        }
                        // (-1)^{b2 k2 + c k2 (k2-1)/2} (k2 c)!/(c!)^{k2} R_(k1)(a-1, b1, c)
                        const FpElement expect = sign_pow(ctx11, b2 * k2 + c * k2 * (k2 - 1) / 2)
                                                 * dyson_constant(k2, c, ctx11) * a1.value();
                        CHECK(i000_rhs(k1, k2, pt, ctx11).value() == expect);
                        CHECK(weighted_integral(k1, k2, {0, 0, 0}, pt, ctx11) == expect);
                        ++hits;
                    }
                }
            }
            CHECK(hits > 0);
        }
    }
    SUBCASE("outside the domain")
    {
        CHECK_FALSE(i000_rhs(2, 1, {1, {1, 1}, 1}, ctx).has_value());
    }
}

TEST_CASE("induction_factor")
{
    const FpContext ctx(11);
    // the unsimplified sign (-1)^{b_n k_n + c k_n (k_n-1)/2}; see the brute-force check below
    CHECK(induction_factor(KComposition({2, 1}), 3, ctx).value() == 10);
    CHECK(induction_factor(KComposition({3, 2}), 1, ctx).value() == 9);
    CHECK_THROWS_AS(induction_factor(KComposition({3, 2}), 6, ctx), out_of_range_error);
    CHECK_THROWS_AS(induction_factor(KComposition({3}), 1, ctx), precondition_violation);

    // direct extraction: S_(2,1) / S_(2) at (a, (b1, 5), 3)
    const FpElement lhs = selberg_integral(KComposition({2, 1}), {2, {5, 5}, 3}, ctx);
    const FpElement rhs = selberg_integral(KComposition({2}), {2, {5}, 3}, ctx);
    CHECK(lhs == induction_factor(KComposition({2, 1}), 3, ctx) * rhs);
}

TEST_CASE("closed-form identities on the admissible set")
{
    for (std::uint32_t p : {7u, 11u}) {
        const FpContext ctx(p);
        for (const auto& parts : {std::vector<std::int64_t>{2, 1}, {3, 1}, {3, 2}}) {
            const KComposition k(parts);
            for (const auto& pt : enumerate_admissible(k, ctx)) {
                const FpElement r = r_value(k, pt, ctx).value();
                for (std::size_t coord = 0; coord < 2; ++coord) {
                    ParamPoint lower = pt;
                    --lower.b[coord];
                    if (!is_admissible(k, lower, ctx).admissible) {
                        continue;
                    }
                    const FpElement f = coord == 0 ? s1_factor(parts[0], parts[1], pt, ctx)
                                                   : s2_factor(parts[0], parts[1], pt, ctx);
                    CHECK(r_value(k, lower, ctx).value() == f * r);
                }
                if (pt.b[1] == (parts[0] - parts[1] + 1) * pt.c - 1) {
                    const FormulaResult reduced = r_value(k.prefix(), {pt.a, {pt.b[0]}, pt.c}, ctx);
                    CHECK(r == induction_factor(k, pt.c, ctx) * reduced.value());
                }
            }
        }
    }
}

TEST_CASE("n = 1 closed form reproduces the beta integral")
{
    for (std::uint32_t p : {5u, 7u, 11u}) {
        const FpContext ctx(p);
        for (std::int64_t a = 1; a < p; ++a) {
            for (std::int64_t b = 1; b < p; ++b) {
                for (std::int64_t c = 1; c < p; ++c) {
                    const FormulaResult r = r_value(KComposition({1}), {a, {b}, c}, ctx);
                    if (r) {
                        CHECK(r.value() == beta_rhs(a, b, ctx));
                    }
                }
            }
        }
    }
}

TEST_CASE("r_a2 and r_value fail together")
{
    const FpContext ctx(7);
    for (std::int64_t a = 1; a < 14; ++a) {
        for (std::int64_t b1 = 1; b1 < 14; ++b1) {
            for (std::int64_t b2 = 1; b2 < 14; ++b2) {
                for (std::int64_t c = 1; c < 7; ++c) {
                    const ParamPoint pt{a, {b1, b2}, c};
                    const FormulaResult x = r_a2(2, 1, pt, ctx);
                    const FormulaResult y = r_value(KComposition({2, 1}), pt, ctx);
                    REQUIRE(x.has_value() == y.has_value());
                    if (x) {
                        CHECK(x.value() == y.value());
                    }
                }
            }
        }
    }
}

TEST_CASE("closed form for I_000 satisfies the B1/B2 relations")
{
    const FpContext ctx(11);
    for (std::int64_t a = 1; a < 11; ++a) {
        for (std::int64_t b1 = 2; b1 < 22; ++b1) {
            for (std::int64_t b2 = 2; b2 < 22; ++b2) {
                for (std::int64_t c = 1; c <= 5; ++c) {
                    const ParamPoint pt{a, {b1, b2}, c};
                    const ParamPoint l1{a, {b1 - 1, b2}, c};
                    const ParamPoint l2{a, {b1, b2 - 1}, c};
                    if (!is_admissible_I(2, 1, pt, ctx).admissible) {
                        continue;
                    }
                    const FpElement base = i000_rhs(2, 1, pt, ctx).value();
                    if (is_admissible_I(2, 1, l1, ctx).admissible) {
                        CHECK(i000_rhs(2, 1, l1, ctx).value() == b1_factor(2, 1, pt, ctx) * base);
                    }
                    if (is_admissible_I(2, 1, l2, ctx).admissible) {
                        CHECK(i000_rhs(2, 1, l2, ctx).value() == b2_factor(2, 1, pt, ctx) * base);
                    }
                }
            }
        }
    }
}
