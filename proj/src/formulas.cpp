#include "fpselberg/formulas.hpp"

#include <optional>

namespace fpsel {

const FpElement& FormulaResult::value() const
{
    if (const auto* v = std::get_if<FpElement>(&state_)) {
        return *v;
    }
    const auto& r = std::get<OutOfRangeReport>(state_);
    throw out_of_range_error(r.argument, "out of range: " + r.description);
}

const OutOfRangeReport& FormulaResult::report() const
{
    if (const auto* r = std::get_if<OutOfRangeReport>(&state_)) {
        return *r;
    }
    throw std::logic_error("FormulaResult::report: result holds a value");
}

std::string FormulaResult::str() const
{
    if (has_value()) {
        return std::to_string(value().value());
    }
    return "out_of_range: " + report().description;
}

namespace {

/// Running product of factorials and their inverses. Records the first
/// argument that leaves [0, p); descriptions are built only on failure.
class FactorialProduct {
public:
    explicit FactorialProduct(const FpContext& ctx) : ctx_(ctx), acc_(ctx.one()) {}

    template <typename Describe>
    void numerator(std::int64_t n, Describe&& describe)
    {
        if (auto f = lookup(n, describe)) {
            acc_ *= *f;
        }
    }

    template <typename Describe>
    void denominator(std::int64_t n, Describe&& describe)
    {
        if (auto f = lookup(n, describe)) {
            acc_ /= *f; // n! is a unit for 0 <= n < p
        }
    }

    void times(const FpElement& x) { acc_ *= x; }

    FormulaResult result() const
    {
        if (bad_) {
            return *bad_;
        }
        return acc_;
    }

private:
    template <typename Describe>
    std::optional<FpElement> lookup(std::int64_t n, Describe& describe)
    {
        if (bad_) {
            return std::nullopt;
        }
        if (n < 0 || n >= static_cast<std::int64_t>(ctx_.p())) {
            bad_ = OutOfRangeReport{n, describe() + " = " + std::to_string(n) + " outside [0, "
                                           + std::to_string(ctx_.p()) + ")"};
            return std::nullopt;
        }
        return checked_factorial(ctx_, n);
    }

    const FpContext& ctx_;
    FpElement acc_;
    std::optional<OutOfRangeReport> bad_;
};

std::string at(std::initializer_list<std::pair<const char*, std::int64_t>> vars)
{
    std::string s = " at ";
    bool first = true;
    for (const auto& [name, v] : vars) {
        s += (first ? "" : ",") + std::string(name) + "=" + std::to_string(v);
        first = false;
    }
    return s;
}

/// Product of ratios of plain integers, each checked for vanishing mod p.
class RatioProduct {
public:
    RatioProduct(const FpContext& ctx, const char* name) : ctx_(ctx), acc_(ctx.one()), name_(name) {}

    void ratio(std::int64_t num, std::int64_t den, const std::string& where)
    {
        const FpElement n = ctx_.element(num);
        const FpElement d = ctx_.element(den);
        if (n.is_zero()) {
            throw zero_factor(name_ + ": numerator factor " + std::to_string(num) + where + " vanishes mod p");
        }
        if (d.is_zero()) {
            throw zero_factor(name_ + ": denominator factor " + std::to_string(den) + where + " vanishes mod p");
        }
        acc_ *= n / d;
    }

    void times(const FpElement& x) { acc_ *= x; }
    FpElement value() const { return acc_; }

private:
    const FpContext& ctx_;
    FpElement acc_;
    std::string name_;
};

void require_a2(std::int64_t k1, std::int64_t k2, const ParamPoint& pt)
{
    if (!(k1 > k2 && k2 > 0)) {
        throw precondition_violation("need k1 > k2 > 0");
    }
    if (pt.b.size() != 2) {
        throw precondition_violation("need b = (b1, b2), got " + pt.str());
    }
}

} // namespace

FpElement beta_rhs(std::int64_t a, std::int64_t b, const FpContext& ctx)
{
    const auto p = static_cast<std::int64_t>(ctx.p());
    if (a < 0 || a >= p || b < 0 || b >= p) {
        throw precondition_violation("beta_rhs: need 0 <= a, b < p");
    }
    if (a + b < p - 1) {
        return ctx.zero();
    }
    return -(checked_factorial(ctx, a) * checked_factorial(ctx, b) / checked_factorial(ctx, a + b + 1 - p));
}

FpElement dyson_constant(std::int64_t k, std::int64_t c, const FpContext& ctx)
{
    if (k < 0 || c < 0) {
        throw precondition_violation("dyson_constant: need k, c >= 0");
    }
    return checked_factorial(ctx, k * c) / checked_factorial(ctx, c).pow(static_cast<std::uint64_t>(k));
}

FormulaResult r_value(const KComposition& k, const ParamPoint& pt, const FpContext& ctx)
{
    if (!k.strictly_decreasing()) {
        throw precondition_violation("r_value: composition " + k.str() + " is not strictly decreasing");
    }
    if (pt.b.size() != k.n()) {
        throw precondition_violation("r_value: b has the wrong length for " + k.str());
    }
    const auto n = static_cast<std::int64_t>(k.n());
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::int64_t c = pt.c;
    auto a_s = [&](std::int64_t s) { return s == 1 ? pt.a : std::int64_t{0}; };
    auto b_sum = [&](std::int64_t s, std::int64_t r) {
        std::int64_t sum = 0;
        for (std::int64_t j = s; j <= r; ++j) {
            sum += pt.b[static_cast<std::size_t>(j - 1)];
        }
        return sum;
    };

    FactorialProduct prod(ctx);
    for (std::int64_t s = 1; s <= n; ++s) {
        for (std::int64_t r = s; r <= n; ++r) {
            const std::int64_t bs = b_sum(s, r);
            for (std::int64_t i = 1; i <= k.part(r) - k.part(r + 1); ++i) {
                prod.numerator(r - s + bs + (i + s - r - 1) * c, [&] {
                    return "numerator (r-s+b_s+..+b_r+(i+s-r-1)c)!" + at({{"s", s}, {"r", r}, {"i", i}});
                });
                prod.denominator(r - s + 1 + a_s(s) + bs + (i + s - r + k.part(s) - k.part(s - 1) - 2) * c
                                     - (s == 1 ? p : 0),
                                 [&] {
                                     return "denominator (r-s+1+a_s+b_s+..+b_r+(i+s-r+k_s-k_{s-1}-2)c-delta_{s,1}p)!"
                                            + at({{"s", s}, {"r", r}, {"i", i}});
                                 });
            }
        }
    }
    prod.times(sign_pow(ctx, k.total()));
    for (std::int64_t i = 1; i <= k.part(1); ++i) {
        prod.numerator(pt.a + (i - 1) * c, [&] { return "(a+(i-1)c)!" + at({{"i", i}}); });
    }
    for (std::int64_t r = 1; r <= n; ++r) {
        for (std::int64_t i = 1; i <= k.part(r); ++i) {
            prod.numerator(i * c, [&] { return "(ic)!" + at({{"r", r}, {"i", i}}); });
            prod.denominator(c, [&] { return std::string("(c)!"); });
        }
    }
    for (std::int64_t r = 2; r <= n; ++r) {
        for (std::int64_t i = 1; i <= k.part(r); ++i) {
            prod.numerator(p + (i - k.part(r - 1) - 1) * c,
                           [&] { return "(p+(i-k_{r-1}-1)c)!" + at({{"r", r}, {"i", i}}); });
        }
    }
    return prod.result();
}

FormulaResult r_a2(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx)
{
    require_a2(k1, k2, pt);
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::int64_t a = pt.a;
    const std::int64_t b1 = pt.b[0];
    const std::int64_t b2 = pt.b[1];
    const std::int64_t c = pt.c;

    FactorialProduct prod(ctx);
    prod.times(sign_pow(ctx, k1 + k2));
    for (std::int64_t i = 1; i <= k1 - k2; ++i) {
        prod.numerator(b1 + (i - 1) * c, [&] { return "(b1+(i-1)c)!" + at({{"i", i}}); });
        prod.denominator(1 + a + b1 + (i + k1 - 2) * c - p, [&] { return "(1+a+b1+(i+k1-2)c-p)!" + at({{"i", i}}); });
    }
    for (std::int64_t i = 1; i <= k2; ++i) {
        prod.numerator(b2 + (i - 1) * c, [&] { return "(b2+(i-1)c)!" + at({{"i", i}}); });
        prod.denominator(1 + b2 + (i + k2 - k1 - 2) * c, [&] { return "(1+b2+(i+k2-k1-2)c)!" + at({{"i", i}}); });
        prod.numerator(1 + b1 + b2 + (i - 2) * c, [&] { return "(1+b1+b2+(i-2)c)!" + at({{"i", i}}); });
        prod.denominator(2 + a + b1 + b2 + (i + k1 - 3) * c - p,
                         [&] { return "(2+a+b1+b2+(i+k1-3)c-p)!" + at({{"i", i}}); });
    }
    for (std::int64_t i = 1; i <= k1; ++i) {
        prod.numerator(a + (i - 1) * c, [&] { return "(a+(i-1)c)!" + at({{"i", i}}); });
    }
    for (std::int64_t i = 1; i <= k2; ++i) {
        prod.numerator(p + (i - k1 - 1) * c, [&] { return "(p+(i-k1-1)c)!" + at({{"i", i}}); });
    }
    for (const std::int64_t kr : {k1, k2}) {
        for (std::int64_t i = 1; i <= kr; ++i) {
            prod.numerator(i * c, [&] { return "(ic)!" + at({{"i", i}}); });
            prod.denominator(c, [] { return std::string("(c)!"); });
        }
    }
    return prod.result();
}

FormulaResult rhs_3_11(std::int64_t a, std::int64_t b1, std::int64_t b2, std::int64_t c, const FpContext& ctx)
{
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::int64_t total = a + b1 + b2 - c + 1;
    const bool ok = 0 <= a && a < p && 0 < c && c <= p && 0 <= b2 - c + 1 && b2 - c + 1 < p
                    && 0 <= b1 + b2 - c + 1 && b1 + b2 - c + 1 < p && p - 1 <= total && total < 2 * p - 1;
    if (!ok) {
        throw precondition_violation("rhs_3_11: parameters outside the theorem's hypotheses");
    }
    FactorialProduct prod(ctx);
    prod.numerator(a, [] { return std::string("a!"); });
    prod.numerator(b1 + b2 - c + 1, [] { return std::string("(b1+b2-c+1)!"); });
    prod.denominator(a + b1 + b2 - c + 2 - p, [] { return std::string("(a+b1+b2-c+2-p)!"); });
    prod.numerator(p - c, [] { return std::string("(p-c)!"); });
    prod.numerator(b2, [] { return std::string("b2!"); });
    prod.denominator(b2 - c + 1, [] { return std::string("(b2-c+1)!"); });
    return prod.result();
}

FormulaResult rhs_4_111(std::int64_t a, std::int64_t b1, std::int64_t b2, std::int64_t b3, std::int64_t c,
                        const FpContext& ctx)
{
    const auto p = static_cast<std::int64_t>(ctx.p());
    FactorialProduct prod(ctx);
    prod.times(-ctx.one());
    prod.numerator(a, [] { return std::string("a!"); });
    prod.numerator(b1 + b2 + b3 - 2 * c + 2, [] { return std::string("(b1+b2+b3-2c+2)!"); });
    prod.denominator(a + b1 + b2 + b3 - 2 * c + 3 - p, [] { return std::string("(a+b1+b2+b3-2c+3-p)!"); });
    prod.numerator(p - c, [] { return std::string("(p-c)!"); });
    prod.numerator(b2 + b3 - c + 1, [] { return std::string("(b2+b3-c+1)!"); });
    prod.denominator(b2 + b3 - 2 * c + 2, [] { return std::string("(b2+b3-2c+2)!"); });
    prod.numerator(p - c, [] { return std::string("(p-c)!"); });
    prod.numerator(b3, [] { return std::string("b3!"); });
    prod.denominator(b3 - c + 1, [] { return std::string("(b3-c+1)!"); });
    return prod.result();
}

FpElement b0_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx)
{
    require_a2(k1, k2, pt);
    const std::int64_t b2 = pt.b[1];
    const std::int64_t c = pt.c;
    RatioProduct prod(ctx, "B0");
    prod.times(sign_pow(ctx, k2));
    for (std::int64_t i = 0; i <= k2 - 1; ++i) {
        prod.ratio((k1 - k2 + i + 1) * c, b2 + i * c, at({{"i", i}}));
    }
    return prod.value();
}

// The second product uses a+b1+b2+(i+k1-3)c; this is the ratio of the closed
// form for I_{0,0,0} under the shift and matches the S-1/S-2 factors.
FpElement b1_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx)
{
    require_a2(k1, k2, pt);
    const std::int64_t a = pt.a;
    const std::int64_t b1 = pt.b[0];
    const std::int64_t b2 = pt.b[1];
    const std::int64_t c = pt.c;
    RatioProduct prod(ctx, "B1");
    for (std::int64_t i = 1; i <= k1 - k2; ++i) {
        prod.ratio(a + b1 + (i + k1 - 2) * c, b1 + (i - 1) * c, at({{"i", i}}));
    }
    for (std::int64_t i = 1; i <= k2; ++i) {
        prod.ratio(a + b1 + b2 + (i + k1 - 3) * c, b1 + b2 + (i - 2) * c, at({{"i", i}}));
    }
    return prod.value();
}

FpElement b2_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx)
{
    require_a2(k1, k2, pt);
    const std::int64_t a = pt.a;
    const std::int64_t b1 = pt.b[0];
    const std::int64_t b2 = pt.b[1];
    const std::int64_t c = pt.c;
    RatioProduct prod(ctx, "B2");
    for (std::int64_t i = 1; i <= k2; ++i) {
        prod.ratio(b2 + (i + k2 - k1 - 2) * c, b2 + (i - 1) * c, at({{"i", i}}));
        prod.ratio(a + b1 + b2 + (i + k1 - 3) * c, b1 + b2 + (i - 2) * c, at({{"i", i}}));
    }
    return prod.value();
}

BFactors b_factors(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx)
{
    return {b0_factor(k1, k2, pt, ctx), b1_factor(k1, k2, pt, ctx), b2_factor(k1, k2, pt, ctx)};
}

FpElement s1_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx)
{
    require_a2(k1, k2, pt);
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::int64_t a = pt.a;
    const std::int64_t b1 = pt.b[0];
    const std::int64_t b2 = pt.b[1];
    const std::int64_t c = pt.c;
    RatioProduct prod(ctx, "S-1");
    for (std::int64_t i = 1; i <= k1 - k2; ++i) {
        prod.ratio(1 + a + b1 + (i + k1 - 2) * c - p, b1 + (i - 1) * c, at({{"i", i}}));
    }
    for (std::int64_t i = 1; i <= k2; ++i) {
        prod.ratio(2 + a + b1 + b2 + (i + k1 - 3) * c - p, 1 + b1 + b2 + (i - 2) * c, at({{"i", i}}));
    }
    return prod.value();
}

FpElement s2_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx)
{
    require_a2(k1, k2, pt);
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::int64_t a = pt.a;
    const std::int64_t b1 = pt.b[0];
    const std::int64_t b2 = pt.b[1];
    const std::int64_t c = pt.c;
    RatioProduct prod(ctx, "S-2");
    for (std::int64_t i = 1; i <= k2; ++i) {
        prod.ratio(1 + b2 + (i + k2 - k1 - 2) * c, b2 + (i - 1) * c, at({{"i", i}}));
        prod.ratio(2 + a + b1 + b2 + (i + k1 - 3) * c - p, 1 + b1 + b2 + (i - 2) * c, at({{"i", i}}));
    }
    return prod.value();
}

FormulaResult i000_rhs(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx)
{
    require_a2(k1, k2, pt);
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::int64_t a = pt.a;
    const std::int64_t b1 = pt.b[0];
    const std::int64_t b2 = pt.b[1];
    const std::int64_t c = pt.c;

    FactorialProduct prod(ctx);
    prod.times(sign_pow(ctx, k1 + k2));
    for (std::int64_t i = 1; i <= k1 - k2; ++i) {
        prod.numerator(b1 + (i - 1) * c, [&] { return "(b1+(i-1)c)!" + at({{"i", i}}); });
        prod.denominator(a + b1 + (i + k1 - 2) * c - p, [&] { return "(a+b1+(i+k1-2)c-p)!" + at({{"i", i}}); });
    }
    for (std::int64_t i = 1; i <= k2; ++i) {
        prod.numerator(b2 + (i - 1) * c, [&] { return "(b2+(i-1)c)!" + at({{"i", i}}); });
        prod.denominator(b2 + (i + k2 - k1 - 2) * c, [&] { return "(b2+(i+k2-k1-2)c)!" + at({{"i", i}}); });
        prod.numerator(b1 + b2 + (i - 2) * c, [&] { return "(b1+b2+(i-2)c)!" + at({{"i", i}}); });
        prod.denominator(a + b1 + b2 + (i + k1 - 3) * c - p,
                         [&] { return "(a+b1+b2+(i+k1-3)c-p)!" + at({{"i", i}}); });
    }
    for (std::int64_t i = 1; i <= k1; ++i) {
        prod.numerator(a + (i - 1) * c - 1, [&] { return "(a+(i-1)c-1)!" + at({{"i", i}}); });
    }
    for (std::int64_t i = 1; i <= k2; ++i) {
        prod.numerator(p + (i - k1 - 1) * c - 1, [&] { return "(p+(i-k1-1)c-1)!" + at({{"i", i}}); });
    }
    for (const std::int64_t kr : {k1, k2}) {
        for (std::int64_t i = 1; i <= kr; ++i) {
            prod.numerator(i * c, [&] { return "(ic)!" + at({{"i", i}}); });
            prod.denominator(c, [] { return std::string("(c)!"); });
        }
    }
    return prod.result();
}

FpElement induction_factor(const KComposition& k, std::int64_t c, const FpContext& ctx)
{
    if (k.n() < 2) {
        throw precondition_violation("induction_factor: need n >= 2");
    }
    const auto n = static_cast<std::int64_t>(k.n());
    const std::int64_t kn = k.part(n);
    const std::int64_t b_n = (k.part(n - 1) - kn + 1) * c - 1;
    // sign of the top homogeneous part in the last group: (-1)^{b_n} per
    // variable from (1 - t)^{b_n}, (-1)^c per pair from (t - t')^{2c}
    const FpElement sign = sign_pow(ctx, b_n * kn + c * kn * (kn - 1) / 2);
    return sign * dyson_constant(kn, c, ctx);
}

} // namespace fpsel
