#include "fpselberg/integrals.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fpsel {

PCycle::PCycle(std::vector<std::int64_t> l) : l_(std::move(l))
{
    if (l_.empty()) {
        throw precondition_violation("PCycle: empty cycle");
    }
    for (auto x : l_) {
        if (x < 1) {
            throw precondition_violation("PCycle: entries must be positive");
        }
    }
}

Exponents PCycle::targets(std::uint32_t p) const
{
    Exponents t(l_.size());
    for (std::size_t i = 0; i < l_.size(); ++i) {
        t[i] = l_[i] * static_cast<std::int64_t>(p) - 1;
    }
    return t;
}

KComposition::KComposition(std::vector<std::int64_t> k) : k_(std::move(k))
{
    if (k_.empty()) {
        throw precondition_violation("KComposition: need n >= 1");
    }
    for (auto x : k_) {
        if (x < 1) {
            throw precondition_violation("KComposition: entries must be positive");
        }
    }
}

std::int64_t KComposition::part(std::int64_t i) const noexcept
{
    if (i < 1 || i > static_cast<std::int64_t>(k_.size())) {
        return 0;
    }
    return k_[static_cast<std::size_t>(i - 1)];
}

std::int64_t KComposition::total() const noexcept
{
    return std::accumulate(k_.begin(), k_.end(), std::int64_t{0});
}

bool KComposition::strictly_decreasing() const noexcept
{
    for (std::size_t i = 1; i < k_.size(); ++i) {
        if (k_[i - 1] <= k_[i]) {
            return false;
        }
    }
    return true;
}

KComposition KComposition::prefix() const
{
    if (k_.size() < 2) {
        throw precondition_violation("KComposition::prefix: need n >= 2");
    }
    return KComposition(std::vector<std::int64_t>(k_.begin(), k_.end() - 1));
}

namespace {

template <typename Range>
std::string join(const Range& r)
{
    std::ostringstream os;
    bool first = true;
    for (const auto& x : r) {
        os << (first ? "" : ",") << x;
        first = false;
    }
    return os.str();
}

} // namespace

std::string KComposition::str() const
{
    return "(" + join(k_) + ")";
}

std::string ParamPoint::str() const
{
    return "(a=" + std::to_string(a) + ", b=(" + join(b) + "), c=" + std::to_string(c) + ")";
}

bool is_allowable(std::int64_t k1, std::int64_t k2, const AllowableTriple& tr) noexcept
{
    return tr.l1 >= 0 && tr.l2 >= 0 && tr.m >= 0 && tr.l1 <= k1 - k2 + tr.l2 && tr.l2 <= k2
           && tr.m <= std::min(tr.l1, tr.l2);
}

PCycle cycle_from_composition(const KComposition& k)
{
    std::vector<std::int64_t> l;
    l.reserve(static_cast<std::size_t>(k.total()));
    for (std::int64_t i = 1; i <= static_cast<std::int64_t>(k.n()); ++i) {
        const std::int64_t level = (i == 1) ? 1 : k.part(i - 1);
        l.insert(l.end(), static_cast<std::size_t>(k.part(i)), level);
    }
    return PCycle(std::move(l));
}

FpElement fp_integral(const FactorProduct& fp, const PCycle& cycle, const FpContext& ctx,
                      const ExpansionLimits& limits, ExpansionStats* stats)
{
    if (fp.num_vars() != cycle.size()) {
        throw precondition_violation("fp_integral: cycle length " + std::to_string(cycle.size())
                                     + " differs from the number of variables " + std::to_string(fp.num_vars()));
    }
    if (fp.modulus() != ctx.p()) {
        throw precondition_violation("fp_integral: polynomial and context disagree on p");
    }
    return extract_coefficient(fp, cycle.targets(ctx.p()), limits, stats);
}

VarSpace composition_vars(const KComposition& k)
{
    std::vector<std::string> labels;
    for (std::int64_t i = 1; i <= static_cast<std::int64_t>(k.n()); ++i) {
        for (std::int64_t j = 1; j <= k.part(i); ++j) {
            labels.push_back("t" + std::to_string(i) + "_" + std::to_string(j));
        }
    }
    return VarSpace(std::move(labels));
}

FactorProduct master_polynomial(const KComposition& k, const ParamPoint& pt, const FpContext& ctx)
{
    const auto n = static_cast<std::int64_t>(k.n());
    const auto p = static_cast<std::int64_t>(ctx.p());
    if (pt.b.size() != k.n()) {
        throw precondition_violation("master_polynomial: b has " + std::to_string(pt.b.size())
                                     + " entries, composition has n=" + std::to_string(n));
    }
    if (pt.a < 0 || pt.c < 0 || std::any_of(pt.b.begin(), pt.b.end(), [](auto x) { return x < 0; })) {
        throw precondition_violation("master_polynomial: exponents must be nonnegative, got " + pt.str());
    }
    if (pt.c > p) {
        throw invalid_exponent("master_polynomial: c=" + std::to_string(pt.c) + " > p makes p - c negative");
    }

    // first variable index of each group
    std::vector<std::size_t> start(static_cast<std::size_t>(n) + 1, 0);
    for (std::int64_t i = 1; i <= n; ++i) {
        start[static_cast<std::size_t>(i)] = start[static_cast<std::size_t>(i - 1)] + static_cast<std::size_t>(k.part(i));
    }
    auto var = [&](std::int64_t group, std::int64_t j) { return start[static_cast<std::size_t>(group - 1)] + static_cast<std::size_t>(j - 1); };

    FactorProduct fp(composition_vars(k), ctx.one());
    for (std::int64_t i = 1; i <= n; ++i) {
        const std::int64_t a_i = (i == 1) ? pt.a : 0;
        const std::int64_t b_i = pt.b[static_cast<std::size_t>(i - 1)];
        for (std::int64_t j = 1; j <= k.part(i); ++j) {
            fp.multiply(LinearForm::variable(ctx, var(i, j)), a_i);
            fp.multiply(LinearForm::one_minus(ctx, var(i, j)), b_i);
        }
        for (std::int64_t j = 1; j <= k.part(i); ++j) {
            for (std::int64_t jj = j + 1; jj <= k.part(i); ++jj) {
                fp.multiply(LinearForm::difference(ctx, var(i, j), var(i, jj)), 2 * pt.c);
            }
        }
    }
    for (std::int64_t i = 1; i < n; ++i) {
        for (std::int64_t j = 1; j <= k.part(i + 1); ++j) {
            for (std::int64_t jj = 1; jj <= k.part(i); ++jj) {
                fp.multiply(LinearForm::difference(ctx, var(i + 1, j), var(i, jj)), p - pt.c);
            }
        }
    }
    return fp;
}

FpElement selberg_integral(const KComposition& k, const ParamPoint& pt, const FpContext& ctx,
                           const ExpansionLimits& limits, ExpansionStats* stats)
{
    return fp_integral(master_polynomial(k, pt, ctx), cycle_from_composition(k), ctx, limits, stats);
}

WeightFunction weight_summands(std::int64_t k1, std::int64_t k2, const AllowableTriple& tr)
{
    if (k2 < 0 || k1 < k2 || k1 > 20) {
        throw precondition_violation("weight_summands: need 0 <= k2 <= k1 <= 20");
    }
    if (!is_allowable(k1, k2, tr)) {
        throw not_allowable("weight_summands: triple (" + std::to_string(tr.l1) + "," + std::to_string(tr.l2) + ","
                            + std::to_string(tr.m) + ") is not allowable for k=(" + std::to_string(k1) + ","
                            + std::to_string(k2) + ")");
    }
    WeightFunction w;
    w.k1 = k1;
    w.k2 = k2;
    w.triple = tr;
    for (std::int64_t i = 2; i <= k1; ++i) {
        w.normalization *= static_cast<std::uint64_t>(i);
    }
    for (std::int64_t i = 2; i <= k2; ++i) {
        w.normalization *= static_cast<std::uint64_t>(i);
    }

    std::vector<std::size_t> sigma(static_cast<std::size_t>(k1));
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    do {
        std::vector<std::size_t> tau(static_cast<std::size_t>(k2));
        std::iota(tau.begin(), tau.end(), std::size_t{0});
        do {
            WeightSummand s;
            // positions a, b are 1-based as in the defining product
            for (std::int64_t a = 1; a <= k1; ++a) {
                const auto v = sigma[static_cast<std::size_t>(a - 1)];
                (a <= tr.l1 ? s.t_numerator : s.one_minus_t).push_back(v);
            }
            for (std::int64_t b = 1; b <= k2; ++b) {
                const auto sv = tau[static_cast<std::size_t>(b - 1)];
                if (b <= tr.m) {
                    s.one_minus_s.push_back(sv);
                    s.denominators.emplace_back(sv, sigma[static_cast<std::size_t>(b - 1)]);
                } else if (b > tr.l2) {
                    s.one_minus_s.push_back(sv);
                    s.denominators.emplace_back(sv, sigma[static_cast<std::size_t>(b + k1 - k2 - 1)]);
                }
            }
            w.summands.push_back(std::move(s));
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return w;
}

FpElement weighted_integral(std::int64_t k1, std::int64_t k2, const AllowableTriple& tr, const ParamPoint& pt,
                            const FpContext& ctx, const ExpansionLimits& limits)
{
    const auto p = static_cast<std::int64_t>(ctx.p());
    if (k2 < 1 || k1 < k2) {
        throw precondition_violation("weighted_integral: need k1 >= k2 >= 1");
    }
    if (k1 >= p) {
        throw precondition_violation("weighted_integral: need k1 < p so that 1/(k1! k2!) exists");
    }
    if (pt.b.size() != 2) {
        throw precondition_violation("weighted_integral: need b = (b1, b2)");
    }
    if (pt.c > p) {
        throw invalid_exponent("weighted_integral: c > p");
    }
    const WeightFunction w = weight_summands(k1, k2, tr);
    const KComposition k({k1, k2});
    const PCycle cycle = cycle_from_composition(k);
    const auto nt = static_cast<std::size_t>(k1);
    const auto ns = static_cast<std::size_t>(k2);
    const std::int64_t b1 = pt.b[0];
    const std::int64_t b2 = pt.b[1];

    auto checked = [&](std::int64_t e, const char* what) {
        if (e < 0) {
            throw negative_exponent(std::string("weighted_integral: exponent of ") + what + " would be "
                                    + std::to_string(e) + " at " + pt.str());
        }
        return e;
    };

    FpElement sum = ctx.zero();
    for (const auto& s : w.summands) {
        std::vector<std::int64_t> t_exp(nt, pt.a - 1);
        std::vector<std::int64_t> one_minus_t_exp(nt, b1 - 1);
        std::vector<std::int64_t> one_minus_s_exp(ns, b2 - 1);
        std::vector<std::int64_t> cross(ns * nt, p - pt.c);
        for (auto i : s.t_numerator) {
            ++t_exp[i];
        }
        for (auto i : s.one_minus_t) {
            ++one_minus_t_exp[i];
        }
        for (auto j : s.one_minus_s) {
            ++one_minus_s_exp[j];
        }
        for (const auto& [j, i] : s.denominators) {
            --cross[j * nt + i];
        }

        FactorProduct fp(composition_vars(k), ctx.one());
        for (std::size_t i = 0; i < nt; ++i) {
            fp.multiply(LinearForm::variable(ctx, i), checked(t_exp[i], "t"));
            fp.multiply(LinearForm::one_minus(ctx, i), checked(one_minus_t_exp[i], "1-t"));
        }
        for (std::size_t j = 0; j < ns; ++j) {
            fp.multiply(LinearForm::one_minus(ctx, nt + j), checked(one_minus_s_exp[j], "1-s"));
        }
        for (std::size_t i = 0; i < nt; ++i) {
            for (std::size_t ii = i + 1; ii < nt; ++ii) {
                fp.multiply(LinearForm::difference(ctx, i, ii), checked(2 * pt.c, "t-t'"));
            }
        }
        for (std::size_t j = 0; j < ns; ++j) {
            for (std::size_t jj = j + 1; jj < ns; ++jj) {
                fp.multiply(LinearForm::difference(ctx, nt + j, nt + jj), checked(2 * pt.c, "s-s'"));
            }
        }
        for (std::size_t j = 0; j < ns; ++j) {
            for (std::size_t i = 0; i < nt; ++i) {
                fp.multiply(LinearForm::difference(ctx, nt + j, i), checked(cross[j * nt + i], "s-t"));
            }
        }
        sum += fp_integral(fp, cycle, ctx, limits);
    }
    return sum * ctx.element(static_cast<std::int64_t>(w.normalization % ctx.p())).inverse();
}

FpElement dyson_constant_term(std::int64_t k, std::int64_t c, const FpContext& ctx, const ExpansionLimits& limits)
{
    if (k < 1 || c < 0) {
        throw precondition_violation("dyson_constant_term: need k >= 1 and c >= 0");
    }
    const auto nv = static_cast<std::size_t>(k);
    // (1 - x_i/x_j)(1 - x_j/x_i) = -(x_i - x_j)^2 / (x_i x_j)
    FactorProduct fp(VarSpace(nv), sign_pow(ctx, c * k * (k - 1) / 2));
    for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = i + 1; j < nv; ++j) {
            fp.multiply(LinearForm::difference(ctx, i, j), 2 * c);
        }
    }
    return extract_coefficient(fp, Exponents(nv, (k - 1) * c), limits);
}

} // namespace fpsel
