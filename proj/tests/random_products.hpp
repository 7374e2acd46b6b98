#pragma once

#include <random>

#include "fpselberg/mpoly.hpp"

namespace fpsel::testing {

/// Random scalar * prod (c0 + c1 x_i [+ c2 x_j])^e in up to max_vars variables
/// with total degree at most max_degree.
inline FactorProduct random_product(const FpContext& ctx, std::mt19937_64& rng, std::size_t max_vars,
                                    std::int64_t max_degree)
{
    const auto p = static_cast<std::int64_t>(ctx.p());
    auto coeff = [&](bool nonzero) {
        return ctx.element(static_cast<std::int64_t>(nonzero ? 1 + rng() % (p - 1) : rng() % p));
    };
    const std::size_t nv = 1 + rng() % max_vars;
    FactorProduct fp(VarSpace(nv), coeff(true));
    std::int64_t budget = max_degree;
    while (budget > 0) {
        const std::size_t v = rng() % nv;
        std::vector<LinearForm::Term> terms{{v, coeff(true)}};
        if (nv > 1 && rng() % 2 == 0) {
            terms.push_back({(v + 1 + rng() % (nv - 1)) % nv, coeff(true)});
        }
        const auto e = std::min<std::int64_t>(budget, 1 + static_cast<std::int64_t>(rng() % 4));
        fp.multiply(LinearForm(coeff(false), terms), e);
        budget -= e;
        if (rng() % 4 == 0) {
            break;
        }
    }
    return fp;
}

} // namespace fpsel::testing
