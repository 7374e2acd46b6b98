#pragma once

// F_p-integrals: p-cycles, master polynomials, Selberg integrals and the A_2
// weighted integrals I_{l1,l2,m}.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fpselberg/gf.hpp"
#include "fpselberg/mpoly.hpp"

namespace fpsel {

/// (l_1, ..., l_k); integrating over it extracts the coefficient of
/// x_1^{l_1 p - 1} ... x_k^{l_k p - 1}.
class PCycle {
public:
    explicit PCycle(std::vector<std::int64_t> l);

    const std::vector<std::int64_t>& l() const noexcept { return l_; }
    std::size_t size() const noexcept { return l_.size(); }
    Exponents targets(std::uint32_t p) const;

    friend bool operator==(const PCycle&, const PCycle&) = default;

private:
    std::vector<std::int64_t> l_;
};

/// k = (k_1, ..., k_n) with positive entries. part(0) and part(n+1) read as 0.
class KComposition {
public:
    explicit KComposition(std::vector<std::int64_t> k);

    std::size_t n() const noexcept { return k_.size(); }
    const std::vector<std::int64_t>& parts() const noexcept { return k_; }
    /// 1-based access with the zero convention outside 1..n.
    std::int64_t part(std::int64_t i) const noexcept;
    std::int64_t total() const noexcept;
    bool strictly_decreasing() const noexcept;
    /// (k_1, ..., k_{n-1}); requires n >= 2.
    KComposition prefix() const;
    std::string str() const;

    friend bool operator==(const KComposition&, const KComposition&) = default;

private:
    std::vector<std::int64_t> k_;
};

/// (a, b_1..b_n, c). Entries are nonnegative here; positivity is part of
/// admissibility, and contiguous relations need points like (a-1, b_2-1).
struct ParamPoint {
    std::int64_t a = 0;
    std::vector<std::int64_t> b;
    std::int64_t c = 0;

    std::string str() const;
    friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
    friend auto operator<=>(const ParamPoint& x, const ParamPoint& y)
    {
        if (auto r = x.a <=> y.a; r != 0) {
            return r;
        }
        if (auto r = x.b <=> y.b; r != 0) {
            return r;
        }
        return x.c <=> y.c;
    }
};

/// (l1, l2, m) with l1 <= k1 - k2 + l2, l2 <= k2, m <= min(l1, l2).
struct AllowableTriple {
    std::int64_t l1 = 0;
    std::int64_t l2 = 0;
    std::int64_t m = 0;
};

bool is_allowable(std::int64_t k1, std::int64_t k2, const AllowableTriple& tr) noexcept;

/// [(1)_{k_1}; (k_1)_{k_2}; ...; (k_{n-1})_{k_n}].
PCycle cycle_from_composition(const KComposition& k);

/// Coefficient of x^{l p - 1} in fp.
FpElement fp_integral(const FactorProduct& fp, const PCycle& cycle, const FpContext& ctx,
                      const ExpansionLimits& limits = ExpansionLimits::from_environment(),
                      ExpansionStats* stats = nullptr);

/// Labels t<i>_<j> in group-major order, matching cycle_from_composition.
VarSpace composition_vars(const KComposition& k);

/// Phi_k(t; a, b, c) with a_1 = a and a_s = 0 for s >= 2. Throws
/// invalid_exponent for c > p and precondition_violation for malformed input.
FactorProduct master_polynomial(const KComposition& k, const ParamPoint& pt, const FpContext& ctx);

/// S_k(a, b, c), the F_p-integral of the master polynomial over [k]_p.
FpElement selberg_integral(const KComposition& k, const ParamPoint& pt, const FpContext& ctx,
                           const ExpansionLimits& limits = ExpansionLimits::from_environment(),
                           ExpansionStats* stats = nullptr);

/// One (sigma, tau) term of the symmetrised weight function. Variables are
/// indexed 0..k1-1 for t and 0..k2-1 for s.
struct WeightSummand {
    std::vector<std::size_t> t_numerator;         ///< t_i factors
    std::vector<std::size_t> one_minus_t;         ///< (1 - t_i) factors
    std::vector<std::size_t> one_minus_s;         ///< (1 - s_j) factors
    std::vector<std::pair<std::size_t, std::size_t>> denominators; ///< (j, i) for 1/(s_j - t_i)
};

struct WeightFunction {
    std::int64_t k1 = 0;
    std::int64_t k2 = 0;
    AllowableTriple triple;
    std::vector<WeightSummand> summands; ///< k1! * k2! of them, permutations in lexicographic order
    std::uint64_t normalization = 1;     ///< W = (sum of summands) / normalization
};

/// W_{l1,l2,m}(t; s) as an explicit sum over S_{k1} x S_{k2}.
WeightFunction weight_summands(std::int64_t k1, std::int64_t k2, const AllowableTriple& tr);

/// I_{l1,l2,m}(a, b1, b2, c) for k = (k1, k2): the F_p-integral of
/// Phi * W / (prod t_i (1 - t_i) prod (1 - s_j)) over [k]_p, with every
/// division carried out by lowering exponents in the factor list.
FpElement weighted_integral(std::int64_t k1, std::int64_t k2, const AllowableTriple& tr, const ParamPoint& pt,
                            const FpContext& ctx, const ExpansionLimits& limits = ExpansionLimits::from_environment());

/// Constant term of prod_{i<j} (1 - x_i/x_j)^c (1 - x_j/x_i)^c, computed by
/// clearing denominators and extracting the balanced monomial.
FpElement dyson_constant_term(std::int64_t k, std::int64_t c, const FpContext& ctx,
                              const ExpansionLimits& limits = ExpansionLimits::from_environment());

} // namespace fpsel
