#pragma once

// Closed-form right-hand sides and contiguous-relation factors, evaluated with
// checked modular factorials.

#include <cstdint>
#include <string>
#include <variant>

#include "fpselberg/gf.hpp"
#include "fpselberg/integrals.hpp"

namespace fpsel {

/// Names the first factorial argument that left [0, p).
struct OutOfRangeReport {
    std::int64_t argument = 0;
    std::string description;
};

/// Either a field value or a structured out-of-range report. Non-admissible
/// parameters are data here, not exceptions.
class FormulaResult {
public:
    FormulaResult(FpElement v) : state_(v) {}                 // NOLINT(google-explicit-constructor)
    FormulaResult(OutOfRangeReport r) : state_(std::move(r)) {} // NOLINT(google-explicit-constructor)

    bool has_value() const noexcept { return std::holds_alternative<FpElement>(state_); }
    explicit operator bool() const noexcept { return has_value(); }

    /// Throws out_of_range_error carrying the report when there is no value.
    const FpElement& value() const;
    const OutOfRangeReport& report() const;

    std::string str() const;

private:
    std::variant<FpElement, OutOfRangeReport> state_;
};

/// F_p-beta integral: -a! b! / (a+b+1-p)! when a+b >= p-1, else 0.
FpElement beta_rhs(std::int64_t a, std::int64_t b, const FpContext& ctx);

/// (kc)! / (c!)^k.
FpElement dyson_constant(std::int64_t k, std::int64_t c, const FpContext& ctx);

/// R_k(a, b, c): the general product of factorials, with a_1 = a, a_s = 0 for
/// s >= 2, k_0 = k_{n+1} = 0 and the -p shift only in the s = 1 denominators.
FormulaResult r_value(const KComposition& k, const ParamPoint& pt, const FpContext& ctx);

/// The n = 2 specialisation written out on its own; must agree with r_value.
FormulaResult r_a2(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx);

/// Closed form for k = (1,1). Throws precondition_violation outside its
/// hypotheses (0 <= a < p, 0 < c <= p, 0 <= b2-c+1 < p, 0 <= b1+b2-c+1 < p,
/// p-1 <= a+b1+b2-c+1 < 2p-1).
FormulaResult rhs_3_11(std::int64_t a, std::int64_t b1, std::int64_t b2, std::int64_t c, const FpContext& ctx);

/// Closed form for k = (1,1,1).
FormulaResult rhs_4_111(std::int64_t a, std::int64_t b1, std::int64_t b2, std::int64_t b3, std::int64_t c,
                        const FpContext& ctx);

struct BFactors {
    FpElement b0;
    FpElement b1;
    FpElement b2;
};

/// Contiguous factors of the A_2 weighted integrals. Each throws zero_factor
/// naming the first numerator or denominator factor that vanishes mod p.
FpElement b0_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx);
FpElement b1_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx);
FpElement b2_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx);
BFactors b_factors(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx);

/// Factors F with S(a, b1-1, b2, c) = F * S(a, b1, b2, c), resp. b2 - 1.
FpElement s1_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx);
FpElement s2_factor(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx);

/// Closed form of I_{0,0,0}(a, b1, b2, c).
FormulaResult i000_rhs(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx);

/// Factor relating S_k at b_n = (k_{n-1}-k_n+1)c-1 to S_{k'} with k' = k
/// minus its last part: (-1)^(b_n k_n + c k_n (k_n-1)/2) (k_n c)! / (c!)^k_n.
FpElement induction_factor(const KComposition& k, std::int64_t c, const FpContext& ctx);

} // namespace fpsel
