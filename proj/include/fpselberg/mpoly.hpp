#pragma once

// Multivariate polynomials over F_p: lazy factor products, dense truncated
// expansion, fast single-coefficient extraction and an independent sparse
// expansion used as an oracle.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fpselberg/gf.hpp"

namespace fpsel {

using Exponents = std::vector<std::int64_t>;

/// Indexed variable space; labels are optional but distinct when given.
class VarSpace {
public:
    explicit VarSpace(std::size_t num_vars);
    explicit VarSpace(std::vector<std::string> labels);

    std::size_t size() const noexcept { return num_vars_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::string label(std::size_t i) const;

private:
    std::size_t num_vars_;
    std::vector<std::string> labels_;
};

/// c0 + sum c_i x_i with at most two variables carrying a nonzero coefficient.
class LinearForm {
public:
    struct Term {
        std::size_t var;
        FpElement coeff;
    };

    LinearForm(FpElement constant, std::vector<Term> terms);

    static LinearForm variable(const FpContext& ctx, std::size_t i);      ///< x_i
    static LinearForm one_minus(const FpContext& ctx, std::size_t i);     ///< 1 - x_i
    static LinearForm difference(const FpContext& ctx, std::size_t i, std::size_t j); ///< x_i - x_j
    static LinearForm constant(FpElement value);

    const FpElement& constant_term() const noexcept { return constant_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::uint32_t modulus() const noexcept { return constant_.modulus(); }

    /// Largest variable index referenced, or -1 when the form is constant.
    std::int64_t max_var() const noexcept;

private:
    FpElement constant_;
    std::vector<Term> terms_;
};

/// scalar * prod form_j ^ exponent_j over a fixed variable space.
class FactorProduct {
public:
    struct Factor {
        LinearForm form;
        std::int64_t exponent;
    };

    FactorProduct(VarSpace vars, FpElement scalar);

    /// Appends form^exponent; throws negative_exponent for exponent < 0 and
    /// precondition_violation for variables outside the space.
    FactorProduct& multiply(LinearForm form, std::int64_t exponent);
    FactorProduct& scale(const FpElement& s);

    const VarSpace& vars() const noexcept { return vars_; }
    std::size_t num_vars() const noexcept { return vars_.size(); }
    const FpElement& scalar() const noexcept { return scalar_; }
    const std::vector<Factor>& factors() const noexcept { return factors_; }
    std::uint32_t modulus() const noexcept { return scalar_.modulus(); }

    /// Total degree of the product in variable i.
    std::int64_t degree_in(std::size_t i) const noexcept;

private:
    VarSpace vars_;
    FpElement scalar_;
    std::vector<Factor> factors_;
};

/// Dense coefficient tensor with per-variable exponent caps. Row-major: the
/// last variable varies fastest.
class TruncatedPoly {
public:
    TruncatedPoly(Exponents caps, std::uint32_t modulus);

    const Exponents& caps() const noexcept { return caps_; }
    std::size_t num_vars() const noexcept { return caps_.size(); }
    std::uint32_t modulus() const noexcept { return modulus_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    /// Throws index_out_of_caps when e has the wrong length or leaves the caps.
    FpElement coefficient(const Exponents& e) const;
    void set(const Exponents& e, const FpElement& value);

    std::size_t offset(const Exponents& e) const;
    Exponents exponents_at(std::size_t offset) const;

    const std::vector<std::uint32_t>& raw() const noexcept { return coeffs_; }
    std::vector<std::uint32_t>& raw() noexcept { return coeffs_; }

    /// Sum and truncated product; both operands must share caps and modulus.
    friend TruncatedPoly operator+(const TruncatedPoly& a, const TruncatedPoly& b);
    friend TruncatedPoly operator*(const TruncatedPoly& a, const TruncatedPoly& b);
    friend bool operator==(const TruncatedPoly& a, const TruncatedPoly& b) = default;

private:
    void check_compatible(const TruncatedPoly& other) const;

    Exponents caps_;
    std::vector<std::size_t> strides_;
    std::uint32_t modulus_;
    std::vector<std::uint32_t> coeffs_;
};

/// Exact sparse polynomial, ordered by exponent vector.
using SparsePoly = std::map<Exponents, FpElement>;

/// Resource limits for the expansion engines.
struct ExpansionLimits {
    /// Maximum number of coefficient slots in any dense tensor.
    std::size_t max_slots = std::size_t{1} << 30;
    /// Maximum number of terms held by the sparse oracle.
    std::size_t max_sparse_terms = std::size_t{1} << 22;

    /// Defaults, with max_slots overridden by FP_SELBERG_MEM_BUDGET when set.
    static ExpansionLimits from_environment();
};

/// Work counters reported by the dense engines.
struct ExpansionStats {
    std::size_t peak_slots = 0;
    std::uint64_t multiply_adds = 0;
    std::size_t factor_steps = 0;
};

/// Full truncated expansion: every monomial with some exponent above its cap is
/// discarded. Throws capacity_exceeded when prod (cap_i + 1) exceeds the budget.
TruncatedPoly expand(const FactorProduct& fp, const Exponents& caps, const ExpansionLimits& limits = {},
                     ExpansionStats* stats = nullptr);

/// Coefficient of x^target in fp. Equivalent to coefficient(expand(fp, target),
/// target) but prunes every exponent that can no longer reach the target and
/// eliminates variables one at a time, so the working tensor stays small.
FpElement extract_coefficient(const FactorProduct& fp, const Exponents& target, const ExpansionLimits& limits = {},
                              ExpansionStats* stats = nullptr);

FpElement coefficient(const TruncatedPoly& poly, const Exponents& e);

/// Untruncated expansion by repeated sparse convolution with each linear form.
/// Shares no code with the dense engines; used to certify them.
SparsePoly sparse_expand_oracle(const FactorProduct& fp, const ExpansionLimits& limits = {});

/// Formal partial derivative in variable i; coefficients e * c_e reduced mod p.
TruncatedPoly derivative(const TruncatedPoly& poly, std::size_t i);

} // namespace fpsel
