#pragma once

// Prime-field arithmetic with precomputed factorials.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fpselberg/errors.hpp"

namespace fpsel {

/// Largest supported modulus is below 2^15, so products of two residues fit
/// comfortably in 32 bits and long accumulations fit in 64 bits.
inline constexpr std::uint32_t max_modulus = 1u << 15;

bool is_prime(std::uint64_t n) noexcept;

/// A residue modulo an odd prime. The modulus travels with the value so that
/// mixing elements of different fields is caught instead of silently wrong.
class FpElement {
public:
    constexpr FpElement() noexcept = default;

    /// Reduces an arbitrary signed integer into [0, p).
    FpElement(std::int64_t value, std::uint32_t modulus);

    static constexpr FpElement from_residue(std::uint32_t residue, std::uint32_t modulus) noexcept
    {
        FpElement e;
        e.residue_ = residue;
        e.modulus_ = modulus;
        return e;
    }

    constexpr std::uint32_t value() const noexcept { return residue_; }
    constexpr std::uint32_t modulus() const noexcept { return modulus_; }
    constexpr bool is_zero() const noexcept { return residue_ == 0; }

    FpElement operator-() const noexcept;
    FpElement& operator+=(const FpElement& rhs);
    FpElement& operator-=(const FpElement& rhs);
    FpElement& operator*=(const FpElement& rhs);
    FpElement& operator/=(const FpElement& rhs);

    /// Multiplicative inverse; throws precondition_violation for zero.
    FpElement inverse() const;
    FpElement pow(std::uint64_t exponent) const noexcept;

    friend FpElement operator+(FpElement lhs, const FpElement& rhs) { return lhs += rhs; }
    friend FpElement operator-(FpElement lhs, const FpElement& rhs) { return lhs -= rhs; }
    friend FpElement operator*(FpElement lhs, const FpElement& rhs) { return lhs *= rhs; }
    friend FpElement operator/(FpElement lhs, const FpElement& rhs) { return lhs /= rhs; }

    friend constexpr bool operator==(const FpElement& a, const FpElement& b) noexcept
    {
        return a.residue_ == b.residue_ && a.modulus_ == b.modulus_;
    }

private:
    void check_same_field(const FpElement& rhs) const;

    std::uint32_t residue_ = 0;
    std::uint32_t modulus_ = 0;
};

std::ostream& operator<<(std::ostream& os, const FpElement& e);

/// Immutable description of F_p: the modulus and the table of factorials
/// 0!, ..., (p-1)! mod p. Safe to share between threads.
class FpContext {
public:
    /// Throws precondition_violation unless p is an odd prime with 3 <= p < 2^15.
    explicit FpContext(std::uint32_t p);

    std::uint32_t p() const noexcept { return p_; }

    FpElement element(std::int64_t value) const { return FpElement(value, p_); }
    FpElement zero() const noexcept { return FpElement::from_residue(0, p_); }
    FpElement one() const noexcept { return FpElement::from_residue(1, p_); }

    const std::vector<std::uint32_t>& factorial_table() const noexcept { return factorials_; }

private:
    std::uint32_t p_;
    std::vector<std::uint32_t> factorials_;
};

/// n! mod p for 0 <= n < p. Any other n throws out_of_range_error: a factorial
/// argument outside [0, p) is exactly how a non-admissible parameter shows up.
FpElement checked_factorial(const FpContext& ctx, std::int64_t n);

/// a! * b! for a + b = p - 1, which always equals (-1)^(a+1).
FpElement wilson_cancel(const FpContext& ctx, std::int64_t a, std::int64_t b);

/// (-1)^e as a field element.
FpElement sign_pow(const FpContext& ctx, std::int64_t e) noexcept;

} // namespace fpsel
