#include "fpselberg/gf.hpp"

#include <ostream>
#include <string>

namespace fpsel {

bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

FpElement::FpElement(std::int64_t value, std::uint32_t modulus) : modulus_(modulus)
{
    if (modulus == 0) {
        throw precondition_violation("FpElement: zero modulus");
    }
    const auto m = static_cast<std::int64_t>(modulus);
    std::int64_t r = value % m;
    if (r < 0) {
        r += m;
    }
    residue_ = static_cast<std::uint32_t>(r);
}

void FpElement::check_same_field(const FpElement& rhs) const
{
    if (modulus_ != rhs.modulus_) {
        throw precondition_violation("FpElement: operands belong to different fields (p=" + std::to_string(modulus_)
                                     + " vs p=" + std::to_string(rhs.modulus_) + ")");
    }
}

FpElement FpElement::operator-() const noexcept
{
    return from_residue(residue_ == 0 ? 0 : modulus_ - residue_, modulus_);
}

FpElement& FpElement::operator+=(const FpElement& rhs)
{
    check_same_field(rhs);
    residue_ += rhs.residue_;
    if (residue_ >= modulus_) {
        residue_ -= modulus_;
    }
    return *this;
}

FpElement& FpElement::operator-=(const FpElement& rhs)
{
    check_same_field(rhs);
    residue_ = residue_ >= rhs.residue_ ? residue_ - rhs.residue_ : residue_ + modulus_ - rhs.residue_;
    return *this;
}

FpElement& FpElement::operator*=(const FpElement& rhs)
{
    check_same_field(rhs);
    residue_ = static_cast<std::uint32_t>(static_cast<std::uint64_t>(residue_) * rhs.residue_ % modulus_);
    return *this;
}

FpElement& FpElement::operator/=(const FpElement& rhs)
{
    check_same_field(rhs);
    return *this *= rhs.inverse();
}

FpElement FpElement::pow(std::uint64_t exponent) const noexcept
{
    std::uint64_t base = residue_;
    std::uint64_t acc = 1 % modulus_;
    while (exponent > 0) {
        if (exponent & 1u) {
            acc = acc * base % modulus_;
        }
        base = base * base % modulus_;
        exponent >>= 1;
    }
    return from_residue(static_cast<std::uint32_t>(acc), modulus_);
}

FpElement FpElement::inverse() const
{
    if (residue_ == 0) {
        throw precondition_violation("FpElement: inverse of zero");
    }
    // Fermat: x^(p-2) = x^-1.
    return pow(modulus_ - 2);
}

std::ostream& operator<<(std::ostream& os, const FpElement& e)
{
    return os << e.value();
}

FpContext::FpContext(std::uint32_t p) : p_(p)
{
    if (p < 3 || p >= max_modulus || !is_prime(p)) {
        throw precondition_violation("FpContext: modulus must be an odd prime in [3, 2^15), got "
                                     + std::to_string(p));
    }
    factorials_.resize(p);
    factorials_[0] = 1;
    for (std::uint32_t i = 1; i < p; ++i) {
        factorials_[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(factorials_[i - 1]) * i % p);
    }
}

FpElement checked_factorial(const FpContext& ctx, std::int64_t n)
{
    if (n < 0 || n >= static_cast<std::int64_t>(ctx.p())) {
        throw out_of_range_error(n, "factorial argument " + std::to_string(n) + " outside [0, "
                                        + std::to_string(ctx.p()) + ")");
    }
    return FpElement::from_residue(ctx.factorial_table()[static_cast<std::size_t>(n)], ctx.p());
}

FpElement wilson_cancel(const FpContext& ctx, std::int64_t a, std::int64_t b)
{
    if (a < 0 || b < 0 || a + b != static_cast<std::int64_t>(ctx.p()) - 1) {
        throw precondition_violation("wilson_cancel: need a, b >= 0 and a + b = p - 1");
    }
    const FpElement product = checked_factorial(ctx, a) * checked_factorial(ctx, b);
    if (product != sign_pow(ctx, a + 1)) {
        throw std::logic_error("wilson_cancel: a! b! != (-1)^(a+1); factorial table is corrupt");
    }
    return product;
}

FpElement sign_pow(const FpContext& ctx, std::int64_t e) noexcept
{
    return (e % 2 == 0) ? ctx.one() : -ctx.one();
}

} // namespace fpsel
