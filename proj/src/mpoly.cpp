#include "fpselberg/mpoly.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

namespace fpsel {

// ---------------------------------------------------------------------------
// VarSpace / LinearForm / FactorProduct
// ---------------------------------------------------------------------------

VarSpace::VarSpace(std::size_t num_vars) : num_vars_(num_vars)
{
    if (num_vars == 0) {
        throw precondition_violation("VarSpace: need at least one variable");
    }
}

VarSpace::VarSpace(std::vector<std::string> labels) : num_vars_(labels.size()), labels_(std::move(labels))
{
    if (num_vars_ == 0) {
        throw precondition_violation("VarSpace: need at least one variable");
    }
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) {
        throw precondition_violation("VarSpace: labels must be distinct");
    }
}

std::string VarSpace::label(std::size_t i) const
{
    if (i < labels_.size()) {
        return labels_[i];
    }
    return "x" + std::to_string(i);
}

LinearForm::LinearForm(FpElement constant, std::vector<Term> terms) : constant_(constant)
{
    // merge duplicate variables, drop vanishing coefficients
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    for (const auto& t : terms) {
        if (t.coeff.modulus() != constant.modulus()) {
            throw precondition_violation("LinearForm: coefficients from different fields");
        }
        if (!terms_.empty() && terms_.back().var == t.var) {
            terms_.back().coeff += t.coeff;
        } else {
            terms_.push_back(t);
        }
    }
    std::erase_if(terms_, [](const Term& t) { return t.coeff.is_zero(); });
    if (terms_.size() > 2) {
        throw precondition_violation("LinearForm: at most two variables supported");
    }
}

LinearForm LinearForm::variable(const FpContext& ctx, std::size_t i)
{
    return LinearForm(ctx.zero(), {{i, ctx.one()}});
}

LinearForm LinearForm::one_minus(const FpContext& ctx, std::size_t i)
{
    return LinearForm(ctx.one(), {{i, -ctx.one()}});
}

LinearForm LinearForm::difference(const FpContext& ctx, std::size_t i, std::size_t j)
{
    if (i == j) {
        throw precondition_violation("LinearForm::difference: x_i - x_i is identically zero");
    }
    return LinearForm(ctx.zero(), {{i, ctx.one()}, {j, -ctx.one()}});
}

LinearForm LinearForm::constant(FpElement value)
{
    return LinearForm(value, {});
}

std::int64_t LinearForm::max_var() const noexcept
{
    std::int64_t m = -1;
    for (const auto& t : terms_) {
        m = std::max(m, static_cast<std::int64_t>(t.var));
    }
    return m;
}

FactorProduct::FactorProduct(VarSpace vars, FpElement scalar) : vars_(std::move(vars)), scalar_(scalar) {}

FactorProduct& FactorProduct::multiply(LinearForm form, std::int64_t exponent)
{
    if (exponent < 0) {
        throw negative_exponent("FactorProduct: negative exponent " + std::to_string(exponent));
    }
    if (form.modulus() != modulus()) {
        throw precondition_violation("FactorProduct: form from a different field");
    }
    if (form.max_var() >= static_cast<std::int64_t>(vars_.size())) {
        throw precondition_violation("FactorProduct: form references variable outside the space");
    }
    factors_.push_back({std::move(form), exponent});
    return *this;
}

FactorProduct& FactorProduct::scale(const FpElement& s)
{
    scalar_ *= s;
    return *this;
}

std::int64_t FactorProduct::degree_in(std::size_t i) const noexcept
{
    std::int64_t d = 0;
    for (const auto& f : factors_) {
        for (const auto& t : f.form.terms()) {
            if (t.var == i) {
                d += f.exponent;
            }
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// TruncatedPoly
// ---------------------------------------------------------------------------

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b)
{
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
        return std::numeric_limits<std::size_t>::max();
    }
    return a * b;
}

std::size_t tensor_size(const Exponents& caps)
{
    std::size_t n = 1;
    for (auto c : caps) {
        n = saturating_mul(n, static_cast<std::size_t>(c + 1));
    }
    return n;
}

} // namespace

TruncatedPoly::TruncatedPoly(Exponents caps, std::uint32_t modulus) : caps_(std::move(caps)), modulus_(modulus)
{
    if (caps_.empty()) {
        throw precondition_violation("TruncatedPoly: need at least one variable");
    }
    for (auto c : caps_) {
        if (c < 0) {
            throw precondition_violation("TruncatedPoly: caps must be nonnegative");
        }
    }
    strides_.assign(caps_.size(), 1);
    for (std::size_t i = caps_.size() - 1; i > 0; --i) {
        strides_[i - 1] = strides_[i] * static_cast<std::size_t>(caps_[i] + 1);
    }
    coeffs_.assign(tensor_size(caps_), 0);
}

std::size_t TruncatedPoly::offset(const Exponents& e) const
{
    if (e.size() != caps_.size()) {
        throw index_out_of_caps("TruncatedPoly: exponent vector has wrong length");
    }
    std::size_t off = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] < 0 || e[i] > caps_[i]) {
            throw index_out_of_caps("TruncatedPoly: exponent " + std::to_string(e[i]) + " of variable "
                                    + std::to_string(i) + " outside [0, " + std::to_string(caps_[i]) + "]");
        }
        off += static_cast<std::size_t>(e[i]) * strides_[i];
    }
    return off;
}

Exponents TruncatedPoly::exponents_at(std::size_t off) const
{
    Exponents e(caps_.size());
    for (std::size_t i = 0; i < caps_.size(); ++i) {
        e[i] = static_cast<std::int64_t>(off / strides_[i]);
        off %= strides_[i];
    }
    return e;
}

FpElement TruncatedPoly::coefficient(const Exponents& e) const
{
    return FpElement::from_residue(coeffs_[offset(e)], modulus_);
}

void TruncatedPoly::set(const Exponents& e, const FpElement& value)
{
    if (value.modulus() != modulus_) {
        throw precondition_violation("TruncatedPoly::set: value from a different field");
    }
    coeffs_[offset(e)] = value.value();
}

void TruncatedPoly::check_compatible(const TruncatedPoly& other) const
{
    if (caps_ != other.caps_ || modulus_ != other.modulus_) {
        throw precondition_violation("TruncatedPoly: operands differ in caps or modulus");
    }
}

TruncatedPoly operator+(const TruncatedPoly& a, const TruncatedPoly& b)
{
    a.check_compatible(b);
    TruncatedPoly r = a;
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) {
        r.coeffs_[i] = (a.coeffs_[i] + b.coeffs_[i]) % a.modulus_;
    }
    return r;
}

TruncatedPoly operator*(const TruncatedPoly& a, const TruncatedPoly& b)
{
    a.check_compatible(b);
    TruncatedPoly r(a.caps_, a.modulus_);
    std::vector<std::uint64_t> acc(r.coeffs_.size(), 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) {
            continue;
        }
        const Exponents ea = a.exponents_at(i);
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
            if (b.coeffs_[j] == 0) {
                continue;
            }
            const Exponents eb = b.exponents_at(j);
            std::size_t off = 0;
            bool inside = true;
            for (std::size_t v = 0; v < ea.size() && inside; ++v) {
                const auto s = ea[v] + eb[v];
                inside = s <= a.caps_[v];
                off += static_cast<std::size_t>(s) * a.strides_[v];
            }
            if (inside) {
                acc[off] = (acc[off] + static_cast<std::uint64_t>(a.coeffs_[i]) * b.coeffs_[j]) % a.modulus_;
            }
        }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
        r.coeffs_[i] = static_cast<std::uint32_t>(acc[i]);
    }
    return r;
}

FpElement coefficient(const TruncatedPoly& poly, const Exponents& e)
{
    return poly.coefficient(e);
}

TruncatedPoly derivative(const TruncatedPoly& poly, std::size_t i)
{
    if (i >= poly.num_vars()) {
        throw precondition_violation("derivative: variable index out of range");
    }
    TruncatedPoly r(poly.caps(), poly.modulus());
    const auto p = poly.modulus();
    for (std::size_t off = 0; off < poly.size(); ++off) {
        const auto c = poly.raw()[off];
        if (c == 0) {
            continue;
        }
        Exponents e = poly.exponents_at(off);
        if (e[i] == 0) {
            continue;
        }
        const auto factor = static_cast<std::uint64_t>(e[i] % p);
        e[i] -= 1;
        r.raw()[r.offset(e)] = static_cast<std::uint32_t>(factor * c % p);
    }
    return r;
}

ExpansionLimits ExpansionLimits::from_environment()
{
    ExpansionLimits limits;
    if (const char* env = std::getenv("FP_SELBERG_MEM_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            limits.max_slots = static_cast<std::size_t>(v);
        } else {
            throw precondition_violation(std::string("FP_SELBERG_MEM_BUDGET is not a positive integer: ") + env);
        }
    }
    return limits;
}

// ---------------------------------------------------------------------------
// Dense windowed engine
// ---------------------------------------------------------------------------

namespace {

/// n choose k mod p for arbitrary n via Lucas' theorem.
class Binomials {
public:
    explicit Binomials(std::uint32_t p) : p_(p), fact_(p), inv_fact_(p)
    {
        fact_[0] = 1;
        for (std::uint32_t i = 1; i < p; ++i) {
            fact_[i] = static_cast<std::uint32_t>(std::uint64_t{fact_[i - 1]} * i % p);
        }
        inv_fact_[p - 1] = FpElement::from_residue(fact_[p - 1], p).inverse().value();
        for (std::uint32_t i = p - 1; i > 0; --i) {
            inv_fact_[i - 1] = static_cast<std::uint32_t>(std::uint64_t{inv_fact_[i]} * i % p);
        }
    }

    std::uint32_t operator()(std::int64_t n, std::int64_t k) const
    {
        if (k < 0 || k > n) {
            return 0;
        }
        std::uint64_t r = 1;
        while (n > 0 || k > 0) {
            const auto ni = static_cast<std::uint32_t>(n % p_);
            const auto ki = static_cast<std::uint32_t>(k % p_);
            if (ki > ni) {
                return 0;
            }
            r = r * fact_[ni] % p_ * inv_fact_[ki] % p_ * inv_fact_[ni - ki] % p_;
            n /= p_;
            k /= p_;
        }
        return static_cast<std::uint32_t>(r);
    }

private:
    std::uint32_t p_;
    std::vector<std::uint32_t> fact_;
    std::vector<std::uint32_t> inv_fact_;
};

struct Window {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    bool empty() const noexcept { return lo > hi; }
    std::size_t extent() const noexcept { return empty() ? 0 : static_cast<std::size_t>(hi - lo + 1); }
};

std::size_t windows_size(const std::vector<Window>& w)
{
    std::size_t n = 1;
    for (const auto& x : w) {
        n = saturating_mul(n, x.extent());
    }
    return n;
}

/// Dense tensor over a box of exponent windows. The variable with the largest
/// extent is stored contiguously; the others follow in ascending index order.
struct Box {
    std::vector<Window> win;
    std::vector<std::size_t> stride;
    std::size_t inner = 0;
    std::vector<std::size_t> outer;
    std::vector<std::uint32_t> data;

    void plan_layout()
    {
        const std::size_t nv = win.size();
        inner = 0;
        for (std::size_t v = 1; v < nv; ++v) {
            if (win[v].extent() >= win[inner].extent()) {
                inner = v;
            }
        }
        outer.clear();
        for (std::size_t v = 0; v < nv; ++v) {
            if (v != inner) {
                outer.push_back(v);
            }
        }
        stride.assign(nv, 0);
        stride[inner] = 1;
        std::size_t s = win[inner].extent();
        for (auto it = outer.rbegin(); it != outer.rend(); ++it) {
            stride[*it] = s;
            s *= win[*it].extent();
        }
    }
};

/// form^e expanded into at most two variables, shifts clipped to the caps.
struct PowerTerms {
    std::size_t nvars = 0;
    std::array<std::size_t, 2> vars{};
    std::array<std::int64_t, 2> degree{};
    std::vector<std::array<std::int64_t, 2>> shift;
    std::vector<std::uint32_t> coeff;
};

std::vector<std::uint32_t> powers_of(std::uint32_t base, std::int64_t n, std::uint32_t p)
{
    std::vector<std::uint32_t> out(static_cast<std::size_t>(n + 1));
    out[0] = 1;
    for (std::int64_t i = 1; i <= n; ++i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(std::uint64_t{out[static_cast<std::size_t>(i - 1)]} * base % p);
    }
    return out;
}

PowerTerms expand_power(const LinearForm& form, std::int64_t e, const Binomials& binom, const Exponents& max_shift,
                        std::uint32_t p)
{
    PowerTerms pw;
    const auto& terms = form.terms();
    pw.nvars = terms.size();
    for (std::size_t q = 0; q < pw.nvars; ++q) {
        pw.vars[q] = terms[q].var;
        pw.degree[q] = e;
    }
    const auto c0 = powers_of(form.constant_term().value(), e, p);
    if (pw.nvars == 1) {
        const auto c1 = powers_of(terms[0].coeff.value(), e, p);
        const auto jmax = std::min(e, max_shift[terms[0].var]);
        for (std::int64_t j = 0; j <= jmax; ++j) {
            const auto c = std::uint64_t{binom(e, j)} * c1[static_cast<std::size_t>(j)] % p
                           * c0[static_cast<std::size_t>(e - j)] % p;
            if (c != 0) {
                pw.shift.push_back({j, 0});
                pw.coeff.push_back(static_cast<std::uint32_t>(c));
            }
        }
    } else if (pw.nvars == 2) {
        const auto c1 = powers_of(terms[0].coeff.value(), e, p);
        const auto c2 = powers_of(terms[1].coeff.value(), e, p);
        const bool no_constant = form.constant_term().is_zero();
        const auto jmax = std::min(e, max_shift[terms[0].var]);
        for (std::int64_t j = 0; j <= jmax; ++j) {
            const auto bj = binom(e, j);
            if (bj == 0) {
                continue;
            }
            const auto kmin = no_constant ? e - j : 0;
            const auto kmax = std::min(e - j, max_shift[terms[1].var]);
            for (std::int64_t k = kmin; k <= kmax; ++k) {
                const auto c = std::uint64_t{bj} * binom(e - j, k) % p * c1[static_cast<std::size_t>(j)] % p
                               * c2[static_cast<std::size_t>(k)] % p * c0[static_cast<std::size_t>(e - j - k)] % p;
                if (c != 0) {
                    pw.shift.push_back({j, k});
                    pw.coeff.push_back(static_cast<std::uint32_t>(c));
                }
            }
        }
    }
    return pw;
}

/// out = in * pw over the windows out_win. Output-stationary: each output row
/// along the contiguous variable gathers every term's contribution before a
/// single reduction mod p.
Box multiply_box(const Box& in, const PowerTerms& pw, std::vector<Window> out_win, std::uint32_t p,
                 const ExpansionLimits& limits, ExpansionStats* stats)
{
    Box out;
    out.win = std::move(out_win);
    const std::size_t size = windows_size(out.win);
    if (size > limits.max_slots) {
        throw capacity_exceeded("dense tensor of " + std::to_string(size) + " slots exceeds the budget of "
                                + std::to_string(limits.max_slots));
    }
    out.plan_layout();
    out.data.assign(size, 0);
    if (size == 0 || pw.coeff.empty()) {
        return out;
    }
    if (stats) {
        stats->peak_slots = std::max(stats->peak_slots, size);
        stats->factor_steps += 1;
    }

    const std::size_t z = out.inner;
    const std::size_t row_len = out.win[z].extent();
    const std::size_t nv = out.win.size();

    // slot of each variable in the factor, or -1
    std::vector<int> slot(nv, -1);
    for (std::size_t q = 0; q < pw.nvars; ++q) {
        slot[pw.vars[q]] = static_cast<int>(q);
    }

    std::vector<std::uint64_t> row(row_len);
    std::vector<std::int64_t> idx(nv, 0);
    const std::size_t nterms = pw.coeff.size();
    const std::size_t z_in_stride = in.stride[z];
    const auto z_in_extent = static_cast<std::int64_t>(in.win[z].extent());
    std::uint64_t work = 0;

    for (std::size_t row_start = 0; row_start < size; row_start += row_len) {
        // offset contribution of outer variables not touched by the factor
        std::size_t base = 0;
        bool base_valid = true;
        for (auto w : out.outer) {
            if (slot[w] >= 0) {
                continue;
            }
            const auto s = idx[w] + out.win[w].lo - in.win[w].lo;
            if (s < 0 || s >= static_cast<std::int64_t>(in.win[w].extent())) {
                base_valid = false;
                break;
            }
            base += static_cast<std::size_t>(s) * in.stride[w];
        }

        std::fill(row.begin(), row.end(), 0);
        if (base_valid) {
            std::size_t since_reduce = 0;
            for (std::size_t t = 0; t < nterms; ++t) {
                std::size_t off = base;
                bool ok = true;
                std::int64_t dz = 0;
                for (std::size_t q = 0; q < pw.nvars; ++q) {
                    const auto w = pw.vars[q];
                    if (w == z) {
                        dz = pw.shift[t][q];
                        continue;
                    }
                    const auto s = idx[w] + out.win[w].lo - pw.shift[t][q] - in.win[w].lo;
                    if (s < 0 || s >= static_cast<std::int64_t>(in.win[w].extent())) {
                        ok = false;
                        break;
                    }
                    off += static_cast<std::size_t>(s) * in.stride[w];
                }
                if (!ok) {
                    continue;
                }
                const std::int64_t delta = out.win[z].lo - dz - in.win[z].lo;
                const std::int64_t x0 = std::max<std::int64_t>(0, -delta);
                const std::int64_t x1 = std::min<std::int64_t>(static_cast<std::int64_t>(row_len), z_in_extent - delta);
                if (x0 >= x1) {
                    continue;
                }
                const std::uint64_t c = pw.coeff[t];
                const std::uint32_t* src = in.data.data() + off + static_cast<std::size_t>(x0 + delta) * z_in_stride;
                std::uint64_t* dst = row.data() + x0;
                const auto n = static_cast<std::size_t>(x1 - x0);
                if (z_in_stride == 1) {
                    for (std::size_t x = 0; x < n; ++x) {
                        dst[x] += c * src[x];
                    }
                } else {
                    for (std::size_t x = 0; x < n; ++x) {
                        dst[x] += c * src[x * z_in_stride];
                    }
                }
                work += n;
                // each product is below 2^30; keep the running sums below 2^64
                if (++since_reduce == (std::size_t{1} << 32)) {
                    for (auto& v : row) {
                        v %= p;
                    }
                    since_reduce = 0;
                }
            }
        }
        std::uint32_t* out_row = out.data.data() + row_start;
        for (std::size_t x = 0; x < row_len; ++x) {
            out_row[x] = static_cast<std::uint32_t>(row[x] % p);
        }

        // advance the odometer over the outer variables, last one fastest
        for (auto it = out.outer.rbegin(); it != out.outer.rend(); ++it) {
            if (++idx[*it] < static_cast<std::int64_t>(out.win[*it].extent())) {
                break;
            }
            idx[*it] = 0;
        }
    }
    if (stats) {
        stats->multiply_adds += work;
    }
    return out;
}

Box unit_box(std::vector<Window> win)
{
    Box b;
    b.win = std::move(win);
    b.plan_layout();
    b.data.assign(windows_size(b.win), 0);
    if (!b.data.empty()) {
        b.data[0] = 1;
    }
    return b;
}

/// A nonconstant factor as the scheduler sees it.
struct PlanFactor {
    std::size_t index = 0; // into FactorProduct::factors()
    std::size_t nvars = 0;
    std::array<std::size_t, 2> vars{};
    std::int64_t exponent = 0;
};

/// Window bookkeeping for pruned extraction: exponents above the target or too
/// low to reach it with the remaining factors are dropped.
struct WindowState {
    std::vector<Window> win;
    std::vector<std::int64_t> remaining;
    const Exponents* target = nullptr;

    void apply(const PlanFactor& f)
    {
        for (std::size_t q = 0; q < f.nvars; ++q) {
            const auto v = f.vars[q];
            remaining[v] -= f.exponent;
            win[v].hi = std::min((*target)[v], win[v].hi + f.exponent);
            win[v].lo = std::max<std::int64_t>(win[v].lo, (*target)[v] - remaining[v]);
        }
    }
};

/// Greedy elimination schedule: repeatedly eliminate the variable whose bucket
/// of remaining factors keeps the working tensor smallest.
std::vector<PlanFactor> schedule_extraction(std::vector<PlanFactor> factors, const WindowState& start)
{
    std::vector<PlanFactor> order;
    std::vector<bool> used(factors.size(), false);
    WindowState state = start;
    const std::size_t nv = state.win.size();

    auto touches = [](const PlanFactor& f, std::size_t v) {
        for (std::size_t q = 0; q < f.nvars; ++q) {
            if (f.vars[q] == v) {
                return true;
            }
        }
        return false;
    };

    // Orders the unused factors touching v greedily; returns peak size.
    auto simulate_bucket = [&](std::size_t v, WindowState& sim, std::vector<std::size_t>& bucket_order) {
        std::vector<std::size_t> bucket;
        for (std::size_t f = 0; f < factors.size(); ++f) {
            if (!used[f] && touches(factors[f], v)) {
                bucket.push_back(f);
            }
        }
        std::size_t peak = 0;
        while (!bucket.empty()) {
            std::size_t best = 0;
            std::size_t best_size = std::numeric_limits<std::size_t>::max();
            for (std::size_t b = 0; b < bucket.size(); ++b) {
                WindowState trial = sim;
                trial.apply(factors[bucket[b]]);
                const auto s = windows_size(trial.win);
                if (s < best_size) {
                    best_size = s;
                    best = b;
                }
            }
            sim.apply(factors[bucket[best]]);
            peak = std::max(peak, best_size);
            bucket_order.push_back(bucket[best]);
            bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(best));
        }
        return peak;
    };

    while (order.size() < factors.size()) {
        std::size_t best_peak = std::numeric_limits<std::size_t>::max();
        std::size_t best_after = std::numeric_limits<std::size_t>::max();
        std::vector<std::size_t> best_bucket;
        for (std::size_t v = 0; v < nv; ++v) {
            WindowState sim = state;
            std::vector<std::size_t> bucket_order;
            const auto peak = simulate_bucket(v, sim, bucket_order);
            if (bucket_order.empty()) {
                continue;
            }
            const auto after = windows_size(sim.win);
            if (peak < best_peak || (peak == best_peak && after < best_after)) {
                best_peak = peak;
                best_after = after;
                best_bucket = std::move(bucket_order);
            }
        }
        for (auto f : best_bucket) {
            used[f] = true;
            state.apply(factors[f]);
            order.push_back(factors[f]);
        }
    }
    return order;
}

void check_modulus(const FactorProduct& fp)
{
    if (fp.modulus() < 3 || !is_prime(fp.modulus())) {
        throw precondition_violation("factor product over an invalid modulus");
    }
}

} // namespace

TruncatedPoly expand(const FactorProduct& fp, const Exponents& caps, const ExpansionLimits& limits, ExpansionStats* stats)
{
    check_modulus(fp);
    if (caps.size() != fp.num_vars()) {
        throw precondition_violation("expand: caps length differs from the number of variables");
    }
    for (auto c : caps) {
        if (c < 0) {
            throw precondition_violation("expand: caps must be nonnegative");
        }
    }
    if (tensor_size(caps) > limits.max_slots) {
        throw capacity_exceeded("expand: tensor of " + std::to_string(tensor_size(caps))
                                + " slots exceeds the budget of " + std::to_string(limits.max_slots));
    }
    const std::uint32_t p = fp.modulus();
    const Binomials binom(p);
    FpElement scalar = fp.scalar();

    // single-variable factors first, then two-variable factors by joint support
    std::vector<std::size_t> single;
    std::vector<std::size_t> paired;
    const auto& factors = fp.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const auto& form = factors[f].form;
        if (factors[f].exponent == 0) {
            continue;
        }
        if (form.terms().empty()) {
            scalar *= form.constant_term().pow(static_cast<std::uint64_t>(factors[f].exponent));
        } else if (form.terms().size() == 1) {
            single.push_back(f);
        } else {
            paired.push_back(f);
        }
    }
    auto joint = [&](std::size_t f) {
        const auto& t = factors[f].form.terms();
        return saturating_mul(static_cast<std::size_t>(caps[t[0].var] + 1), static_cast<std::size_t>(caps[t[1].var] + 1));
    };
    std::stable_sort(single.begin(), single.end(), [&](std::size_t a, std::size_t b) {
        return factors[a].form.terms()[0].var < factors[b].form.terms()[0].var;
    });
    std::stable_sort(paired.begin(), paired.end(), [&](std::size_t a, std::size_t b) { return joint(a) < joint(b); });

    std::vector<Window> win(fp.num_vars(), Window{0, 0});
    Box box = unit_box(win);
    std::vector<std::size_t> order = single;
    order.insert(order.end(), paired.begin(), paired.end());
    for (auto f : order) {
        const auto pw = expand_power(factors[f].form, factors[f].exponent, binom, caps, p);
        std::vector<Window> next = box.win;
        for (std::size_t q = 0; q < pw.nvars; ++q) {
            const auto v = pw.vars[q];
            next[v].hi = std::min(caps[v], next[v].hi + pw.degree[q]);
        }
        box = multiply_box(box, pw, std::move(next), p, limits, stats);
    }

    TruncatedPoly result(caps, p);
    if (stats) {
        stats->peak_slots = std::max(stats->peak_slots, result.size());
    }
    // scatter the box (windows start at 0) into the full caps tensor
    const std::size_t nv = caps.size();
    Exponents e(nv, 0);
    for (std::size_t off = 0; off < box.data.size(); ++off) {
        std::size_t rem = off;
        for (auto v : box.outer) {
            e[v] = static_cast<std::int64_t>(rem / box.stride[v]);
            rem %= box.stride[v];
        }
        e[box.inner] = static_cast<std::int64_t>(rem);
        const auto c = static_cast<std::uint64_t>(box.data[off]) * scalar.value() % p;
        result.raw()[result.offset(e)] = static_cast<std::uint32_t>(c);
    }
    return result;
}

FpElement extract_coefficient(const FactorProduct& fp, const Exponents& target, const ExpansionLimits& limits,
                              ExpansionStats* stats)
{
    check_modulus(fp);
    const std::size_t nv = fp.num_vars();
    if (target.size() != nv) {
        throw precondition_violation("extract_coefficient: target length differs from the number of variables");
    }
    const std::uint32_t p = fp.modulus();
    const FpElement zero = FpElement::from_residue(0, p);
    FpElement scalar = fp.scalar();
    Exponents goal = target;

    // constants fold into the scalar, bare monomials c*x_v shift the target
    std::vector<PlanFactor> plan;
    const auto& factors = fp.factors();
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const auto& form = factors[f].form;
        const auto e = factors[f].exponent;
        if (e == 0) {
            continue;
        }
        const auto& terms = form.terms();
        if (terms.empty()) {
            scalar *= form.constant_term().pow(static_cast<std::uint64_t>(e));
        } else if (terms.size() == 1 && form.constant_term().is_zero()) {
            scalar *= terms[0].coeff.pow(static_cast<std::uint64_t>(e));
            goal[terms[0].var] -= e;
        } else {
            PlanFactor pf;
            pf.index = f;
            pf.nvars = terms.size();
            for (std::size_t q = 0; q < pf.nvars; ++q) {
                pf.vars[q] = terms[q].var;
            }
            pf.exponent = e;
            plan.push_back(pf);
        }
    }
    if (scalar.is_zero()) {
        return zero;
    }

    WindowState state;
    state.target = &goal;
    state.remaining.assign(nv, 0);
    for (const auto& f : plan) {
        for (std::size_t q = 0; q < f.nvars; ++q) {
            state.remaining[f.vars[q]] += f.exponent;
        }
    }
    state.win.resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        if (goal[v] < 0 || goal[v] > state.remaining[v]) {
            return zero;
        }
        state.win[v] = Window{std::max<std::int64_t>(0, goal[v] - state.remaining[v]), 0};
        if (state.win[v].empty()) {
            return zero;
        }
    }

    const auto order = schedule_extraction(plan, state);
    const Binomials binom(p);
    Box box = unit_box(state.win);
    for (const auto& f : order) {
        state.apply(f);
        for (const auto& w : state.win) {
            if (w.empty()) {
                return zero;
            }
        }
        const auto pw = expand_power(factors[f.index].form, f.exponent, binom, goal, p);
        box = multiply_box(box, pw, state.win, p, limits, stats);
    }
    if (box.data.size() != 1) {
        throw std::logic_error("extract_coefficient: working tensor did not collapse to the target");
    }
    return scalar * FpElement::from_residue(box.data[0], p);
}

// ---------------------------------------------------------------------------
// Sparse oracle
// ---------------------------------------------------------------------------

namespace {

struct ExponentHash {
    std::size_t operator()(const Exponents& e) const noexcept
    {
        std::size_t h = 1469598103934665603ull;
        for (auto x : e) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

using SparseMap = std::unordered_map<Exponents, std::uint32_t, ExponentHash>;

SparseMap multiply_by_form(const SparseMap& poly, const LinearForm& form, std::uint32_t p, std::size_t max_terms)
{
    SparseMap out;
    out.reserve(poly.size() * (form.terms().size() + 1));
    auto add = [&](const Exponents& e, std::uint64_t c) {
        auto& slot = out[e];
        slot = static_cast<std::uint32_t>((slot + c) % p);
    };
    const std::uint64_t c0 = form.constant_term().value();
    for (const auto& [e, c] : poly) {
        if (c0 != 0) {
            add(e, c0 * c);
        }
        for (const auto& t : form.terms()) {
            Exponents shifted = e;
            shifted[t.var] += 1;
            add(shifted, std::uint64_t{t.coeff.value()} * c);
        }
        if (out.size() > max_terms) {
            throw capacity_exceeded("sparse oracle: more than " + std::to_string(max_terms) + " terms");
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

} // namespace

SparsePoly sparse_expand_oracle(const FactorProduct& fp, const ExpansionLimits& limits)
{
    check_modulus(fp);
    const std::uint32_t p = fp.modulus();
    SparseMap poly;
    if (!fp.scalar().is_zero()) {
        poly.emplace(Exponents(fp.num_vars(), 0), fp.scalar().value());
    }
    for (const auto& f : fp.factors()) {
        for (std::int64_t i = 0; i < f.exponent && !poly.empty(); ++i) {
            poly = multiply_by_form(poly, f.form, p, limits.max_sparse_terms);
        }
    }
    SparsePoly out;
    for (const auto& [e, c] : poly) {
        out.emplace(e, FpElement::from_residue(c, p));
    }
    return out;
}

} // namespace fpsel
