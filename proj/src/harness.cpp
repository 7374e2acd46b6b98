#include "fpselberg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

#include "fpselberg/admissible.hpp"
#include "fpselberg/formulas.hpp"

namespace fpsel {

namespace {

struct CampaignInfo {
    Campaign id;
    const char* name;
};

constexpr CampaignInfo campaign_table[] = {
    {Campaign::main, "main"},
    {Campaign::beta, "beta"},
    {Campaign::dyson, "dyson"},
    {Campaign::thm_3_11, "thm_3_11"},
    {Campaign::thm_4_111, "thm_4_111"},
    {Campaign::relations_IS, "relations_IS"},
    {Campaign::relations_II0, "relations_II0"},
    {Campaign::relations_B1, "relations_B1"},
    {Campaign::relations_B2, "relations_B2"},
    {Campaign::relations_S1S2, "relations_S1S2"},
    {Campaign::induction, "induction"},
    {Campaign::i000, "i000"},
    {Campaign::stokes, "stokes"},
};

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict = Verdict::pass;
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;
    std::string note; ///< classifier for failures, reason for skips

    static Outcome compare(const FpElement& lhs, const FpElement& rhs, std::string classifier = "mismatch")
    {
        Outcome o;
        o.lhs = lhs.value();
        o.rhs = rhs.value();
        if (lhs == rhs) {
            o.verdict = Verdict::pass;
        } else {
            o.verdict = Verdict::fail;
            o.note = std::move(classifier);
        }
        return o;
    }
    static Outcome skip(std::string reason) { return {Verdict::skip, 0, 0, std::move(reason)}; }
    static Outcome fail(std::string classifier, std::int64_t lhs = 0, std::int64_t rhs = 0)
    {
        return {Verdict::fail, lhs, rhs, std::move(classifier)};
    }
};

using Evaluator = std::function<Outcome(const ParamPoint&)>;

/// In-scope points of a campaign and how to check one.
struct Plan {
    std::vector<ParamPoint> points;
    std::size_t total = 0;
    std::size_t out_of_scope = 0; ///< scanned but skipped
    std::string out_of_scope_reason = "non_admissible";
    Evaluator evaluate;
};

std::int64_t to_signed(const FpElement& x) { return x.value(); }

Outcome guarded(const Evaluator& eval, const ParamPoint& pt)
{
    try {
        return eval(pt);
    } catch (const capacity_exceeded&) {
        return Outcome::skip("capacity_exceeded");
    } catch (const zero_factor&) {
        return Outcome::skip("zero_factor");
    } catch (const error& e) {
        return Outcome::fail(std::string("exception: ") + e.what());
    }
}

KComposition require_k(const CampaignSpec& spec, std::size_t n_min, std::size_t n_max)
{
    if (spec.k.size() < n_min || spec.k.size() > n_max) {
        throw precondition_violation("campaign " + campaign_name(spec.campaign) + " needs k with "
                                     + std::to_string(n_min) + ".." + std::to_string(n_max) + " parts");
    }
    KComposition k(spec.k);
    if (!k.strictly_decreasing()) {
        throw precondition_violation("campaign " + campaign_name(spec.campaign) + ": k must be strictly decreasing");
    }
    return k;
}

/// Restricts a candidate list according to the sampling policy.
void apply_sampling(const CampaignSpec& spec, Plan& plan)
{
    if (spec.sampling.exhaustive) {
        if (plan.total == 0) {
            plan.total = plan.points.size() + plan.out_of_scope;
        }
        return;
    }
    const auto idx = sample_indices(plan.points.size(), spec.sampling.count, spec.sampling.seed);
    std::vector<ParamPoint> chosen;
    chosen.reserve(idx.size());
    for (auto i : idx) {
        chosen.push_back(plan.points[i]);
    }
    plan.points = std::move(chosen);
    plan.total = plan.points.size();
    plan.out_of_scope = 0;
}

/// Every point of [1, 2p)^{n+2} in lexicographic order, split by admissibility.
template <typename Admissible>
void scan_box(std::size_t n, std::int64_t p, Plan& plan, Admissible&& admissible)
{
    ParamPoint pt{1, std::vector<std::int64_t>(n, 1), 1};
    std::vector<std::int64_t*> coords;
    coords.push_back(&pt.a);
    for (auto& b : pt.b) {
        coords.push_back(&b);
    }
    coords.push_back(&pt.c);
    while (true) {
        ++plan.total;
        if (admissible(pt)) {
            plan.points.push_back(pt);
        } else {
            ++plan.out_of_scope;
        }
        std::size_t pos = coords.size();
        while (pos > 0) {
            --pos;
            if (*coords[pos] < 2 * p - 1) {
                ++*coords[pos];
                break;
            }
            *coords[pos] = 1;
            if (pos == 0) {
                return;
            }
        }
    }
}

Plan plan_main(const CampaignSpec& spec, const FpContext& ctx)
{
    const KComposition k = require_k(spec, 1, 8);
    Plan plan;
    if (spec.sampling.exhaustive) {
        scan_box(k.n(), ctx.p(), plan, [&](const ParamPoint& pt) { return is_admissible(k, pt, ctx).admissible; });
    } else {
        plan.points = enumerate_admissible(k, ctx);
    }
    plan.evaluate = [k, &ctx, limits = spec.limits](const ParamPoint& pt) {
        const FpElement lhs = selberg_integral(k, pt, ctx, limits);
        const FormulaResult rhs = r_value(k, pt, ctx);
        if (!rhs) {
            return Outcome::fail("rhs_out_of_range: " + rhs.report().description, to_signed(lhs));
        }
        return Outcome::compare(lhs, rhs.value());
    };
    return plan;
}

Plan plan_beta(const CampaignSpec&, const FpContext& ctx)
{
    Plan plan;
    const auto p = static_cast<std::int64_t>(ctx.p());
    for (std::int64_t a = 0; a < p; ++a) {
        for (std::int64_t b = 0; b < p; ++b) {
            plan.points.push_back({a, {b}, 0});
        }
    }
    plan.evaluate = [&ctx](const ParamPoint& pt) {
        FactorProduct fp(VarSpace(1), ctx.one());
        fp.multiply(LinearForm::variable(ctx, 0), pt.a);
        fp.multiply(LinearForm::one_minus(ctx, 0), pt.b[0]);
        return Outcome::compare(fp_integral(fp, PCycle({1}), ctx), beta_rhs(pt.a, pt.b[0], ctx));
    };
    return plan;
}

Plan plan_dyson(const CampaignSpec& spec, const FpContext& ctx)
{
    Plan plan;
    const auto p = static_cast<std::int64_t>(ctx.p());
    std::int64_t k_lo = 1;
    std::int64_t k_hi = 4;
    if (spec.k.size() == 1) {
        k_lo = k_hi = spec.k[0];
    } else if (!spec.k.empty()) {
        throw precondition_violation("campaign dyson takes k with a single part");
    }
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        for (std::int64_t c = 1; c <= 3; ++c) {
            if (k * c <= p - 1) {
                plan.points.push_back({k, {}, c});
            }
        }
    }
    plan.evaluate = [&ctx, limits = spec.limits](const ParamPoint& pt) {
        return Outcome::compare(dyson_constant_term(pt.a, pt.c, ctx, limits), dyson_constant(pt.a, pt.c, ctx));
    };
    return plan;
}

Plan plan_thm_3_11(const CampaignSpec& spec, const FpContext& ctx)
{
    Plan plan;
    const auto p = static_cast<std::int64_t>(ctx.p());
    for (std::int64_t a = 0; a < p; ++a) {
        for (std::int64_t b1 = 0; b1 < 2 * p; ++b1) {
            for (std::int64_t b2 = 0; b2 < 2 * p; ++b2) {
                for (std::int64_t c = 1; c <= p; ++c) {
                    const std::int64_t s = a + b1 + b2 - c + 1;
                    if (0 <= b2 - c + 1 && b2 - c + 1 < p && 0 <= b1 + b2 - c + 1 && b1 + b2 - c + 1 < p
                        && p - 1 <= s && s < 2 * p - 1) {
                        if (rhs_3_11(a, b1, b2, c, ctx)) {
                            plan.points.push_back({a, {b1, b2}, c});
                        } else {
                            ++plan.out_of_scope; // b2 >= p
                        }
                    }
                }
            }
        }
    }
    plan.out_of_scope_reason = "factorial_out_of_range";
    plan.evaluate = [&ctx, limits = spec.limits](const ParamPoint& pt) {
        const FpElement lhs = selberg_integral(KComposition({1, 1}), pt, ctx, limits);
        return Outcome::compare(lhs, rhs_3_11(pt.a, pt.b[0], pt.b[1], pt.c, ctx).value());
    };
    return plan;
}

Plan plan_thm_4_111(const CampaignSpec& spec, const FpContext& ctx)
{
    Plan plan;
    const auto p = static_cast<std::int64_t>(ctx.p());
    for (std::int64_t a = 0; a < p; ++a) {
        for (std::int64_t b1 = 0; b1 < 3 * p; ++b1) {
            for (std::int64_t b2 = 0; b2 < 2 * p; ++b2) {
                for (std::int64_t b3 = 0; b3 < p; ++b3) {
                    for (std::int64_t c = 1; c <= p; ++c) {
                        if (rhs_4_111(a, b1, b2, b3, c, ctx)) {
                            plan.points.push_back({a, {b1, b2, b3}, c});
                        }
                    }
                }
            }
        }
    }
    plan.evaluate = [&ctx, limits = spec.limits](const ParamPoint& pt) {
        const FpElement lhs = selberg_integral(KComposition({1, 1, 1}), pt, ctx, limits);
        return Outcome::compare(lhs, rhs_4_111(pt.a, pt.b[0], pt.b[1], pt.b[2], pt.c, ctx).value());
    };
    return plan;
}

Plan plan_relations(const CampaignSpec& spec, const FpContext& ctx)
{
    const KComposition k = require_k(spec, 2, 2);
    const std::int64_t k1 = k.part(1);
    const std::int64_t k2 = k.part(2);
    Plan plan;
    plan.points = enumerate_admissible(k, ctx);
    const auto limits = spec.limits;

    auto integral = [=, &ctx](std::int64_t l2, const ParamPoint& pt) {
        return weighted_integral(k1, k2, {0, l2, 0}, pt, ctx, limits);
    };

    switch (spec.campaign) {
    case Campaign::relations_IS:
        plan.evaluate = [=, &ctx](const ParamPoint& pt) {
            const ParamPoint shifted{pt.a - 1, {pt.b[0], pt.b[1] - 1}, pt.c};
            return Outcome::compare(integral(k2, pt), selberg_integral(k, shifted, ctx, limits));
        };
        break;
    case Campaign::relations_II0:
        plan.evaluate = [=, &ctx](const ParamPoint& pt) {
            FpElement next = integral(0, pt);
            for (std::int64_t i = 0; i < k2; ++i) {
                const FpElement cur = next;
                next = integral(i + 1, pt);
                const FpElement lhs = ctx.element((k1 - k2 + i + 1) * pt.c) * cur;
                const FpElement rhs = -(ctx.element(pt.b[1] + i * pt.c) * next);
                if (lhs != rhs) {
                    return Outcome::compare(lhs, rhs, "mismatch at i=" + std::to_string(i));
                }
            }
            return Outcome::compare(ctx.zero(), ctx.zero());
        };
        break;
    case Campaign::relations_B1:
    case Campaign::relations_B2: {
        const std::size_t coord = spec.campaign == Campaign::relations_B1 ? 0 : 1;
        plan.evaluate = [=, &ctx](const ParamPoint& pt) {
            if (pt.b[coord] <= 1) {
                return Outcome::skip("hypothesis");
            }
            const FpElement factor = coord == 0 ? b1_factor(k1, k2, pt, ctx) : b2_factor(k1, k2, pt, ctx);
            ParamPoint lower = pt;
            --lower.b[coord];
            return Outcome::compare(integral(0, lower), factor * integral(0, pt));
        };
        break;
    }
    case Campaign::relations_S1S2:
        plan.evaluate = [=, &ctx](const ParamPoint& pt) {
            const auto path = decrement_path(k, pt, ctx);
            FpElement upper = selberg_integral(k, pt, ctx, limits);
            ParamPoint cur = pt;
            for (const auto& step : path) {
                const FpElement factor = step.coordinate == 0 ? s1_factor(k1, k2, cur, ctx) : s2_factor(k1, k2, cur, ctx);
                const FpElement lower = selberg_integral(k, step.point, ctx, limits);
                if (lower != factor * upper) {
                    return Outcome::compare(lower, factor * upper, "mismatch on edge " + cur.str() + " -> "
                                                                       + step.point.str());
                }
                upper = lower;
                cur = step.point;
            }
            return Outcome::compare(ctx.zero(), ctx.zero());
        };
        break;
    default:
        break;
    }
    return plan;
}

Plan plan_induction(const CampaignSpec& spec, const FpContext& ctx)
{
    const KComposition k = require_k(spec, 2, 8);
    const auto n = static_cast<std::int64_t>(k.n());
    Plan plan;
    for (auto& pt : enumerate_admissible(k, ctx)) {
        if (pt.b.back() == (k.part(n - 1) - k.part(n) + 1) * pt.c - 1) {
            plan.points.push_back(std::move(pt));
        }
    }
    const KComposition prefix = k.prefix();
    plan.evaluate = [=, &ctx, limits = spec.limits](const ParamPoint& pt) {
        const ParamPoint reduced{pt.a, {pt.b.begin(), pt.b.end() - 1}, pt.c};
        return Outcome::compare(selberg_integral(k, pt, ctx, limits),
                                induction_factor(k, pt.c, ctx) * selberg_integral(prefix, reduced, ctx, limits));
    };
    return plan;
}

Plan plan_i000(const CampaignSpec& spec, const FpContext& ctx)
{
    const KComposition k = require_k(spec, 2, 2);
    const std::int64_t k1 = k.part(1);
    const std::int64_t k2 = k.part(2);
    Plan plan;
    scan_box(2, ctx.p(), plan, [&](const ParamPoint& pt) { return is_admissible_I(k1, k2, pt, ctx).admissible; });
    if (!spec.sampling.exhaustive) {
        plan.total = 0;
        plan.out_of_scope = 0;
    }
    plan.evaluate = [=, &ctx, limits = spec.limits](const ParamPoint& pt) {
        const FormulaResult rhs = i000_rhs(k1, k2, pt, ctx);
        const FpElement lhs = weighted_integral(k1, k2, {0, 0, 0}, pt, ctx, limits);
        if (!rhs) {
            return Outcome::fail("rhs_out_of_range: " + rhs.report().description, to_signed(lhs));
        }
        return Outcome::compare(lhs, rhs.value());
    };
    return plan;
}

/// Random products of powers of linear forms in up to three variables; the
/// integral of a partial derivative must vanish.
Plan plan_stokes(const CampaignSpec& spec, const FpContext& ctx)
{
    Plan plan;
    const std::size_t count = spec.sampling.exhaustive ? 500 : spec.sampling.count;
    const std::uint64_t seed = spec.sampling.exhaustive ? 0 : spec.sampling.seed;
    for (std::size_t i = 0; i < count; ++i) {
        plan.points.push_back({static_cast<std::int64_t>(i), {}, 0});
    }
    plan.total = count;
    plan.evaluate = [&ctx, seed, limits = spec.limits](const ParamPoint& pt) {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(pt.a + 1)));
        const auto p = static_cast<std::int64_t>(ctx.p());
        const std::size_t nv = 1 + rng() % 3;
        FactorProduct fp(VarSpace(nv), ctx.element(static_cast<std::int64_t>(1 + rng() % (p - 1))));
        const std::size_t nf = 1 + rng() % 5;
        for (std::size_t f = 0; f < nf; ++f) {
            const std::size_t v = rng() % nv;
            std::vector<LinearForm::Term> terms{{v, ctx.element(static_cast<std::int64_t>(1 + rng() % (p - 1)))}};
            if (nv > 1 && rng() % 2 == 0) {
                terms.push_back({(v + 1 + rng() % (nv - 1)) % nv, ctx.element(static_cast<std::int64_t>(rng() % p))});
            }
            fp.multiply(LinearForm(ctx.element(static_cast<std::int64_t>(rng() % p)), terms),
                        static_cast<std::int64_t>(rng() % (2 * p)));
        }
        Exponents target(nv);
        for (auto& t : target) {
            t = static_cast<std::int64_t>(1 + rng() % 2) * p - 1;
        }
        const std::size_t var = rng() % nv;
        Exponents caps = target;
        ++caps[var];
        const TruncatedPoly d = derivative(expand(fp, caps, limits), var);
        Exponents at = target;
        return Outcome::compare(coefficient(d, at), ctx.zero());
    };
    return plan;
}

Plan make_plan(const CampaignSpec& spec, const FpContext& ctx)
{
    switch (spec.campaign) {
    case Campaign::main:
        return plan_main(spec, ctx);
    case Campaign::beta:
        return plan_beta(spec, ctx);
    case Campaign::dyson:
        return plan_dyson(spec, ctx);
    case Campaign::thm_3_11:
        return plan_thm_3_11(spec, ctx);
    case Campaign::thm_4_111:
        return plan_thm_4_111(spec, ctx);
    case Campaign::relations_IS:
    case Campaign::relations_II0:
    case Campaign::relations_B1:
    case Campaign::relations_B2:
    case Campaign::relations_S1S2:
        return plan_relations(spec, ctx);
    case Campaign::induction:
        return plan_induction(spec, ctx);
    case Campaign::i000:
        return plan_i000(spec, ctx);
    case Campaign::stokes:
        return plan_stokes(spec, ctx);
    }
    throw precondition_violation("unknown campaign");
}

std::vector<Outcome> evaluate_all(const Plan& plan, unsigned threads)
{
    std::vector<Outcome> results(plan.points.size());
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, plan.points.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < plan.points.size(); i = next++) {
            results[i] = guarded(plan.evaluate, plan.points[i]);
        }
    };
    if (threads == 1) {
        worker();
        return results;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    return results;
}

} // namespace

std::string campaign_name(Campaign c)
{
    for (const auto& info : campaign_table) {
        if (info.id == c) {
            return info.name;
        }
    }
    return "unknown";
}

Campaign parse_campaign(const std::string& name)
{
    for (const auto& info : campaign_table) {
        if (name == info.name) {
            return info.id;
        }
    }
    throw precondition_violation("unknown campaign '" + name + "'");
}

const std::vector<Campaign>& all_campaigns()
{
    static const std::vector<Campaign> all = [] {
        std::vector<Campaign> v;
        for (const auto& info : campaign_table) {
            v.push_back(info.id);
        }
        return v;
    }();
    return all;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    count = std::min(count, n);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

VerificationReport run_campaign(const CampaignSpec& spec)
{
    const auto start = std::chrono::steady_clock::now();
    const FpContext ctx(spec.p);
    Plan plan = make_plan(spec, ctx);
    apply_sampling(spec, plan);

    VerificationReport rep;
    rep.spec = spec;
    rep.total = plan.total;
    rep.skipped = plan.out_of_scope;
    if (plan.out_of_scope > 0) {
        rep.skip_reasons[plan.out_of_scope_reason] = plan.out_of_scope;
    }

    const auto results = evaluate_all(plan, spec.threads);
    for (std::size_t i = 0; i < results.size(); ++i) {
        const Outcome& o = results[i];
        switch (o.verdict) {
        case Verdict::pass:
            ++rep.checked;
            ++rep.passed;
            break;
        case Verdict::fail:
            ++rep.checked;
            rep.failures.push_back({plan.points[i], o.lhs, o.rhs, o.note});
            break;
        case Verdict::skip:
            ++rep.skipped;
            ++rep.skip_reasons[o.note];
            break;
        }
    }
    std::stable_sort(rep.failures.begin(), rep.failures.end(),
                     [](const FailureRecord& x, const FailureRecord& y) { return x.point < y.point; });
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

nlohmann::json to_json(const VerificationReport& report)
{
    using nlohmann::json;
    json failures = json::array();
    for (const auto& f : report.failures) {
        failures.push_back({{"point", {{"a", f.point.a}, {"b", f.point.b}, {"c", f.point.c}}},
                            {"lhs", f.lhs},
                            {"rhs", f.rhs},
                            {"classifier", f.classifier}});
    }
    json j;
    j["campaign"] = campaign_name(report.spec.campaign);
    j["p"] = report.spec.p;
    j["k"] = report.spec.k;
    j["total"] = report.total;
    j["checked"] = report.checked;
    j["passed"] = report.passed;
    j["skipped"] = report.skipped;
    j["skip_reasons"] = report.skip_reasons;
    j["failures"] = std::move(failures);
    j["elapsed_ms"] = report.elapsed_ms;
    j["seed"] = report.spec.sampling.exhaustive ? json(nullptr) : json(report.spec.sampling.seed);
    return j;
}

namespace {

bool verify_contiguous(const KComposition& k, const ParamPoint& pt, std::size_t coord, const FpContext& ctx,
                       const ExpansionLimits& limits)
{
    if (k.n() != 2) {
        throw precondition_violation("contiguous relations need k = (k1, k2)");
    }
    ParamPoint lower = pt;
    --lower.b.at(coord);
    if (!is_admissible(k, pt, ctx).admissible || !is_admissible(k, lower, ctx).admissible) {
        throw precondition_violation("both " + lower.str() + " and " + pt.str() + " must be admissible");
    }
    const FpElement factor =
        coord == 0 ? s1_factor(k.part(1), k.part(2), pt, ctx) : s2_factor(k.part(1), k.part(2), pt, ctx);
    return selberg_integral(k, lower, ctx, limits) == factor * selberg_integral(k, pt, ctx, limits);
}

} // namespace

bool verify_relation_S1(const KComposition& k, const ParamPoint& pt, const FpContext& ctx,
                        const ExpansionLimits& limits)
{
    return verify_contiguous(k, pt, 0, ctx, limits);
}

bool verify_relation_S2(const KComposition& k, const ParamPoint& pt, const FpContext& ctx,
                        const ExpansionLimits& limits)
{
    return verify_contiguous(k, pt, 1, ctx, limits);
}

std::optional<bool> verify_induction(const KComposition& k, std::int64_t a, std::int64_t c, const FpContext& ctx,
                                     const ExpansionLimits& limits)
{
    if (k.n() < 2) {
        throw precondition_violation("verify_induction: need n >= 2");
    }
    const auto n = static_cast<std::int64_t>(k.n());
    const auto p = static_cast<std::int64_t>(ctx.p());
    if (k.part(n) * c > p - 1) {
        return std::nullopt;
    }
    const std::int64_t b_last = (k.part(n - 1) - k.part(n) + 1) * c - 1;
    const KComposition prefix = k.prefix();
    const FpElement factor = induction_factor(k, c, ctx);
    bool ok = true;
    for (const auto& pt : enumerate_admissible(k, ctx)) {
        if (pt.a != a || pt.c != c || pt.b.back() != b_last) {
            continue;
        }
        const ParamPoint reduced{a, {pt.b.begin(), pt.b.end() - 1}, c};
        ok = ok && selberg_integral(k, pt, ctx, limits) == factor * selberg_integral(prefix, reduced, ctx, limits);
    }
    return ok;
}

} // namespace fpsel
