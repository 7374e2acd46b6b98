// Acceptance suite: one line per criterion, nonzero exit if any of 1-10 fails.
// Criterion 11 is informational.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fpselberg/admissible.hpp"
#include "fpselberg/formulas.hpp"
#include "fpselberg/harness.hpp"
#include "random_products.hpp"

using namespace fpsel;

namespace {

/// Accumulates pass/fail and a short summary for one criterion.
struct Tally {
    bool ok = true;
    std::size_t checked = 0;
    std::ostringstream notes;

    void add(const VerificationReport& rep)
    {
        checked += rep.checked;
        if (!rep.ok()) {
            ok = false;
            notes << " " << campaign_name(rep.spec.campaign) << "@p=" << rep.spec.p << " failures="
                  << rep.failures.size();
            if (!rep.failures.empty()) {
                notes << " first=" << rep.failures.front().point.str() << "/" << rep.failures.front().classifier;
            }
        }
    }

    void expect(bool cond, const std::string& what)
    {
        ++checked;
        if (!cond) {
            ok = false;
            notes << " " << what;
        }
    }
};

VerificationReport run(Campaign c, std::uint32_t p, std::vector<std::int64_t> k = {}, Sampling s = Sampling::all())
{
    CampaignSpec spec;
    spec.campaign = c;
    spec.p = p;
    spec.k = std::move(k);
    spec.sampling = s;
    return run_campaign(spec);
}

bool report(int n, const std::string& title, const std::function<void(Tally&)>& body, bool gate = true)
{
    Tally t;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(t);
    } catch (const std::exception& e) {
        t.ok = false;
        t.notes << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s (checked=%zu, %.2fs)%s\n", n,
                gate ? (t.ok ? "PASS" : "FAIL") : "INFO", title.c_str(), t.checked, secs, t.notes.str().c_str());
    std::fflush(stdout);
    return !gate || t.ok;
}

void criterion_1(Tally& t)
{
    for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
        const auto rep = run(Campaign::beta, p);
        t.add(rep);
        t.expect(rep.checked == p * p, "beta not exhaustive at p=" + std::to_string(p));
    }
    // both branches: a + b >= p-1 is nonzero, a + b < p-1 vanishes
    t.expect(beta_rhs(2, 2, FpContext(5)).value() == 1, "beta(2,2) at p=5");
    t.expect(beta_rhs(1, 1, FpContext(5)).value() == 0, "beta(1,1) at p=5");
}

void criterion_2(Tally& t)
{
    for (std::uint32_t p : {7u, 11u, 13u}) {
        t.add(run(Campaign::dyson, p));
    }
}

void criterion_3(Tally& t)
{
    for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
        for (std::int64_t k1 = 1; k1 <= 3; ++k1) {
            t.add(run(Campaign::main, p, {k1}));
        }
    }
    t.expect(enumerate_admissible(KComposition({1}), FpContext(5)).size() == 36, "|admissible (1) at p=5| != 36");
}

void criterion_4(Tally& t)
{
    for (const auto& k : {std::vector<std::int64_t>{2, 1}, {3, 1}, {3, 2}}) {
        for (std::uint32_t p : {7u, 11u}) {
            t.add(run(Campaign::main, p, k));
        }
        t.add(run(Campaign::main, 13, k, Sampling::random(13, 200)));
    }
}

void criterion_5(Tally& t)
{
    const KComposition k({3, 2, 1});
    t.add(run(Campaign::main, 7, k.parts()));
    t.add(run(Campaign::main, 11, k.parts(), Sampling::random(11, 25)));

    const FpContext ctx(11);
    std::vector<std::pair<std::int64_t, std::int64_t>> seen;
    for (const auto& pt : enumerate_admissible(k, ctx)) {
        if (std::find(seen.begin(), seen.end(), std::pair{pt.a, pt.c}) != seen.end()) {
            continue;
        }
        seen.emplace_back(pt.a, pt.c);
        const ParamPoint d = distinguished_point(k, pt.a, pt.c, ctx);
        t.expect(selberg_integral(k, d, ctx) == r_value(k, d, ctx).value(), "distinguished " + d.str());
    }
}

void criterion_6(Tally& t)
{
    for (std::uint32_t p : {5u, 7u}) {
        t.add(run(Campaign::thm_3_11, p));
        t.add(run(Campaign::thm_4_111, p));
    }
    const FpContext ctx(5);
    t.expect(rhs_3_11(1, 3, 2, 2, ctx).value().value() == 3, "hand value rhs");
    t.expect(selberg_integral(KComposition({1, 1}), {1, {3, 2}, 2}, ctx).value() == 3, "hand value integral");
}

void criterion_7(Tally& t)
{
    for (Campaign c : {Campaign::relations_IS, Campaign::relations_II0, Campaign::relations_B1, Campaign::relations_B2,
                       Campaign::relations_S1S2}) {
        const auto rep = run(c, 11, {2, 1}, Sampling::random(7, 100));
        t.add(rep);
        t.expect(rep.checked >= 50 || c == Campaign::relations_S1S2, campaign_name(c) + " checked < 50");
    }
    // S1S2 counts path edges; make sure every admissible point's path is walked
    t.add(run(Campaign::relations_S1S2, 11, {2, 1}));
}

void criterion_8(Tally& t)
{
    for (std::uint32_t p : {7u, 11u}) {
        for (const auto& k : {std::vector<std::int64_t>{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {4, 3}, {3, 2, 1},
                              {4, 2, 1}, {4, 3, 1}, {4, 3, 2}}) {
            t.add(run(Campaign::induction, p, k));
        }
    }
}

void criterion_9(Tally& t)
{
    t.add(run(Campaign::i000, 7, {2, 1}));
    t.add(run(Campaign::i000, 11, {2, 1}, Sampling::random(5, 200)));
    // the boundary b2 = (k1-k2+1)c is part of the domain
    const FpContext ctx(7);
    const ParamPoint boundary{1, {5, 2}, 1};
    t.expect(is_admissible_I(2, 1, boundary, ctx).admissible, "boundary not in domain");
    t.expect(weighted_integral(2, 1, {0, 0, 0}, boundary, ctx) == i000_rhs(2, 1, boundary, ctx).value(),
             "boundary mismatch");
}

void criterion_10(Tally& t)
{
    t.add(run(Campaign::stokes, 7, {}, Sampling::random(0, 500)));

    // symmetry under transpositions inside a group
    std::mt19937_64 rng(11);
    {
        const FpContext ctx(7);
        const KComposition k({3, 2});
        const PCycle cycle = cycle_from_composition(k);
        for (int trial = 0; trial < 100; ++trial) {
            const ParamPoint pt{static_cast<std::int64_t>(rng() % 8),
                                {static_cast<std::int64_t>(rng() % 8), static_cast<std::int64_t>(rng() % 8)},
                                static_cast<std::int64_t>(1 + rng() % 4)};
            const FactorProduct fp = master_polynomial(k, pt, ctx);
            const bool first = rng() % 2 == 0;
            const std::size_t i = first ? rng() % 3 : 3 + rng() % 2;
            const std::size_t j = first ? (i + 1 + rng() % 2) % 3 : (i == 3 ? 4 : 3);
            FactorProduct swapped(fp.vars(), fp.scalar());
            for (const auto& f : fp.factors()) {
                std::vector<LinearForm::Term> terms = f.form.terms();
                for (auto& term : terms) {
                    term.var = term.var == i ? j : term.var == j ? i : term.var;
                }
                swapped.multiply(LinearForm(f.form.constant_term(), terms), f.exponent);
            }
            t.expect(fp_integral(fp, cycle, ctx) == fp_integral(swapped, cycle, ctx), "symmetry " + pt.str());
        }
    }

    // truncated engine against the sparse oracle
    for (int trial = 0; trial < 200; ++trial) {
        const FpContext ctx(std::array<std::uint32_t, 3>{5, 7, 11}[trial % 3]);
        const FactorProduct fp = testing::random_product(ctx, rng, 3, 12);
        const SparsePoly full = sparse_expand_oracle(fp);
        Exponents target(fp.num_vars());
        for (auto& e : target) {
            e = static_cast<std::int64_t>(rng() % 8);
        }
        const auto it = full.find(target);
        const std::uint32_t want = it == full.end() ? 0 : it->second.value();
        t.expect(extract_coefficient(fp, target).value() == want, "oracle trial " + std::to_string(trial));
    }

    for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 101u, 32749u}) {
        const FpContext ctx(p);
        const auto P = static_cast<std::int64_t>(p);
        bool ok = true;
        for (std::int64_t a = 0; a < P; ++a) {
            ok = ok && checked_factorial(ctx, a) * checked_factorial(ctx, P - 1 - a) == sign_pow(ctx, a + 1);
        }
        t.expect(ok, "wilson p=" + std::to_string(p));
    }
}

void criterion_11(Tally& t)
{
    const FpContext ctx(13);
    const KComposition k({3, 2});
    const auto points = enumerate_admissible(k, ctx);
    const ParamPoint pt = points[points.size() / 2];

    ExpansionStats stats;
    auto t0 = std::chrono::steady_clock::now();
    const FpElement s = selberg_integral(k, pt, ctx, ExpansionLimits::from_environment(), &stats);
    const double engine_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    t.expect(s == r_value(k, pt, ctx).value(), "engine value");
    t.notes << " point=" << pt.str() << " engine_ms=" << engine_ms << " peak_slots=" << stats.peak_slots;

    // a reduced oracle budget keeps this quick; the full default budget is what bench uses
    ExpansionLimits small;
    small.max_sparse_terms = std::size_t{1} << 18;
    t0 = std::chrono::steady_clock::now();
    try {
        const SparsePoly full = sparse_expand_oracle(master_polynomial(k, pt, ctx), small);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        t.notes << " oracle_ms=" << ms << " ratio=" << ms / engine_ms;
        (void)full;
    } catch (const capacity_exceeded&) {
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        t.notes << " oracle exceeded " << small.max_sparse_terms << " terms after " << ms << " ms";
    }
}

} // namespace

int main()
{
    bool ok = true;
    ok &= report(1, "F_p beta integral", criterion_1);
    ok &= report(2, "Dyson constant term", criterion_2);
    ok &= report(3, "main theorem, one group", criterion_3);
    ok &= report(4, "main theorem, two groups", criterion_4);
    ok &= report(5, "main theorem, (3,2,1)", criterion_5);
    ok &= report(6, "k=(1,1) and (1,1,1) closed forms", criterion_6);
    ok &= report(7, "contiguous relations at p=11, k=(2,1)", criterion_7);
    ok &= report(8, "induction step", criterion_8);
    ok &= report(9, "weighted integral I_000", criterion_9);
    ok &= report(10, "property suites", criterion_10);
    report(11, "truncated engine vs sparse oracle", criterion_11, false);
    return ok ? 0 : 1;
}
