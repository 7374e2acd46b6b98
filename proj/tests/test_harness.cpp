#include <doctest.h>

#include <algorithm>

#include "fpselberg/admissible.hpp"
#include "fpselberg/harness.hpp"

using namespace fpsel;

namespace {

CampaignSpec spec_of(Campaign c, std::uint32_t p, std::vector<std::int64_t> k = {}, Sampling s = Sampling::all())
{
    CampaignSpec spec;
    spec.campaign = c;
    spec.p = p;
    spec.k = std::move(k);
    spec.sampling = s;
    return spec;
}

} // namespace

TEST_CASE("campaign names round-trip")
{
    for (const Campaign c : all_campaigns()) {
        CHECK(parse_campaign(campaign_name(c)) == c);
    }
    CHECK(all_campaigns().size() == 13);
    CHECK_THROWS_AS(parse_campaign("nope"), precondition_violation);
}

TEST_CASE("beta campaign")
{
    const auto rep = run_campaign(spec_of(Campaign::beta, 5));
    CHECK(rep.total == 25);
    CHECK(rep.passed == 25);
    CHECK(rep.ok());
}

TEST_CASE("main campaign at p=5, k=(1)")
{
    const auto rep = run_campaign(spec_of(Campaign::main, 5, {1}));
    CHECK(rep.checked == 36);
    CHECK(rep.passed == 36);
    CHECK(rep.total == 9 * 9 * 9);
    // skipped points are exactly the complement of the enumeration in the box
    CHECK(rep.skipped == rep.total - enumerate_admissible(KComposition({1}), FpContext(5)).size());
    CHECK(rep.skip_reasons.at("non_admissible") == rep.skipped);
}

TEST_CASE("relations_II0 sampled")
{
    const auto rep = run_campaign(spec_of(Campaign::relations_II0, 11, {2, 1}, Sampling::random(3, 60)));
    CHECK(rep.total == 60);
    CHECK(rep.passed == 60);
}

TEST_CASE("report invariants")
{
    const auto rep = run_campaign(spec_of(Campaign::relations_B1, 7, {2, 1}));
    CHECK(rep.passed + rep.failures.size() == rep.checked);
    CHECK(rep.checked + rep.skipped == rep.total);
    CHECK_THROWS_AS(run_campaign(spec_of(Campaign::relations_B1, 7, {2, 1, 0})), precondition_violation);
    CHECK_THROWS_AS(run_campaign(spec_of(Campaign::relations_B1, 7, {3, 2, 1})), precondition_violation);
    CHECK_THROWS_AS(run_campaign(spec_of(Campaign::main, 9, {1})), precondition_violation);
}

TEST_CASE("capacity failures are skips")
{
    CampaignSpec spec = spec_of(Campaign::main, 7, {2, 1}, Sampling::random(1, 5));
    spec.limits.max_slots = 1;
    const auto rep = run_campaign(spec);
    CHECK(rep.ok());
    CHECK(rep.skipped == 5);
    CHECK(rep.skip_reasons.at("capacity_exceeded") == 5);
}

TEST_CASE("reports are deterministic")
{
    for (unsigned threads : {1u, 4u}) {
        CampaignSpec a = spec_of(Campaign::relations_S1S2, 11, {2, 1}, Sampling::random(42, 30));
        a.threads = threads;
        CampaignSpec b = a;
        b.threads = 3;
        auto ja = to_json(run_campaign(a));
        auto jb = to_json(run_campaign(b));
        ja["elapsed_ms"] = 0;
        jb["elapsed_ms"] = 0;
        CHECK(ja.dump() == jb.dump());
        CHECK(ja["seed"] == 42);
    }
}

TEST_CASE("JSON schema")
{
    const auto j = to_json(run_campaign(spec_of(Campaign::dyson, 7)));
    for (const char* key : {"campaign", "p", "k", "total", "checked", "passed", "skipped", "failures", "elapsed_ms",
                            "seed"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["campaign"] == "dyson");
    CHECK(j["seed"].is_null());
    CHECK(j["failures"].is_array());
}

TEST_CASE("failure records carry the point")
{
    VerificationReport rep;
    rep.spec = spec_of(Campaign::main, 5, {1});
    rep.failures.push_back({{1, {2}, 3}, 4, 0, "mismatch"});
    const auto j = to_json(rep);
    CHECK(j["failures"][0]["point"]["a"] == 1);
    CHECK(j["failures"][0]["point"]["b"][0] == 2);
    CHECK(j["failures"][0]["point"]["c"] == 3);
    CHECK(j["failures"][0]["classifier"] == "mismatch");
}

TEST_CASE("sampling")
{
    const auto x = sample_indices(100, 10, 5);
    CHECK(x == sample_indices(100, 10, 5));
    CHECK(x.size() == 10);
    CHECK(std::is_sorted(x.begin(), x.end()));
    CHECK(std::adjacent_find(x.begin(), x.end()) == x.end());
    CHECK(sample_indices(5, 10, 1).size() == 5);
    CHECK(x != sample_indices(100, 10, 6));
}

TEST_CASE("verify_relation_S1 / S2")
{
    const FpContext ctx(11);
    const KComposition k({2, 1});
    CHECK(verify_relation_S1(k, {2, {6, 5}, 3}, ctx));
    CHECK_THROWS_AS(verify_relation_S1(k, {2, {5, 5}, 3}, ctx), precondition_violation);
    CHECK_THROWS_AS(verify_relation_S2(k, {2, {5, 5}, 3}, ctx), precondition_violation);
    for (const auto& pt : enumerate_admissible(k, ctx, 60)) {
        for (const auto& step : decrement_path(k, pt, ctx)) {
            ParamPoint upper = step.point;
            ++upper.b[step.coordinate];
            CHECK((step.coordinate == 0 ? verify_relation_S1(k, upper, ctx) : verify_relation_S2(k, upper, ctx)));
        }
    }
}

TEST_CASE("verify_induction")
{
    CHECK(verify_induction(KComposition({2, 1}), 2, 3, FpContext(11)) == std::optional<bool>(true));
    CHECK(verify_induction(KComposition({3, 2, 1}), 1, 1, FpContext(7)) == std::optional<bool>(true));
    CHECK_FALSE(verify_induction(KComposition({3, 2}), 1, 6, FpContext(11)).has_value());
}

TEST_CASE("stokes campaign")
{
    const auto rep = run_campaign(spec_of(Campaign::stokes, 7, {}, Sampling::random(9, 50)));
    CHECK(rep.checked == 50);
    CHECK(rep.ok());
}
