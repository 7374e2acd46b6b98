#pragma once

// Verification campaigns: integrals on one side, closed forms or contiguous
// relations on the other, with deterministic reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpselberg/gf.hpp"
#include "fpselberg/integrals.hpp"
#include "fpselberg/mpoly.hpp"

namespace fpsel {

enum class Campaign {
    main,
    beta,
    dyson,
    thm_3_11,
    thm_4_111,
    relations_IS,
    relations_II0,
    relations_B1,
    relations_B2,
    relations_S1S2,
    induction,
    i000,
    stokes,
};

std::string campaign_name(Campaign c);
/// Throws precondition_violation for an unknown name.
Campaign parse_campaign(const std::string& name);
const std::vector<Campaign>& all_campaigns();

struct Sampling {
    bool exhaustive = true;
    std::uint64_t seed = 0;
    std::size_t count = 0;

    static Sampling all() { return {}; }
    static Sampling random(std::uint64_t seed, std::size_t count) { return {false, seed, count}; }
};

struct CampaignSpec {
    Campaign campaign = Campaign::main;
    std::uint32_t p = 5;
    std::vector<std::int64_t> k;  ///< empty where the campaign fixes it
    Sampling sampling;
    unsigned threads = 0;         ///< 0 = hardware concurrency
    ExpansionLimits limits = ExpansionLimits::from_environment();
};

struct FailureRecord {
    ParamPoint point;
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;
    std::string classifier;
};

struct VerificationReport {
    CampaignSpec spec;
    std::size_t total = 0;
    std::size_t checked = 0;
    std::size_t passed = 0;
    std::size_t skipped = 0;
    std::map<std::string, std::size_t> skip_reasons;
    std::vector<FailureRecord> failures; ///< sorted by point
    double elapsed_ms = 0;

    bool ok() const noexcept { return failures.empty(); }
};

/// Runs one campaign. Points are evaluated on a worker pool and merged in a
/// fixed order, so the report depends only on the spec.
VerificationReport run_campaign(const CampaignSpec& spec);

nlohmann::json to_json(const VerificationReport& report);

/// S at (a, b1-1, b2, c) equals the S-1 factor times S at (a, b1, b2, c).
/// Throws precondition_violation unless both points are admissible.
bool verify_relation_S1(const KComposition& k, const ParamPoint& pt, const FpContext& ctx,
                        const ExpansionLimits& limits = ExpansionLimits::from_environment());
bool verify_relation_S2(const KComposition& k, const ParamPoint& pt, const FpContext& ctx,
                        const ExpansionLimits& limits = ExpansionLimits::from_environment());

/// With b_n forced to (k_{n-1}-k_n+1)c-1, checks S_k = induction_factor * S_{k'}
/// for every b' making the point admissible. Returns nullopt when k_n c > p-1.
std::optional<bool> verify_induction(const KComposition& k, std::int64_t a, std::int64_t c, const FpContext& ctx,
                                     const ExpansionLimits& limits = ExpansionLimits::from_environment());

/// Indices of a seeded partial Fisher-Yates shuffle of 0..n-1, returned sorted.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed);

} // namespace fpsel
