#pragma once

// Admissible parameter sets: membership, enumeration, distinguished points and
// decrement paths.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fpselberg/gf.hpp"
#include "fpselberg/integrals.hpp"

namespace fpsel {

struct AdmissibilityReport {
    bool admissible = true;
    /// Identifiers such as "ine2[s=2,r=2,lower]", in checking order.
    std::vector<std::string> violated;
};

/// Checks the inequality system for A_k literally (ine1, ine2, ine13, ine14
/// and positivity) and lists every violation.
AdmissibilityReport is_admissible(const KComposition& k, const ParamPoint& pt, const FpContext& ctx);

/// Lower bounds on b: p-1-(a+(k1-1)c) for b_1 and (k_{s-1}-k_s+1)c-1 for s >= 2.
std::vector<std::int64_t> b_lower_bounds(const KComposition& k, std::int64_t a, std::int64_t c,
                                         const FpContext& ctx);

/// Visits admissible points with all coordinates in [1, 2p), in lexicographic
/// order of (a, b_1, ..., b_n, c). The visitor returns false to stop.
void for_each_admissible(const KComposition& k, const FpContext& ctx,
                         const std::function<bool(const ParamPoint&)>& visit);

std::vector<ParamPoint> enumerate_admissible(const KComposition& k, const FpContext& ctx,
                                             std::optional<std::size_t> limit = std::nullopt);

/// (a, (p-1-(a+(k1-1)c), (k1-k2+1)c-1, ..., (k_{n-1}-k_n+1)c-1), c).
ParamPoint distinguished_point(const KComposition& k, std::int64_t a, std::int64_t c, const FpContext& ctx);

struct DecrementStep {
    std::size_t coordinate = 0; ///< 0-based index into b
    ParamPoint point;           ///< point after the decrement
};

/// Unit decrements of b from an admissible point to the distinguished point
/// with the same a and c, staying admissible throughout. Greedy on the
/// largest slack over the lower bound, ties to the smallest index.
std::vector<DecrementStep> decrement_path(const KComposition& k, const ParamPoint& from, const FpContext& ctx);

/// Hypotheses of the closed form for I_{0,0,0}: positivity, a+(k1-1)c < p
/// and every factorial argument in [0, p).
AdmissibilityReport is_admissible_I(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx);

} // namespace fpsel
