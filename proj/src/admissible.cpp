#include "fpselberg/admissible.hpp"

#include <algorithm>
#include <numeric>

#include "fpselberg/formulas.hpp"

namespace fpsel {

namespace {

std::string tag(const char* family, std::initializer_list<std::pair<const char*, std::int64_t>> idx,
                const char* side)
{
    std::string s = family;
    s += '[';
    for (const auto& [name, v] : idx) {
        s += std::string(name) + "=" + std::to_string(v) + ",";
    }
    s += side;
    s += ']';
    return s;
}

void require_shape(const KComposition& k, const ParamPoint& pt)
{
    if (!k.strictly_decreasing()) {
        throw precondition_violation("composition " + k.str() + " is not strictly decreasing");
    }
    if (pt.b.size() != k.n()) {
        throw precondition_violation("b has the wrong length for " + k.str());
    }
}

} // namespace

AdmissibilityReport is_admissible(const KComposition& k, const ParamPoint& pt, const FpContext& ctx)
{
    require_shape(k, pt);
    const auto n = static_cast<std::int64_t>(k.n());
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::int64_t a = pt.a;
    const std::int64_t c = pt.c;
    auto b_sum = [&](std::int64_t s, std::int64_t r) {
        return std::accumulate(pt.b.begin() + (s - 1), pt.b.begin() + r, std::int64_t{0});
    };

    AdmissibilityReport rep;
    auto check = [&](bool ok, auto&& id) {
        if (!ok) {
            rep.violated.push_back(id());
        }
    };

    check(a > 0, [&] { return std::string("positive[a]"); });
    for (std::int64_t s = 1; s <= n; ++s) {
        check(pt.b[static_cast<std::size_t>(s - 1)] > 0, [&] { return std::string("positive[b" + std::to_string(s) + "]"); });
    }
    check(c > 0, [&] { return std::string("positive[c]"); });

    for (std::int64_t s = 1; s <= n; ++s) {
        for (std::int64_t r = s; r <= n; ++r) {
            const std::int64_t base = r - s + b_sum(s, r);
            check(0 <= base + (s - r) * c, [&] { return tag("ine1", {{"s", s}, {"r", r}}, "lower"); });
            check(base + (k.part(r) - k.part(r + 1) + s - r - 1) * c <= p - 1, [&] { return tag("ine1", {{"s", s}, {"r", r}}, "upper"); });
        }
    }
    for (std::int64_t s = 2; s <= n; ++s) {
        for (std::int64_t r = s; r <= n; ++r) {
            const std::int64_t base = r - s + 1 + b_sum(s, r);
            const std::int64_t ds = k.part(s) - k.part(s - 1);
            check(0 <= base + (s - r + ds - 1) * c, [&] { return tag("ine2", {{"s", s}, {"r", r}}, "lower"); });
            check(base + (s - r + k.part(r) - k.part(r + 1) + ds - 2) * c <= p - 1, [&] { return tag("ine2", {{"s", s}, {"r", r}}, "upper"); });
        }
    }
    for (std::int64_t r = 1; r <= n; ++r) {
        const std::int64_t base = r + a + b_sum(1, r);
        check(p <= base + (k.part(1) - r) * c, [&] { return tag("ine13", {{"r", r}}, "lower"); });
        check(base + (k.part(r) - k.part(r + 1) + k.part(1) - r - 1) * c < 2 * p, [&] { return tag("ine13", {{"r", r}}, "upper"); });
    }
    const std::int64_t top = a + (k.part(1) - 1) * c;
    check(top < p - 1, [&] { return std::string("ine14[a]"); });
    check(pt.b[0] >= p - 1 - top, [&] { return std::string("ine14[b1]"); });
    check(0 < k.part(1) * c && k.part(1) * c < p, [&] { return std::string("ine14[c]"); });

    rep.admissible = rep.violated.empty();
    return rep;
}

std::vector<std::int64_t> b_lower_bounds(const KComposition& k, std::int64_t a, std::int64_t c,
                                         const FpContext& ctx)
{
    const auto p = static_cast<std::int64_t>(ctx.p());
    std::vector<std::int64_t> lo(k.n());
    lo[0] = p - 1 - (a + (k.part(1) - 1) * c);
    for (std::size_t s = 2; s <= k.n(); ++s) {
        const auto si = static_cast<std::int64_t>(s);
        lo[s - 1] = (k.part(si - 1) - k.part(si) + 1) * c - 1;
    }
    return lo;
}

void for_each_admissible(const KComposition& k, const FpContext& ctx,
                         const std::function<bool(const ParamPoint&)>& visit)
{
    if (!k.strictly_decreasing()) {
        throw precondition_violation("composition " + k.str() + " is not strictly decreasing");
    }
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::size_t n = k.n();
    const std::int64_t k1 = k.part(1);
    const std::int64_t c_max = (p - 1) / k1; // k1 c < p
    if (c_max < 1) {
        return;
    }

    // a + (k1-1)c < p-1 with c >= 1 caps a; b_s <= p-1 from ine1 at s = r.
    ParamPoint pt;
    pt.b.assign(n, 1);
    for (pt.a = 1; pt.a < p - 1 - (k1 - 1); ++pt.a) {
        std::fill(pt.b.begin(), pt.b.end(), 1);
        // b1 >= p-1-(a+(k1-1)c) is weakest at c = c_max
        pt.b[0] = std::max<std::int64_t>(1, p - 1 - (pt.a + (k1 - 1) * c_max));
        const std::int64_t b1_start = pt.b[0];
        while (true) {
            for (pt.c = 1; pt.c <= c_max; ++pt.c) {
                const auto lo = b_lower_bounds(k, pt.a, pt.c, ctx);
                bool in_bounds = pt.a + (k1 - 1) * pt.c < p - 1;
                for (std::size_t s = 0; s < n && in_bounds; ++s) {
                    in_bounds = pt.b[s] >= lo[s];
                }
                if (in_bounds && is_admissible(k, pt, ctx).admissible && !visit(pt)) {
                    return;
                }
            }
            // odometer over b, last coordinate fastest
            std::size_t pos = n;
            while (pos > 0) {
                --pos;
                if (pt.b[pos] < p - 1) {
                    ++pt.b[pos];
                    break;
                }
                pt.b[pos] = pos == 0 ? b1_start : 1;
                if (pos == 0) {
                    pos = n + 1; // wrapped
                    break;
                }
            }
            if (pos == n + 1) {
                break;
            }
        }
    }
}

std::vector<ParamPoint> enumerate_admissible(const KComposition& k, const FpContext& ctx,
                                             std::optional<std::size_t> limit)
{
    std::vector<ParamPoint> out;
    if (limit && *limit == 0) {
        return out;
    }
    for_each_admissible(k, ctx, [&](const ParamPoint& pt) {
        out.push_back(pt);
        return !(limit && out.size() >= *limit);
    });
    return out;
}

ParamPoint distinguished_point(const KComposition& k, std::int64_t a, std::int64_t c, const FpContext& ctx)
{
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::int64_t k1 = k.part(1);
    if (!(0 < k1 * c && k1 * c <= p - 1) || !(a + (k1 - 1) * c < p - 1)) {
        throw precondition_violation("distinguished_point: need 0 < k1 c <= p-1 and a+(k1-1)c < p-1");
    }
    ParamPoint pt{a, b_lower_bounds(k, a, c, ctx), c};
    const auto rep = is_admissible(k, pt, ctx);
    if (!rep.admissible) {
        throw precondition_violation("distinguished_point: " + pt.str() + " is not admissible (violates "
                                     + rep.violated.front() + ")");
    }
    return pt;
}

std::vector<DecrementStep> decrement_path(const KComposition& k, const ParamPoint& from, const FpContext& ctx)
{
    if (!is_admissible(k, from, ctx).admissible) {
        throw precondition_violation("decrement_path: start point " + from.str() + " is not admissible");
    }
    const auto lo = b_lower_bounds(k, from.a, from.c, ctx);
    std::vector<DecrementStep> path;
    ParamPoint cur = from;
    while (true) {
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < cur.b.size(); ++i) {
            if (cur.b[i] > lo[i]) {
                order.push_back(i);
            }
        }
        if (order.empty()) {
            return path;
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return cur.b[x] - lo[x] > cur.b[y] - lo[y];
        });
        bool moved = false;
        for (const std::size_t i : order) {
            ParamPoint next = cur;
            --next.b[i];
            if (is_admissible(k, next, ctx).admissible) {
                cur = next;
                path.push_back({i, cur});
                moved = true;
                break;
            }
        }
        if (!moved) {
            throw no_path("decrement_path: stuck at " + cur.str() + " on the way from " + from.str());
        }
    }
}

AdmissibilityReport is_admissible_I(std::int64_t k1, std::int64_t k2, const ParamPoint& pt, const FpContext& ctx)
{
    if (!(k1 > k2 && k2 > 0)) {
        throw precondition_violation("is_admissible_I: need k1 > k2 > 0");
    }
    if (pt.b.size() != 2) {
        throw precondition_violation("is_admissible_I: need b = (b1, b2)");
    }
    const auto p = static_cast<std::int64_t>(ctx.p());
    const std::int64_t a = pt.a;
    const std::int64_t b1 = pt.b[0];
    const std::int64_t b2 = pt.b[1];
    const std::int64_t c = pt.c;

    AdmissibilityReport rep;
    auto range = [&](std::int64_t x, const char* what, std::int64_t i) {
        if (x < 0) {
            rep.violated.push_back(tag(what, {{"i", i}}, "lower"));
        } else if (x >= p) {
            rep.violated.push_back(tag(what, {{"i", i}}, "upper"));
        }
    };

    if (a <= 0) {
        rep.violated.emplace_back("positive[a]");
    }
    if (b1 <= 0) {
        rep.violated.emplace_back("positive[b1]");
    }
    if (b2 <= 0) {
        rep.violated.emplace_back("positive[b2]");
    }
    if (c <= 0) {
        rep.violated.emplace_back("positive[c]");
    }
    if (!(a + (k1 - 1) * c < p)) {
        rep.violated.emplace_back("top[a+(k1-1)c<p]");
    }
    for (std::int64_t i = 1; i <= k1 - k2; ++i) {
        range(b1 + (i - 1) * c, "(b1+(i-1)c)!", i);
        range(a + b1 + (i + k1 - 2) * c - p, "(a+b1+(i+k1-2)c-p)!", i);
    }
    for (std::int64_t i = 1; i <= k2; ++i) {
        range(b2 + (i - 1) * c, "(b2+(i-1)c)!", i);
        range(b2 + (i + k2 - k1 - 2) * c, "(b2+(i+k2-k1-2)c)!", i);
        range(b1 + b2 + (i - 2) * c, "(b1+b2+(i-2)c)!", i);
        range(a + b1 + b2 + (i + k1 - 3) * c - p, "(a+b1+b2+(i+k1-3)c-p)!", i);
    }
    for (std::int64_t i = 1; i <= k1; ++i) {
        range(a + (i - 1) * c - 1, "(a+(i-1)c-1)!", i);
    }
    for (std::int64_t i = 1; i <= k2; ++i) {
        range(p + (i - k1 - 1) * c - 1, "(p+(i-k1-1)c-1)!", i);
    }
    for (const std::int64_t kr : {k1, k2}) {
        for (std::int64_t i = 1; i <= kr; ++i) {
            range(i * c, "(ic)!", i);
        }
    }
    range(c, "(c)!", 0);

    rep.admissible = rep.violated.empty();
    return rep;
}

} // namespace fpsel
