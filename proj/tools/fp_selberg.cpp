// Command-line front end: evaluate integrals and closed forms, run
// verification campaigns, enumerate admissible points, benchmark the engine.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fpselberg/admissible.hpp"
#include "fpselberg/formulas.hpp"
#include "fpselberg/harness.hpp"

namespace {

using namespace fpsel;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct PointArgs {
    std::uint32_t p = 0;
    std::vector<std::int64_t> k;
    std::int64_t a = 0;
    std::vector<std::int64_t> b;
    std::int64_t c = 0;
};

void add_point_options(CLI::App* cmd, PointArgs& args)
{
    cmd->add_option("--p", args.p, "odd prime")->required();
    cmd->add_option("--k", args.k, "composition K1,K2,...")->required()->delimiter(',');
    cmd->add_option("--a", args.a)->required();
    cmd->add_option("--b", args.b, "B1,B2,...")->required()->delimiter(',');
    cmd->add_option("--c", args.c)->required();
}

double millis_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int run_eval_s(const PointArgs& args)
{
    const FpContext ctx(args.p);
    try {
        std::cout << selberg_integral(KComposition(args.k), {args.a, args.b, args.c}, ctx).value() << "\n";
    } catch (const capacity_exceeded& e) {
        std::cout << "capacity_exceeded: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_ok;
}

int run_eval_r(const PointArgs& args)
{
    const FpContext ctx(args.p);
    const FormulaResult r = r_value(KComposition(args.k), {args.a, args.b, args.c}, ctx);
    std::cout << r.str() << "\n";
    return r ? exit_ok : exit_failure;
}

int run_enumerate(std::uint32_t p, const std::vector<std::int64_t>& k, bool count_only)
{
    const FpContext ctx(p);
    std::size_t count = 0;
    for_each_admissible(KComposition(k), ctx, [&](const ParamPoint& pt) {
        ++count;
        if (!count_only) {
            std::cout << pt.str() << "\n";
        }
        return true;
    });
    if (count_only) {
        std::cout << count << "\n";
    }
    return exit_ok;
}

int run_bench(std::uint32_t p, const std::vector<std::int64_t>& k_parts)
{
    const FpContext ctx(p);
    const KComposition k(k_parts);
    const auto points = enumerate_admissible(k, ctx);
    if (points.empty()) {
        std::cout << "no admissible points for k=" << k.str() << " at p=" << p << "\n";
        return exit_ok;
    }
    const ParamPoint pt = points[points.size() / 2];
    const ExpansionLimits limits = ExpansionLimits::from_environment();
    std::cout << "point " << pt.str() << "\n";

    ExpansionStats stats;
    auto t0 = std::chrono::steady_clock::now();
    const FpElement s = selberg_integral(k, pt, ctx, limits, &stats);
    const double engine_ms = millis_since(t0);
    std::cout << "truncated: value=" << s.value() << " ms=" << engine_ms << " peak_slots=" << stats.peak_slots
              << " multiply_adds=" << stats.multiply_adds << "\n";

    const FactorProduct fp = master_polynomial(k, pt, ctx);
    const Exponents target = cycle_from_composition(k).targets(p);
    t0 = std::chrono::steady_clock::now();
    try {
        const SparsePoly full = sparse_expand_oracle(fp, limits);
        const double oracle_ms = millis_since(t0);
        const auto it = full.find(target);
        const std::uint32_t v = it == full.end() ? 0 : it->second.value();
        std::cout << "sparse: value=" << v << " ms=" << oracle_ms << " terms=" << full.size() << "\n";
        std::cout << "ratio: " << (engine_ms > 0 ? oracle_ms / engine_ms : 0.0) << "\n";
        if (v != s.value()) {
            std::cout << "MISMATCH\n";
            return exit_failure;
        }
    } catch (const capacity_exceeded& e) {
        std::cout << "sparse: over budget after ms=" << millis_since(t0) << " (" << e.what() << ")\n";
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"F_p Selberg integral toolkit"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "evaluate one side at a point");
    eval->require_subcommand(1);
    PointArgs s_args;
    PointArgs r_args;
    auto* eval_s = eval->add_subcommand("s", "integral by coefficient extraction");
    add_point_options(eval_s, s_args);
    auto* eval_r = eval->add_subcommand("r", "closed form");
    add_point_options(eval_r, r_args);

    auto* check = app.add_subcommand("check", "run a verification campaign");
    std::string campaign;
    std::uint32_t check_p = 0;
    std::vector<std::int64_t> check_k;
    bool exhaustive = false;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string json_path;
    check->add_option("campaign", campaign)->required();
    check->add_option("--p", check_p)->required();
    check->add_option("--k", check_k)->delimiter(',');
    auto* ex_opt = check->add_flag("--exhaustive", exhaustive);
    auto* samples_opt = check->add_option("--samples", samples);
    check->add_option("--seed", seed)->needs(samples_opt);
    check->add_option("--threads", threads);
    check->add_option("--json", json_path, "write the report as JSON");
    ex_opt->excludes(samples_opt);

    auto* enumerate = app.add_subcommand("enumerate", "list admissible points");
    std::uint32_t enum_p = 0;
    std::vector<std::int64_t> enum_k;
    bool count_only = false;
    enumerate->add_option("--p", enum_p)->required();
    enumerate->add_option("--k", enum_k)->required()->delimiter(',');
    enumerate->add_flag("--count-only", count_only);

    auto* bench = app.add_subcommand("bench", "truncated engine vs sparse oracle");
    std::uint32_t bench_p = 0;
    std::vector<std::int64_t> bench_k;
    bench->add_option("--p", bench_p)->required();
    bench->add_option("--k", bench_k)->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (eval_s->parsed()) {
            return run_eval_s(s_args);
        }
        if (eval_r->parsed()) {
            return run_eval_r(r_args);
        }
        if (enumerate->parsed()) {
            return run_enumerate(enum_p, enum_k, count_only);
        }
        if (bench->parsed()) {
            return run_bench(bench_p, bench_k);
        }
        if (check->parsed()) {
            CampaignSpec spec;
            spec.campaign = parse_campaign(campaign);
            spec.p = check_p;
            spec.k = check_k;
            spec.sampling = samples_opt->count() > 0 ? Sampling::random(seed, samples) : Sampling::all();
            spec.threads = threads;
            const FpContext validate(check_p);
            const VerificationReport rep = run_campaign(spec);
            std::cout << campaign << " p=" << rep.spec.p << " total=" << rep.total << " checked=" << rep.checked
                      << " passed=" << rep.passed << " failed=" << rep.failures.size() << " skipped=" << rep.skipped
                      << " ms=" << rep.elapsed_ms << "\n";
            for (const auto& f : rep.failures) {
                std::cout << "  FAIL " << f.point.str() << " lhs=" << f.lhs << " rhs=" << f.rhs << " " << f.classifier
                          << "\n";
            }
            if (!json_path.empty()) {
                std::ofstream out(json_path);
                if (!out) {
                    std::cerr << "cannot write " << json_path << "\n";
                    return exit_usage;
                }
                out << to_json(rep).dump(2) << "\n";
            }
            return rep.ok() ? exit_ok : exit_failure;
        }
    } catch (const precondition_violation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
