#include "cli_common.hpp"

#include "CLI11.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

using namespace ammcli;

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_logger_st("ammcalc");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* lvl = std::getenv("AMMCALC_LOG")) {
        spdlog::set_level(spdlog::level::from_str(lvl));
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"ammcalc: cost measures, composition and adaptation of two-asset AMM curves"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from a TOML/INI config file");

    Globals g;
    app.add_option("--curve", g.curve, "Curve spec: JSON file path or inline JSON");
    app.add_option("--out", g.out, "Write output here instead of stdout");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--tol", g.tol, "Relative tolerance for law residuals")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for randomized sweeps");
    app.add_option("--jobs", g.jobs, "Worker threads for grid sweeps")->check(CLI::Range(1u, 256u));
    app.add_flag("--skip-validate", g.skip_validate, "Skip the axiom check on loaded curves");

    auto* measure = app.add_subcommand("measure", "Measures over a (v, v2) grid");
    int grid = 9;
    std::vector<double> vs, v2s;
    measure->add_option("--grid", grid, "Grid size per axis (points i/(n+1))");
    measure->add_option("--v", vs, "Explicit v values")->delimiter(',');
    measure->add_option("--v2", v2s, "Explicit v2 values")->delimiter(',');

    auto* verify = app.add_subcommand("verify", "Run the invariant and law suite");
    int samples = 50;
    verify->add_option("--samples", samples, "Random draws per check")->check(CLI::Range(1, 100000));

    auto* expect = app.add_subcommand("expect", "Expected measures under valuation distributions");
    double v0 = 0.5;
    std::vector<double> alphas{1, 2, 3, 4};
    std::string dist, kind = "load";
    bool cap = false;
    expect->add_option("--v0", v0, "Current valuation");
    expect->add_option("--alphas", alphas, "Beta parameters of the surface")->delimiter(',');
    expect->add_option("--dist", dist, "uniform | beta:a1,a2 | tabulated JSON");
    expect->add_option("--measure", kind, "load | linslip | divloss");
    expect->add_flag("--capitalization", cap, "Expected stable capitalization under --dist");

    auto* compose = app.add_subcommand("compose", "Sequential or parallel composition");
    ComposeArgs ca;
    compose->add_option("--spec", ca.spec, "Composition spec (path or inline JSON)");
    compose->add_option("--op", ca.op, "seq | par (with --curve)");
    compose->add_option("--right", ca.right, "Right curve spec (defaults to --curve)");
    compose->add_option("--a", ca.a, "Left anchor reserve");
    compose->add_option("--b", ca.b, "Right anchor reserve");
    compose->add_option("--query", ca.queries, "x values (seq) or deposits (par)")->delimiter(',');
    compose->add_option("--V", ca.V, "Three-way valuation v1,v2,v3 (seq law check)");
    compose->add_option("--V2", ca.V2, "Target three-way valuation (seq law check)");
    compose->add_option("--v", ca.v, "Valuation (par law check)");
    compose->add_option("--v2", ca.v2, "Target valuation (par law check)");

    auto* adjust = app.add_subcommand("adjust", "Pseudo-arbitrage shift or curve replacement");
    AdjustArgs aa;
    double new_v = 0.0;
    adjust->add_option("--x", aa.x, "Reserve x of the current state (y = f(x))");
    adjust->add_option("--state", aa.state, "Explicit state x,y");
    auto* vopt = adjust->add_option("--v", new_v, "New market valuation");
    adjust->add_option("--p", aa.p, "Current valuation distribution");
    adjust->add_option("--p-tilde", aa.p_tilde, "New valuation distribution (replacement mode)");

    auto* partition = app.add_subcommand("partition", "Partition totals and conservation");
    PartitionArgs pa;
    partition->add_option("--spec", pa.spec, "Partition spec (path or inline JSON)");
    partition->add_option("--axis", pa.axis, "X | Y");
    partition->add_option("--anchor", pa.anchor, "Anchor reserve x");
    partition->add_option("--ratio", pa.ratio, "Geometric ratio");
    partition->add_option("--count", pa.count, "Number of points");
    partition->add_flag("--no-tail", pa.no_tail, "Omit the tail term");
    partition->add_flag("--conservation", pa.conservation, "Totals at the fixed point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        spdlog::debug("seed {}, jobs {}, tol {}", g.seed, g.jobs, g.tol);
        if (*measure) {
            return cmd_measure(g, grid, vs, v2s);
        }
        if (*verify) {
            return cmd_verify(g, samples);
        }
        if (*expect) {
            return cmd_expect(g, v0, alphas, dist, kind, cap);
        }
        if (*compose) {
            return cmd_compose(g, ca);
        }
        if (*adjust) {
            if (vopt->count() > 0) {
                aa.v = new_v;
            }
            return cmd_adjust(g, aa);
        }
        if (*partition) {
            return cmd_partition(g, pa);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ammcalc::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ammcalc::ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ammcalc::ReplacementRuleError& e) {
        std::cerr << "replacement rule '" << e.rule() << "' violated: " << e.what() << "\n";
        return kNumericError;
    } catch (const ammcalc::QuadratureError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumericError;
    } catch (const ammcalc::AmmError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumericError;
    }
    return kOk;
}
