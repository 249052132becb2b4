// singseries: exact singular series of integer offset tuples and exact
// finite-h evaluation of their Gallagher average.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "singseries/singseries.hpp"

namespace {

using namespace singseries;

struct RawArgs {
    std::string tuple;
    uint64_t h = 0;
    bool h_set = false;
    std::string h_list;
    int r = 2;
    double y = 0.0;
    bool y_set = false;
    double eps = 1e-9;
    std::string strategy = "moment";
    std::string format;
    std::string out;
    uint64_t seed = 12345;
};

void add_common(CLI::App* cmd, RawArgs& a) {
    cmd->set_help_flag("--help", "print this help message");
    cmd->add_option("--tuple", a.tuple, "comma-separated nonnegative offsets, e.g. 0,2,6");
    auto* h = cmd->add_option("--h", a.h, "range bound: tuples drawn from [0,h]");
    cmd->add_option("--h-list", a.h_list, "comma-separated ascending h values");
    cmd->add_option("--r", a.r, "tuple length for average/converge/bench");
    auto* y = cmd->add_option("--y", a.y, "truncation level override (default 0.5 ln h, min 2)");
    cmd->add_option("--eps", a.eps, "relative enclosure width target (default 1e-9)");
    cmd->add_option("--strategy", a.strategy, "moment | direct | both (bench only)");
    cmd->add_option("--format", a.format, "csv | json");
    cmd->add_option("--out", a.out, "write output to file instead of stdout");
    cmd->add_option("--seed", a.seed, "seed for randomized self-checks");
    h->each([&a](const std::string&) { a.h_set = true; });
    y->each([&a](const std::string&) { a.y_set = true; });
}

RunConfig to_config(const RawArgs& a) {
    RunConfig cfg;
    if (!a.tuple.empty()) cfg.tuple = cli_detail::parse_tuple_spec(a.tuple);
    if (a.h_set) cfg.h = a.h;
    if (!a.h_list.empty()) cfg.h_list = cli_detail::parse_uint_list(a.h_list, "--h-list");
    cfg.r = a.r;
    if (a.y_set) cfg.y = a.y;
    cfg.eps = a.eps;
    cfg.strategy = a.strategy;
    if (!a.format.empty()) {
        if (a.format == "json") cfg.format = Format::json;
        else if (a.format == "csv") cfg.format = Format::csv;
        else throw usage_error("--format must be csv or json");
    }
    if (!a.out.empty()) cfg.out = a.out;
    cfg.seed = a.seed;
    return cfg;
}

int emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out) {
        std::ofstream f(*cfg.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot open output file " << *cfg.out << "\n";
            return kExitUsage;
        }
        f << text;
        if (!f.good()) {
            std::cerr << "error: failed writing " << *cfg.out << "\n";
            return kExitUsage;
        }
        return kExitOk;
    }
    std::cout << text;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact singular series and Gallagher-average toolkit"};
    app.require_subcommand(1);

    RawArgs args;
    CLI::App* series = app.add_subcommand("series", "singular series of one tuple");
    CLI::App* average = app.add_subcommand("average", "exact truncated Gallagher average");
    CLI::App* converge = app.add_subcommand("converge", "ratio-to-h^r table over an h list");
    CLI::App* selfcheck = app.add_subcommand("selfcheck", "run the exact-identity check matrix");
    CLI::App* bench = app.add_subcommand("bench", "timing table for both strategies");
    for (CLI::App* cmd : {series, average, converge, selfcheck, bench}) add_common(cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return singseries::kExitUsage;
    }

    using namespace singseries;
    try {
        RunConfig cfg = to_config(args);
        if (series->parsed()) return emit(cfg, run_series(cfg));
        if (average->parsed()) return emit(cfg, run_average(cfg));
        if (converge->parsed()) return emit(cfg, run_converge(cfg));
        if (bench->parsed()) return emit(cfg, run_bench(cfg));
        if (selfcheck->parsed()) {
            auto [text, ok] = run_selfcheck(cfg);
            int rc = emit(cfg, text);
            if (rc != kExitOk) return rc;
            return ok ? kExitOk : kExitCheckFailure;
        }
        return kExitUsage;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
}
