// Experiment runner: each subcommand regenerates one table or dataset as CSV.

#include "proxima/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

int main(int argc, char** argv)
{
    CLI::App app{"Distance-digest consensus experiments"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value file; flags given on the command line win");
    app.allow_config_extras(false);

    proxima::ExperimentOptions opts;
    std::size_t n = 0;
    double byz = 0.0;
    double pmiss = 0.0;
    std::size_t seeds = 0;
    std::uint64_t rounds = 0;
    double tau = 0.0;
    std::string out_path;

    auto* n_opt = app.add_option("--n", n, "validator count");
    auto* byz_opt = app.add_option("--byz", byz, "Byzantine fraction in [0,1)");
    auto* pmiss_opt = app.add_option("--pmiss", pmiss, "probability of an incomplete view");
    app.add_option("--seed", opts.seed, "base seed");
    auto* seeds_opt = app.add_option("--seeds", seeds, "number of consecutive seeds");
    auto* rounds_opt = app.add_option("--rounds", rounds, "rounds or trials per point");
    app.add_option("--branching", opts.branching, "tree branching factor");
    auto* tau_opt = app.add_option("--tau", tau, "distance threshold");
    app.add_option("--margin", opts.margin, "calibration safety margin");
    app.add_option("--samples", opts.samples, "calibration samples per seed");
    app.add_option("--out", out_path, "write output here instead of stdout");

    using Cmd = std::function<proxima::CommandOutput(const proxima::ExperimentOptions&)>;
    const std::map<std::string, std::pair<Cmd, std::string>> commands = {
        {"calibrate", {proxima::cmd_calibrate, "Monte Carlo threshold calibration over seeds"}},
        {"moments", {proxima::cmd_moments, "distance moments for 1-3 missing transactions"}},
        {"collision", {proxima::cmd_collision, "fabricated-digest collision rates and adversarial search"}},
        {"messages", {proxima::cmd_messages_table, "messages per block: tree, flat, HotStuff, PBFT"}},
        {"byzantine-sweep", {proxima::cmd_byzantine_sweep, "success and cost versus Byzantine fraction"}},
        {"committees", {proxima::cmd_committees, "BFT committees versus distance filtering"}},
        {"crossshard", {proxima::cmd_crossshard, "cross-shard coordination costs"}},
        {"latency", {proxima::cmd_latency, "projected finality latency"}},
        {"fastpath", {proxima::cmd_fastpath, "optimistic fast-path rate"}},
        {"demo", {proxima::cmd_demo, "annotated transcript of one round"}},
    };
    for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.second);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (*n_opt) opts.n = n;
    if (*byz_opt) opts.byz = byz;
    if (*pmiss_opt) opts.p_miss = pmiss;
    if (*seeds_opt) opts.seeds = seeds;
    if (*rounds_opt) opts.rounds = rounds;
    if (*tau_opt) opts.tau = tau;

    try {
        const auto* sub = app.get_subcommands().front();
        const auto result = commands.at(sub->get_name()).first(opts);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        if (out_path.empty()) {
            std::cout << result.text;
        } else {
            std::ofstream f(out_path);
            if (!f) {
                std::cerr << "error: cannot open " << out_path << '\n';
                return 1;
            }
            f << result.text;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
