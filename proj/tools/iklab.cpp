// Command-line front end: reproducible exact-inference experiment runs over
// finite-memory POMDP models. Exit status is 0 iff every requested check
// passed, so CI can gate on the full verification suite.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "iklab/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact inverse-kinematics laboratory for finite-memory POMDPs"};
    app.require_subcommand(1);

    iklab::RunConfig config;
    if (const char* env = std::getenv("IKLAB_BUDGET")) config.budget = std::atof(env);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--model", config.model,
                        "builtin (fj-counterexample, fj-counterexample-observed, navigation) "
                        "or model file path");
        cmd->add_option("--policy", config.policy, "policy spec (uniform)");
        cmd->add_option("--budget", config.budget, "enumeration budget in weighted paths");
        cmd->add_option("--out", config.out, "write the report body to this file");
        cmd->add_flag("--decimal", config.decimal, "render decimals next to exact fractions");
        cmd->add_option("--nav-length", config.nav_length, "navigation line length");
        cmd->add_option("--nav-curtains", config.nav_curtains, "navigation curtain cells");
    };

    add_common(app.add_subcommand("validate", "structural model validation"));
    add_common(app.add_subcommand("diameter", "all-pairs shortest-path diameter"));

    auto* decod = app.add_subcommand("decodability", "past/future decodability checks");
    add_common(decod);
    decod->add_option("--m", config.decodability_m, "past window span (default: model m)");
    decod->add_option("--n", config.decodability_n, "future window span (default: model n)");

    auto* ident = app.add_subcommand("identities", "Bayes-optimal closed-form identity checks");
    add_common(ident);
    ident->add_option("--objective", config.objectives, "objectives (default: all six)");
    ident->add_option("--kmax", config.K_max, "largest prediction span k");
    ident->add_option("--anchor", config.anchor, "anchor time t* (default m+1)");

    auto* dec = app.add_subcommand("decoupling", "exogenous decoupling residual");
    add_common(dec);
    dec->add_option("--gap", config.h, "step gap h");
    dec->add_flag("--violating-policy", config.violating_policy,
                  "use a constructed exogenous-dependent policy");

    auto* disc = app.add_subcommand("discover", "multi-step-inverse state discovery");
    add_common(disc);
    disc->add_option("--objective", config.objectives, "objectives (default: all six)");
    disc->add_option("--kmax", config.K_max, "largest prediction span k");
    disc->add_option("--anchor", config.anchor, "anchor time t* (default m+1)");

    auto* dump = app.add_subcommand("dump-ik", "exhaustive inverse-kinematics listing");
    add_common(dump);
    std::string k_range = "1..10";
    dump->add_option("--k", k_range, "k range, e.g. 1..10");

    auto* sim = app.add_subcommand("simulate", "sample one seeded trajectory");
    add_common(sim);
    sim->add_option("--length", config.sim_length, "trajectory length");
    sim->add_option("--seed", config.seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);
    config.command = app.get_subcommands().front()->get_name();
    if (config.command == "dump-ik") {
        auto dots = k_range.find("..");
        if (dots == std::string::npos) {
            config.k_lo = config.k_hi = std::atoi(k_range.c_str());
        } else {
            config.k_lo = std::atoi(k_range.substr(0, dots).c_str());
            config.k_hi = std::atoi(k_range.substr(dots + 2).c_str());
        }
    }

    try {
        iklab::Report report = iklab::run(config);
        std::cout << report.body;
        std::cerr << "wall_ms " << report.wall_ms << "\n";
        return report.pass ? 0 : 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    }
}
