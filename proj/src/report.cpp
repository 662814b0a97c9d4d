#include "iklab/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "iklab/decodability.hpp"
#include "iklab/discovery.hpp"
#include "iklab/envs.hpp"
#include "iklab/inference.hpp"

namespace iklab {

namespace {

using json = nlohmann::ordered_json;

json frac(const Rat& r, bool decimal) {
    if (!decimal) return to_fraction(r);
    std::ostringstream out;
    out << to_fraction(r) << " (" << std::setprecision(6)
        << r.convert_to<double>() << ")";
    return out.str();
}

json dist_json(const std::vector<Rat>& dist, bool decimal) {
    json out = json::array();
    for (const auto& p : dist) out.push_back(frac(p, decimal));
    return out;
}

Policy resolve_policy(const RunConfig& config, const FmPomdp& model) {
    if (config.policy == "uniform")
        return uniform_policy(model.num_agent_states(), model.num_actions());
    throw std::invalid_argument("unknown policy spec: " + config.policy);
}

json config_echo(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["model"] = c.model;
    j["policy"] = c.policy;
    if (!c.objectives.empty()) j["objectives"] = c.objectives;
    j["kmax"] = c.K_max;
    j["anchor"] = c.anchor;
    j["seed"] = c.seed;
    j["budget"] = c.budget;
    return j;
}

json decodability_json(const DecodabilityVerdict& v, const FmPomdp& model) {
    json j;
    j["holds"] = v.holds;
    if (v.witness) {
        json w;
        w["payload"] = v.witness->payload;
        w["states"] = {model.state_label(v.witness->state_a),
                       model.state_label(v.witness->state_b)};
        w["anchors"] = {v.witness->anchor_a, v.witness->anchor_b};
        j["witness"] = w;
    }
    return j;
}

std::vector<Objective> resolve_objectives(const RunConfig& config) {
    std::vector<Objective> out;
    if (config.objectives.empty()) return all_objectives();
    for (const auto& name : config.objectives) out.push_back(objective_from_name(name));
    return out;
}

}  // namespace

FmPomdp resolve_model(const RunConfig& config) {
    if (config.model == "fj-counterexample") return make_fj_counterexample();
    if (config.model == "fj-counterexample-observed") return make_fj_counterexample_observed();
    if (config.model == "navigation") {
        NavSpec spec;
        spec.length = config.nav_length;
        spec.curtains.insert(config.nav_curtains.begin(), config.nav_curtains.end());
        return make_navigation(spec);
    }
    return load_model_file(config.model);
}

Report run(const RunConfig& config) {
    auto start = std::chrono::steady_clock::now();
    FmPomdp model = resolve_model(config);
    Policy policy = resolve_policy(config, model);
    const int anchor = config.anchor > 0 ? config.anchor : model.m + 1;
    const bool dec = config.decimal;

    json j;
    j["config"] = config_echo(config);
    j["model_hash"] = model_hash(model);
    bool pass = true;

    if (config.command == "validate") {
        ValidationReport rep = validate_model(model);
        json violations = json::array();
        for (const auto& v : rep.violations)
            violations.push_back(json{{"kind", v.kind}, {"witness", v.witness}});
        j["violations"] = violations;
        pass = rep.valid();
    } else if (config.command == "diameter") {
        j["diameter"] = diameter(model.agent);
    } else if (config.command == "decodability") {
        int m = config.decodability_m >= 0 ? config.decodability_m : model.m;
        int n = config.decodability_n >= 0 ? config.decodability_n : model.n;
        auto past = check_past_decodability(model, policy, m, true, 0, config.budget);
        auto fut = check_future_decodability(model, policy, n, true, 0, config.budget);
        j["past"] = decodability_json(past, model);
        j["past"]["m"] = m;
        j["future"] = decodability_json(fut, model);
        j["future"]["n"] = n;
        pass = past.holds && fut.holds;
    } else if (config.command == "identities") {
        json results = json::array();
        for (Objective objective : resolve_objectives(config)) {
            IdentityReport rep =
                verify_identity(model, policy, objective, config.K_max, anchor, config.budget);
            json r;
            r["objective"] = objective_name(objective);
            r["t"] = rep.t;
            r["kmax"] = rep.K_max;
            r["keys_checked"] = rep.keys_checked;
            r["max_discrepancy"] = frac(rep.max_discrepancy, dec);
            r["pass"] = rep.pass();
            json viols = json::array();
            for (const auto& v : rep.violations) {
                viols.push_back(json{{"k", v.k},
                                     {"key_first", v.key.first},
                                     {"key_second", v.key.second},
                                     {"expected", dist_json(v.expected, dec)},
                                     {"actual", dist_json(v.actual, dec)}});
                if (viols.size() >= 16) break;
            }
            if (!viols.empty()) r["violations"] = viols;
            results.push_back(r);
            pass = pass && rep.pass();
        }
        j["identities"] = results;
    } else if (config.command == "decoupling") {
        DecouplingReport rep;
        if (config.violating_policy) {
            // Skew the action preference with the exogenous state: weights
            // 1..A on even xi, reversed on odd xi.
            const int A = model.num_actions();
            const int denom = A * (A + 1) / 2;
            JointPolicy bad = lift(policy, model.num_exo_states());
            for (auto& per_state : bad.probs)
                for (std::size_t x = 0; x < per_state.size(); ++x)
                    for (int a = 0; a < A; ++a)
                        per_state[x][a] = Rat(x % 2 == 0 ? a + 1 : A - a, denom);
            rep = verify_decoupling(model, bad, config.h);
        } else {
            rep = verify_decoupling(model, policy, config.h);
        }
        j["h"] = rep.h;
        j["entries_checked"] = rep.entries_checked;
        j["max_residual"] = frac(rep.max_residual, dec);
        if (rep.witness) {
            const auto& w = *rep.witness;
            j["witness"] = json{{"s", model.state_label(w.s)}, {"xi", w.xi},
                                {"a", model.action_label(w.a)},
                                {"s2", model.state_label(w.s2)}, {"xi2", w.xi2},
                                {"obs", w.obs},
                                {"lhs", frac(w.lhs, dec)}, {"rhs", frac(w.rhs, dec)}};
        }
        pass = rep.pass();
    } else if (config.command == "discover") {
        json results = json::array();
        for (Objective objective : resolve_objectives(config)) {
            Partition found =
                discover_partition(model, policy, objective, config.K_max, anchor, config.budget);
            Partition truth =
                ground_truth_partition(model, policy, objective, anchor, config.budget);
            PartitionComparison cmp = compare_partitions(found, truth);
            json r;
            r["objective"] = objective_name(objective);
            r["classes_found"] = found.class_count;
            r["classes_truth"] = truth.class_count;
            r["isomorphic"] = cmp.isomorphic;
            r["refinement"] = refinement_name(cmp.refinement);
            r["accuracy"] = frac(cmp.accuracy, dec);
            json merged = json::array();
            for (auto [a, b] : cmp.merged_pairs) merged.push_back(json::array({a, b}));
            r["merged_pairs"] = merged;
            json split = json::array();
            for (auto [a, b] : cmp.split_pairs) split.push_back(json::array({a, b}));
            r["split_pairs"] = split;
            results.push_back(r);
            pass = pass && cmp.isomorphic;
        }
        j["discover"] = results;
    } else if (config.command == "dump-ik") {
        IkDump dump = dump_ik_examples(model, config.k_lo, config.k_hi, config.budget);
        j["k_lo"] = config.k_lo;
        j["k_hi"] = config.k_hi;
        j["total"] = dump.total;
        if (!config.out.empty()) {
            std::ofstream out(config.out);
            if (!out) throw std::runtime_error("cannot write dump file: " + config.out);
            out << dump.lines;
            j["out"] = config.out;
        } else {
            j["lines"] = dump.lines;
        }
    } else if (config.command == "simulate") {
        Trajectory traj = simulate(model, policy, config.sim_length, config.seed);
        j["length"] = config.sim_length;
        j["seed"] = config.seed;
        j["dump"] = trajectory_dump(model, traj, config.seed);
    } else {
        throw std::invalid_argument("unknown command: " + config.command);
    }

    j["pass"] = pass;
    Report report;
    report.body = j.dump(2) + "\n";
    report.pass = pass;
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start).count();
    if (!config.out.empty() && config.command != "dump-ik") {
        std::ofstream out(config.out);
        if (!out) throw std::runtime_error("cannot write report file: " + config.out);
        out << report.body;
    }
    return report;
}

}  // namespace iklab
