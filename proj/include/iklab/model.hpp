#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iklab/rational.hpp"

namespace iklab {

// Alphabets are dense integer ranges. Observation symbols additionally admit
// the reserved BLANK sentinel, which never collides with a content symbol.
using ActionId = int;
using AgentStateId = int;
using ExoStateId = int;
using ObsSymbol = int;

inline constexpr ObsSymbol kBlankObs = -1;
// Placeholder for the missing previous action at t = 1.
inline constexpr ActionId kNoAction = -1;

// Deterministic agent-centric dynamics: next[s][a] is the unique successor.
struct AgentDynamics {
    std::vector<std::vector<AgentStateId>> next;

    int num_states() const { return static_cast<int>(next.size()); }
    int num_actions() const { return next.empty() ? 0 : static_cast<int>(next[0].size()); }
    AgentStateId step(AgentStateId s, ActionId a) const { return next[s][a]; }
};

// Action-independent exogenous chain, row-stochastic.
struct ExoDynamics {
    std::vector<std::vector<Rat>> rows;

    int num_states() const { return static_cast<int>(rows.size()); }
};

// Emission q(o | s, xi). Each row is kept sorted by observation symbol.
struct Emission {
    // row(s, xi) = list of (obs, prob), prob > 0
    std::vector<std::vector<std::vector<std::pair<ObsSymbol, Rat>>>> rows;

    const std::vector<std::pair<ObsSymbol, Rat>>& row(AgentStateId s, ExoStateId x) const {
        return rows[s][x];
    }
};

// Endogenous policy: depends on the agent-centric state only.
struct Policy {
    std::vector<std::vector<Rat>> probs;  // [s][a]

    const Rat& prob(AgentStateId s, ActionId a) const { return probs[s][a]; }
};

inline Policy uniform_policy(int num_states, int num_actions) {
    Policy p;
    p.probs.assign(num_states, std::vector<Rat>(num_actions, Rat(1, num_actions)));
    return p;
}

// Policy allowed to depend on the exogenous state. Only used to construct
// decoupling-lemma violations; everything else takes an endogenous Policy.
struct JointPolicy {
    std::vector<std::vector<std::vector<Rat>>> probs;  // [s][xi][a]

    const Rat& prob(AgentStateId s, ExoStateId x, ActionId a) const { return probs[s][x][a]; }
};

inline JointPolicy lift(const Policy& p, int num_exo) {
    JointPolicy j;
    j.probs.reserve(p.probs.size());
    for (const auto& row : p.probs)
        j.probs.push_back(std::vector<std::vector<Rat>>(num_exo, row));
    return j;
}

struct FmPomdp {
    AgentDynamics agent;
    ExoDynamics exo;
    Emission emission;
    int num_obs = 0;  // content symbols are 0..num_obs-1; kBlankObs is extra
    bool block = true;
    int m = 0;        // past memory length
    int n = 0;        // future memory length
    int horizon = 1;  // H
    std::vector<Rat> init_agent;  // mu_s
    std::vector<Rat> init_exo;    // mu_xi
    std::vector<std::string> state_labels;   // optional, for dumps
    std::vector<std::string> action_labels;  // optional, for dumps

    int num_agent_states() const { return agent.num_states(); }
    int num_actions() const { return agent.num_actions(); }
    int num_exo_states() const { return exo.num_states(); }

    std::string action_label(ActionId a) const {
        return action_labels.empty() ? std::to_string(a) : action_labels[a];
    }
    std::string state_label(AgentStateId s) const {
        return state_labels.empty() ? std::to_string(s) : state_labels[s];
    }
};

struct Violation {
    std::string kind;     // e.g. "exo-row-sum", "block", "init-not-distribution"
    std::string witness;  // human-readable description of the offending entry
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
};

// Structural validation. Never throws: every broken invariant is reported
// with a concrete witness.
ValidationReport validate_model(const FmPomdp& model);
ValidationReport validate_policy(const FmPomdp& model, const Policy& policy);

struct Unreachable : std::runtime_error {
    AgentStateId from, to;
    Unreachable(AgentStateId f, AgentStateId t)
        : std::runtime_error("no action path from state " + std::to_string(f) + " to state " +
                             std::to_string(t)),
          from(f), to(t) {}
};

// Max over ordered pairs of shortest action-path length (all-pairs BFS).
// Throws Unreachable if some ordered pair has no path.
int diameter(const AgentDynamics& agent);

// Exact support of the time-t latent marginal under mu and pi, 1 <= t <= H.
std::set<std::pair<AgentStateId, ExoStateId>> reachable_latents(const FmPomdp& model,
                                                                const Policy& policy, int t);

// Interchange format (JSON with "p/q" fraction strings).
std::string model_to_json(const FmPomdp& model);
FmPomdp model_from_json(const std::string& text);
FmPomdp load_model_file(const std::string& path);
void save_model_file(const FmPomdp& model, const std::string& path);

// Stable content hash of the canonical JSON form.
std::string model_hash(const FmPomdp& model);

}  // namespace iklab
