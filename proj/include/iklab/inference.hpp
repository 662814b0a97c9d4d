#pragma once

#include <map>
#include <optional>

#include "iklab/objective.hpp"

namespace iklab {

struct AssumptionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense exact action distribution.
using ActionDist = std::vector<Rat>;

// Exact multi-step inverse of the agent-centric chain. The exogenous part
// cancels, so everything here is a dynamic program over S alone.
struct LatentInverse {
    int K_max = 0;
    // kernel[k-1][s][s'] = P_pi(s_{t+k} = s' | s_t = s)
    std::vector<std::vector<std::vector<Rat>>> kernel;
    // inverse[k-1][s][s'] = P_pi(a_t | s_t = s, s_{t+k} = s'); empty vector
    // when the (s, s', k) triple is unreachable.
    std::vector<std::vector<std::vector<ActionDist>>> inverse;

    const ActionDist& dist(AgentStateId s, AgentStateId s2, int k) const {
        const auto& d = inverse.at(k - 1).at(s).at(s2);
        if (d.empty()) throw std::out_of_range("latent_inverse: unreachable (s, s', k) triple");
        return d;
    }
    bool reachable(AgentStateId s, AgentStateId s2, int k) const {
        return kernel.at(k - 1).at(s).at(s2) > 0;
    }
    friend bool operator==(const LatentInverse&, const LatentInverse&) = default;
};

LatentInverse latent_inverse(const FmPomdp& model, const Policy& policy, int K_max);

// Exact Bayes-optimal classifier P_pi(a_t | key) for every reachable key,
// computed by total trajectory enumeration. Each entry also carries the
// key's total probability mass; zero-mass keys are absent.
struct KeyedActionDist {
    Rat mass;
    ActionDist dist;
};
using ConditionalActionDist = std::map<ConditioningKey, KeyedActionDist>;

ConditionalActionDist bayes_classifier(const FmPomdp& model, const Policy& policy,
                                       Objective objective, int t, int k,
                                       double budget = kDefaultBudget);

// One exact-equality comparison between the enumerated Bayes classifier and
// the closed form claimed for the objective.
struct IdentityViolation {
    int k;
    ConditioningKey key;
    ActionDist expected, actual;
};

struct IdentityReport {
    Objective objective;
    int t = 0, K_max = 0;
    int keys_checked = 0;
    Rat max_discrepancy = 0;
    std::vector<IdentityViolation> violations;
    bool pass() const { return violations.empty() && max_discrepancy == 0; }
};

// Compares bayes_classifier against the claimed closed form for every
// reachable key and k <= K_max:
//   MIK, MIK_A, and FJ/FJ_A with k > m   ->  P_pi(a_t | s_t, s_{t+k})
//   AH, and FJ with k <= m               ->  P_pi(a_t | s_t, s_{t+1})
//   AH_A, and FJ_A with k <= m           ->  point mass on the conditioned a_t
// Ground-truth states are read off the enumerated latents; if two
// trajectories share a key but disagree on the states the closed form needs,
// the objective's decodability premise is broken and AssumptionViolated is
// thrown.
IdentityReport verify_identity(const FmPomdp& model, const Policy& policy, Objective objective,
                               int K_max, int t, double budget = kDefaultBudget);

// Decoupling check: with a factored start and an endogenous policy, the
// joint h-step latent distribution factors into agent and exogenous parts.
struct DecouplingWitness {
    AgentStateId s;
    ExoStateId xi;
    ActionId a;
    AgentStateId s2;
    ExoStateId xi2;
    ObsSymbol obs;
    Rat lhs, rhs;
};

struct DecouplingReport {
    int h = 0;
    int entries_checked = 0;
    Rat max_residual = 0;
    std::optional<DecouplingWitness> witness;  // largest-residual entry when nonzero
    bool pass() const { return max_residual == 0; }
};

DecouplingReport verify_decoupling(const FmPomdp& model, const JointPolicy& policy, int h);

inline DecouplingReport verify_decoupling(const FmPomdp& model, const Policy& policy, int h) {
    return verify_decoupling(model, lift(policy, model.num_exo_states()), h);
}

}  // namespace iklab
