#include "iklab/objective.hpp"

#include <algorithm>

namespace iklab {

std::string objective_name(Objective o) {
    switch (o) {
        case Objective::AH: return "AH";
        case Objective::AH_A: return "AH_A";
        case Objective::FJ: return "FJ";
        case Objective::FJ_A: return "FJ_A";
        case Objective::MIK: return "MIK";
        case Objective::MIK_A: return "MIK_A";
    }
    throw std::invalid_argument("bad objective");
}

Objective objective_from_name(const std::string& name) {
    for (Objective o : all_objectives())
        if (objective_name(o) == name) return o;
    throw std::invalid_argument("unknown objective: " + name);
}

const std::vector<Objective>& all_objectives() {
    static const std::vector<Objective> all = {Objective::AH, Objective::AH_A, Objective::FJ,
                                               Objective::FJ_A, Objective::MIK, Objective::MIK_A};
    return all;
}

ConditioningKey make_key(Objective objective, const FmPomdp& model, const Trajectory& traj, int t,
                         int k) {
    const int H = traj.length();
    if (t < 1 || k < 1 || t + k > H) throw OutOfRange("make_key: need 1 <= t and t+k <= length");
    const bool wa = with_actions(objective);
    ConditioningKey key;
    key.objective = objective;
    key.t = t;
    key.k = k;
    switch (objective) {
        case Objective::AH:
        case Objective::AH_A:
            for (int i = 1; i <= t; ++i) {
                AugObs ao = traj.aug(i);
                key.first.push_back(ao.obs);
                if (wa) key.first.push_back(ao.prev_action);
            }
            for (int i = 1; i <= t + k; ++i) {
                AugObs ao = traj.aug(i);
                key.second.push_back(ao.obs);
                if (wa) key.second.push_back(ao.prev_action);
            }
            break;
        case Objective::FJ:
        case Objective::FJ_A:
            key.first = past_window(traj, t, model.m, wa).payload;
            key.second = past_window(traj, t + k, model.m, wa).payload;
            break;
        case Objective::MIK:
        case Objective::MIK_A:
            if (t + k + model.n > H)
                throw OutOfRange("make_key: MIK needs t + k + n <= length");
            key.first = past_window(traj, t, model.m, wa).payload;
            key.second = future_window(traj, t + k, model.n, wa).payload;
            break;
    }
    return key;
}

std::vector<int> usable_ks(Objective objective, int m, int K_max) {
    std::vector<int> ks;
    switch (objective) {
        case Objective::MIK:
        case Objective::MIK_A:
            for (int k = 1; k <= K_max; ++k) ks.push_back(k);
            break;
        case Objective::FJ:
        case Objective::FJ_A:
            for (int k = std::max(1, m + 1); k <= K_max; ++k) ks.push_back(k);
            break;
        case Objective::AH:
        case Objective::AH_A:
            break;
    }
    return ks;
}

bool has_one_step_reduction(Objective objective, int m, int K_max) {
    switch (objective) {
        case Objective::AH:
            return K_max >= 1;
        case Objective::FJ:
            return m >= 1 && K_max >= 1;  // the k <= m examples refine by s_{t+1}
        default:
            return false;  // AH_A and FJ_A (k <= m) are constant 1; MIK has all ks
    }
}

}  // namespace iklab
