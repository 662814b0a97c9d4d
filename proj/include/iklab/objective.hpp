#pragma once

#include <string>
#include <vector>

#include "iklab/trajectory.hpp"

namespace iklab {

// The six conditioning-key constructors. The _A variants condition on
// action-augmented observations.
enum class Objective { AH, AH_A, FJ, FJ_A, MIK, MIK_A };

constexpr bool with_actions(Objective o) {
    return o == Objective::AH_A || o == Objective::FJ_A || o == Objective::MIK_A;
}

std::string objective_name(Objective o);
Objective objective_from_name(const std::string& name);
const std::vector<Objective>& all_objectives();

struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Canonical conditioning key. Equal keys carry equal conditioning
// information; comparison is lexicographic over (first, second).
struct ConditioningKey {
    Objective objective;
    int t = 0, k = 0;
    std::vector<int> first;
    std::vector<int> second;

    friend bool operator==(const ConditioningKey& a, const ConditioningKey& b) {
        return a.first == b.first && a.second == b.second;
    }
    friend bool operator<(const ConditioningKey& a, const ConditioningKey& b) {
        return a.first != b.first ? a.first < b.first : a.second < b.second;
    }
};

// Builds the key for one (trajectory, t, k) per the objective:
//   AH    (o_{1:t}, o_{1:t+k})            AH_A  augmented full prefixes
//   FJ    (past(t,m), past(t+k,m))        FJ_A  augmented past windows
//   MIK   (past(t,m), future(t+k,n))      MIK_A augmented windows
// m and n are taken from the model.
ConditioningKey make_key(Objective objective, const FmPomdp& model, const Trajectory& traj, int t,
                         int k);

// The k values whose Bayes-optimal classifier is the genuine multi-step
// inverse P(a_t | s_t, s_{t+k}):
//   MIK/MIK_A -> {1..K_max};  FJ/FJ_A -> {k : m < k <= K_max};
//   AH/AH_A   -> none (AH collapses to the one-step form, AH_A to constant 1).
std::vector<int> usable_ks(Objective objective, int m, int K_max);

// Whether the objective's k <= m (or all-k, for AH) examples collapse to the
// one-step inverse P(a_t | s_t, s_{t+1}).
bool has_one_step_reduction(Objective objective, int m, int K_max);

}  // namespace iklab
