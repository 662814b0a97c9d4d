#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "iklab/model.hpp"

namespace iklab {

// Observation augmented with the previous action; prev_action is kNoAction
// exactly at t = 1.
struct AugObs {
    ObsSymbol obs;
    ActionId prev_action;
    friend bool operator==(const AugObs&, const AugObs&) = default;
    friend auto operator<=>(const AugObs&, const AugObs&) = default;
};

// One realization of length L: states s_1..s_L, xi_1..xi_L, o_1..o_L,
// actions a_1..a_{L-1}. weight is the exact path probability when the
// trajectory came from enumeration, 1 when sampled.
struct Trajectory {
    std::vector<AgentStateId> s;
    std::vector<ExoStateId> xi;
    std::vector<ObsSymbol> o;
    std::vector<ActionId> a;
    Rat weight = 1;

    int length() const { return static_cast<int>(s.size()); }
    AugObs aug(int t) const {  // 1-based
        return AugObs{o[t - 1], t == 1 ? kNoAction : a[t - 2]};
    }
};

enum class WindowKind { Past, Future };

// Clamped window over a trajectory. Past covers max{1, h-m}..h, future
// covers h..min{h+n, H}. The payload is a canonical flat encoding:
// with_actions ? (obs, prev_action) per step : obs per step.
struct Window {
    WindowKind kind;
    int anchor = 0;
    int lo = 0, hi = 0;  // inclusive 1-based index range
    std::vector<int> payload;

    friend bool operator==(const Window&, const Window&) = default;
};

Window past_window(const Trajectory& traj, int h, int m, bool with_actions);
Window future_window(const Trajectory& traj, int h, int n, bool with_actions);

struct BudgetExceeded : std::runtime_error {
    double estimated_count;
    explicit BudgetExceeded(double est)
        : std::runtime_error("enumeration budget exceeded; estimated " + std::to_string(est) +
                             " weighted paths"),
          estimated_count(est) {}
};

inline constexpr double kDefaultBudget = 1e7;

// Upper bound on the number of positive-weight paths of the given length.
double estimate_path_count(const FmPomdp& model, int length);

// Depth-first enumeration of every positive-weight trajectory, in
// lexicographic order of (s_1, xi_1, o_1, a_1, xi_2, o_2, a_2, ...).
// Throws BudgetExceeded up front if the size estimate is over budget.
void for_each_trajectory(const FmPomdp& model, const Policy& policy, int length,
                         const std::function<void(const Trajectory&)>& visit,
                         double budget = kDefaultBudget);

// Same traversal for a possibly exogenous-dependent policy (decoupling tests).
void for_each_trajectory_joint(const FmPomdp& model, const JointPolicy& policy, int length,
                               const std::function<void(const Trajectory&)>& visit,
                               double budget = kDefaultBudget);

// Materializing wrapper for small instances.
std::vector<Trajectory> enumerate_trajectories(const FmPomdp& model, const Policy& policy,
                                               int length, double budget = kDefaultBudget);

// Seeded sampling; identical (model, policy, length, seed) reproduces the
// trajectory bit-for-bit on any platform.
Trajectory simulate(const FmPomdp& model, const Policy& policy, int length, std::uint64_t seed);

// Dump format: header lines with model hash and seed, then one step per
// line, tab-separated "t s xi o a" (a empty on the last step).
std::string trajectory_dump(const FmPomdp& model, const Trajectory& traj, std::uint64_t seed);

}  // namespace iklab
