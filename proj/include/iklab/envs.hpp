#pragma once

#include <set>

#include "iklab/model.hpp"

namespace iklab {

// Eight-state cycle-and-recorder FM-POMDP: s = (sA, sB) with
// sA' = (sA + a) mod 4 for a in {-1, +1}, sB' = a, a periodic exogenous
// counter c' = (c + 1) mod 4, and the state visible only when c = 0
// (BLANK otherwise). m = n = 3, H = 10, uniform factored start.
// State index is 2*sA + (sB == +1); action 0 is "-1", action 1 is "+1".
FmPomdp make_fj_counterexample();

// Same latent dynamics with the state always visible (emission is the
// identity on s). Used for the objectives whose conditioning carries no
// actions and therefore cannot decode the masked construction.
FmPomdp make_fj_counterexample_observed();

// 1-D acceleration-control line: position 0..length-1, velocity in
// {-1, 0, +1}, action = acceleration in {-1, 0, +1}. v' = clip(v + a),
// p' = p + v'; leaving the line clips p and zeroes v. The emission shows
// the position only (BLANK inside curtain cells); velocity is never emitted.
struct NavSpec {
    int length = 5;
    std::set<int> curtains;
    int m = 2;
    int n = 2;
    int horizon = 8;
};

FmPomdp make_navigation(const NavSpec& spec);

inline int nav_state(int position, int velocity) { return position * 3 + (velocity + 1); }
inline int nav_position(AgentStateId s) { return s / 3; }
inline int nav_velocity(AgentStateId s) { return s % 3 - 1; }

// Deterministic cyclic exogenous chain xi' = (xi + 1) mod period.
ExoDynamics make_exo_cycle(int period);

enum class EmissionRule {
    Passthrough,    // keep the base emission, replicated across xi
    MaskNonzero,    // base emission when xi = 0, BLANK otherwise
};

// Replaces the exogenous chain of a model, preserving the factorization.
// MaskNonzero generalizes the counterexample's observation masking.
FmPomdp compose(const FmPomdp& base, const ExoDynamics& exo, EmissionRule rule,
                std::optional<int> m = std::nullopt, std::optional<int> n = std::nullopt);

// Exhaustive multi-step inverse-kinematics listing for deterministic agent
// dynamics: one line per (start state, action sequence of length k), k in
// [k_lo, k_hi], formatted
//   (0, -1)->(0, 1) via a:(-1, 1)
// and sorted by (k, start, end, action sequence).
struct IkDump {
    std::string lines;
    long long total = 0;
};

IkDump dump_ik_examples(const FmPomdp& model, int k_lo, int k_hi, double budget = 1e7);

}  // namespace iklab
