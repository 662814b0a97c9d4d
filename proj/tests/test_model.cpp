#include "doctest.h"

#include "iklab/envs.hpp"
#include "iklab/model.hpp"

using namespace iklab;

namespace {

// Two-state, two-action toy with a single exogenous state and identity-ish
// emission; fully valid.
FmPomdp toy_model() {
    FmPomdp model;
    model.agent.next = {{0, 1}, {1, 0}};
    model.exo.rows = {{Rat(1)}};
    model.emission.rows = {{{{0, Rat(1)}}}, {{{1, Rat(1)}}}};
    model.num_obs = 2;
    model.block = true;
    model.m = 0;
    model.n = 0;
    model.horizon = 4;
    model.init_agent = {Rat(1, 2), Rat(1, 2)};
    model.init_exo = {Rat(1)};
    return model;
}

}  // namespace

TEST_CASE("validate accepts the builtin models") {
    CHECK(validate_model(toy_model()).valid());
    CHECK(validate_model(make_fj_counterexample()).valid());
    CHECK(validate_model(make_fj_counterexample_observed()).valid());
    CHECK(validate_model(make_navigation(NavSpec{})).valid());
}

TEST_CASE("validate reports a sub-stochastic emission row with a witness") {
    FmPomdp model = toy_model();
    model.emission.rows[0][0] = {{0, Rat(9, 10)}};  // sums to 9/10
    ValidationReport rep = validate_model(model);
    REQUIRE_FALSE(rep.valid());
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.kind == "emission-row-sum" && v.witness.find("9/10") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("validate reports exogenous row and transition range defects") {
    FmPomdp model = toy_model();
    model.exo.rows = {{Rat(1, 2)}};
    ValidationReport rep = validate_model(model);
    REQUIRE_FALSE(rep.valid());
    CHECK(rep.violations[0].kind == "exo-row-sum");

    model = toy_model();
    model.agent.next[1][1] = 5;
    rep = validate_model(model);
    REQUIRE_FALSE(rep.valid());
    CHECK(rep.violations[0].kind == "agent-out-of-range");
}

TEST_CASE("validate enforces the block property only when flagged") {
    FmPomdp model = toy_model();
    model.emission.rows[1][0] = {{0, Rat(1)}};  // same symbol as state 0
    CHECK_FALSE(validate_model(model).valid());
    model.block = false;
    CHECK(validate_model(model).valid());
}

TEST_CASE("validate_policy flags a non-distribution row") {
    FmPomdp model = toy_model();
    Policy p = uniform_policy(2, 2);
    CHECK(validate_policy(model, p).valid());
    p.probs[1] = {Rat(1, 3), Rat(1, 3)};
    CHECK_FALSE(validate_policy(model, p).valid());
}

TEST_CASE("diameter on known graphs") {
    AgentDynamics single;
    single.next = {{0}};
    CHECK(diameter(single) == 0);

    // Directed 4-cycle with a self-loop action.
    AgentDynamics cycle;
    cycle.next = {{1, 0}, {2, 1}, {3, 2}, {0, 3}};
    CHECK(diameter(cycle) == 3);

    CHECK(diameter(make_fj_counterexample().agent) == 3);
}

TEST_CASE("diameter throws Unreachable when some pair has no path") {
    AgentDynamics stuck;
    stuck.next = {{0}, {0}};  // state 1 unreachable from 0
    CHECK_THROWS_AS(diameter(stuck), Unreachable);
}

TEST_CASE("diameter is invariant under state relabeling") {
    AgentDynamics base = make_fj_counterexample().agent;
    const int S = base.num_states();
    // Apply the permutation s -> (3s + 1) mod 8 (a bijection on 0..7).
    std::vector<int> perm(S);
    for (int s = 0; s < S; ++s) perm[s] = (3 * s + 1) % S;
    AgentDynamics relabeled;
    relabeled.next.assign(S, std::vector<int>(base.num_actions()));
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < base.num_actions(); ++a)
            relabeled.next[perm[s]][a] = perm[base.next[s][a]];
    CHECK(diameter(relabeled) == diameter(base));
}

TEST_CASE("reachable_latents tracks the factored support") {
    FmPomdp model = make_fj_counterexample();
    Policy pi = uniform_policy(8, 2);
    auto t1 = reachable_latents(model, pi, 1);
    CHECK(t1.size() == 32);  // 8 states x 4 counters, uniform start
    auto t2 = reachable_latents(model, pi, 2);
    CHECK(t2.size() == 32);  // cycle advances, support stays full
    CHECK_THROWS_AS(reachable_latents(model, pi, 0), std::out_of_range);
    CHECK_THROWS_AS(reachable_latents(model, pi, 11), std::out_of_range);
}

TEST_CASE("reachable_latents respects restricted starts") {
    FmPomdp model = make_fj_counterexample();
    model.init_agent.assign(8, 0);
    model.init_agent[0] = 1;  // (0, -1)
    model.init_exo.assign(4, 0);
    model.init_exo[0] = 1;
    Policy pi = uniform_policy(8, 2);
    CHECK(reachable_latents(model, pi, 1) ==
          std::set<std::pair<AgentStateId, ExoStateId>>{{0, 0}});
    // One step: sA in {1, 3}, sB = taken action, counter = 1.
    CHECK(reachable_latents(model, pi, 2) ==
          std::set<std::pair<AgentStateId, ExoStateId>>{{2 * 1 + 1, 1}, {2 * 3 + 0, 1}});
}

TEST_CASE("model JSON round-trip preserves everything the hash sees") {
    for (const FmPomdp& model : {make_fj_counterexample(), make_navigation(NavSpec{})}) {
        FmPomdp back = model_from_json(model_to_json(model));
        CHECK(model_to_json(back) == model_to_json(model));
        CHECK(model_hash(back) == model_hash(model));
    }
}

TEST_CASE("model hash is stable and content-sensitive") {
    FmPomdp model = make_fj_counterexample();
    std::string h = model_hash(model);
    CHECK(h.size() == 16);
    CHECK(model_hash(make_fj_counterexample()) == h);
    model.horizon = 11;
    CHECK(model_hash(model) != h);
}

TEST_CASE("model file save/load round-trip") {
    FmPomdp model = make_navigation(NavSpec{});
    save_model_file(model, "/tmp/iklab_test_model.json");
    FmPomdp back = load_model_file("/tmp/iklab_test_model.json");
    CHECK(model_hash(back) == model_hash(model));
}
