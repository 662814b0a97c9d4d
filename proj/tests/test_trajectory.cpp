#include <cmath>
#include <map>

#include "doctest.h"

#include "iklab/envs.hpp"
#include "iklab/trajectory.hpp"

using namespace iklab;

namespace {

FmPomdp forced_model() {
    // One state, one action, one exo state, one observation: exactly one
    // trajectory of any length.
    FmPomdp model;
    model.agent.next = {{0}};
    model.exo.rows = {{Rat(1)}};
    model.emission.rows = {{{{0, Rat(1)}}}};
    model.num_obs = 1;
    model.block = true;
    model.horizon = 6;
    model.init_agent = {Rat(1)};
    model.init_exo = {Rat(1)};
    return model;
}

}  // namespace

TEST_CASE("a fully forced model has exactly one trajectory of weight 1") {
    FmPomdp model = forced_model();
    auto trajs = enumerate_trajectories(model, uniform_policy(1, 1), 5);
    REQUIRE(trajs.size() == 1);
    CHECK(trajs[0].weight == 1);
    CHECK(trajs[0].length() == 5);
    CHECK(trajs[0].a.size() == 4);
}

TEST_CASE("counterexample length-2 enumeration: 64 paths of weight 1/64") {
    FmPomdp model = make_fj_counterexample();
    Policy pi = uniform_policy(8, 2);
    auto trajs = enumerate_trajectories(model, pi, 2);
    // 8 starts x 4 counters x 2 actions; every other step is deterministic.
    CHECK(trajs.size() == 64);
    for (const auto& t : trajs) CHECK(t.weight == Rat(1, 64));
}

TEST_CASE("trajectory weights always sum to exactly 1") {
    FmPomdp model = make_fj_counterexample();
    Policy pi = uniform_policy(8, 2);
    for (int length : {1, 3, 5}) {
        Rat total = 0;
        for_each_trajectory(model, pi, length, [&](const Trajectory& t) { total += t.weight; });
        CHECK(total == 1);
    }
    FmPomdp nav = make_navigation(NavSpec{});
    Rat total = 0;
    for_each_trajectory(nav, uniform_policy(15, 3), 4,
                        [&](const Trajectory& t) { total += t.weight; });
    CHECK(total == 1);
}

TEST_CASE("enumeration respects the trajectory invariants") {
    FmPomdp model = make_fj_counterexample();
    Policy pi = uniform_policy(8, 2);
    for_each_trajectory(model, pi, 4, [&](const Trajectory& t) {
        for (int i = 0; i + 1 < t.length(); ++i) {
            CHECK(t.s[i + 1] == model.agent.step(t.s[i], t.a[i]));
            CHECK(t.xi[i + 1] == (t.xi[i] + 1) % 4);
        }
        for (int i = 0; i < t.length(); ++i)
            CHECK(t.o[i] == (t.xi[i] == 0 ? t.s[i] : kBlankObs));
    });
}

TEST_CASE("augmented observations carry the previous action") {
    FmPomdp model = forced_model();
    auto trajs = enumerate_trajectories(model, uniform_policy(1, 1), 3);
    const Trajectory& t = trajs[0];
    CHECK(t.aug(1) == AugObs{0, kNoAction});
    CHECK(t.aug(2) == AugObs{0, 0});
}

TEST_CASE("window clamping follows the stated index ranges") {
    FmPomdp model = forced_model();
    auto trajs = enumerate_trajectories(model, uniform_policy(1, 1), 6);
    const Trajectory& t = trajs[0];

    Window w = past_window(t, 1, 3, true);
    CHECK(w.lo == 1);
    CHECK(w.hi == 1);  // max{1, 1-3}..1

    w = past_window(t, 5, 3, true);
    CHECK(w.lo == 2);
    CHECK(w.hi == 5);
    CHECK(w.payload.size() == 8);  // 4 steps x (obs, prev action)

    w = future_window(t, 5, 3, true);
    CHECK(w.lo == 5);
    CHECK(w.hi == 6);  // min{5+3, 6} clamps at the end

    w = future_window(t, 2, 2, false);
    CHECK(w.lo == 2);
    CHECK(w.hi == 4);
    CHECK(w.payload.size() == 3);  // actions stripped
}

TEST_CASE("budget pre-check throws before enumerating") {
    FmPomdp model = make_fj_counterexample();
    Policy pi = uniform_policy(8, 2);
    CHECK(estimate_path_count(model, 10) > 100);
    int visited = 0;
    CHECK_THROWS_AS(
        for_each_trajectory(model, pi, 10, [&](const Trajectory&) { ++visited; }, 100.0),
        BudgetExceeded);
    CHECK(visited == 0);
}

TEST_CASE("simulate is deterministic per seed and respects supports") {
    FmPomdp model = make_fj_counterexample();
    Policy pi = uniform_policy(8, 2);
    Trajectory a = simulate(model, pi, 10, 42);
    Trajectory b = simulate(model, pi, 10, 42);
    CHECK(a.s == b.s);
    CHECK(a.xi == b.xi);
    CHECK(a.o == b.o);
    CHECK(a.a == b.a);
    Trajectory c = simulate(model, pi, 10, 43);
    CHECK((a.s != c.s || a.a != c.a || a.xi != c.xi));

    for (int i = 0; i + 1 < a.length(); ++i)
        CHECK(a.s[i + 1] == model.agent.step(a.s[i], a.a[i]));
    for (int i = 0; i < a.length(); ++i)
        CHECK(a.o[i] == (a.xi[i] == 0 ? a.s[i] : kBlankObs));
}

TEST_CASE("sampled action frequencies match the uniform policy") {
    FmPomdp model = make_fj_counterexample();
    Policy pi = uniform_policy(8, 2);
    const int runs = 1000, steps = 10;
    long long ones = 0, total = 0;
    std::map<int, int> start_counts;
    for (int r = 0; r < runs; ++r) {
        Trajectory t = simulate(model, pi, steps, 1000 + r);
        for (int a : t.a) {
            ones += a;
            ++total;
        }
        ++start_counts[t.s[0]];
    }
    double freq = static_cast<double>(ones) / total;
    CHECK(std::abs(freq - 0.5) < 0.02);  // 9000 draws, ~5 sigma band

    // Chi-square over the uniform start state (8 cells, 1000 draws).
    double chi2 = 0;
    for (int s = 0; s < 8; ++s) {
        double diff = start_counts[s] - runs / 8.0;
        chi2 += diff * diff / (runs / 8.0);
    }
    CHECK(chi2 < 24.3);  // df=7 at p ~ 0.001
}

TEST_CASE("trajectory dump is a stable tab-separated table") {
    FmPomdp model = make_fj_counterexample();
    Policy pi = uniform_policy(8, 2);
    Trajectory t = simulate(model, pi, 4, 9);
    std::string dump = trajectory_dump(model, t, 9);
    CHECK(dump == trajectory_dump(model, simulate(model, pi, 4, 9), 9));
    CHECK(dump.find("# model " + model_hash(model)) != std::string::npos);
    CHECK(dump.find("# seed 9") != std::string::npos);
    CHECK(dump.find('\t') != std::string::npos);
}
