#include <sstream>

#include "doctest.h"

#include "iklab/envs.hpp"
#include "iklab/model.hpp"

using namespace iklab;

TEST_CASE("counterexample structure") {
    FmPomdp model = make_fj_counterexample();
    CHECK(model.num_agent_states() == 8);
    CHECK(model.num_actions() == 2);
    CHECK(model.num_exo_states() == 4);
    CHECK(model.m == 3);
    CHECK(model.n == 3);
    CHECK(model.horizon == 10);
    CHECK_FALSE(model.block);
    CHECK(diameter(model.agent) == 3);
    CHECK(validate_model(model).valid());

    // (0, -1) --+1--> (1, +1); (0, -1) ---1--> (3, -1).
    CHECK(model.state_label(0) == "(0, -1)");
    CHECK(model.agent.step(0, 1) == 2 * 1 + 1);
    CHECK(model.agent.step(0, 0) == 2 * 3 + 0);
    CHECK(model.state_label(2 * 1 + 1) == "(1, 1)");
    CHECK(model.action_label(0) == "-1");
    CHECK(model.action_label(1) == "1");

    // Uniform factored start.
    for (const auto& p : model.init_agent) CHECK(p == Rat(1, 8));
    for (const auto& p : model.init_exo) CHECK(p == Rat(1, 4));

    // Emission: visible exactly when the counter is 0.
    CHECK(model.emission.row(5, 0) ==
          std::vector<std::pair<ObsSymbol, Rat>>{{5, Rat(1)}});
    CHECK(model.emission.row(5, 2) ==
          std::vector<std::pair<ObsSymbol, Rat>>{{kBlankObs, Rat(1)}});
}

TEST_CASE("observed variant differs only in the emission") {
    FmPomdp masked = make_fj_counterexample();
    FmPomdp observed = make_fj_counterexample_observed();
    CHECK(observed.agent.next == masked.agent.next);
    CHECK(observed.exo.rows == masked.exo.rows);
    CHECK(observed.horizon == masked.horizon);
    for (int s = 0; s < 8; ++s)
        for (int c = 0; c < 4; ++c)
            CHECK(observed.emission.row(s, c) ==
                  std::vector<std::pair<ObsSymbol, Rat>>{{s, Rat(1)}});
}

TEST_CASE("dump-ik totals follow |S| * sum of |A|^k") {
    FmPomdp model = make_fj_counterexample();
    IkDump k1 = dump_ik_examples(model, 1, 1);
    CHECK(k1.total == 16);
    IkDump all = dump_ik_examples(model, 1, 10);
    long long expect = 0;
    for (int k = 1; k <= 10; ++k) expect += 8LL << k;
    CHECK(all.total == expect);
    CHECK(all.total == 16368);
    // One line per example.
    long long lines = 0;
    for (char c : all.lines)
        if (c == '\n') ++lines;
    CHECK(lines == all.total);
}

TEST_CASE("dump-ik k=2 block for start (0, -1) matches the known listing") {
    FmPomdp model = make_fj_counterexample();
    IkDump dump = dump_ik_examples(model, 2, 2);
    std::istringstream in(dump.lines);
    std::vector<std::string> got;
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("(0, -1)", 0) == 0) got.push_back(line);
    std::vector<std::string> expect = {
        "(0, -1)->(0, -1) via a:(1, -1)",
        "(0, -1)->(0, 1) via a:(-1, 1)",
        "(0, -1)->(2, -1) via a:(-1, -1)",
        "(0, -1)->(2, 1) via a:(1, 1)",
    };
    CHECK(got == expect);
}

TEST_CASE("dump-ik k=4 groups share a uniform first-action split") {
    // For k = 4, each (start, end) group of 4 sequences has exactly two
    // sequences per first action.
    FmPomdp model = make_fj_counterexample();
    IkDump dump = dump_ik_examples(model, 4, 4);
    std::istringstream in(dump.lines);
    std::map<std::string, std::pair<int, int>> first_actions;  // header -> (-1 count, +1 count)
    std::string line;
    while (std::getline(in, line)) {
        auto via = line.find(" via a:(");
        std::string header = line.substr(0, via);
        bool plus = line[via + 8] != '-';
        if (plus)
            ++first_actions[header].second;
        else
            ++first_actions[header].first;
    }
    CHECK(first_actions.size() == 32);  // 8 starts x 4 reachable ends
    for (const auto& [header, counts] : first_actions) {
        CHECK(counts.first == 2);
        CHECK(counts.second == 2);
    }
}

TEST_CASE("navigation dynamics: clipping and wall collisions") {
    NavSpec spec;
    FmPomdp nav = make_navigation(spec);
    CHECK(nav.num_agent_states() == 15);
    CHECK(nav.num_actions() == 3);
    CHECK(nav.num_exo_states() == 1);
    CHECK(nav.m == 2);
    CHECK(nav.n == 2);
    CHECK(nav.horizon == 8);
    CHECK(validate_model(nav).valid());

    // Action indices: 0 -> accel -1, 1 -> accel 0, 2 -> accel +1.
    CHECK(nav.agent.step(nav_state(2, 0), 2) == nav_state(3, 1));
    CHECK(nav.agent.step(nav_state(2, 1), 2) == nav_state(3, 1));  // velocity saturates
    CHECK(nav.agent.step(nav_state(2, 1), 0) == nav_state(2, 0));
    // Hitting the right wall zeroes the velocity.
    CHECK(nav.agent.step(nav_state(4, 1), 2) == nav_state(4, 0));
    CHECK(nav.agent.step(nav_state(0, -1), 0) == nav_state(0, 0));
    // Emission shows the position only.
    CHECK(nav.emission.row(nav_state(3, -1), 0) ==
          std::vector<std::pair<ObsSymbol, Rat>>{{3, Rat(1)}});
}

TEST_CASE("navigation curtains blank out their cells") {
    NavSpec spec;
    spec.curtains = {2};
    FmPomdp nav = make_navigation(spec);
    CHECK(validate_model(nav).valid());
    for (int v = -1; v <= 1; ++v)
        CHECK(nav.emission.row(nav_state(2, v), 0) ==
              std::vector<std::pair<ObsSymbol, Rat>>{{kBlankObs, Rat(1)}});
    CHECK(nav.emission.row(nav_state(1, 0), 0) ==
          std::vector<std::pair<ObsSymbol, Rat>>{{1, Rat(1)}});
}

TEST_CASE("exo cycles and composition validate") {
    ExoDynamics cyc = make_exo_cycle(3);
    CHECK(cyc.num_states() == 3);
    for (int c = 0; c < 3; ++c) CHECK(cyc.rows[c][(c + 1) % 3] == 1);
    CHECK_THROWS_AS(make_exo_cycle(0), std::invalid_argument);

    FmPomdp base = make_fj_counterexample_observed();
    FmPomdp composed = compose(base, make_exo_cycle(3), EmissionRule::Passthrough);
    CHECK(composed.num_exo_states() == 3);
    CHECK(validate_model(composed).valid());
    CHECK(composed.agent.next == base.agent.next);

    // Period-1 passthrough composition keeps a trivial exogenous chain.
    FmPomdp trivial = compose(base, make_exo_cycle(1), EmissionRule::Passthrough);
    CHECK(trivial.num_exo_states() == 1);
    CHECK(validate_model(trivial).valid());

    // MaskNonzero reproduces the counterexample's masking pattern.
    FmPomdp masked = compose(base, make_exo_cycle(4), EmissionRule::MaskNonzero);
    CHECK(validate_model(masked).valid());
    CHECK(masked.emission.row(5, 0) == base.emission.row(5, 0));
    CHECK(masked.emission.row(5, 1) ==
          std::vector<std::pair<ObsSymbol, Rat>>{{kBlankObs, Rat(1)}});
    CHECK(model_hash(masked) == model_hash(make_fj_counterexample()));
}
