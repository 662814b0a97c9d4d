#include "iklab/envs.hpp"

#include "iklab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace iklab {

namespace {

// action index 0 -> delta -1, index 1 -> delta +1
constexpr int kFjDelta[2] = {-1, +1};

int fj_state(int sA, int delta) { return 2 * sA + (delta > 0 ? 1 : 0); }

FmPomdp make_fj_base() {
    FmPomdp model;
    const int S = 8, A = 2, X = 4;
    model.agent.next.assign(S, std::vector<int>(A));
    for (int sA = 0; sA < 4; ++sA)
        for (int sB = 0; sB < 2; ++sB)
            for (int a = 0; a < A; ++a)
                model.agent.next[fj_state(sA, sB ? 1 : -1)][a] =
                    fj_state(((sA + kFjDelta[a]) % 4 + 4) % 4, kFjDelta[a]);

    model.exo.rows.assign(X, std::vector<Rat>(X, 0));
    for (int c = 0; c < X; ++c) model.exo.rows[c][(c + 1) % X] = 1;

    model.num_obs = S;
    model.m = 3;
    model.n = 3;
    model.horizon = 10;
    model.block = false;
    model.init_agent.assign(S, Rat(1, S));
    model.init_exo.assign(X, Rat(1, X));
    for (int sA = 0; sA < 4; ++sA)
        for (int sB : {-1, 1}) {
            std::ostringstream label;
            label << "(" << sA << ", " << sB << ")";
            model.state_labels.push_back(label.str());
        }
    // state_labels were pushed in (sA, sB) order; reorder to state index order
    {
        std::vector<std::string> labels(S);
        int i = 0;
        for (int sA = 0; sA < 4; ++sA)
            for (int sB : {-1, 1}) labels[fj_state(sA, sB)] = model.state_labels[i++];
        model.state_labels = std::move(labels);
    }
    model.action_labels = {"-1", "1"};
    return model;
}

}  // namespace

FmPomdp make_fj_counterexample() {
    FmPomdp model = make_fj_base();
    model.emission.rows.assign(8, std::vector<std::vector<std::pair<ObsSymbol, Rat>>>(4));
    for (int s = 0; s < 8; ++s)
        for (int c = 0; c < 4; ++c)
            model.emission.rows[s][c] = {{c == 0 ? s : kBlankObs, Rat(1)}};
    return model;
}

FmPomdp make_fj_counterexample_observed() {
    FmPomdp model = make_fj_base();
    model.emission.rows.assign(8, std::vector<std::vector<std::pair<ObsSymbol, Rat>>>(4));
    for (int s = 0; s < 8; ++s)
        for (int c = 0; c < 4; ++c) model.emission.rows[s][c] = {{s, Rat(1)}};
    return model;
}

FmPomdp make_navigation(const NavSpec& spec) {
    if (spec.length < 2) throw std::invalid_argument("navigation: length must be >= 2");
    FmPomdp model;
    const int L = spec.length;
    const int S = L * 3, A = 3;
    model.agent.next.assign(S, std::vector<int>(A));
    for (int p = 0; p < L; ++p)
        for (int v = -1; v <= 1; ++v)
            for (int a = 0; a < A; ++a) {
                int acc = a - 1;
                int v2 = std::clamp(v + acc, -1, 1);
                int p2 = p + v2;
                if (p2 < 0 || p2 >= L) {  // wall collision zeroes velocity
                    p2 = std::clamp(p2, 0, L - 1);
                    v2 = 0;
                }
                model.agent.next[nav_state(p, v)][a] = nav_state(p2, v2);
            }

    model.exo.rows = {{Rat(1)}};
    model.emission.rows.assign(S, std::vector<std::vector<std::pair<ObsSymbol, Rat>>>(1));
    for (int s = 0; s < S; ++s) {
        int p = nav_position(s);
        model.emission.rows[s][0] = {{spec.curtains.count(p) ? kBlankObs : p, Rat(1)}};
    }
    model.num_obs = L;
    model.block = false;  // velocity is never emitted
    model.m = spec.m;
    model.n = spec.n;
    model.horizon = spec.horizon;
    model.init_agent.assign(S, Rat(1, S));
    model.init_exo = {Rat(1)};
    for (int s = 0; s < S; ++s) {
        std::ostringstream label;
        label << "(" << nav_position(s) << ", " << nav_velocity(s) << ")";
        model.state_labels.push_back(label.str());
    }
    model.action_labels = {"-1", "0", "1"};
    return model;
}

ExoDynamics make_exo_cycle(int period) {
    if (period < 1) throw std::invalid_argument("exo cycle: period must be >= 1");
    ExoDynamics exo;
    exo.rows.assign(period, std::vector<Rat>(period, 0));
    for (int c = 0; c < period; ++c) exo.rows[c][(c + 1) % period] = 1;
    return exo;
}

FmPomdp compose(const FmPomdp& base, const ExoDynamics& exo, EmissionRule rule,
                std::optional<int> m, std::optional<int> n) {
    FmPomdp model = base;
    model.exo = exo;
    const int X = exo.num_states();
    model.emission.rows.assign(base.num_agent_states(),
                               std::vector<std::vector<std::pair<ObsSymbol, Rat>>>(X));
    for (int s = 0; s < base.num_agent_states(); ++s) {
        // The base row at xi = 0 is treated as the agent-only observation.
        const auto& agent_row = base.emission.row(s, 0);
        for (int x = 0; x < X; ++x) {
            if (rule == EmissionRule::Passthrough || x == 0)
                model.emission.rows[s][x] = agent_row;
            else
                model.emission.rows[s][x] = {{kBlankObs, Rat(1)}};
        }
    }
    model.block = false;
    model.init_exo.assign(X, Rat(1, X));
    if (m) model.m = *m;
    if (n) model.n = *n;
    return model;
}

IkDump dump_ik_examples(const FmPomdp& model, int k_lo, int k_hi, double budget) {
    if (k_lo < 1 || k_hi < k_lo) throw std::invalid_argument("dump_ik: bad k range");
    const int S = model.num_agent_states();
    const int A = model.num_actions();
    double estimate = 0;
    for (int k = k_lo; k <= k_hi; ++k) estimate += S * std::pow(static_cast<double>(A), k);
    if (estimate > budget) throw BudgetExceeded(estimate);

    IkDump dump;
    std::ostringstream out;
    std::vector<int> seq;
    for (int k = k_lo; k <= k_hi; ++k) {
        // (start, end, action sequence), built per start in lexicographic
        // action order, then sorted by end state.
        std::vector<std::pair<int, std::vector<int>>> group;
        for (int s0 = 0; s0 < S; ++s0) {
            group.clear();
            seq.assign(k, 0);
            while (true) {
                int s = s0;
                for (int a : seq) s = model.agent.step(s, a);
                group.emplace_back(s, seq);
                int i = k - 1;
                while (i >= 0 && seq[i] == A - 1) seq[i--] = 0;
                if (i < 0) break;
                ++seq[i];
            }
            std::sort(group.begin(), group.end());
            for (const auto& [end, actions] : group) {
                out << model.state_label(s0) << "->" << model.state_label(end) << " via a:(";
                for (int i = 0; i < k; ++i) {
                    if (i) out << ", ";
                    out << model.action_label(actions[i]);
                }
                out << ")\n";
                ++dump.total;
            }
        }
    }
    dump.lines = out.str();
    return dump;
}

}  // namespace iklab
