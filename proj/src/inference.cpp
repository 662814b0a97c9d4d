#include "iklab/inference.hpp"

#include <algorithm>
#include <sstream>

namespace iklab {

LatentInverse latent_inverse(const FmPomdp& model, const Policy& policy, int K_max) {
    if (K_max < 1) throw std::out_of_range("latent_inverse: K_max must be >= 1");
    const int S = model.num_agent_states();
    const int A = model.num_actions();

    // One-step kernel of the policy-induced agent chain.
    std::vector<std::vector<Rat>> step(S, std::vector<Rat>(S, 0));
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) step[s][model.agent.step(s, a)] += policy.prob(s, a);

    LatentInverse li;
    li.K_max = K_max;
    li.kernel.push_back(step);
    for (int k = 2; k <= K_max; ++k) {
        std::vector<std::vector<Rat>> next(S, std::vector<Rat>(S, 0));
        const auto& prev = li.kernel.back();
        for (int s = 0; s < S; ++s)
            for (int mid = 0; mid < S; ++mid) {
                if (prev[s][mid] == 0) continue;
                for (int s2 = 0; s2 < S; ++s2)
                    if (step[mid][s2] > 0) next[s][s2] += prev[s][mid] * step[mid][s2];
            }
        li.kernel.push_back(std::move(next));
    }

    // Bayes ratio: P(a | s, s', k) = pi(a|s) P^{k-1}(s' | T(s,a)) / P^k(s' | s).
    li.inverse.resize(K_max);
    for (int k = 1; k <= K_max; ++k) {
        auto& inv = li.inverse[k - 1];
        inv.assign(S, std::vector<ActionDist>(S));
        for (int s = 0; s < S; ++s) {
            for (int s2 = 0; s2 < S; ++s2) {
                if (li.kernel[k - 1][s][s2] == 0) continue;
                ActionDist d(A, 0);
                for (int a = 0; a < A; ++a) {
                    if (policy.prob(s, a) == 0) continue;
                    Rat tail = k == 1 ? Rat(model.agent.step(s, a) == s2 ? 1 : 0)
                                      : li.kernel[k - 2][model.agent.step(s, a)][s2];
                    d[a] = policy.prob(s, a) * tail / li.kernel[k - 1][s][s2];
                }
                inv[s][s2] = std::move(d);
            }
        }
    }
    return li;
}

namespace {

struct KeyStats {
    Rat mass = 0;
    std::vector<Rat> action_mass;
    // Ground-truth latents of the contributing trajectories; -1 until seen,
    // -2 after a disagreement.
    int s_t = -1, s_next = -1, s_ref = -1, a_t = -1;

    static void fold(int& slot, int value) {
        if (slot == -1) slot = value;
        else if (slot != value) slot = -2;
    }
};

std::map<ConditioningKey, KeyStats> aggregate_keys(const FmPomdp& model, const Policy& policy,
                                                   Objective objective, int t, int k, int length,
                                                   double budget) {
    std::map<ConditioningKey, KeyStats> stats;
    const int A = model.num_actions();
    for_each_trajectory(
        model, policy, length,
        [&](const Trajectory& traj) {
            ConditioningKey key = make_key(objective, model, traj, t, k);
            KeyStats& entry = stats[key];
            if (entry.action_mass.empty()) entry.action_mass.assign(A, 0);
            entry.mass += traj.weight;
            entry.action_mass[traj.a[t - 1]] += traj.weight;
            KeyStats::fold(entry.s_t, traj.s[t - 1]);
            KeyStats::fold(entry.s_next, traj.s[t]);
            KeyStats::fold(entry.s_ref, traj.s[t + k - 1]);
            KeyStats::fold(entry.a_t, traj.a[t - 1]);
        },
        budget);
    return stats;
}

int required_length(Objective objective, const FmPomdp& model, int t, int k) {
    int len = t + k;
    if (objective == Objective::MIK || objective == Objective::MIK_A) len += model.n;
    return len;
}

ActionDist normalize(const KeyStats& st) {
    ActionDist d(st.action_mass.size(), 0);
    for (std::size_t a = 0; a < d.size(); ++a) d[a] = st.action_mass[a] / st.mass;
    return d;
}

Rat dist_discrepancy(const ActionDist& x, const ActionDist& y) {
    Rat worst = 0;
    for (std::size_t a = 0; a < x.size(); ++a) worst = std::max(worst, Rat(abs(x[a] - y[a])));
    return worst;
}

}  // namespace

ConditionalActionDist bayes_classifier(const FmPomdp& model, const Policy& policy,
                                       Objective objective, int t, int k, double budget) {
    int length = required_length(objective, model, t, k);
    if (length > model.horizon) throw OutOfRange("bayes_classifier: t + k (+ n) exceeds horizon");
    ConditionalActionDist out;
    for (auto& [key, st] : aggregate_keys(model, policy, objective, t, k, length, budget))
        out.emplace(key, KeyedActionDist{st.mass, normalize(st)});
    return out;
}

IdentityReport verify_identity(const FmPomdp& model, const Policy& policy, Objective objective,
                               int K_max, int t, double budget) {
    IdentityReport report;
    report.objective = objective;
    report.t = t;
    report.K_max = K_max;
    if (required_length(objective, model, t, K_max) > model.horizon)
        throw OutOfRange("verify_identity: t + K_max (+ n) exceeds horizon");

    LatentInverse li = latent_inverse(model, policy, std::max(1, K_max));

    for (int k = 1; k <= K_max; ++k) {
        int length = required_length(objective, model, t, k);
        auto stats = aggregate_keys(model, policy, objective, t, k, length, budget);
        for (auto& [key, st] : stats) {
            const bool constant_form =
                objective == Objective::AH_A || (objective == Objective::FJ_A && k <= model.m);
            const bool one_step_form =
                objective == Objective::AH || (objective == Objective::FJ && k <= model.m);

            ActionDist expected;
            if (constant_form) {
                if (st.a_t < 0)
                    throw AssumptionViolated(
                        "verify_identity: key mixes distinct conditioned actions under " +
                        objective_name(objective));
                expected.assign(model.num_actions(), 0);
                expected[st.a_t] = 1;
            } else {
                int ref = one_step_form ? st.s_next : st.s_ref;
                if (st.s_t < 0 || ref < 0) {
                    std::ostringstream msg;
                    msg << "verify_identity: decodability premise broken for "
                        << objective_name(objective) << " at t=" << t << " k=" << k
                        << " (key mixes distinct latent states)";
                    throw AssumptionViolated(msg.str());
                }
                expected = li.dist(st.s_t, ref, one_step_form ? 1 : k);
            }

            ActionDist actual = normalize(st);
            Rat disc = dist_discrepancy(expected, actual);
            report.max_discrepancy = std::max(report.max_discrepancy, disc);
            ++report.keys_checked;
            if (disc != 0 && report.violations.size() < 256)
                report.violations.push_back({k, key, expected, actual});
        }
    }
    return report;
}

DecouplingReport verify_decoupling(const FmPomdp& model, const JointPolicy& policy, int h) {
    if (h < 1) throw std::out_of_range("verify_decoupling: h must be >= 1");
    const int S = model.num_agent_states();
    const int X = model.num_exo_states();
    const int A = model.num_actions();
    DecouplingReport report;
    report.h = h;

    // h-step exogenous kernel.
    std::vector<std::vector<Rat>> exo_h(X, std::vector<Rat>(X, 0));
    for (int x = 0; x < X; ++x) exo_h[x][x] = 1;
    for (int step = 0; step < h; ++step) {
        std::vector<std::vector<Rat>> next(X, std::vector<Rat>(X, 0));
        for (int x = 0; x < X; ++x)
            for (int mid = 0; mid < X; ++mid) {
                if (exo_h[x][mid] == 0) continue;
                for (int x2 = 0; x2 < X; ++x2) next[x][x2] += exo_h[x][mid] * model.exo.rows[mid][x2];
            }
        exo_h = std::move(next);
    }

    for (int s = 0; s < S; ++s) {
        if (model.init_agent[s] == 0) continue;
        for (int a = 0; a < A; ++a) {
            // Joint h-step latent distribution given (z_1 = (s, x), a_1 = a)
            // for every start x, with steps 2..h following the (possibly
            // joint) policy.
            std::vector<std::vector<std::vector<Rat>>> joint_by_x;
            std::vector<int> starts;
            for (int x = 0; x < X; ++x) {
                if (model.init_exo[x] == 0 || policy.prob(s, x, a) == 0) continue;
                std::vector<std::vector<Rat>> joint(S, std::vector<Rat>(X, 0));
                {
                    int s1 = model.agent.step(s, a);
                    for (int x2 = 0; x2 < X; ++x2)
                        if (model.exo.rows[x][x2] > 0) joint[s1][x2] = model.exo.rows[x][x2];
                }
                for (int step = 1; step < h; ++step) {
                    std::vector<std::vector<Rat>> next(S, std::vector<Rat>(X, 0));
                    for (int cs = 0; cs < S; ++cs)
                        for (int cx = 0; cx < X; ++cx) {
                            if (joint[cs][cx] == 0) continue;
                            for (int ca = 0; ca < A; ++ca) {
                                const Rat& pa = policy.prob(cs, cx, ca);
                                if (pa == 0) continue;
                                int ns = model.agent.step(cs, ca);
                                for (int nx = 0; nx < X; ++nx)
                                    if (model.exo.rows[cx][nx] > 0)
                                        next[ns][nx] += joint[cs][cx] * pa * model.exo.rows[cx][nx];
                            }
                        }
                    joint = std::move(next);
                }
                joint_by_x.push_back(std::move(joint));
                starts.push_back(x);
            }
            if (starts.empty()) continue;

            // The exogenous-independent agent factor the lemma claims:
            // P(s_{1+h} = s' | s_1 = s, a_1 = a), mixing the starts x by
            // P(x | s, a) under the factored initial distribution.
            Rat norm = 0;
            std::vector<Rat> weight(starts.size(), 0);
            for (std::size_t i = 0; i < starts.size(); ++i) {
                weight[i] = model.init_exo[starts[i]] * policy.prob(s, starts[i], a);
                norm += weight[i];
            }
            std::vector<Rat> agent_factor(S, 0);
            for (std::size_t i = 0; i < starts.size(); ++i)
                for (int s2 = 0; s2 < S; ++s2)
                    for (int x2 = 0; x2 < X; ++x2)
                        agent_factor[s2] += weight[i] / norm * joint_by_x[i][s2][x2];

            for (std::size_t i = 0; i < starts.size(); ++i) {
                int x = starts[i];
                for (int s2 = 0; s2 < S; ++s2)
                    for (int x2 = 0; x2 < X; ++x2) {
                        Rat latent_lhs = joint_by_x[i][s2][x2];
                        Rat latent_rhs = agent_factor[s2] * exo_h[x][x2];
                        if (latent_lhs == 0 && latent_rhs == 0) continue;
                        for (const auto& [obs, q] : model.emission.row(s2, x2)) {
                            Rat lhs = latent_lhs * q;
                            Rat rhs = latent_rhs * q;
                            ++report.entries_checked;
                            Rat res = abs(lhs - rhs);
                            if (res > report.max_residual) {
                                report.max_residual = res;
                                report.witness = DecouplingWitness{s, x, a, s2, x2, obs, lhs, rhs};
                            }
                        }
                    }
            }
        }
    }
    return report;
}

}  // namespace iklab
