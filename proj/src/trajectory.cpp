#include "iklab/trajectory.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace iklab {

Window past_window(const Trajectory& traj, int h, int m, bool with_actions) {
    if (h < 1 || h > traj.length()) throw std::out_of_range("past_window: anchor out of range");
    Window w;
    w.kind = WindowKind::Past;
    w.anchor = h;
    w.lo = std::max(1, h - m);
    w.hi = h;
    for (int t = w.lo; t <= w.hi; ++t) {
        AugObs ao = traj.aug(t);
        w.payload.push_back(ao.obs);
        if (with_actions) w.payload.push_back(ao.prev_action);
    }
    return w;
}

Window future_window(const Trajectory& traj, int h, int n, bool with_actions) {
    if (h < 1 || h > traj.length()) throw std::out_of_range("future_window: anchor out of range");
    Window w;
    w.kind = WindowKind::Future;
    w.anchor = h;
    w.lo = h;
    w.hi = std::min(h + n, traj.length());
    for (int t = w.lo; t <= w.hi; ++t) {
        AugObs ao = traj.aug(t);
        w.payload.push_back(ao.obs);
        if (with_actions) w.payload.push_back(ao.prev_action);
    }
    return w;
}

double estimate_path_count(const FmPomdp& model, int length) {
    int init = 0;
    for (int s = 0; s < model.num_agent_states(); ++s)
        for (int x = 0; x < model.num_exo_states(); ++x)
            if (model.init_agent[s] > 0 && model.init_exo[x] > 0) ++init;
    std::size_t obs_branch = 1, exo_branch = 1;
    for (int s = 0; s < model.num_agent_states(); ++s)
        for (int x = 0; x < model.num_exo_states(); ++x)
            obs_branch = std::max(obs_branch, model.emission.row(s, x).size());
    for (int x = 0; x < model.num_exo_states(); ++x) {
        std::size_t supp = 0;
        for (const auto& p : model.exo.rows[x]) supp += (p > 0);
        exo_branch = std::max(exo_branch, supp);
    }
    double est = static_cast<double>(init) * static_cast<double>(obs_branch);
    double per_step = static_cast<double>(model.num_actions()) * static_cast<double>(obs_branch) *
                      static_cast<double>(exo_branch);
    for (int t = 1; t < length; ++t) {
        est *= per_step;
        if (est > 1e18) return est;
    }
    return est;
}

namespace {

void enumerate_impl(const FmPomdp& model, const JointPolicy& policy, int length,
                    const std::function<void(const Trajectory&)>& visit, double budget) {
    if (length < 1) throw std::out_of_range("enumeration length must be >= 1");
    double est = estimate_path_count(model, length);
    if (est > budget) throw BudgetExceeded(est);

    Trajectory traj;
    traj.s.resize(length);
    traj.xi.resize(length);
    traj.o.resize(length);
    traj.a.resize(length - 1);

    // Emits the observation branch at step t (1-based), then recurses over
    // actions and exogenous successors.
    std::function<void(int, Rat)> emit_obs = [&](int t, Rat w) {
        for (const auto& [obs, p] : model.emission.row(traj.s[t - 1], traj.xi[t - 1])) {
            traj.o[t - 1] = obs;
            Rat w2 = w * p;
            if (t == length) {
                traj.weight = w2;
                visit(traj);
                continue;
            }
            for (int a = 0; a < model.num_actions(); ++a) {
                const Rat& pa = policy.prob(traj.s[t - 1], traj.xi[t - 1], a);
                if (pa == 0) continue;
                traj.a[t - 1] = a;
                traj.s[t] = model.agent.step(traj.s[t - 1], a);
                for (int x2 = 0; x2 < model.num_exo_states(); ++x2) {
                    const Rat& px = model.exo.rows[traj.xi[t - 1]][x2];
                    if (px == 0) continue;
                    traj.xi[t] = x2;
                    emit_obs(t + 1, w2 * pa * px);
                }
            }
        }
    };

    for (int s = 0; s < model.num_agent_states(); ++s) {
        if (model.init_agent[s] == 0) continue;
        for (int x = 0; x < model.num_exo_states(); ++x) {
            if (model.init_exo[x] == 0) continue;
            traj.s[0] = s;
            traj.xi[0] = x;
            emit_obs(1, model.init_agent[s] * model.init_exo[x]);
        }
    }
}

}  // namespace

void for_each_trajectory(const FmPomdp& model, const Policy& policy, int length,
                         const std::function<void(const Trajectory&)>& visit, double budget) {
    enumerate_impl(model, lift(policy, model.num_exo_states()), length, visit, budget);
}

void for_each_trajectory_joint(const FmPomdp& model, const JointPolicy& policy, int length,
                               const std::function<void(const Trajectory&)>& visit, double budget) {
    enumerate_impl(model, policy, length, visit, budget);
}

std::vector<Trajectory> enumerate_trajectories(const FmPomdp& model, const Policy& policy,
                                               int length, double budget) {
    std::vector<Trajectory> out;
    for_each_trajectory(model, policy, length, [&](const Trajectory& t) { out.push_back(t); },
                        budget);
    return out;
}

namespace {

// Exact inverse-CDF draw: compares r / 2^64 against rational cumulative
// probabilities, so the result depends only on the mt19937_64 stream.
template <typename ProbOf>
int sample_index(int count, const ProbOf& prob_of, std::mt19937_64& rng) {
    std::uint64_t r = rng();
    Rat u(boost::multiprecision::cpp_int(r),
          boost::multiprecision::cpp_int(1) << 64);
    Rat cum = 0;
    int last_positive = -1;
    for (int i = 0; i < count; ++i) {
        Rat p = prob_of(i);
        if (p == 0) continue;
        last_positive = i;
        cum += p;
        if (u < cum) return i;
    }
    return last_positive;
}

}  // namespace

Trajectory simulate(const FmPomdp& model, const Policy& policy, int length, std::uint64_t seed) {
    if (length < 1) throw std::out_of_range("simulate: length must be >= 1");
    std::mt19937_64 rng(seed);
    Trajectory traj;
    traj.s.push_back(sample_index(model.num_agent_states(),
                                  [&](int s) { return model.init_agent[s]; }, rng));
    traj.xi.push_back(sample_index(model.num_exo_states(),
                                   [&](int x) { return model.init_exo[x]; }, rng));
    for (int t = 1; t <= length; ++t) {
        const auto& row = model.emission.row(traj.s.back(), traj.xi.back());
        int pick = sample_index(static_cast<int>(row.size()),
                                [&](int i) { return row[i].second; }, rng);
        traj.o.push_back(row[pick].first);
        if (t == length) break;
        int a = sample_index(model.num_actions(),
                             [&](int i) { return policy.prob(traj.s.back(), i); }, rng);
        traj.a.push_back(a);
        traj.s.push_back(model.agent.step(traj.s.back(), a));
        traj.xi.push_back(sample_index(model.num_exo_states(),
                                       [&](int x) { return model.exo.rows[traj.xi[t - 1]][x]; },
                                       rng));
    }
    return traj;
}

std::string trajectory_dump(const FmPomdp& model, const Trajectory& traj, std::uint64_t seed) {
    std::ostringstream out;
    out << "# model " << model_hash(model) << "\n";
    out << "# seed " << seed << "\n";
    for (int t = 1; t <= traj.length(); ++t) {
        out << t << "\t" << traj.s[t - 1] << "\t" << traj.xi[t - 1] << "\t" << traj.o[t - 1]
            << "\t";
        if (t < traj.length()) out << traj.a[t - 1];
        out << "\n";
    }
    return out.str();
}

}  // namespace iklab
