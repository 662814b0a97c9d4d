#include "iklab/discovery.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace iklab {

namespace {

std::vector<int> element_payload(Objective objective, const FmPomdp& model, const Trajectory& traj,
                                 int t) {
    const bool wa = with_actions(objective);
    if (objective == Objective::AH || objective == Objective::AH_A) {
        std::vector<int> payload;
        for (int i = 1; i <= t; ++i) {
            AugObs ao = traj.aug(i);
            payload.push_back(ao.obs);
            if (wa) payload.push_back(ao.prev_action);
        }
        return payload;
    }
    return past_window(traj, t, model.m, wa).payload;
}

struct ElementStats {
    int state = -1;  // -2 on decode conflict
    Rat mass = 0;
    // (k, second state) -> per-action mass; k = 1 doubles as the one-step slot.
    std::map<std::pair<int, AgentStateId>, std::vector<Rat>> rows;
};

struct DiscoveryScan {
    std::map<std::vector<int>, ElementStats> elements;
    std::vector<int> multi_ks;
    bool one_step = false;
};

DiscoveryScan scan_elements(const FmPomdp& model, const Policy& policy, Objective objective,
                            int K_max, int t, double budget) {
    DiscoveryScan scan;
    scan.multi_ks = usable_ks(objective, model.m, K_max);
    scan.one_step = has_one_step_reduction(objective, model.m, K_max);

    int reach = scan.one_step ? 1 : 0;
    for (int k : scan.multi_ks) reach = std::max(reach, k);
    int length = t + reach;
    if (objective == Objective::MIK || objective == Objective::MIK_A) length += model.n;
    if (length > model.horizon)
        throw OutOfRange("discover: anchor + K_max (+ n) exceeds horizon");

    const int A = model.num_actions();
    for_each_trajectory(
        model, policy, length,
        [&](const Trajectory& traj) {
            ElementStats& el = scan.elements[element_payload(objective, model, traj, t)];
            if (el.state == -1) el.state = traj.s[t - 1];
            else if (el.state != traj.s[t - 1]) el.state = -2;
            el.mass += traj.weight;
            ActionId a = reach >= 1 ? traj.a[t - 1] : 0;
            if (scan.one_step) {
                auto& row = el.rows[{1, traj.s[t]}];
                if (row.empty()) row.assign(A, 0);
                row[a] += traj.weight;
            }
            for (int k : scan.multi_ks) {
                auto& row = el.rows[{k, traj.s[t + k - 1]}];
                if (row.empty()) row.assign(A, 0);
                row[a] += traj.weight;
            }
        },
        budget);

    for (const auto& [payload, el] : scan.elements)
        if (el.state == -2)
            throw AssumptionViolated("discover: an element fails to decode its anchor state under " +
                                     objective_name(objective));
    return scan;
}

std::map<std::vector<int>, IkRowFamily> families_from_scan(const FmPomdp& model,
                                                           const Policy& policy,
                                                           const DiscoveryScan& scan, int K_max) {
    std::map<std::vector<int>, IkRowFamily> out;
    LatentInverse li;
    if (!scan.multi_ks.empty()) li = latent_inverse(model, policy, K_max);

    for (const auto& [payload, el] : scan.elements) {
        IkRowFamily fam;
        for (const auto& [slot, mass] : el.rows) {
            Rat total = 0;
            for (const auto& v : mass) total += v;
            ActionDist dist(mass.size(), 0);
            for (std::size_t a = 0; a < mass.size(); ++a) dist[a] = mass[a] / total;
            fam.first_role[slot.first][slot.second] = std::move(dist);
        }
        for (int k : scan.multi_ks) {
            auto& mirror = fam.second_role[k];
            for (int prev = 0; prev < model.num_agent_states(); ++prev)
                if (li.reachable(prev, el.state, k)) mirror[prev] = li.dist(prev, el.state, k);
        }
        out.emplace(payload, std::move(fam));
    }
    return out;
}

}  // namespace

std::string IkRowFamily::canonical() const {
    std::ostringstream out;
    auto emit = [&out](const std::map<int, std::map<AgentStateId, ActionDist>>& role) {
        for (const auto& [k, rows] : role) {
            out << "k" << k << "{";
            for (const auto& [s, dist] : rows) {
                out << s << ":";
                for (const auto& p : dist) out << to_fraction(p) << ",";
                out << ";";
            }
            out << "}";
        }
    };
    out << "F:";
    emit(first_role);
    out << "|S:";
    emit(second_role);
    return out.str();
}

std::map<std::vector<int>, IkRowFamily> ik_row_families(const FmPomdp& model, const Policy& policy,
                                                        Objective objective, int K_max, int t,
                                                        double budget) {
    DiscoveryScan scan = scan_elements(model, policy, objective, K_max, t, budget);
    return families_from_scan(model, policy, scan, K_max);
}

IkRowFamily ik_row_family(const FmPomdp& model, const Policy& policy, Objective objective,
                          int K_max, const std::vector<int>& element, int t, double budget) {
    auto families = ik_row_families(model, policy, objective, K_max, t, budget);
    auto it = families.find(element);
    if (it == families.end())
        throw std::out_of_range("ik_row_family: element is not reachable at the anchor");
    return it->second;
}

Partition discover_partition(const FmPomdp& model, const Policy& policy, Objective objective,
                             int K_max, int t, double budget) {
    auto families = ik_row_families(model, policy, objective, K_max, t, budget);
    Partition part;
    std::map<std::string, int> ids;
    for (const auto& [payload, fam] : families) {
        auto [it, inserted] = ids.try_emplace(fam.canonical(), part.class_count);
        if (inserted) ++part.class_count;
        part.classes.emplace(payload, it->second);
    }
    return part;
}

Partition ground_truth_partition(const FmPomdp& model, const Policy& policy, Objective objective,
                                 int t, double budget) {
    // K_max = 0: only the element scan (and its decode check) is needed.
    DiscoveryScan scan = scan_elements(model, policy, objective, 0, t, budget);
    Partition part;
    std::map<AgentStateId, int> ids;
    for (const auto& [payload, el] : scan.elements) {
        auto [it, inserted] = ids.try_emplace(el.state, part.class_count);
        if (inserted) ++part.class_count;
        part.classes.emplace(payload, it->second);
    }
    return part;
}

std::string partition_to_json(const Partition& p) {
    nlohmann::ordered_json j;
    j["class_count"] = p.class_count;
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (const auto& [payload, id] : p.classes)
        classes.push_back(nlohmann::ordered_json{{"element", payload}, {"class", id}});
    j["classes"] = classes;
    return j.dump(2);
}

std::string refinement_name(Refinement r) {
    switch (r) {
        case Refinement::Equal: return "EQUAL";
        case Refinement::Coarser: return "COARSER";
        case Refinement::Finer: return "FINER";
        case Refinement::Incomparable: return "INCOMPARABLE";
    }
    throw std::invalid_argument("bad refinement");
}

PartitionComparison compare_partitions(const Partition& found, const Partition& truth) {
    if (found.classes.size() != truth.classes.size())
        throw DomainMismatch("compare_partitions: different element domains");
    for (auto fit = found.classes.begin(), tit = truth.classes.begin(); fit != found.classes.end();
         ++fit, ++tit)
        if (fit->first != tit->first)
            throw DomainMismatch("compare_partitions: different element domains");

    const int nf = found.class_count;
    const int nt = truth.class_count;
    std::vector<std::vector<long long>> confusion(nf, std::vector<long long>(nt, 0));
    long long total = 0;
    for (const auto& [payload, fc] : found.classes) {
        confusion[fc][truth.classes.at(payload)] += 1;
        ++total;
    }

    PartitionComparison cmp;
    // Merge pairs: two truth classes meeting the same found class.
    for (int f = 0; f < nf; ++f)
        for (int t1 = 0; t1 < nt; ++t1)
            for (int t2 = t1 + 1; t2 < nt; ++t2)
                if (confusion[f][t1] > 0 && confusion[f][t2] > 0)
                    cmp.merged_pairs.emplace_back(t1, t2);
    for (int t1 = 0; t1 < nt; ++t1)
        for (int f1 = 0; f1 < nf; ++f1)
            for (int f2 = f1 + 1; f2 < nf; ++f2)
                if (confusion[f1][t1] > 0 && confusion[f2][t1] > 0)
                    cmp.split_pairs.emplace_back(f1, f2);
    std::sort(cmp.merged_pairs.begin(), cmp.merged_pairs.end());
    cmp.merged_pairs.erase(std::unique(cmp.merged_pairs.begin(), cmp.merged_pairs.end()),
                           cmp.merged_pairs.end());
    std::sort(cmp.split_pairs.begin(), cmp.split_pairs.end());
    cmp.split_pairs.erase(std::unique(cmp.split_pairs.begin(), cmp.split_pairs.end()),
                          cmp.split_pairs.end());

    const bool merges = !cmp.merged_pairs.empty();
    const bool splits = !cmp.split_pairs.empty();
    cmp.refinement = !merges && !splits ? Refinement::Equal
                     : merges && !splits ? Refinement::Coarser
                     : !merges && splits ? Refinement::Finer
                                         : Refinement::Incomparable;
    cmp.isomorphic = cmp.refinement == Refinement::Equal;

    // Best-bijection accuracy by optimal assignment over the confusion matrix.
    if (nt > 20) throw std::length_error("compare_partitions: too many classes for assignment");
    std::vector<long long> dp(std::size_t(1) << nt, -1);
    dp[0] = 0;
    for (int f = 0; f < nf; ++f) {
        std::vector<long long> next = dp;  // leaving found class f unmatched is allowed
        for (std::size_t mask = 0; mask < dp.size(); ++mask) {
            if (dp[mask] < 0) continue;
            for (int tc = 0; tc < nt; ++tc) {
                if (mask & (std::size_t(1) << tc)) continue;
                std::size_t m2 = mask | (std::size_t(1) << tc);
                next[m2] = std::max(next[m2], dp[mask] + confusion[f][tc]);
            }
        }
        dp = std::move(next);
    }
    long long best = *std::max_element(dp.begin(), dp.end());
    cmp.accuracy = Rat(best, total);
    return cmp;
}

SeparationMatrix separation_matrix(const FmPomdp& model, const Policy& policy,
                                   Objective objective, int K_max) {
    const int S = model.num_agent_states();
    std::vector<int> multi = usable_ks(objective, model.m, K_max);
    bool one_step = has_one_step_reduction(objective, model.m, K_max);
    int reach = one_step ? 1 : 0;
    for (int k : multi) reach = std::max(reach, k);

    std::vector<std::string> signature(S);
    if (reach >= 1) {
        LatentInverse li = latent_inverse(model, policy, reach);
        auto row_of = [&](AgentStateId s, int k, bool as_first) {
            std::ostringstream out;
            for (int other = 0; other < S; ++other) {
                AgentStateId from = as_first ? s : other;
                AgentStateId to = as_first ? other : s;
                if (!li.reachable(from, to, k)) continue;
                out << other << ":";
                for (const auto& p : li.dist(from, to, k)) out << to_fraction(p) << ",";
                out << ";";
            }
            return out.str();
        };
        for (int s = 0; s < S; ++s) {
            std::ostringstream sig;
            if (one_step) sig << "one-step{" << row_of(s, 1, true) << "}";
            for (int k : multi)
                sig << "k" << k << "{" << row_of(s, k, true) << "|" << row_of(s, k, false) << "}";
            signature[s] = sig.str();
        }
    }

    SeparationMatrix matrix;
    matrix.separated.assign(S, std::vector<bool>(S, false));
    for (int s1 = 0; s1 < S; ++s1)
        for (int s2 = 0; s2 < S; ++s2)
            matrix.separated[s1][s2] = s1 != s2 && signature[s1] != signature[s2];
    return matrix;
}

}  // namespace iklab
