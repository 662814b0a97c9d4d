#include "iklab/model.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace iklab {

namespace {

using json = nlohmann::ordered_json;

bool is_distribution(const std::vector<Rat>& row) {
    Rat sum = 0;
    for (const auto& p : row) {
        if (p < 0 || p > 1) return false;
        sum += p;
    }
    return sum == 1;
}

}  // namespace

ValidationReport validate_model(const FmPomdp& model) {
    ValidationReport report;
    const int S = model.num_agent_states();
    const int A = model.num_actions();
    const int X = model.num_exo_states();

    if (S <= 0) report.violations.push_back({"empty", "no agent states"});
    if (A <= 0) report.violations.push_back({"empty", "no actions"});
    if (X <= 0) report.violations.push_back({"empty", "no exogenous states"});
    if (model.horizon < 1)
        report.violations.push_back({"horizon", "H = " + std::to_string(model.horizon)});
    if (!report.violations.empty()) return report;

    for (int s = 0; s < S; ++s) {
        if (static_cast<int>(model.agent.next[s].size()) != A) {
            report.violations.push_back(
                {"agent-not-total", "state " + std::to_string(s) + " row has wrong arity"});
            continue;
        }
        for (int a = 0; a < A; ++a) {
            AgentStateId t = model.agent.next[s][a];
            if (t < 0 || t >= S)
                report.violations.push_back({"agent-out-of-range",
                                             "T(" + std::to_string(s) + "," + std::to_string(a) +
                                                 ") = " + std::to_string(t)});
        }
    }

    for (int x = 0; x < X; ++x) {
        if (static_cast<int>(model.exo.rows[x].size()) != X || !is_distribution(model.exo.rows[x])) {
            Rat sum = 0;
            for (const auto& p : model.exo.rows[x]) sum += p;
            report.violations.push_back(
                {"exo-row-sum", "exo row " + std::to_string(x) + " sums to " + to_fraction(sum)});
        }
    }

    for (int s = 0; s < S; ++s) {
        for (int x = 0; x < X; ++x) {
            const auto& row = model.emission.row(s, x);
            Rat sum = 0;
            for (const auto& [o, p] : row) {
                if (o != kBlankObs && (o < 0 || o >= model.num_obs))
                    report.violations.push_back({"emission-symbol",
                                                 "q row (" + std::to_string(s) + "," +
                                                     std::to_string(x) + ") uses symbol " +
                                                     std::to_string(o)});
                if (p <= 0 || p > 1)
                    report.violations.push_back({"emission-prob",
                                                 "q(" + std::to_string(o) + "|" + std::to_string(s) +
                                                     "," + std::to_string(x) + ") = " +
                                                     to_fraction(p)});
                sum += p;
            }
            if (sum != 1)
                report.violations.push_back({"emission-row-sum",
                                             "q row (" + std::to_string(s) + "," +
                                                 std::to_string(x) + ") sums to " +
                                                 to_fraction(sum)});
        }
    }

    if (model.block) {
        // Supports of distinct latent states must be pairwise disjoint.
        std::map<ObsSymbol, std::pair<int, int>> owner;
        for (int s = 0; s < S && report.violations.size() < 64; ++s) {
            for (int x = 0; x < X; ++x) {
                for (const auto& [o, p] : model.emission.row(s, x)) {
                    auto it = owner.find(o);
                    if (it == owner.end()) {
                        owner[o] = {s, x};
                    } else if (it->second != std::make_pair(s, x)) {
                        report.violations.push_back(
                            {"block", "symbol " + std::to_string(o) + " emitted by latent states (" +
                                          std::to_string(it->second.first) + "," +
                                          std::to_string(it->second.second) + ") and (" +
                                          std::to_string(s) + "," + std::to_string(x) + ")"});
                    }
                }
            }
        }
    }

    if (static_cast<int>(model.init_agent.size()) != S || !is_distribution(model.init_agent))
        report.violations.push_back({"init-agent", "mu_s is not a distribution over S"});
    if (static_cast<int>(model.init_exo.size()) != X || !is_distribution(model.init_exo))
        report.violations.push_back({"init-exo", "mu_xi is not a distribution over Xi"});

    return report;
}

ValidationReport validate_policy(const FmPomdp& model, const Policy& policy) {
    ValidationReport report;
    if (static_cast<int>(policy.probs.size()) != model.num_agent_states()) {
        report.violations.push_back({"policy-arity", "policy has wrong number of state rows"});
        return report;
    }
    for (int s = 0; s < model.num_agent_states(); ++s) {
        if (static_cast<int>(policy.probs[s].size()) != model.num_actions() ||
            !is_distribution(policy.probs[s]))
            report.violations.push_back(
                {"policy-row-sum", "policy row " + std::to_string(s) + " is not a distribution"});
    }
    return report;
}

int diameter(const AgentDynamics& agent) {
    const int S = agent.num_states();
    const int A = agent.num_actions();
    int best = 0;
    std::vector<int> dist(S);
    for (int s0 = 0; s0 < S; ++s0) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s0] = 0;
        std::deque<int> queue{s0};
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            for (int a = 0; a < A; ++a) {
                int t = agent.next[s][a];
                if (dist[t] < 0) {
                    dist[t] = dist[s] + 1;
                    queue.push_back(t);
                }
            }
        }
        for (int t = 0; t < S; ++t) {
            if (dist[t] < 0) throw Unreachable(s0, t);
            best = std::max(best, dist[t]);
        }
    }
    return best;
}

std::set<std::pair<AgentStateId, ExoStateId>> reachable_latents(const FmPomdp& model,
                                                                const Policy& policy, int t) {
    if (t < 1 || t > model.horizon)
        throw std::out_of_range("reachable_latents: t out of [1, H]");
    std::set<std::pair<AgentStateId, ExoStateId>> cur;
    for (int s = 0; s < model.num_agent_states(); ++s)
        for (int x = 0; x < model.num_exo_states(); ++x)
            if (model.init_agent[s] > 0 && model.init_exo[x] > 0) cur.insert({s, x});
    for (int step = 1; step < t; ++step) {
        std::set<std::pair<AgentStateId, ExoStateId>> next;
        for (const auto& [s, x] : cur) {
            for (int a = 0; a < model.num_actions(); ++a) {
                if (policy.prob(s, a) == 0) continue;
                int s2 = model.agent.step(s, a);
                for (int x2 = 0; x2 < model.num_exo_states(); ++x2)
                    if (model.exo.rows[x][x2] > 0) next.insert({s2, x2});
            }
        }
        cur = std::move(next);
    }
    return cur;
}

namespace {

json rats_to_json(const std::vector<Rat>& v) {
    json out = json::array();
    for (const auto& r : v) out.push_back(to_fraction(r));
    return out;
}

std::vector<Rat> rats_from_json(const json& j) {
    std::vector<Rat> out;
    for (const auto& e : j) out.push_back(parse_fraction(e.get<std::string>()));
    return out;
}

}  // namespace

std::string model_to_json(const FmPomdp& model) {
    json j;
    j["agent"] = model.agent.next;
    json exo = json::array();
    for (const auto& row : model.exo.rows) exo.push_back(rats_to_json(row));
    j["exo"] = exo;
    json em = json::array();
    for (const auto& per_state : model.emission.rows) {
        json per_xi = json::array();
        for (const auto& row : per_state) {
            json entries = json::array();
            for (const auto& [o, p] : row) entries.push_back(json::array({o, to_fraction(p)}));
            per_xi.push_back(entries);
        }
        em.push_back(per_xi);
    }
    j["emission"] = em;
    j["num_obs"] = model.num_obs;
    j["block"] = model.block;
    j["m"] = model.m;
    j["n"] = model.n;
    j["H"] = model.horizon;
    j["mu_s"] = rats_to_json(model.init_agent);
    j["mu_xi"] = rats_to_json(model.init_exo);
    if (!model.state_labels.empty()) j["state_labels"] = model.state_labels;
    if (!model.action_labels.empty()) j["action_labels"] = model.action_labels;
    return j.dump(2);
}

FmPomdp model_from_json(const std::string& text) {
    json j = json::parse(text);
    FmPomdp model;
    model.agent.next = j.at("agent").get<std::vector<std::vector<int>>>();
    for (const auto& row : j.at("exo")) model.exo.rows.push_back(rats_from_json(row));
    for (const auto& per_state : j.at("emission")) {
        std::vector<std::vector<std::pair<ObsSymbol, Rat>>> per_xi;
        for (const auto& row : per_state) {
            std::vector<std::pair<ObsSymbol, Rat>> entries;
            for (const auto& e : row)
                entries.emplace_back(e[0].get<int>(), parse_fraction(e[1].get<std::string>()));
            std::sort(entries.begin(), entries.end());
            per_xi.push_back(std::move(entries));
        }
        model.emission.rows.push_back(std::move(per_xi));
    }
    model.num_obs = j.at("num_obs").get<int>();
    model.block = j.at("block").get<bool>();
    model.m = j.at("m").get<int>();
    model.n = j.at("n").get<int>();
    model.horizon = j.at("H").get<int>();
    model.init_agent = rats_from_json(j.at("mu_s"));
    model.init_exo = rats_from_json(j.at("mu_xi"));
    if (j.contains("state_labels"))
        model.state_labels = j["state_labels"].get<std::vector<std::string>>();
    if (j.contains("action_labels"))
        model.action_labels = j["action_labels"].get<std::vector<std::string>>();
    return model;
}

FmPomdp load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

void save_model_file(const FmPomdp& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << model_to_json(model) << "\n";
}

std::string model_hash(const FmPomdp& model) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(model_to_json(model))));
    return buf;
}

}  // namespace iklab
