#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iklab/model.hpp"

namespace iklab {

// One experiment run. The report body is a pure function of the config, so
// identical configs reproduce byte-identical report files.
struct RunConfig {
    std::string command;             // validate | diameter | decodability | identities |
                                     // decoupling | discover | dump-ik | simulate
    std::string model = "fj-counterexample";  // builtin name or path to a model file
    std::string policy = "uniform";
    std::vector<std::string> objectives;
    int K_max = 3;
    int anchor = 0;                  // 0 means the default t* = m + 1
    int decodability_m = -1;         // -1 means the model's m / n
    int decodability_n = -1;
    int h = 2;                       // decoupling gap
    bool violating_policy = false;   // decoupling: use a constructed xi-dependent policy
    int k_lo = 1, k_hi = 10;         // dump-ik range
    int sim_length = 10;
    std::uint64_t seed = 0;
    double budget = 1e7;
    bool decimal = false;            // add 6-digit decimal renderings
    std::string out;                 // optional output file for the report body
    // builtin navigation parameters
    int nav_length = 5;
    std::vector<int> nav_curtains;
};

struct Report {
    std::string body;  // canonical JSON text
    bool pass = false;
    double wall_ms = 0;  // never part of the body
};

FmPomdp resolve_model(const RunConfig& config);

Report run(const RunConfig& config);

}  // namespace iklab
