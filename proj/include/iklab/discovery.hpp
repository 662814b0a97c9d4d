#pragma once

#include "iklab/inference.hpp"

namespace iklab {

struct DomainMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Equivalence classes over elements (window or prefix payloads). Class ids
// are dense and assigned by first occurrence in lexicographic element order.
struct Partition {
    std::map<std::vector<int>, int> classes;
    int class_count = 0;

    friend bool operator==(const Partition&, const Partition&) = default;
};

std::string partition_to_json(const Partition& p);

// The inverse-kinematics signature of one element under an objective.
//
// first_role[k] maps the ground-truth-decoded second argument to the exact
// Bayes action distribution conditioned on the element itself, computed by
// enumeration: P(a_t | element, s_{t+k}) for each usable multi-step k, plus
// P(a_t | element, s_{t+1}) stored at k = 1 when the objective's remaining
// examples collapse to the one-step inverse (AH; FJ with k <= m).
//
// second_role[k] is the state-level mirror for each usable multi-step k:
// P_pi(a | s_prev, s) with s the element's decoded state. A single encoder
// feeds both argument slots of the classifier, so elements must also be
// separated when they disagree as the *later* state of an example pair; the
// collapsed one-step forms constrain only the earlier slot and contribute
// nothing here, which is exactly what makes AH and FJ lossy.
struct IkRowFamily {
    std::map<int, std::map<AgentStateId, ActionDist>> first_role;
    std::map<int, std::map<AgentStateId, ActionDist>> second_role;

    friend bool operator==(const IkRowFamily&, const IkRowFamily&) = default;
    std::string canonical() const;
};

// Families for every reachable element at anchor t. Elements are past-window
// payloads of span m (augmented per the objective), or full prefixes for
// AH/AH_A. Throws AssumptionViolated if some element fails to decode its
// anchor agent state.
std::map<std::vector<int>, IkRowFamily> ik_row_families(const FmPomdp& model,
                                                        const Policy& policy, Objective objective,
                                                        int K_max, int t,
                                                        double budget = kDefaultBudget);

IkRowFamily ik_row_family(const FmPomdp& model, const Policy& policy, Objective objective,
                          int K_max, const std::vector<int>& element, int t,
                          double budget = kDefaultBudget);

// Partitions all reachable elements at anchor t by exact family equality.
Partition discover_partition(const FmPomdp& model, const Policy& policy, Objective objective,
                             int K_max, int t, double budget = kDefaultBudget);

// Ground-truth partition over the same element domain: element -> decoded
// agent state at the anchor.
Partition ground_truth_partition(const FmPomdp& model, const Policy& policy, Objective objective,
                                 int t, double budget = kDefaultBudget);

enum class Refinement { Equal, Coarser, Finer, Incomparable };

std::string refinement_name(Refinement r);

struct PartitionComparison {
    bool isomorphic = false;
    Refinement refinement = Refinement::Incomparable;
    // Pairs of truth classes merged into one found class, and pairs of found
    // classes splitting one truth class.
    std::vector<std::pair<int, int>> merged_pairs;
    std::vector<std::pair<int, int>> split_pairs;
    Rat accuracy = 0;  // best-bijection fraction of correctly grouped elements
};

PartitionComparison compare_partitions(const Partition& found, const Partition& truth);

// Pairwise distinguishability of ground-truth agent states under the
// objective's usable information (state-level signatures, both roles).
struct SeparationMatrix {
    std::vector<std::vector<bool>> separated;

    bool all_separated() const {
        for (std::size_t i = 0; i < separated.size(); ++i)
            for (std::size_t j = 0; j < separated.size(); ++j)
                if (i != j && !separated[i][j]) return false;
        return true;
    }
};

SeparationMatrix separation_matrix(const FmPomdp& model, const Policy& policy, Objective objective,
                                   int K_max);

}  // namespace iklab
