#pragma once

#include <map>
#include <optional>

#include "iklab/trajectory.hpp"

namespace iklab {

// Tabular ground-truth decoder: window payload -> agent state at the anchor.
struct Decoder {
    WindowKind direction;
    int span = 0;
    bool with_actions = true;
    std::map<std::vector<int>, AgentStateId> table;

    AgentStateId decode(const std::vector<int>& payload) const {
        auto it = table.find(payload);
        if (it == table.end())
            throw std::out_of_range("decoder: window payload was never reached");
        return it->second;
    }
};

struct DecodabilityWitness {
    std::vector<int> payload;
    AgentStateId state_a, state_b;
    int anchor_a, anchor_b;
};

struct DecodabilityVerdict {
    bool holds = true;
    // First conflicting window in enumeration order, present iff !holds.
    std::optional<DecodabilityWitness> witness;
    // All (payload, state pair) conflicts, capped, for diagnostics.
    std::vector<DecodabilityWitness> all_witnesses;
};

// Checks that no two reachable full-length windows with identical payloads
// anchor at different agent states. Only anchors with an unclamped window
// are considered (h >= span+1 for past, h <= length-span for future):
// truncated boundary windows carry strictly less information than the
// assumption grants.
DecodabilityVerdict check_past_decodability(const FmPomdp& model, const Policy& policy, int span,
                                            bool with_actions = true, int length = 0,
                                            double budget = kDefaultBudget);
DecodabilityVerdict check_future_decodability(const FmPomdp& model, const Policy& policy, int span,
                                              bool with_actions = true, int length = 0,
                                              double budget = kDefaultBudget);

struct NotDecodable : std::runtime_error {
    NotDecodable() : std::runtime_error("decodability check failed; no decoder exists") {}
};

// Total lookup table over all reachable windows of the stated span.
// Throws NotDecodable if the corresponding check fails.
Decoder derive_decoder(const FmPomdp& model, const Policy& policy, int span, WindowKind direction,
                       bool with_actions = true, int length = 0, double budget = kDefaultBudget);

}  // namespace iklab
