#include "iklab/decodability.hpp"

namespace iklab {

namespace {

struct ScanResult {
    std::map<std::vector<int>, std::pair<AgentStateId, int>> table;  // payload -> (state, anchor)
    std::vector<DecodabilityWitness> conflicts;
};

ScanResult scan_windows(const FmPomdp& model, const Policy& policy, int span,
                        WindowKind direction, bool with_actions, int length, double budget) {
    if (length <= 0) length = model.horizon;
    if (span < 0) throw std::out_of_range("window span must be >= 0");
    ScanResult result;
    const int lo_anchor = direction == WindowKind::Past ? span + 1 : 1;
    const int hi_anchor = direction == WindowKind::Past ? length : length - span;
    for_each_trajectory(
        model, policy, length,
        [&](const Trajectory& traj) {
            for (int h = lo_anchor; h <= hi_anchor; ++h) {
                Window w = direction == WindowKind::Past
                               ? past_window(traj, h, span, with_actions)
                               : future_window(traj, h, span, with_actions);
                AgentStateId s = traj.s[h - 1];
                auto [it, inserted] = result.table.try_emplace(w.payload, s, h);
                if (!inserted && it->second.first != s && result.conflicts.size() < 256) {
                    result.conflicts.push_back(
                        {w.payload, it->second.first, s, it->second.second, h});
                }
            }
        },
        budget);
    return result;
}

DecodabilityVerdict to_verdict(ScanResult&& scan) {
    DecodabilityVerdict verdict;
    verdict.holds = scan.conflicts.empty();
    if (!verdict.holds) verdict.witness = scan.conflicts.front();
    verdict.all_witnesses = std::move(scan.conflicts);
    return verdict;
}

}  // namespace

DecodabilityVerdict check_past_decodability(const FmPomdp& model, const Policy& policy, int span,
                                            bool with_actions, int length, double budget) {
    return to_verdict(
        scan_windows(model, policy, span, WindowKind::Past, with_actions, length, budget));
}

DecodabilityVerdict check_future_decodability(const FmPomdp& model, const Policy& policy, int span,
                                              bool with_actions, int length, double budget) {
    return to_verdict(
        scan_windows(model, policy, span, WindowKind::Future, with_actions, length, budget));
}

Decoder derive_decoder(const FmPomdp& model, const Policy& policy, int span, WindowKind direction,
                       bool with_actions, int length, double budget) {
    ScanResult scan = scan_windows(model, policy, span, direction, with_actions, length, budget);
    if (!scan.conflicts.empty()) throw NotDecodable();
    Decoder dec;
    dec.direction = direction;
    dec.span = span;
    dec.with_actions = with_actions;
    for (auto& [payload, entry] : scan.table) dec.table.emplace(payload, entry.first);
    return dec;
}

}  // namespace iklab
