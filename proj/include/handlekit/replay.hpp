#pragma once

#include <string>
#include <vector>

#include "handlekit/framed_link.hpp"
#include "handlekit/invariants.hpp"

namespace hk {

struct ReplayOptions {
    // When set, an InvariantSummary is computed after every step and slide
    // steps are checked to conserve it. Costs a Smith form per step.
    bool check_invariants = false;
};

struct ReplayResult {
    FramedLink final;
    std::vector<InvariantSummary> per_step;  // filled iff check_invariants
};

// Replays a script step by step. The first failing step aborts with its
// index and reason. Deterministic: identical inputs give identical outputs.
inline ReplayResult replay(const FramedLink& initial, const MoveScript& script, ReplayOptions opts = {}) {
    ReplayResult res{initial, {}};
    InvariantSummary prev;
    if (opts.check_invariants) prev = invariants(initial);
    for (std::size_t s = 0; s < script.moves.size(); ++s) {
        FramedLink next;
        try {
            next = apply_move(res.final, script.moves[s]);
        } catch (const std::exception& e) {
            throw move_error("replay: step " + std::to_string(s) + " failed: " + e.what());
        }
        if (opts.check_invariants) {
            InvariantSummary cur = invariants(next);
            if (std::holds_alternative<SlideMove>(script.moves[s]) && !(cur == prev))
                throw move_error("replay: step " + std::to_string(s) + " (slide) changed a conserved quantity");
            res.per_step.push_back(cur);
            prev = cur;
        }
        res.final = std::move(next);
    }
    return res;
}

}  // namespace hk
