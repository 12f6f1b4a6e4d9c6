#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "handlekit/chain.hpp"
#include "handlekit/framed_link.hpp"
#include "handlekit/replay.hpp"

namespace hk {

// Final framings of a meridian pair after untying a -m-linking over a
// -2-chain of length m+1. Parity-split closed form.
inline std::pair<std::int64_t, std::int64_t> unlink_framings(std::int64_t m) {
    if (m < 1) throw std::invalid_argument("unlink_framings: m must be >= 1");
    if (m % 2 != 0) return {-2 * m - 1, -2 * m - 1};
    return {-2 * m, -2 * m - 2};
}

struct PairSetup {
    FramedLink initial;
    MoveScript script;
    FramedLink link;
    std::size_t h0 = 0;
    std::size_t h1 = 1;
};

// From a -n-framed 2-handle h0, mint a fresh 0-framed h1 and slide it over
// h0: the result is a pair with framings (-n,-n) and linking -n.
inline PairSetup pair_setup(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("pair_setup: n must be >= 1");
    PairSetup out;
    out.initial.add_two_handle(-n, "h0");
    out.script.moves.push_back(AddCancelingPairMove{});
    out.script.moves.push_back(SlideMove{1, 0, +1});
    out.link = replay(out.initial, out.script).final;
    out.link.set_label(1, "h1");
    return out;
}

// 1-based chain positions each pair member slides over (handle addition).
// One member takes the odd positions of 1..m+1, the other the even ones;
// for m even the first member takes the even class so its framing lands on
// the -2m side of the formula.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> unlink_slide_positions(std::int64_t m) {
    if (m < 1) throw std::invalid_argument("unlink_slide_positions: m must be >= 1");
    std::vector<std::size_t> first, second;
    bool first_odd = (m % 2 != 0);
    for (std::size_t p = 1; p <= static_cast<std::size_t>(m + 1); ++p) {
        if ((p % 2 == 1) == first_odd) first.push_back(p);
        else second.push_back(p);
    }
    return {first, second};
}

struct UnlinkStage {
    std::int64_t linking_magnitude;
    std::int64_t components;
    bool base;
};

struct UnlinkResult {
    MoveScript script;
    FramedLink link;
    std::pair<std::int64_t, std::int64_t> framings;
    std::vector<UnlinkStage> stages;
    // Final linking rows of the pair against the used chain components.
    std::vector<std::int64_t> h0_chain_row;
    std::vector<std::int64_t> h1_chain_row;
};

// Unties a -m-linked 2-handle pair by band moves over a -2-chain of length
// m+1: each pair component slides (handle addition) over one parity class
// of chain positions. With C the chain block and z, w the parity indicator
// vectors this realizes f0' = f0 + z^T C z, f1' = f1 + w^T C w and
// linking' = linking + z^T C w = linking + m, hence linking 0 and the
// parity-split framing formula. Slides only; when the chain is longer than
// m+1 the contiguous subchain at the active end is used.
inline UnlinkResult unlink_pair(const FramedLink& link, std::pair<std::size_t, std::size_t> pair,
                                const std::vector<std::size_t>& chain) {
    const std::size_t h0 = pair.first, h1 = pair.second;
    link.check_index(h0);
    link.check_index(h1);
    if (!link.is_two_handle(h0) || !link.is_two_handle(h1))
        throw move_error("unlink_pair: pair components must be 2-handles");
    std::int64_t lk = link.linking(h0, h1);
    if (lk >= 0) throw move_error("unlink_pair: pair linking must be negative, got " + std::to_string(lk));
    const std::int64_t m = -lk;
    if (!is_chain(link, chain)) throw move_error("unlink_pair: chain indices do not form a -2-chain");
    if (static_cast<std::int64_t>(chain.size()) < m + 1)
        throw move_error("unlink_pair: chain budget violation: need length " + std::to_string(m + 1) +
                         ", have " + std::to_string(chain.size()));
    std::vector<std::size_t> used(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(m + 1));
    for (auto c : used)
        if (link.linking(h0, c) != 0 || link.linking(h1, c) != 0)
            throw move_error("unlink_pair: pair already linked with chain component " + std::to_string(c));

    UnlinkResult out;
    auto [pos0, pos1] = unlink_slide_positions(m);
    for (auto p : pos0) out.script.moves.push_back(SlideMove{h0, used[p - 1], +1});
    for (auto p : pos1) out.script.moves.push_back(SlideMove{h1, used[p - 1], +1});
    out.link = replay(link, out.script).final;

    if (out.link.linking(h0, h1) != 0)
        throw move_error("unlink_pair: final pair linking is " + std::to_string(out.link.linking(h0, h1)));
    out.framings = {out.link.framing(h0), out.link.framing(h1)};
    for (auto c : used) {
        out.h0_chain_row.push_back(out.link.linking(h0, c));
        out.h1_chain_row.push_back(out.link.linking(h1, c));
    }
    for (std::int64_t k = m; k >= 2; --k) out.stages.push_back({k, k + 2, false});
    out.stages.push_back({m >= 2 ? 2 : 1, 3, true});
    return out;
}

// The four-meridian framing tuple after both second-stage untyings.
inline std::array<std::int64_t, 4> double_unlink_framings(std::int64_t n) {
    if (n < 2) throw std::invalid_argument("double_unlink_framings: n must be >= 2 (budget)");
    std::array<std::int64_t, 4> tuple{};
    if (n % 2 != 0) tuple = {-4 * n - 3, -4 * n - 3, -4 * n - 3, -4 * n - 3};
    else tuple = {-4 * n, -4 * n - 2, -4 * n - 4, -4 * n - 6};
    // Consistency with the one-pair formula applied to the stage-one outputs.
    auto [s0, s1] = unlink_framings(n);
    auto [a0, a1] = unlink_framings(-s0);
    auto [b0, b1] = unlink_framings(-s1);
    if (!(a0 == tuple[0] && a1 == tuple[1] && b0 == tuple[2] && b1 == tuple[3]))
        throw move_error("double_unlink_framings: composition consistency check failed");
    return tuple;
}

// Chain lengths needed by the two second-stage untyings, and the total
// (2n+2)+1+(2n+2) = (2n+1)+1+(2n+3) = 4n+5 including the separator.
struct StageTwoNeeds {
    std::int64_t first;
    std::int64_t second;
    std::int64_t total_with_separator;
};

inline StageTwoNeeds stage_two_chain_needs(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("stage_two_chain_needs: n must be >= 1");
    StageTwoNeeds out{};
    if (n % 2 != 0) {
        out.first = 2 * n + 2;
        out.second = 2 * n + 2;
    } else {
        out.first = 2 * n + 1;
        out.second = 2 * n + 3;
    }
    out.total_with_separator = out.first + 1 + out.second;
    return out;
}

}  // namespace hk
