#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "handlekit/framed_link.hpp"
#include "handlekit/replay.hpp"

namespace hk {

// A -2-chain: consecutive components link once (with one fixed sign), all
// framings -2, everything else unlinked. Emitted chains normalize the
// adjacency sign to +1.
struct ChainSpec {
    std::size_t length = 0;
    int adjacency_sign = +1;
};

inline bool is_chain(const FramedLink& link, const std::vector<std::size_t>& idx, int adjacency_sign = +1) {
    if (idx.empty()) return false;
    for (auto i : idx)
        if (i >= link.size() || !link.is_two_handle(i) || link.framing(i) != -2) return false;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            std::int64_t want = (b == a + 1) ? adjacency_sign : 0;
            if (link.linking(idx[a], idx[b]) != want) return false;
        }
    return true;
}

// The ChainSpec(m) matrix as a standalone link.
inline FramedLink chain_link(std::size_t m, int adjacency_sign = +1) {
    FramedLink out;
    for (std::size_t i = 0; i < m; ++i) out.add_two_handle(-2, "chain-" + std::to_string(i + 1));
    for (std::size_t i = 0; i + 1 < m; ++i) out.set_linking(i, i + 1, adjacency_sign);
    return out;
}

// k parallel fiber cycles: equal framings, pairwise unlinked at the matrix
// level. This seeds the chain construction.
inline FramedLink parallel_cycles(std::int64_t k, std::int64_t framing) {
    if (k < 1) throw std::invalid_argument("parallel_cycles: k must be >= 1");
    FramedLink out;
    for (std::int64_t i = 0; i < k; ++i) out.add_two_handle(framing, "cycle-" + std::to_string(i + 1));
    return out;
}

// k push-offs of a single f-framed curve: pairwise linking equals the
// framing. Not slide-equivalent to parallel_cycles for f != 0 (the matrix
// has rank 1).
inline FramedLink push_offs(std::int64_t k, std::int64_t framing) {
    if (k < 1) throw std::invalid_argument("push_offs: k must be >= 1");
    FramedLink out;
    for (std::int64_t i = 0; i < k; ++i) out.add_two_handle(framing, "pushoff-" + std::to_string(i + 1));
    for (std::int64_t i = 0; i < k; ++i)
        for (std::int64_t j = i + 1; j < k; ++j)
            out.set_linking(static_cast<std::size_t>(i), static_cast<std::size_t>(j), framing);
    return out;
}

struct ChainResult {
    MoveScript script;
    FramedLink link;
    std::vector<std::size_t> chain;  // indices forming ChainSpec(k-1)
    std::size_t residual = 0;        // the remaining -1-framed component
};

// Slide cycle i over cycle i+1 (handle subtraction) for i = 1..k-1. Each
// slide turns a -1 into a -2 linked once to its successor; the last cycle
// stays -1-framed, linked once to the chain end.
inline ChainResult build_chain(std::int64_t k) {
    if (k < 2) throw std::invalid_argument("build_chain: k must be >= 2");
    ChainResult out;
    out.link = parallel_cycles(k, -1);
    for (std::int64_t i = 0; i + 1 < k; ++i)
        out.script.moves.push_back(SlideMove{static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1), -1});
    out.link = replay(out.link, out.script).final;
    for (std::int64_t i = 0; i + 1 < k; ++i) {
        out.chain.push_back(static_cast<std::size_t>(i));
        out.link.set_label(static_cast<std::size_t>(i), "chain-" + std::to_string(i + 1));
    }
    out.residual = static_cast<std::size_t>(k - 1);
    out.link.set_label(out.residual, "residual");
    if (!is_chain(out.link, out.chain)) throw move_error("build_chain: result is not a -2-chain");
    return out;
}

// Reservation split of a chain. The component at drop_position (1-based) is
// set aside as a separator together with everything after it; nothing is
// deleted. The active prefix must remain a nonempty chain.
struct ChainSplit {
    std::vector<std::size_t> active;
    std::size_t separator = 0;
    std::vector<std::size_t> reserved;
};

inline ChainSplit select_subchain(const FramedLink& link, const std::vector<std::size_t>& chain,
                                  std::size_t drop_position) {
    if (!is_chain(link, chain)) throw std::invalid_argument("select_subchain: indices do not form a -2-chain");
    if (drop_position < 1 || drop_position > chain.size())
        throw std::invalid_argument("select_subchain: drop position out of range");
    if (drop_position == 1)
        throw std::invalid_argument("select_subchain: dropping the first position leaves no active chain");
    ChainSplit out;
    out.active.assign(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(drop_position - 1));
    out.separator = chain[drop_position - 1];
    out.reserved.assign(chain.begin() + static_cast<std::ptrdiff_t>(drop_position), chain.end());
    return out;
}

}  // namespace hk
