#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "handlekit/framed_link.hpp"
#include "handlekit/replay.hpp"

namespace hk {

// ---------------------------------------------------------------------------
// Canonical key: a byte string equal for two links exactly when they differ
// by a component permutation (respecting the optional color classes).
// Computed by iterated neighborhood refinement followed by backtracking
// lexicographic minimization within the refined classes; transpositions that
// are automorphisms are collapsed to keep symmetric links cheap.

namespace detail {

using Mat = std::vector<std::vector<std::int64_t>>;

inline Mat full_matrix(const FramedLink& link) {
    std::size_t n = link.size();
    Mat m(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = link.linking(i, j);
    return m;
}

// Stable integer colors from iterated signatures; refinement only splits
// classes and the class order is derived from the matrix, so the result is
// permutation-equivariant.
inline std::vector<std::size_t> refine_colors(const FramedLink& link, const Mat& m,
                                              const std::vector<int>& external) {
    const std::size_t n = link.size();
    using Sig = std::vector<std::int64_t>;
    std::vector<std::size_t> col(n, 0);
    {
        std::vector<Sig> sig(n);
        for (std::size_t i = 0; i < n; ++i) {
            Sig s{external.empty() ? 0 : external[i], link.is_two_handle(i) ? 0 : 1, m[i][i]};
            std::vector<std::int64_t> off;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) off.push_back(m[i][j] < 0 ? -m[i][j] : m[i][j]);
            std::sort(off.begin(), off.end());
            s.insert(s.end(), off.begin(), off.end());
            sig[i] = std::move(s);
        }
        std::vector<Sig> uniq = sig;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (std::size_t i = 0; i < n; ++i)
            col[i] = static_cast<std::size_t>(std::lower_bound(uniq.begin(), uniq.end(), sig[i]) - uniq.begin());
    }
    for (;;) {
        using RSig = std::pair<std::size_t, std::vector<std::pair<std::int64_t, std::size_t>>>;
        std::vector<RSig> sig(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::pair<std::int64_t, std::size_t>> nb;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) nb.push_back({m[i][j], col[j]});
            std::sort(nb.begin(), nb.end());
            sig[i] = {col[i], std::move(nb)};
        }
        std::vector<RSig> uniq = sig;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<std::size_t> next(n);
        for (std::size_t i = 0; i < n; ++i)
            next[i] = static_cast<std::size_t>(std::lower_bound(uniq.begin(), uniq.end(), sig[i]) - uniq.begin());
        if (next == col) break;
        col = std::move(next);
    }
    return col;
}

struct CanonState {
    const Mat& m;
    const std::vector<std::size_t>& col;
    std::vector<std::size_t> pos_color;  // required color per position
    std::vector<std::size_t> perm;
    std::vector<char> used;
    bool have_best = false;
    std::vector<std::vector<std::int64_t>> best_rows;
    std::vector<std::size_t> best_perm;

    // True iff swapping u and v fixes the matrix, i.e. the transposition is
    // an automorphism; such candidates lead to identical completions.
    bool swap_automorphism(std::size_t u, std::size_t v) const {
        if (m[u][u] != m[v][v]) return false;
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (k == u || k == v) continue;
            if (m[u][k] != m[v][k]) return false;
        }
        return true;
    }

    // cmp: -1 the current prefix is already strictly below best, 0 equal.
    void rec(std::size_t t, int cmp) {
        const std::size_t n = m.size();
        if (t == n) {
            if (!have_best || cmp < 0) {
                have_best = true;
                best_perm = perm;
                best_rows.assign(n, {});
                for (std::size_t a = 0; a < n; ++a) {
                    for (std::size_t b = 0; b < a; ++b) best_rows[a].push_back(m[perm[a]][perm[b]]);
                    best_rows[a].push_back(m[perm[a]][perm[a]]);
                }
            }
            return;
        }
        std::vector<std::size_t> cands;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && col[i] == pos_color[t]) cands.push_back(i);
        std::vector<std::size_t> tried;
        for (auto i : cands) {
            bool dup = false;
            for (auto u : tried)
                if (swap_automorphism(u, i)) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            tried.push_back(i);
            std::vector<std::int64_t> row;
            for (std::size_t b = 0; b < t; ++b) row.push_back(m[i][perm[b]]);
            row.push_back(m[i][i]);
            int ncmp = cmp;
            if (have_best && ncmp == 0) {
                if (row > best_rows[t]) continue;
                if (row < best_rows[t]) ncmp = -1;
            }
            perm[t] = i;
            used[i] = 1;
            rec(t + 1, ncmp);
            used[i] = 0;
        }
    }
};

}  // namespace detail

inline std::string canonical_key(const FramedLink& link, const std::vector<int>& colors = {}) {
    const std::size_t n = link.size();
    if (!colors.empty() && colors.size() != n)
        throw std::invalid_argument("canonical_key: color vector size mismatch");
    detail::Mat m = detail::full_matrix(link);
    std::vector<std::size_t> col = detail::refine_colors(link, m, colors);

    detail::CanonState st{m, col, {}, std::vector<std::size_t>(n), std::vector<char>(n, 0)};
    st.pos_color = col;
    std::sort(st.pos_color.begin(), st.pos_color.end());
    st.rec(0, 0);

    std::string key = "n" + std::to_string(n) + ";t" + std::to_string(link.three_handles()) + ";";
    for (auto i : st.best_perm) key += link.is_two_handle(i) ? '2' : '1';
    key += ';';
    for (std::size_t a = 0; a < n; ++a)
        for (auto v : st.best_rows[a]) key += std::to_string(v) + ",";
    return key;
}

// ---------------------------------------------------------------------------
// Bounded breadth-first search over declared slide moves.

struct MutualLinkingZero {
    std::size_t a;
    std::size_t b;
};

struct MatrixEquals {
    FramedLink target;  // up to component permutation
};

using GoalPredicate = std::variant<MutualLinkingZero, MatrixEquals>;

struct SlidePair {
    std::size_t rider;
    std::size_t over;
};

struct SearchProblem {
    FramedLink initial;
    GoalPredicate goal;
    std::vector<SlidePair> move_pairs;  // each declared pair is tried with both signs
    std::size_t max_depth = 0;
    std::size_t max_states = 5'000'000;  // memory budget, counted in stored states
};

struct SearchResult {
    bool found = false;
    std::optional<MoveScript> script;
    std::uint64_t states_explored = 0;
    std::uint64_t dedup_hits = 0;
    std::size_t peak_frontier = 0;
    bool memory_exceeded = false;
};

namespace detail {

inline std::vector<std::int64_t> sorted_diagonal(const FramedLink& link) {
    std::vector<std::int64_t> d;
    for (std::size_t i = 0; i < link.size(); ++i) d.push_back(link.linking(i, i));
    std::sort(d.begin(), d.end());
    return d;
}

inline bool goal_holds(const FramedLink& link, const GoalPredicate& goal, const std::string& target_key,
                       const std::vector<std::int64_t>& target_diag) {
    if (const auto* g = std::get_if<MutualLinkingZero>(&goal)) return link.linking(g->a, g->b) == 0;
    const auto& t = std::get<MatrixEquals>(goal).target;
    if (link.size() != t.size() || sorted_diagonal(link) != target_diag) return false;
    return canonical_key(link) == target_key;
}

// Dedup colors: components are distinguished by their roles in the declared
// move set (and by goal membership), so two states merge only when a
// role-preserving permutation relates them. Role-preserving permutations map
// the move set to itself only when the move set is the full rider-by-over
// product; otherwise every component gets its own color and deduplication
// degrades to exact-matrix identity, which is always sound.
inline std::vector<int> role_colors(const SearchProblem& p) {
    std::vector<int> colors(p.initial.size(), 0);
    for (const auto& mp : p.move_pairs) {
        colors[mp.rider] |= 1;
        colors[mp.over] |= 2;
    }
    if (const auto* g = std::get_if<MutualLinkingZero>(&p.goal)) {
        colors[g->a] |= 4;
        colors[g->b] |= 4;
    }
    std::size_t product = 0;
    for (std::size_t i = 0; i < colors.size(); ++i)
        for (std::size_t j = 0; j < colors.size(); ++j)
            if (i != j && (colors[i] & 1) && (colors[j] & 2)) ++product;
    std::vector<SlidePair> uniq = p.move_pairs;
    std::sort(uniq.begin(), uniq.end(),
              [](const SlidePair& a, const SlidePair& b) { return std::tie(a.rider, a.over) < std::tie(b.rider, b.over); });
    uniq.erase(std::unique(uniq.begin(), uniq.end(),
                           [](const SlidePair& a, const SlidePair& b) {
                               return std::tie(a.rider, a.over) == std::tie(b.rider, b.over);
                           }),
               uniq.end());
    if (uniq.size() != product)
        for (std::size_t i = 0; i < colors.size(); ++i) colors[i] = static_cast<int>(i + 8);
    return colors;
}

}  // namespace detail

// Deterministic BFS with canonical-key deduplication: shortest witness under
// the lexicographic move order (rider, over, sign with -1 first), or
// found=false within max_depth. Exceeding the state budget is the distinct
// memory_exceeded outcome. Any returned script is replayed against the goal
// before being returned.
inline SearchResult search(const SearchProblem& p) {
    for (const auto& mp : p.move_pairs) {
        p.initial.check_index(mp.rider);
        p.initial.check_index(mp.over);
        if (mp.rider == mp.over) throw std::invalid_argument("search: declared pair slides over itself");
        if (!p.initial.is_two_handle(mp.rider) || !p.initial.is_two_handle(mp.over))
            throw std::invalid_argument("search: declared pairs must be 2-handles");
    }
    if (const auto* g = std::get_if<MutualLinkingZero>(&p.goal)) {
        p.initial.check_index(g->a);
        p.initial.check_index(g->b);
        if (g->a == g->b) throw std::invalid_argument("search: mutual-linking goal names one component twice");
    } else if (const auto* g2 = std::get_if<MatrixEquals>(&p.goal)) {
        if (g2->target.size() != p.initial.size())
            throw std::invalid_argument("search: matrix goal has a different component count than the initial link");
    }
    std::vector<SlideMove> moves;
    for (const auto& mp : p.move_pairs)
        for (int s : {-1, +1}) moves.push_back(SlideMove{mp.rider, mp.over, s});
    std::sort(moves.begin(), moves.end(), [](const SlideMove& a, const SlideMove& b) {
        return std::tie(a.rider, a.over, a.sign) < std::tie(b.rider, b.over, b.sign);
    });
    moves.erase(std::unique(moves.begin(), moves.end(),
                            [](const SlideMove& a, const SlideMove& b) {
                                return std::tie(a.rider, a.over, a.sign) == std::tie(b.rider, b.over, b.sign);
                            }),
                moves.end());

    std::vector<int> colors = detail::role_colors(p);
    std::string target_key;
    std::vector<std::int64_t> target_diag;
    if (const auto* g = std::get_if<MatrixEquals>(&p.goal)) {
        target_key = canonical_key(g->target);
        target_diag = detail::sorted_diagonal(g->target);
    }

    SearchResult res;

    struct Node {
        std::size_t parent;  // index into nodes, or npos for the root
        std::size_t move;    // index into moves
        std::size_t depth;
    };
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<Node> nodes;
    std::unordered_set<std::string> seen;
    std::queue<std::size_t> frontier;

    auto rebuild = [&](std::size_t id) {
        std::vector<std::size_t> path;
        for (std::size_t cur = id; nodes[cur].parent != npos; cur = nodes[cur].parent)
            path.push_back(nodes[cur].move);
        std::reverse(path.begin(), path.end());
        FramedLink link = p.initial;
        for (auto mi : path) link = slide(link, moves[mi]);
        return std::pair{link, path};
    };

    auto extract_script = [&](std::size_t id) {
        MoveScript script;
        for (auto mi : rebuild(id).second) script.moves.push_back(moves[mi]);
        return script;
    };

    auto accept = [&](std::size_t id) {
        res.found = true;
        MoveScript script = extract_script(id);
        FramedLink final = replay(p.initial, script).final;
        if (!detail::goal_holds(final, p.goal, target_key, target_diag))
            throw move_error("search: witness fails the goal on replay");
        res.script = std::move(script);
    };

    nodes.push_back({npos, 0, 0});
    seen.insert(canonical_key(p.initial, colors));
    res.states_explored = 1;
    if (detail::goal_holds(p.initial, p.goal, target_key, target_diag)) {
        accept(0);
        return res;
    }
    frontier.push(0);
    res.peak_frontier = 1;

    while (!frontier.empty()) {
        std::size_t id = frontier.front();
        frontier.pop();
        if (nodes[id].depth >= p.max_depth) continue;
        FramedLink link = rebuild(id).first;
        for (std::size_t mi = 0; mi < moves.size(); ++mi) {
            FramedLink child = slide(link, moves[mi]);
            std::string key = canonical_key(child, colors);
            if (!seen.insert(key).second) {
                ++res.dedup_hits;
                continue;
            }
            if (nodes.size() >= p.max_states) {
                res.memory_exceeded = true;
                return res;
            }
            nodes.push_back({id, mi, nodes[id].depth + 1});
            ++res.states_explored;
            if (detail::goal_holds(child, p.goal, target_key, target_diag)) {
                accept(nodes.size() - 1);
                return res;
            }
            frontier.push(nodes.size() - 1);
            if (frontier.size() > res.peak_frontier) res.peak_frontier = frontier.size();
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Cross-validation of a constructive script against the search oracle.

struct CrossValidation {
    bool script_goal_ok = false;
    bool witness_found = false;
    bool matrices_agree = false;  // meaningful iff witness_found
    SearchResult search;
    FramedLink constructive_final;
    std::optional<FramedLink> witness_final;
    std::string diagnostic;

    bool pass() const { return script_goal_ok && (!witness_found || matrices_agree); }
};

inline CrossValidation cross_validate(const MoveScript& script, const SearchProblem& problem) {
    CrossValidation out;
    out.constructive_final = replay(problem.initial, script).final;
    std::string target_key;
    std::vector<std::int64_t> target_diag;
    if (const auto* g = std::get_if<MatrixEquals>(&problem.goal)) {
        target_key = canonical_key(g->target);
        target_diag = detail::sorted_diagonal(g->target);
    }
    out.script_goal_ok = detail::goal_holds(out.constructive_final, problem.goal, target_key, target_diag);
    if (!out.script_goal_ok) out.diagnostic = "constructive script's final link fails the goal";
    out.search = search(problem);
    out.witness_found = out.search.found;
    if (out.witness_found) {
        out.witness_final = replay(problem.initial, *out.search.script).final;
        out.matrices_agree = canonical_key(out.constructive_final) == canonical_key(*out.witness_final);
        if (!out.matrices_agree) out.diagnostic = "constructive and witness final matrices disagree";
    }
    return out;
}

inline nlohmann::json to_json(const SearchResult& r) {
    nlohmann::json j{{"found", r.found},
                     {"states_explored", r.states_explored},
                     {"dedup_hits", r.dedup_hits},
                     {"peak_frontier", r.peak_frontier},
                     {"memory_exceeded", r.memory_exceeded}};
    if (r.script) j["script"] = to_json(*r.script);
    return j;
}

inline nlohmann::json to_json(const CrossValidation& cv) {
    nlohmann::json j{{"pass", cv.pass()},
                     {"script_goal_ok", cv.script_goal_ok},
                     {"witness_found", cv.witness_found},
                     {"search", to_json(cv.search)},
                     {"constructive_final", to_json(cv.constructive_final)}};
    if (cv.witness_found) j["matrices_agree"] = cv.matrices_agree;
    if (cv.witness_final) j["witness_final"] = to_json(*cv.witness_final);
    if (!cv.diagnostic.empty()) j["diagnostic"] = cv.diagnostic;
    return j;
}

}  // namespace hk
