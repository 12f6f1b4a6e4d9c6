#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "handlekit/chain.hpp"
#include "handlekit/oracle.hpp"
#include "handlekit/unlink.hpp"

using namespace hk;

namespace {

FramedLink permuted(const FramedLink& l, const std::vector<std::size_t>& perm) {
    return l.restricted_to(perm);
}

SearchProblem unlink_problem(std::int64_t m, std::int64_t chain_len, std::size_t max_depth) {
    SearchProblem p;
    p.initial.add_two_handle(-m);
    p.initial.add_two_handle(-m);
    p.initial.set_linking(0, 1, -m);
    std::vector<std::size_t> chain;
    for (std::int64_t i = 0; i < chain_len; ++i) chain.push_back(p.initial.add_two_handle(-2));
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) p.initial.set_linking(chain[i], chain[i + 1], 1);
    p.goal = MutualLinkingZero{0, 1};
    for (std::size_t h : {std::size_t{0}, std::size_t{1}})
        for (auto c : chain) p.move_pairs.push_back({h, c});
    p.max_depth = max_depth;
    return p;
}

}  // namespace

TEST_CASE("canonical keys are permutation invariant") {
    FramedLink c = chain_link(3);
    c.add_two_handle(-1);
    c.set_linking(2, 3, 1);
    std::vector<std::size_t> perm{0, 1, 2, 3};
    std::string key = canonical_key(c);
    std::mt19937_64 rng(99);
    for (int t = 0; t < 50; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(canonical_key(permuted(c, perm)) == key);
    }
}

TEST_CASE("canonical keys distinguish a chain from split components") {
    FramedLink chain2 = chain_link(2);
    FramedLink split;
    split.add_two_handle(-2);
    split.add_two_handle(-2);
    CHECK(canonical_key(chain2) != canonical_key(split));
}

TEST_CASE("canonical key is stable across repeated computation") {
    FramedLink c = chain_link(4);
    CHECK(canonical_key(c) == canonical_key(c));
}

TEST_CASE("dedup soundness: equal keys imply a relating permutation, exhaustively to 5 components") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> entry(-2, 2), dim(1, 5);
    for (int t = 0; t < 300; ++t) {
        int n = dim(rng);
        FramedLink a;
        for (int i = 0; i < n; ++i) a.add_two_handle(entry(rng));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) a.set_linking(i, j, entry(rng));
        FramedLink b;
        for (int i = 0; i < n; ++i) b.add_two_handle(entry(rng));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) b.set_linking(i, j, entry(rng));
        // Exhaustive: keys equal iff some permutation relates the links.
        std::vector<std::size_t> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        bool related = false;
        do {
            if (permuted(a, perm) == b) related = true;
        } while (!related && std::next_permutation(perm.begin(), perm.end()));
        CHECK((canonical_key(a) == canonical_key(b)) == related);
    }
}

TEST_CASE("highly symmetric links canonicalize without blowup") {
    CHECK_NOTHROW(canonical_key(parallel_cycles(18, -1)));
    CHECK_NOTHROW(canonical_key(push_offs(12, -1)));
}

TEST_CASE("goal at depth zero returns the empty script") {
    SearchProblem p = unlink_problem(1, 2, 0);
    p.initial.set_linking(0, 1, 0);
    SearchResult r = search(p);
    REQUIRE(r.found);
    CHECK(r.script->moves.empty());
}

TEST_CASE("m = 1 unlink witness is found with the figure framings") {
    SearchProblem p = unlink_problem(1, 2, 8);
    SearchResult r = search(p);
    REQUIRE(r.found);
    FramedLink f = replay(p.initial, *r.script).final;
    CHECK(f.linking(0, 1) == 0);
    CHECK(f.framing(0) == -3);
    CHECK(f.framing(1) == -3);
    CHECK(r.script->moves.size() == 2);
}

TEST_CASE("wrong chain budget never reaches the untying framings") {
    // Zeroing the single linking entry is cheap (two cross-slides through one
    // chain component do it), so the linking-only goal still succeeds; what a
    // short chain cannot deliver is the untying with the closed-form framings.
    SearchProblem p = unlink_problem(2, 2, 10);
    SearchResult r = search(p);
    REQUIRE(r.found);
    FramedLink f = replay(p.initial, *r.script).final;
    CHECK(f.linking(0, 1) == 0);
    auto [f0, f1] = unlink_framings(2);
    CHECK_FALSE((f.framing(0) == f0 && f.framing(1) == f1));
    CHECK_FALSE((f.framing(0) == f1 && f.framing(1) == f0));

    // The full matrix goal (pair untied at the closed-form framings, chain
    // restored) is out of reach for the short chain at any searched depth.
    FramedLink target = p.initial;
    target.set_framing(0, f0);
    target.set_framing(1, f1);
    target.set_linking(0, 1, 0);
    SearchProblem q = unlink_problem(2, 2, 6);
    q.goal = MatrixEquals{target};
    SearchResult s = search(q);
    CHECK_FALSE(s.found);
    CHECK_FALSE(s.memory_exceeded);
    CHECK(s.states_explored > 0);
}

TEST_CASE("memory budget exhaustion is a distinct outcome") {
    SearchProblem p = unlink_problem(3, 4, 25);
    p.max_states = 10;
    SearchResult r = search(p);
    CHECK(r.memory_exceeded);
    CHECK_FALSE(r.found);
}

TEST_CASE("search monotonicity: deeper bounds keep the witness") {
    SearchProblem shallow = unlink_problem(2, 3, 3);
    SearchProblem deep = unlink_problem(2, 3, 6);
    SearchResult rs = search(shallow);
    SearchResult rd = search(deep);
    REQUIRE(rs.found);
    REQUIRE(rd.found);
    CHECK(rs.script->moves.size() == rd.script->moves.size());
}

TEST_CASE("determinism: identical problems give identical results") {
    SearchProblem p = unlink_problem(2, 3, 6);
    SearchResult a = search(p);
    SearchResult b = search(p);
    CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("oracle reaches the constructive final matrix for m <= 3") {
    for (std::int64_t m = 1; m <= 3; ++m) {
        SearchProblem p = unlink_problem(m, m + 1, static_cast<std::size_t>(m) + 1);
        std::vector<std::size_t> chain;
        for (std::int64_t i = 0; i <= m; ++i) chain.push_back(static_cast<std::size_t>(i) + 2);
        UnlinkResult ur = unlink_pair(p.initial, {0, 1}, chain);
        // The matrix goal certifies the reported final matrix, not just the
        // untied linking: shorter linking-only witnesses can exist for even m
        // with different framings.
        p.goal = MatrixEquals{ur.link};
        CrossValidation cv = cross_validate(ur.script, p);
        CHECK(cv.pass());
        CHECK(cv.witness_found);
        CHECK(cv.matrices_agree);
        FramedLink wf = replay(p.initial, *cv.search.script).final;
        auto [f0, f1] = unlink_framings(m);
        CHECK(((wf.framing(0) == f0 && wf.framing(1) == f1) || (wf.framing(0) == f1 && wf.framing(1) == f0)));
    }
}

TEST_CASE("chain-builder script cross-validates against a matrix goal") {
    ChainResult res = build_chain(4);
    SearchProblem p;
    p.initial = parallel_cycles(4, -1);
    p.goal = MatrixEquals{res.link};
    for (std::size_t i = 0; i + 1 < 4; ++i) {
        p.move_pairs.push_back({i, i + 1});
        p.move_pairs.push_back({i + 1, i});
    }
    p.max_depth = 3;
    CrossValidation cv = cross_validate(res.script, p);
    CHECK(cv.pass());
    CHECK(cv.witness_found);

    // Negative control: a truncated script fails the goal and is reported.
    MoveScript truncated = res.script;
    truncated.moves.pop_back();
    CrossValidation bad = cross_validate(truncated, p);
    CHECK_FALSE(bad.pass());
    CHECK_FALSE(bad.script_goal_ok);
    CHECK_FALSE(bad.diagnostic.empty());
}

TEST_CASE("declared move pairs are validated") {
    SearchProblem p = unlink_problem(1, 2, 2);
    p.move_pairs.push_back({0, 0});
    CHECK_THROWS_AS(search(p), std::invalid_argument);
    SearchProblem q = unlink_problem(1, 2, 2);
    q.move_pairs.push_back({0, 9});
    CHECK_THROWS_AS(search(q), move_error);
}
