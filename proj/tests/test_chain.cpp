#include <catch2/catch_amalgamated.hpp>

#include "handlekit/chain.hpp"
#include "handlekit/invariants.hpp"

using namespace hk;

TEST_CASE("parallel cycles and push-offs") {
    FramedLink one = parallel_cycles(1, -1);
    REQUIRE(one.size() == 1);
    CHECK(one.framing(0) == -1);

    FramedLink four = parallel_cycles(4, -1);
    for (std::size_t i = 0; i < 4; ++i) CHECK(four.framing(i) == -1);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) CHECK(four.linking(i, j) == 0);

    FramedLink po = push_offs(3, -1);
    CHECK(po.linking(0, 2) == -1);
    FramedLink z = push_offs(2, 0);
    CHECK(z.linking(0, 1) == 0);
    CHECK_THROWS_AS(parallel_cycles(0, -1), std::invalid_argument);
}

TEST_CASE("chain recognition") {
    FramedLink c = chain_link(3);
    CHECK(is_chain(c, {0, 1, 2}));
    CHECK_FALSE(is_chain(c, {0, 2}));
    CHECK(is_chain(c, {0, 1}));
    c.set_framing(1, -3);
    CHECK_FALSE(is_chain(c, {0, 1, 2}));
}

TEST_CASE("chain construction matches the figure labels for small k") {
    ChainResult r2 = build_chain(2);
    CHECK(r2.link.framing(0) == -2);
    CHECK(r2.link.framing(1) == -1);
    CHECK(r2.link.linking(0, 1) == 1);

    ChainResult r4 = build_chain(4);
    REQUIRE(r4.chain == std::vector<std::size_t>{0, 1, 2});
    CHECK(r4.residual == 3);
    for (auto i : r4.chain) CHECK(r4.link.framing(i) == -2);
    CHECK(r4.link.framing(3) == -1);
    CHECK(is_chain(r4.link, r4.chain));
    // Residual -1 is linked once to the chain end; figure leaves the value
    // unlabeled, the script fixes it.
    CHECK(r4.link.linking(3, 2) == 1);
    CHECK(r4.link.linking(3, 0) == 0);
    CHECK(r4.link.linking(3, 1) == 0);
}

TEST_CASE("chain construction replays and conserves invariants up to k = 18") {
    for (std::int64_t k = 2; k <= 18; ++k) {
        ChainResult r = build_chain(k);
        CHECK(r.script.moves.size() == static_cast<std::size_t>(k - 1));
        CHECK(replay(parallel_cycles(k, -1), r.script).final == r.link);
        CHECK(invariants(parallel_cycles(k, -1)) == invariants(r.link));
        CHECK(is_chain(r.link, r.chain));
        CHECK(r.link.framing(r.residual) == -1);
    }
    // buildChain(9n) at n=1 contains the 9n-1 = 8 chain of the construction.
    ChainResult r9 = build_chain(9);
    CHECK(r9.chain.size() == 8);
}

TEST_CASE("reservation split of a chain") {
    ChainResult r = build_chain(9);  // chain length 8 (n = 1)
    ChainSplit s = select_subchain(r.link, r.chain, 3);
    CHECK(s.active.size() == 2);
    CHECK(s.separator == r.chain[2]);
    CHECK(s.reserved.size() == 5);
    CHECK(is_chain(r.link, s.active));

    ChainResult r18 = build_chain(18);  // chain length 17 (n = 2)
    ChainSplit s2 = select_subchain(r18.link, r18.chain, 4);
    CHECK(s2.active.size() == 3);
    CHECK(s2.reserved.size() == 13);

    CHECK_THROWS_AS(select_subchain(r.link, r.chain, 1), std::invalid_argument);
    CHECK_THROWS_AS(select_subchain(r.link, r.chain, 9), std::invalid_argument);
    CHECK_THROWS_AS(select_subchain(r.link, {0, 2}, 2), std::invalid_argument);
}
