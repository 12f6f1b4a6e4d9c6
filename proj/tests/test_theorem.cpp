#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <numeric>

#include "handlekit/theorem.hpp"

using namespace hk;

namespace {

// Extended-Euclid oracle, independent of the library's implementation.
std::pair<std::int64_t, std::int64_t> bezout(std::int64_t a, std::int64_t b) {
    std::int64_t s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
        std::int64_t q = a / b, r = a - q * b;
        a = b;
        b = r;
        std::int64_t ns = s0 - q * s1;
        s0 = s1;
        s1 = ns;
        std::int64_t nt = t0 - q * t1;
        t0 = t1;
        t1 = nt;
    }
    return {s0, t0};  // a_in*s0 + b_in*t0 = gcd
}

std::int64_t det3(const GluingMap& g) {
    const auto& m = g.matrix;
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

TEST_CASE("knot-surgery gluing is the expected permutation matrix") {
    GluingMap g = knot_surgery_gluing();
    // columns: m -> lambda1, l -> d, s -> lambda2 in basis (d, lambda1, lambda2)
    CHECK(g.matrix == std::array<std::array<std::int64_t, 3>, 3>{{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}});
    CHECK(det3(g) == -1);
}

TEST_CASE("log-transform gluing carries the -pq entry and unit determinant") {
    GluingMap g = log_transform_gluing(2, 3);
    CHECK(g.matrix[0][1] == -6);
    CHECK(det3(g) == 1);
    for (std::int64_t p = 1; p <= 50; ++p)
        for (std::int64_t q = p; q <= 50; ++q) {
            if (std::gcd(p, q) != 1) continue;
            GluingMap m = log_transform_gluing(p, q);
            std::int64_t d = det3(m);
            CHECK((d == 1 || d == -1));
            CHECK(m.matrix[0][1] == -p * q);
        }
    CHECK_THROWS_AS(log_transform_gluing(4, 6), std::invalid_argument);
}

TEST_CASE("general log gluing completes a primitive vector to a unimodular basis") {
    for (auto [p, pp, b, c] : {std::array<std::int64_t, 4>{2, 1, 1, 0}, {3, 2, 1, 1}, {5, 3, 2, 1}, {7, 4, 0, 1}}) {
        GluingMap g = general_log_gluing(p, pp, b, c);
        std::int64_t d = det3(g);
        CHECK((d == 1 || d == -1));
        CHECK(g.matrix[0][0] == p);
        CHECK(g.matrix[1][0] == pp * b);
        CHECK(g.matrix[2][0] == pp * c);
    }
    CHECK_THROWS_AS(general_log_gluing(2, 4, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(general_log_gluing(2, 1, 2, 4), std::invalid_argument);
}

TEST_CASE("Seifert slope coefficients satisfy the Bezout identity") {
    CHECK(seifert_coefficients(2, 3) == std::pair<std::int64_t, std::int64_t>{1, -1});
    CHECK(seifert_coefficients(3, 4) == std::pair<std::int64_t, std::int64_t>{1, -1});
    CHECK(seifert_coefficients(1, 7) == std::pair<std::int64_t, std::int64_t>{0, 1});
    for (std::int64_t p = 1; p <= 50; ++p)
        for (std::int64_t q = 1; q <= 50; ++q) {
            if (std::gcd(p, q) != 1) continue;
            auto [u, v] = seifert_coefficients(p, q);
            CHECK(p * v + q * u == 1);
            CHECK((p == 1 || std::abs(u) < p));
            CHECK((q == 1 || std::abs(v) < q));
            auto [s, t] = bezout(p, q);
            CHECK(p * s + q * t == 1);  // oracle solvability
        }
    CHECK_THROWS_AS(seifert_coefficients(2, 4), std::invalid_argument);
}

TEST_CASE("budget ledger arithmetic") {
    BudgetLedger b2 = budget_ledger(2);
    CHECK(b2.total_chain == 17);
    CHECK(b2.remainder == 13);
    CHECK(b2.stage2_need == 13);
    CHECK(b2.stage2_feasible);

    BudgetLedger b1 = budget_ledger(1);
    CHECK(b1.remainder == 5);
    CHECK(b1.stage2_need == 9);
    CHECK_FALSE(b1.stage2_feasible);

    BudgetLedger b10 = budget_ledger(10);
    CHECK(b10.remainder == 77);
    CHECK(b10.stage2_need == 45);
    CHECK(b10.stage2_feasible);

    for (std::int64_t n = 1; n <= 100; ++n) {
        BudgetLedger b = budget_ledger(n);
        CHECK(b.total_chain == b.stage1_active + b.separator + b.remainder);
        CHECK(b.stage2_feasible == (n >= 2));
    }
}

TEST_CASE("knot-surgery feasibility follows the 9n bound with a replayed certificate") {
    FeasibilityReport yes = check_knot_surgery(1, 9);
    CHECK(yes.feasible());
    REQUIRE(yes.script);
    FramedLink final = replay(*yes.script_initial, *yes.script).final;
    CHECK(final.count_dotted() == 0);
    CHECK(final == *yes.script_final);

    FeasibilityReport no = check_knot_surgery(1, 10);
    CHECK_FALSE(no.feasible());
    CHECK_FALSE(no.script.has_value());

    CHECK(check_knot_surgery(2, 18).feasible());
    for (const auto& row : yes.ledger) CHECK_FALSE(row.citation.empty());
}

TEST_CASE("log-transform feasibility tables") {
    // n = 1 routes through the torus bridge number.
    CHECK(check_log_transform(1, 2, 3).feasible());
    CHECK(check_log_transform(1, 9, 10).feasible());
    CHECK_FALSE(check_log_transform(1, 10, 11).feasible());

    // n >= 2: min <= 4 feasible, min >= 5 not guaranteed.
    FeasibilityReport r = check_log_transform(2, 3, 4);
    CHECK(r.feasible());
    REQUIRE(r.framing_tuple);
    CHECK(*r.framing_tuple == std::vector<std::int64_t>{-8, -10, -12, -14});

    CHECK(check_log_transform(7, 2, 9).feasible());
    CHECK_FALSE(check_log_transform(5, 5, 6).feasible());
    bool noted = false;
    for (const auto& n : check_log_transform(5, 5, 6).notes)
        if (n.find("other constructions") != std::string::npos) noted = true;
    CHECK(noted);

    CHECK_THROWS_AS(check_log_transform(2, 4, 6), std::invalid_argument);
}

TEST_CASE("every yes verdict replays to zero dotted components") {
    for (std::int64_t n = 1; n <= 6; ++n)
        for (auto [p, q] : {std::pair<std::int64_t, std::int64_t>{2, 3}, {2, 5}, {3, 4}, {4, 5}}) {
            FeasibilityReport r = check_log_transform(n, p, q);
            REQUIRE(r.feasible());
            REQUIRE(r.script);
            FramedLink final = replay(*r.script_initial, *r.script).final;
            CHECK(final.count_dotted() == 0);
            CHECK(final == *r.script_final);
        }
}

TEST_CASE("corollary reduction: knot surgery at the torus bridge number agrees for n = 1") {
    for (std::int64_t p = 1; p <= 30; ++p)
        for (std::int64_t q = p; q <= 30; ++q) {
            if (std::gcd(p, q) != 1 || p == q) continue;
            std::int64_t b = torus_bridge_number(p, q);
            CHECK(check_knot_surgery(1, b).feasible() == check_log_transform(1, p, q).feasible());
        }
}

TEST_CASE("trivial-knot and two-bridge stage-one paths") {
    FeasibilityReport one = check_log_transform(3, 1, 5);
    CHECK(one.feasible());
    FramedLink f1 = replay(*one.script_initial, *one.script).final;
    CHECK(f1.count_dotted() == 0);

    FeasibilityReport two = check_log_transform(4, 2, 7);
    CHECK(two.feasible());
    REQUIRE(two.framing_tuple);
    auto [s0, s1] = unlink_framings(4);
    CHECK(*two.framing_tuple == std::vector<std::int64_t>{s0, s1});
}

TEST_CASE("report JSON carries the ledger with citations") {
    nlohmann::json j = to_json(check_log_transform(2, 3, 4));
    CHECK(j.at("schema") == "rpt-1");
    CHECK(j.at("feasible") == "yes");
    CHECK(j.at("final_dotted_components") == 0);
    for (const auto& row : j.at("ledger")) CHECK_FALSE(row.at("citation").get<std::string>().empty());
    nlohmann::json n = to_json(check_knot_surgery(1, 10));
    CHECK(n.at("feasible") == "notGuaranteed");
}
