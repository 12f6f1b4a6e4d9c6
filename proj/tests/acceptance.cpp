#include <chrono>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "handlekit/chain.hpp"
#include "handlekit/invariants.hpp"
#include "handlekit/oracle.hpp"
#include "handlekit/sl2z.hpp"
#include "handlekit/theorem.hpp"
#include "handlekit/unlink.hpp"

using namespace hk;
using clk = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, double seconds, double budget) {
    bool pass = ok && seconds < budget;
    if (!pass) ++failures;
    std::printf("%s  %-24s %.2fs (budget %.0fs)%s\n", pass ? "PASS" : "FAIL", name.c_str(), seconds, budget,
                ok ? "" : " [property violated]");
    std::fflush(stdout);
}

template <typename F>
void criterion(const std::string& name, double budget, F f) {
    auto t0 = clk::now();
    bool ok = false;
    try {
        ok = f();
    } catch (const std::exception& e) {
        std::printf("     %s threw: %s\n", name.c_str(), e.what());
    }
    report(name, ok, std::chrono::duration<double>(clk::now() - t0).count(), budget);
}

bool monodromy() {
    for (int n = 1; n <= 20; ++n) {
        Eq1Report r = verify_eq1(n);
        if (!r.pass()) return false;
        if (r.a_count != 9 * n || r.b_count != 3 * n) return false;
        if (eval(parse_word("(ab)").pow(6 * n)) != Sl2Matrix::identity()) return false;
    }
    return true;
}

bool slide_conservation() {
    std::mt19937_64 rng(20260824);
    std::uniform_int_distribution<int> dim(2, 12), entry(-9, 9);
    for (int t = 0; t < 10000; ++t) {
        int n = dim(rng);
        FramedLink l;
        for (int i = 0; i < n; ++i) l.add_two_handle(entry(rng));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) l.set_linking(i, j, entry(rng));
        std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(n) - 1);
        std::size_t r = pick(rng), o = pick(rng);
        if (r == o) o = (o + 1) % static_cast<std::size_t>(n);
        int sign = (rng() & 1) ? 1 : -1;
        FramedLink before = l;
        l = slide(l, SlideMove{r, o, sign});  // slide() cross-checks the E^T L E reconstruction
        if (invariants(before) != invariants(l)) return false;
        l = slide(l, SlideMove{r, o, -sign});
        if (l != before) return false;
    }
    return true;
}

bool chain_construction() {
    for (std::int64_t k = 2; k <= 18; ++k) {
        ChainResult r = build_chain(k);
        if (r.script.moves.size() != static_cast<std::size_t>(k - 1)) return false;
        if (r.chain.size() != static_cast<std::size_t>(k - 1)) return false;
        FramedLink expected = chain_link(k - 1);
        std::size_t res = expected.add_two_handle(-1, "residual");
        expected.set_linking(r.chain.size() - 1, res, 1);
        if (r.link != expected) return false;
        if (replay(parallel_cycles(k, -1), r.script).final != r.link) return false;
    }
    // Independent cofactor recursion for |det ChainSpec(m)| = m + 1.
    std::int64_t d0 = 1, d1 = -2;
    for (std::int64_t m = 1; m <= 18; ++m) {
        if (invariants(chain_link(m)).abs_determinant != hk::bigint(m + 1)) return false;
        if (hk::bigint(d1 < 0 ? -d1 : d1) != invariants(chain_link(m)).abs_determinant) return false;
        std::int64_t d2 = -2 * d1 - d0;
        d0 = d1;
        d1 = d2;
    }
    return true;
}

SearchProblem unlink_problem(std::int64_t m) {
    SearchProblem p;
    p.initial.add_two_handle(-m);
    p.initial.add_two_handle(-m);
    p.initial.set_linking(0, 1, -m);
    std::vector<std::size_t> chain;
    for (std::int64_t i = 0; i <= m; ++i) chain.push_back(p.initial.add_two_handle(-2));
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) p.initial.set_linking(chain[i], chain[i + 1], 1);
    p.goal = MutualLinkingZero{0, 1};
    for (std::size_t h : {std::size_t{0}, std::size_t{1}})
        for (auto c : chain) p.move_pairs.push_back({h, c});
    p.max_depth = 25;
    return p;
}

bool unlink_framings_criterion() {
    if (unlink_framings(1) != std::pair<std::int64_t, std::int64_t>{-3, -3}) return false;
    if (unlink_framings(2) != std::pair<std::int64_t, std::int64_t>{-4, -6}) return false;
    if (unlink_framings(3) != std::pair<std::int64_t, std::int64_t>{-7, -7}) return false;
    for (std::int64_t m = 1; m <= 10; ++m) {
        SearchProblem p = unlink_problem(m);
        std::vector<std::size_t> chain;
        for (std::int64_t i = 0; i <= m; ++i) chain.push_back(static_cast<std::size_t>(i) + 2);
        UnlinkResult r = unlink_pair(p.initial, {0, 1}, chain);
        if (r.framings != unlink_framings(m)) return false;
        if (r.link.linking(0, 1) != 0) return false;
    }
    return true;
}

bool unlink_oracle() {
    for (std::int64_t m = 1; m <= 5; ++m) {
        SearchProblem p = unlink_problem(m);
        std::vector<std::size_t> chain;
        for (std::int64_t i = 0; i <= m; ++i) chain.push_back(static_cast<std::size_t>(i) + 2);
        UnlinkResult r = unlink_pair(p.initial, {0, 1}, chain);
        p.goal = MatrixEquals{r.link};  // agreement up to permutation via canonical keys
        CrossValidation cv = cross_validate(r.script, p);
        if (!cv.pass() || !cv.witness_found || !cv.matrices_agree) return false;
    }
    return true;
}

bool budget_arithmetic() {
    for (std::int64_t n = 1; n <= 100; ++n) {
        BudgetLedger b = budget_ledger(n);
        if (b.stage2_need != 4 * n + 5) return false;
        if (b.stage2_feasible != (4 * n + 5 <= 8 * n - 3)) return false;
        if (b.stage2_feasible != (n >= 2)) return false;
    }
    for (std::int64_t n = 1; n <= 50; ++n)
        if (stage_two_chain_needs(n).total_with_separator != 4 * n + 5) return false;
    for (std::int64_t n = 2; n <= 20; ++n) {
        auto t = double_unlink_framings(n);
        auto [s0, s1] = unlink_framings(n);
        auto [a0, a1] = unlink_framings(-s0);
        auto [b0, b1] = unlink_framings(-s1);
        if (t != std::array<std::int64_t, 4>{a0, a1, b0, b1}) return false;
    }
    if (double_unlink_framings(2) != std::array<std::int64_t, 4>{-8, -10, -12, -14}) return false;
    if (double_unlink_framings(3) != std::array<std::int64_t, 4>{-15, -15, -15, -15}) return false;
    return true;
}

bool replays_clean(const FeasibilityReport& r) {
    if (!r.script || !r.script_initial || !r.script_final) return false;
    FramedLink f = replay(*r.script_initial, *r.script).final;
    return f.count_dotted() == 0 && f == *r.script_final;
}

bool theorem_tables() {
    for (std::int64_t p = 1; p <= 12; ++p)
        for (std::int64_t q = p + 1; q <= 13; ++q) {
            if (std::gcd(p, q) != 1) continue;
            FeasibilityReport r = check_log_transform(1, p, q);
            bool expect = torus_bridge_number(p, q) <= 9;
            if (r.feasible() != expect) return false;
            if (r.feasible() && !replays_clean(r)) return false;
        }
    if (check_knot_surgery(1, 10).feasible()) return false;
    if (check_log_transform(1, 10, 11).feasible()) return false;
    for (std::int64_t n = 2; n <= 20; ++n)
        for (std::int64_t p = 2; p <= 4; ++p)
            for (std::int64_t q = p + 1; q <= 5; ++q) {
                if (std::gcd(p, q) != 1) continue;
                FeasibilityReport r = check_log_transform(n, p, q);
                if (!r.feasible() || !replays_clean(r)) return false;
            }
    // Yasui's four pairs, all n up to 20 (covered above except (2,5)).
    for (std::int64_t n = 1; n <= 20; ++n) {
        FeasibilityReport r = check_log_transform(n, 2, 5);
        if (!r.feasible() || !replays_clean(r)) return false;
    }
    return true;
}

bool gluing_data() {
    for (std::int64_t p = 1; p <= 50; ++p)
        for (std::int64_t q = 1; q <= 50; ++q) {
            if (std::gcd(p, q) != 1) continue;
            GluingMap g = log_transform_gluing(p, q);  // ctor path asserts unimodularity
            std::int64_t d = g.matrix[0][0] * (g.matrix[1][1] * g.matrix[2][2] - g.matrix[1][2] * g.matrix[2][1]) -
                             g.matrix[0][1] * (g.matrix[1][0] * g.matrix[2][2] - g.matrix[1][2] * g.matrix[2][0]) +
                             g.matrix[0][2] * (g.matrix[1][0] * g.matrix[2][1] - g.matrix[1][1] * g.matrix[2][0]);
            if (d != 1 && d != -1) return false;
            if (g.matrix[0][1] != -p * q) return false;
            auto [u, v] = seifert_coefficients(p, q);
            if (p * v + q * u != 1) return false;
        }
    return true;
}

std::string report_bundle() {
    std::string out;
    out += to_json(check_log_transform(2, 3, 4)).dump();
    out += to_json(check_knot_surgery(1, 9)).dump();
    out += to_json(check_log_transform(1, 10, 11)).dump();
    out += to_json(verify_eq1(3)).dump();
    SearchProblem p = unlink_problem(2);
    out += to_json(search(p)).dump();
    return out;
}

bool determinism() { return report_bundle() == report_bundle(); }

}  // namespace

int main() {
    criterion("monodromy", 1.0, monodromy);
    criterion("slide-conservation", 30.0, slide_conservation);
    criterion("chain-construction", 5.0, chain_construction);
    criterion("unlink-framings", 5.0, unlink_framings_criterion);
    criterion("unlink-oracle", 120.0, unlink_oracle);
    criterion("budget-arithmetic", 1.0, budget_arithmetic);
    criterion("theorem-tables", 10.0, theorem_tables);
    criterion("gluing-data", 1.0, gluing_data);
    criterion("determinism", 10.0, determinism);
    return failures == 0 ? 0 : 1;
}
