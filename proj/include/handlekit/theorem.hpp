#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "handlekit/braid.hpp"
#include "handlekit/chain.hpp"
#include "handlekit/framed_link.hpp"
#include "handlekit/replay.hpp"
#include "handlekit/unlink.hpp"

namespace hk {

// ---------------------------------------------------------------------------
// Gluing data

enum class GluingKind { KnotSurgery, LogTransform, GeneralLog };

// H1-level gluing map of a torus-boundary regluing: a 3x3 unimodular matrix
// whose columns are the images of the ordered basis (m, l, s) expressed in
// the ordered basis (d, lambda1, lambda2).
struct GluingMap {
    GluingKind kind;
    std::array<std::array<std::int64_t, 3>, 3> matrix;  // matrix[row][col]

    std::int64_t det() const {
        const auto& m = matrix;
        return ck_sub(
            ck_add(ck_mul(m[0][0], ck_sub(ck_mul(m[1][1], m[2][2]), ck_mul(m[1][2], m[2][1]))),
                   ck_mul(m[0][2], ck_sub(ck_mul(m[1][0], m[2][1]), ck_mul(m[1][1], m[2][0])))),
            ck_mul(m[0][1], ck_sub(ck_mul(m[1][0], m[2][2]), ck_mul(m[1][2], m[2][0]))));
    }
};

namespace detail {
inline void check_unimodular(const GluingMap& g, const char* what) {
    std::int64_t d = g.det();
    if (d != 1 && d != -1) throw move_error(std::string(what) + ": |det| != 1");
}
}  // namespace detail

// Knot-surgery gluing: m -> lambda1, l -> d, s -> lambda2. A permutation
// matrix on the chosen bases.
inline GluingMap knot_surgery_gluing() {
    GluingMap g{GluingKind::KnotSurgery, {{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}}};
    detail::check_unimodular(g, "knot_surgery_gluing");
    return g;
}

// Log-transform-as-twisted-knot-surgery gluing for the (p,q)-torus knot:
// m -> d, l -> lambda1 - pq*d, s -> lambda2.
inline GluingMap log_transform_gluing(std::int64_t p, std::int64_t q) {
    if (p < 1 || q < 1) throw std::invalid_argument("log_transform_gluing: p,q must be positive");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("log_transform_gluing: p,q must be coprime");
    GluingMap g{GluingKind::LogTransform, {{{1, ck_neg(ck_mul(p, q)), 0}, {0, 1, 0}, {0, 0, 1}}}};
    detail::check_unimodular(g, "log_transform_gluing");
    return g;
}

// Single log transformation of multiplicity p: d -> p'*gamma + p*d with
// gamma = b*lambda1 + c*lambda2 primitive. The d-image column is completed
// to a unimodular basis deterministically.
inline GluingMap general_log_gluing(std::int64_t p, std::int64_t pp, std::int64_t b, std::int64_t c) {
    if (p < 1) throw std::invalid_argument("general_log_gluing: multiplicity p must be >= 1");
    if (std::gcd(p, pp) != 1) throw std::invalid_argument("general_log_gluing: p, p' must be coprime");
    if (std::gcd(b, c) != 1) throw std::invalid_argument("general_log_gluing: gamma coefficients must be coprime");
    std::array<std::int64_t, 3> v{p, ck_mul(pp, b), ck_mul(pp, c)};
    // Complete the primitive vector v to a unimodular matrix with v as the
    // first column: Bezout in (v0,v1), then in (g, v2).
    std::int64_t g1 = std::gcd(v[0], v[1]);
    std::int64_t x0 = 0, x1 = 0;
    {  // x0*v0 + x1*v1 = g1
        std::int64_t a = v[0], bb = v[1], s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (bb != 0) {
            std::int64_t q = a / bb, r = a - q * bb;
            a = bb; bb = r;
            std::int64_t ns = s0 - q * s1; s0 = s1; s1 = ns;
            std::int64_t nt = t0 - q * t1; t0 = t1; t1 = nt;
        }
        if (a < 0) { a = -a; s0 = -s0; t0 = -t0; }
        x0 = s0; x1 = t0;
    }
    std::int64_t y0 = 0, y1 = 0;
    {  // y0*g1 + y1*v2 = 1 (gcd(g1, v2) = 1 since v is primitive)
        std::int64_t a = g1, bb = v[2], s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (bb != 0) {
            std::int64_t q = a / bb, r = a - q * bb;
            a = bb; bb = r;
            std::int64_t ns = s0 - q * s1; s0 = s1; s1 = ns;
            std::int64_t nt = t0 - q * t1; t0 = t1; t1 = nt;
        }
        if (a < 0) { a = -a; s0 = -s0; t0 = -t0; }
        if (a != 1) throw std::invalid_argument("general_log_gluing: d-image is not primitive");
        y0 = s0; y1 = t0;
    }
    std::int64_t u0 = v[0] / g1, u1 = v[1] / g1;
    GluingMap g{GluingKind::GeneralLog,
                {{{v[0], ck_neg(x1), ck_neg(ck_mul(y1, u0))},
                  {v[1], x0, ck_neg(ck_mul(y1, u1))},
                  {v[2], 0, y0}}}};
    detail::check_unimodular(g, "general_log_gluing");
    return g;
}

// Bezout pair (u, v) with p*v + q*u = 1, u normalized to least absolute
// value mod p (positive on ties). These are the Seifert slope coefficients
// of the two Dehn surgeries presenting the torus-knot complement.
inline std::pair<std::int64_t, std::int64_t> seifert_coefficients(std::int64_t p, std::int64_t q) {
    if (p < 1 || q < 1) throw std::invalid_argument("seifert_coefficients: p,q must be positive");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("seifert_coefficients: p,q must be coprime");
    if (p == 1) return {0, 1};
    // Solve q*u == 1 (mod p).
    std::int64_t a = p, b = q % p, t0 = 0, t1 = 1;
    while (b != 0) {
        std::int64_t qq = a / b, r = a - qq * b;
        a = b; b = r;
        std::int64_t nt = t0 - qq * t1; t0 = t1; t1 = nt;
    }
    std::int64_t u = ((t0 % p) + p) % p;  // q*u == 1 (mod p)
    if (2 * u > p) u -= p;
    std::int64_t v = (1 - q * u) / p;
    if (p * v + q * u != 1) throw move_error("seifert_coefficients: Bezout identity failed");
    return {u, v};
}

// ---------------------------------------------------------------------------
// Budget arithmetic

struct BudgetLedger {
    std::int64_t n;
    std::int64_t total_chain;    // 9n - 1
    std::int64_t stage1_active;  // n + 1
    std::int64_t separator;      // 1
    std::int64_t remainder;      // 8n - 3
    std::int64_t stage2_need;    // 4n + 5
    bool stage2_feasible;        // 4n + 5 <= 8n - 3, i.e. n >= 2
};

inline BudgetLedger budget_ledger(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("budget_ledger: n must be >= 1");
    BudgetLedger out{};
    out.n = n;
    out.total_chain = 9 * n - 1;
    out.stage1_active = n + 1;
    out.separator = 1;
    out.remainder = out.total_chain - out.stage1_active - out.separator;
    out.stage2_need = 4 * n + 5;
    out.stage2_feasible = out.stage2_need <= out.remainder;
    return out;
}

// ---------------------------------------------------------------------------
// Script builder: a working link plus the move list that produced it, with
// stable component ids that survive cancellations.

class ScriptBuilder {
  public:
    using Id = std::size_t;

    explicit ScriptBuilder(FramedLink initial) : initial_(initial), cur_(std::move(initial)) {
        for (std::size_t i = 0; i < cur_.size(); ++i) index_of_id_.push_back(i);
    }

    Id id_at(std::size_t index) const {
        for (Id id = 0; id < index_of_id_.size(); ++id)
            if (index_of_id_[id] == index) return id;
        throw move_error("ScriptBuilder: no id at index " + std::to_string(index));
    }

    std::size_t index(Id id) const {
        if (id >= index_of_id_.size() || index_of_id_[id] == npos)
            throw move_error("ScriptBuilder: component id " + std::to_string(id) + " no longer present");
        return index_of_id_[id];
    }

    void slide(Id rider, Id over, int sign) {
        apply(SlideMove{index(rider), index(over), sign});
    }

    Id add_canceling_pair(const std::string& label = {}) {
        apply(AddCancelingPairMove{});
        index_of_id_.push_back(cur_.size() - 1);
        if (!label.empty()) cur_.set_label(cur_.size() - 1, label);
        return index_of_id_.size() - 1;
    }

    void cancel12(Id dotted, Id handle) {
        std::size_t a = index(dotted), b = index(handle);
        apply(Cancel12Move{a, b});
        for (auto& ix : index_of_id_) {
            if (ix == npos) continue;
            if (ix == a || ix == b) ix = npos;
            else ix -= (ix > a ? 1 : 0) + (ix > b ? 1 : 0);
        }
        index_of_id_[dotted] = npos;
        index_of_id_[handle] = npos;
    }

    const FramedLink& link() const { return cur_; }
    const FramedLink& initial() const { return initial_; }
    const MoveScript& script() const { return script_; }

    std::int64_t linking(Id a, Id b) const { return cur_.linking(index(a), index(b)); }
    std::int64_t framing(Id a) const { return cur_.framing(index(a)); }

  private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    void apply(Move mv) {
        cur_ = apply_move(cur_, mv);
        script_.moves.push_back(std::move(mv));
    }

    FramedLink initial_;
    FramedLink cur_;
    MoveScript script_;
    std::vector<std::size_t> index_of_id_;
};

namespace detail {

// Band-move block untying a pair of negative mutual linking over a -2-chain,
// expressed against builder ids.
inline void band_unlink(ScriptBuilder& sb, ScriptBuilder::Id h0, ScriptBuilder::Id h1,
                        const std::vector<ScriptBuilder::Id>& chain) {
    std::int64_t m = -sb.linking(h0, h1);
    if (m < 1) throw move_error("band_unlink: pair linking must be negative");
    if (static_cast<std::int64_t>(chain.size()) < m + 1)
        throw move_error("band_unlink: chain budget violation: need length " + std::to_string(m + 1) +
                         ", have " + std::to_string(chain.size()));
    for (std::int64_t p = 0; p <= m; ++p)
        if (sb.linking(h0, chain[static_cast<std::size_t>(p)]) != 0 ||
            sb.linking(h1, chain[static_cast<std::size_t>(p)]) != 0)
            throw move_error("band_unlink: pair already linked with the chain");
    auto [pos0, pos1] = unlink_slide_positions(m);
    for (auto p : pos0) sb.slide(h0, chain[p - 1], +1);
    for (auto p : pos1) sb.slide(h1, chain[p - 1], +1);
    if (sb.linking(h0, h1) != 0) throw move_error("band_unlink: pair linking not cleared");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Feasibility reports

enum class Verdict { Yes, NotGuaranteed };

struct LedgerRow {
    std::string name;
    std::int64_t value;
    std::string citation;  // theorem/figure anchor, or "plumbing"
};

struct FeasibilityReport {
    Verdict verdict = Verdict::NotGuaranteed;
    std::string theorem;
    std::vector<LedgerRow> ledger;
    std::optional<std::vector<std::int64_t>> framing_tuple;
    std::vector<std::string> notes;
    // Present on every Yes verdict: a replayed cancellation certificate.
    std::optional<FramedLink> script_initial;
    std::optional<MoveScript> script;
    std::optional<FramedLink> script_final;

    bool feasible() const { return verdict == Verdict::Yes; }
};

namespace detail {

// Initial diagram of the knot-surgery proof at the matrix level: the
// complement skeleton plus the 9n parallel a-cycle handles.
inline FramedLink knot_surgery_initial(std::int64_t n, std::int64_t bridge) {
    FramedLink link = emit_surgery_skeleton(BridgePresentation::trivial(static_cast<int>(bridge)));
    for (std::int64_t j = 1; j <= 9 * n; ++j) {
        std::size_t a = link.add_two_handle(-1, "acycle-" + std::to_string(j));
        (void)a;
    }
    return link;
}

// Cancellation script of the knot-surgery proof: ferry one a-cycle handle to
// the meridian of each bridge 1-handle via its companion and the centered
// handle, clear the companions, then cancel everything; the centered handle
// itself cancels the S^1 1-handle.
inline void knot_surgery_cancellation(ScriptBuilder& sb, std::int64_t n, std::int64_t bridge) {
    const FramedLink& l0 = sb.link();
    auto by_label = [&](const std::string& s) {
        auto ix = l0.find_label(s);
        if (!ix) throw move_error("knot_surgery_cancellation: missing component " + s);
        return sb.id_at(*ix);
    };
    auto d0 = by_label("1h:s");
    auto centered = by_label("centered");
    std::vector<ScriptBuilder::Id> dot, comp, acycle;
    for (std::int64_t i = 1; i <= bridge; ++i) {
        dot.push_back(by_label("1h:bridge-" + std::to_string(i)));
        comp.push_back(by_label("companion-" + std::to_string(i)));
    }
    if (bridge > 9 * n) throw move_error("knot_surgery_cancellation: not enough a-cycle handles");
    for (std::int64_t j = 1; j <= bridge; ++j) acycle.push_back(by_label("acycle-" + std::to_string(j)));

    for (std::int64_t i = 0; i < bridge; ++i) {
        auto a = acycle[static_cast<std::size_t>(i)], g = comp[static_cast<std::size_t>(i)];
        sb.slide(a, g, +1);         // a now runs over bridge 1-handle i and back over 1h:s
        sb.slide(a, centered, +1);  // clear the 1h:s run-through
        sb.slide(g, a, -1);         // companion off its bridge 1-handle
        sb.slide(g, centered, +1);  // companion off 1h:s
    }
    for (std::int64_t i = bridge - 1; i >= 0; --i)
        sb.cancel12(dot[static_cast<std::size_t>(i)], acycle[static_cast<std::size_t>(i)]);
    sb.cancel12(d0, centered);
}

// Initial diagram of the log-transformation proof: skeleton for the
// min(p,q)-bridge torus knot complement, the -1-framed handle over the
// S^1-meridian, the -n-framed section handle over the m-meridian, and the
// 9n a-cycle handles.
inline FramedLink log_transform_initial(std::int64_t n, std::int64_t bridge) {
    FramedLink link = emit_surgery_skeleton(BridgePresentation::trivial(static_cast<int>(bridge)));
    std::size_t vb = link.add_two_handle(-1, "bcycle");
    link.set_linking(vb, *link.find_label("1h:s"), 1);
    std::size_t h0 = link.add_two_handle(-n, "section");
    link.set_linking(h0, *link.find_label("1h:bridge-1"), 1);
    for (std::int64_t j = 1; j <= 9 * n; ++j) link.add_two_handle(-1, "acycle-" + std::to_string(j));
    return link;
}

// Ferry a meridian 2-handle from bridge 1-handle 1 to bridge 1-handle k.
inline void ferry(ScriptBuilder& sb, ScriptBuilder::Id x, ScriptBuilder::Id comp1, ScriptBuilder::Id compk) {
    sb.slide(x, comp1, -1);
    sb.slide(x, compk, +1);
}

// Full stage-1 / stage-2 cancellation of E(n)_{p,q} for n >= 2 and
// min(p,q) <= 4, following the proof layout: -2-chain from the a-cycles,
// reservation split, band-move untyings, distribution over the bridge
// 1-handles via the companions, then cancellation of every 1-handle.
inline void log_transform_cancellation(ScriptBuilder& sb, std::int64_t n, std::int64_t bridge) {
    const FramedLink& l0 = sb.link();
    auto by_label = [&](const std::string& s) {
        auto ix = l0.find_label(s);
        if (!ix) throw move_error("log_transform_cancellation: missing component " + s);
        return sb.id_at(*ix);
    };
    auto d0 = by_label("1h:s");
    auto centered = by_label("centered");
    auto vb = by_label("bcycle");
    auto h0 = by_label("section");
    std::vector<ScriptBuilder::Id> dot, comp;
    for (std::int64_t i = 1; i <= bridge; ++i) {
        dot.push_back(by_label("1h:bridge-" + std::to_string(i)));
        comp.push_back(by_label("companion-" + std::to_string(i)));
    }
    std::vector<ScriptBuilder::Id> acycle;
    for (std::int64_t j = 1; j <= 9 * n; ++j) acycle.push_back(by_label("acycle-" + std::to_string(j)));

    std::vector<ScriptBuilder::Id> meridian(static_cast<std::size_t>(bridge));  // one per bridge 1-handle
    meridian[0] = h0;
    std::vector<ScriptBuilder::Id> extra;  // meridians beyond the bridge count

    if (bridge == 1) {
        // Trivial knot: the section alone cancels the only bridge 1-handle.
    } else {
        // Chain of length 9n-1 from the a-cycles (Fig.-chain slides).
        for (std::size_t i = 0; i + 1 < acycle.size(); ++i) sb.slide(acycle[i], acycle[i + 1], -1);
        std::vector<ScriptBuilder::Id> chain(acycle.begin(), acycle.end() - 1);
        // Reservation split: active prefix of length n+1, separator, rest.
        std::vector<ScriptBuilder::Id> active(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(n + 1));
        std::vector<ScriptBuilder::Id> reserve(chain.begin() + static_cast<std::ptrdiff_t>(n + 2), chain.end());

        auto h1 = sb.add_canceling_pair("h1");
        sb.slide(h1, h0, +1);  // meridian pair with linking -n
        detail::band_unlink(sb, h0, h1, active);
        if (auto [f0, f1] = unlink_framings(n); sb.framing(h0) != f0 || sb.framing(h1) != f1)
            throw move_error("log_transform_cancellation: stage-1 framings off the closed form");
        meridian[1] = h1;

        if (bridge >= 3) {
            std::int64_t m1 = -sb.framing(h0), m2 = -sb.framing(h1);
            if (static_cast<std::int64_t>(reserve.size()) < (m1 + 1) + 1 + (m2 + 1))
                throw move_error("log_transform_cancellation: stage-2 chain budget violation");
            std::vector<ScriptBuilder::Id> sub1(reserve.begin(), reserve.begin() + static_cast<std::ptrdiff_t>(m1 + 1));
            std::vector<ScriptBuilder::Id> sub2(reserve.begin() + static_cast<std::ptrdiff_t>(m1 + 2),
                                                reserve.begin() + static_cast<std::ptrdiff_t>(m1 + 2 + m2 + 1));
            auto h2 = sb.add_canceling_pair("h2");
            sb.slide(h2, h0, +1);
            detail::band_unlink(sb, h0, h2, sub1);
            auto h3 = sb.add_canceling_pair("h3");
            sb.slide(h3, h1, +1);
            detail::band_unlink(sb, h1, h3, sub2);
            auto tuple = double_unlink_framings(n);
            if (sb.framing(h0) != tuple[0] || sb.framing(h2) != tuple[1] || sb.framing(h1) != tuple[2] ||
                sb.framing(h3) != tuple[3])
                throw move_error("log_transform_cancellation: stage-2 framings off the four-meridian tuple");
            // Distribution order matches the framing tuple (h0, h2, h1, h3).
            meridian[1] = h2;
            ferry(sb, h2, comp[0], comp[1]);
            meridian[2] = h1;
            ferry(sb, h1, comp[0], comp[2]);
            if (bridge == 4) {
                meridian[3] = h3;
                ferry(sb, h3, comp[0], comp[3]);
            } else {
                extra.push_back(h3);
                sb.slide(h3, h0, -1);  // take the unused meridian off bridge 1-handle 1
            }
        } else {
            ferry(sb, h1, comp[0], comp[1]);
        }
    }

    // Clear the companions, then cancel every 1-handle.
    for (std::int64_t i = 0; i < bridge; ++i) {
        sb.slide(comp[static_cast<std::size_t>(i)], meridian[static_cast<std::size_t>(i)], -1);
        sb.slide(comp[static_cast<std::size_t>(i)], centered, +1);
    }
    sb.slide(centered, vb, -1);
    for (std::int64_t i = bridge - 1; i >= 0; --i)
        sb.cancel12(dot[static_cast<std::size_t>(i)], meridian[static_cast<std::size_t>(i)]);
    sb.cancel12(d0, vb);
}

}  // namespace detail

// Sufficient-condition check for a 1-handle-free decomposition of E(n)_K in
// terms of the bridge number: feasible iff bridge <= 9n, with the replayed
// cancellation certificate attached.
inline FeasibilityReport check_knot_surgery(std::int64_t n, std::int64_t bridge) {
    if (n < 1 || bridge < 1) throw std::invalid_argument("check_knot_surgery: n and bridge must be >= 1");
    FeasibilityReport rep;
    rep.theorem = "Thm 1.2";
    rep.ledger.push_back({"a_cycle_slots", 9 * n, "Sec. 3.2: parallel 9n -1-framed 2-handles"});
    rep.ledger.push_back({"one_handles_to_cancel", bridge + 1, "Sec. 3.2: b(K)+1 1-handles"});
    rep.ledger.push_back({"d_meridian_hits", 1, "Sec. 3.2: mapped to the meridian of a 1-handle"});
    rep.ledger.push_back({"bridge_bound_9n", bridge <= 9 * n ? 1 : 0, "Thm 1.2: b(K) <= 9n"});
    if (bridge > 9 * n) {
        rep.verdict = Verdict::NotGuaranteed;
        rep.notes.push_back("bridge number exceeds 9n; the sufficient condition does not apply");
        return rep;
    }
    rep.verdict = Verdict::Yes;
    ScriptBuilder sb(detail::knot_surgery_initial(n, bridge));
    detail::knot_surgery_cancellation(sb, n, bridge);
    FramedLink replayed = replay(sb.initial(), sb.script()).final;
    if (!(replayed == sb.link())) throw move_error("check_knot_surgery: replay mismatch");
    if (replayed.count_dotted() != 0) throw move_error("check_knot_surgery: dotted components remain");
    rep.script_initial = sb.initial();
    rep.script = sb.script();
    rep.script_final = replayed;
    return rep;
}

// Sufficient-condition check for E(n)_{p,q}: the n=1 case routes through the
// torus-knot bridge number, n >= 2 through the one- or two-stage chain
// construction with the 4n+5 <= 8n-3 budget.
inline FeasibilityReport check_log_transform(std::int64_t n, std::int64_t p, std::int64_t q) {
    if (n < 1 || p < 1 || q < 1) throw std::invalid_argument("check_log_transform: inputs must be >= 1");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("check_log_transform: p,q must be coprime");
    const std::int64_t b = p < q ? p : q;
    FeasibilityReport rep;

    if (n == 1) {
        rep.theorem = "Cor 1.3";
        rep.ledger.push_back({"torus_bridge_number", b, "Cor 1.3: the bridge number of T_{p,q} is min{p,q}"});
        rep.ledger.push_back({"bound", 9, "Cor 1.3: min{p,q} <= 9"});
        rep.notes.push_back("E(1)_{p,q} = E(1)_{T_{p,q}}; checked as a knot surgery");
        FeasibilityReport ks = check_knot_surgery(1, b);
        rep.verdict = ks.verdict;
        rep.script_initial = ks.script_initial;
        rep.script = ks.script;
        rep.script_final = ks.script_final;
        if (rep.verdict == Verdict::NotGuaranteed && b >= 10)
            rep.notes.push_back("min{p,q} >= 10 is outside the theorem basis (cf. the open case (10,11))");
        return rep;
    }

    rep.theorem = "Thm 1.4";
    BudgetLedger bl = budget_ledger(n);
    rep.ledger.push_back({"min_pq", b, "Thm 1.4: min{p,q} <= 4"});
    rep.ledger.push_back({"chain_total", bl.total_chain, "Sec. 3.3: -2-chain with length 9n-1"});
    rep.ledger.push_back({"stage1_chain", bl.stage1_active, "Sec. 3.3: a -2-chain with length n+1"});
    rep.ledger.push_back({"stage2_remainder", bl.remainder, "Sec. 3.3: the rest of -2-chain with length 8n-3"});
    rep.ledger.push_back({"stage2_need", bl.stage2_need, "Sec. 3.3: (2n+2)+1+(2n+2)=(2n+1)+1+(2n+3)=4n+5"});

    if (b > 4) {
        rep.verdict = Verdict::NotGuaranteed;
        rep.notes.push_back("min{p,q} >= 5 is outside the theorem basis for n >= 2");
        if (b >= 5 && b <= 8)
            rep.notes.push_back("decompositions for some such (p,q) at large n are known from other constructions");
        return rep;
    }
    if (b >= 3 && !bl.stage2_feasible) {
        rep.verdict = Verdict::NotGuaranteed;
        rep.notes.push_back("stage-2 chain budget 4n+5 exceeds the remainder 8n-3");
        return rep;
    }
    rep.verdict = Verdict::Yes;
    if (b >= 3) {
        auto tuple = double_unlink_framings(n);
        rep.framing_tuple = std::vector<std::int64_t>(tuple.begin(), tuple.end());
    } else if (b == 2) {
        auto [f0, f1] = unlink_framings(n);
        rep.framing_tuple = std::vector<std::int64_t>{f0, f1};
    }
    ScriptBuilder sb(detail::log_transform_initial(n, b));
    detail::log_transform_cancellation(sb, n, b);
    FramedLink replayed = replay(sb.initial(), sb.script()).final;
    if (!(replayed == sb.link())) throw move_error("check_log_transform: replay mismatch");
    if (replayed.count_dotted() != 0) throw move_error("check_log_transform: dotted components remain");
    rep.script_initial = sb.initial();
    rep.script = sb.script();
    rep.script_final = replayed;
    return rep;
}

// ---------------------------------------------------------------------------
// JSON, schema "rpt-1"

inline nlohmann::json to_json(const FeasibilityReport& rep) {
    nlohmann::json ledger = nlohmann::json::array();
    for (const auto& row : rep.ledger)
        ledger.push_back({{"name", row.name}, {"value", row.value}, {"citation", row.citation}});
    nlohmann::json j{{"schema", "rpt-1"},
                     {"feasible", rep.feasible() ? "yes" : "notGuaranteed"},
                     {"theorem", rep.theorem},
                     {"ledger", ledger},
                     {"notes", rep.notes}};
    if (rep.framing_tuple) j["framing_tuple"] = *rep.framing_tuple;
    if (rep.script) {
        j["script"] = to_json(*rep.script);
        j["script_initial"] = to_json(*rep.script_initial);
        j["script_final"] = to_json(*rep.script_final);
        j["final_dotted_components"] = rep.script_final->count_dotted();
    }
    return j;
}

}  // namespace hk
