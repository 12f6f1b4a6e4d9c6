#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "handlekit/framed_link.hpp"
#include "handlekit/sl2z.hpp"  // parse_error

namespace hk {

// Word in the pure braid generators T_{i,j}, 1 <= i < j <= strands, with
// run-length exponents.
struct PureBraidWord {
    struct Factor {
        int i;
        int j;
        std::int64_t exp;
        bool operator==(const Factor&) const = default;
    };

    int strands = 0;
    std::vector<Factor> factors;

    bool operator==(const PureBraidWord&) const = default;
};

struct BraidValidation {
    bool valid = true;
    std::string diagnostic;
    std::vector<int> permutation;  // 1-based image of each strand
};

namespace detail {

inline std::vector<int> compose(const std::vector<int>& f, const std::vector<int>& g) {
    // (f . g)(x) = f(g(x)); entries 1-based
    std::vector<int> out(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) out[x] = f[static_cast<std::size_t>(g[x] - 1)];
    return out;
}

// Underlying permutation of T_{i,j}^exp, computed from the Artin-generator
// expansion T_{i,j} = (s_{j-1}...s_{i+1}) s_i^2 (s_{i+1}^-1...s_{j-1}^-1).
inline std::vector<int> factor_permutation(int strands, const PureBraidWord::Factor& f) {
    std::vector<int> perm(static_cast<std::size_t>(strands));
    std::iota(perm.begin(), perm.end(), 1);
    auto transpose = [&](int k) {  // permutation of s_k swaps strands k, k+1
        std::vector<int> t(static_cast<std::size_t>(strands));
        std::iota(t.begin(), t.end(), 1);
        std::swap(t[static_cast<std::size_t>(k - 1)], t[static_cast<std::size_t>(k)]);
        return t;
    };
    std::vector<int> one(static_cast<std::size_t>(strands));
    std::iota(one.begin(), one.end(), 1);
    for (int k = f.j - 1; k > f.i; --k) one = compose(one, transpose(k));
    one = compose(one, compose(transpose(f.i), transpose(f.i)));
    for (int k = f.i + 1; k <= f.j - 1; ++k) one = compose(one, transpose(k));
    // Raise to |exp| by binary exponentiation; a permutation and its inverse
    // have the same effect on purity but exponent sign is honored anyway.
    std::vector<int> base = one;
    if (f.exp < 0) {
        std::vector<int> inv(base.size());
        for (std::size_t x = 0; x < base.size(); ++x) inv[static_cast<std::size_t>(base[x] - 1)] = static_cast<int>(x + 1);
        base = inv;
    }
    std::vector<int> acc(static_cast<std::size_t>(strands));
    std::iota(acc.begin(), acc.end(), 1);
    std::uint64_t e = static_cast<std::uint64_t>(f.exp < 0 ? -f.exp : f.exp);
    while (e) {
        if (e & 1) acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

}  // namespace detail

// Index-bound validation plus the underlying-permutation computation; words
// in the T generators are automatically pure, and that is asserted rather
// than assumed.
inline BraidValidation validate(const PureBraidWord& word) {
    BraidValidation out;
    out.permutation.resize(static_cast<std::size_t>(word.strands));
    std::iota(out.permutation.begin(), out.permutation.end(), 1);
    if (word.strands < 1) {
        out.valid = false;
        out.diagnostic = "strand count must be positive";
        return out;
    }
    for (std::size_t t = 0; t < word.factors.size(); ++t) {
        const auto& f = word.factors[t];
        if (!(1 <= f.i && f.i < f.j && f.j <= word.strands)) {
            out.valid = false;
            out.diagnostic = "factor " + std::to_string(t) + ": indices (" + std::to_string(f.i) + "," +
                             std::to_string(f.j) + ") violate 1 <= i < j <= " + std::to_string(word.strands);
            return out;
        }
        if (f.exp == 0) {
            out.valid = false;
            out.diagnostic = "factor " + std::to_string(t) + ": zero exponent";
            return out;
        }
        out.permutation = detail::compose(out.permutation, detail::factor_permutation(word.strands, f));
    }
    for (std::size_t x = 0; x < out.permutation.size(); ++x)
        if (out.permutation[x] != static_cast<int>(x + 1)) {
            out.valid = false;
            out.diagnostic = "underlying permutation is not the identity (strand " + std::to_string(x + 1) +
                             " maps to " + std::to_string(out.permutation[x]) + ")";
            return out;
        }
    return out;
}

// Exponent sums per generator pair; the pairwise-linking record of the word.
inline std::map<std::pair<int, int>, std::int64_t> abelianize(const PureBraidWord& word) {
    std::map<std::pair<int, int>, std::int64_t> out;
    for (const auto& f : word.factors) {
        auto& v = out[{f.i, f.j}];
        v = ck_add(v, f.exp);
        if (v == 0) out.erase({f.i, f.j});
    }
    return out;
}

// Braid literal syntax: "T(2,5)^2 T(1,3)^-1". Strand count is declared
// separately; parse errors cite the offending position.
inline PureBraidWord parse_braid(const std::string& text, int strands) {
    PureBraidWord out;
    out.strands = strands;
    std::size_t pos = 0;
    auto skip = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    auto expect = [&](char c) {
        if (pos >= text.size() || text[pos] != c)
            throw parse_error(std::string("expected '") + c + "' at position " + std::to_string(pos));
        ++pos;
    };
    auto integer = [&]() -> std::int64_t {
        skip();
        bool neg = false;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw parse_error("expected integer at position " + std::to_string(pos));
        std::int64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            v = ck_add(ck_mul(v, 10), text[pos++] - '0');
        return neg ? -v : v;
    };
    for (;;) {
        skip();
        if (pos >= text.size()) break;
        if (text[pos] != 'T') throw parse_error(std::string("expected 'T' at position ") + std::to_string(pos));
        ++pos;
        skip();
        expect('(');
        std::int64_t i = integer();
        skip();
        expect(',');
        std::int64_t j = integer();
        skip();
        expect(')');
        std::int64_t e = 1;
        skip();
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            e = integer();
        }
        out.factors.push_back({static_cast<int>(i), static_cast<int>(j), e});
    }
    return out;
}

// Bridge presentation: a pure braid on 2n strands in the normal form of an
// n-bridge knot.
struct BridgePresentation {
    int bridges = 0;
    PureBraidWord braid;

    static BridgePresentation trivial(int bridges) {
        BridgePresentation out;
        out.bridges = bridges;
        out.braid.strands = 2 * bridges;
        return out;
    }
};

inline bool valid(const BridgePresentation& pres) {
    return pres.bridges >= 1 && pres.braid.strands == 2 * pres.bridges && validate(pres.braid).valid;
}

// b(T_{p,q}) = min(p,q).
inline std::int64_t torus_bridge_number(std::int64_t p, std::int64_t q) {
    if (p < 1 || q < 1) throw std::invalid_argument("torus_bridge_number: p,q must be positive");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("torus_bridge_number: p,q must be coprime");
    return p < q ? p : q;
}

// The knot complement times S^1 carries b(K)+1 1-handles.
inline std::int64_t one_handle_count(std::int64_t bridge) {
    if (bridge < 1) throw std::invalid_argument("one_handle_count: bridge number must be >= 1");
    return bridge + 1;
}

// Skeleton of the (S^3 - nu(K)) x S^1 diagram glued into the surgery:
// b+1 dotted 1-handles (one for the S^1 direction, one per bridge), the
// centered 0-framed 2-handle, and one 0-framed companion 2-handle per
// bridge. Entry layout is a fixed convention of this library:
//   - centered runs over the S^1 1-handle once,
//   - companion i runs over bridge 1-handle i once and back over the S^1
//     1-handle once,
//   - a braid factor T_{s,t} contributes its exponent sum between the
//     companion of the bridge owning strand s and the 1-handle of the bridge
//     owning strand t (and vice versa); same-bridge factors are isotopies
//     and contribute nothing.
inline FramedLink emit_surgery_skeleton(const BridgePresentation& pres) {
    if (!valid(pres)) throw std::invalid_argument("emit_surgery_skeleton: invalid bridge presentation");
    const int b = pres.bridges;
    FramedLink link;
    std::size_t d0 = link.add_dotted("1h:s");
    std::vector<std::size_t> dot(static_cast<std::size_t>(b));
    for (int i = 1; i <= b; ++i) dot[static_cast<std::size_t>(i - 1)] = link.add_dotted("1h:bridge-" + std::to_string(i));
    std::size_t centered = link.add_two_handle(0, "centered");
    std::vector<std::size_t> comp(static_cast<std::size_t>(b));
    for (int i = 1; i <= b; ++i)
        comp[static_cast<std::size_t>(i - 1)] = link.add_two_handle(0, "companion-" + std::to_string(i));

    link.set_linking(centered, d0, 1);
    for (int i = 1; i <= b; ++i) {
        link.set_linking(comp[static_cast<std::size_t>(i - 1)], dot[static_cast<std::size_t>(i - 1)], 1);
        link.set_linking(comp[static_cast<std::size_t>(i - 1)], d0, -1);
    }
    for (const auto& [pair, e] : abelianize(pres.braid)) {
        int bi = (pair.first + 1) / 2, bj = (pair.second + 1) / 2;
        if (bi == bj) continue;
        auto gi = comp[static_cast<std::size_t>(bi - 1)], dj = dot[static_cast<std::size_t>(bj - 1)];
        auto gj = comp[static_cast<std::size_t>(bj - 1)], di = dot[static_cast<std::size_t>(bi - 1)];
        link.set_linking(gi, dj, ck_add(link.linking(gi, dj), e));
        link.set_linking(gj, di, ck_add(link.linking(gj, di), e));
    }
    return link;
}

}  // namespace hk
