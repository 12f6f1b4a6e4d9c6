#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "handlekit/checked.hpp"

namespace hk {

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Element of SL(2,Z); determinant 1 is enforced on construction.
struct Sl2Matrix {
    std::int64_t m11, m12, m21, m22;

    Sl2Matrix(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) : m11(a), m12(b), m21(c), m22(d) {
        if (ck_sub(ck_mul(m11, m22), ck_mul(m12, m21)) != 1)
            throw std::invalid_argument("Sl2Matrix: determinant is not 1");
    }

    static Sl2Matrix identity() { return {1, 0, 0, 1}; }
    static Sl2Matrix gen_a() { return {1, 1, 0, 1}; }
    static Sl2Matrix gen_b() { return {1, 0, -1, 1}; }

    Sl2Matrix operator*(const Sl2Matrix& o) const {
        return {ck_add(ck_mul(m11, o.m11), ck_mul(m12, o.m21)), ck_add(ck_mul(m11, o.m12), ck_mul(m12, o.m22)),
                ck_add(ck_mul(m21, o.m11), ck_mul(m22, o.m21)), ck_add(ck_mul(m21, o.m12), ck_mul(m22, o.m22))};
    }

    Sl2Matrix inverse() const { return {m22, ck_neg(m12), ck_neg(m21), m11}; }

    bool operator==(const Sl2Matrix&) const = default;
};

// Word in the generators a, b and their inverses, stored run-length with
// maximal nonzero runs, e.g. a^3 b a^-2.
class MonodromyWord {
  public:
    struct Run {
        char gen;          // 'a' or 'b'
        std::int64_t exp;  // nonzero
        bool operator==(const Run&) const = default;
    };

    MonodromyWord() = default;

    void append(char gen, std::int64_t exp) {
        if (gen != 'a' && gen != 'b') throw parse_error(std::string("unknown generator '") + gen + "'");
        if (exp == 0) return;
        if (!runs_.empty() && runs_.back().gen == gen) {
            runs_.back().exp = ck_add(runs_.back().exp, exp);
            if (runs_.back().exp == 0) runs_.pop_back();
        } else {
            runs_.push_back({gen, exp});
        }
    }

    void append(const MonodromyWord& w) {
        for (const auto& r : w.runs_) append(r.gen, r.exp);
    }

    const std::vector<Run>& runs() const { return runs_; }
    bool empty() const { return runs_.empty(); }

    // Expansion into single letters; each letter is (generator, +1 or -1).
    std::vector<std::pair<char, int>> letters() const {
        std::vector<std::pair<char, int>> out;
        for (const auto& r : runs_) {
            int s = r.exp > 0 ? 1 : -1;
            for (std::int64_t k = 0; k < (r.exp > 0 ? r.exp : -r.exp); ++k) out.push_back({r.gen, s});
        }
        return out;
    }

    std::size_t length() const {
        std::size_t n = 0;
        for (const auto& r : runs_) n += static_cast<std::size_t>(r.exp > 0 ? r.exp : -r.exp);
        return n;
    }

    std::pair<std::size_t, std::size_t> letter_counts() const {
        std::size_t a = 0, b = 0;
        for (const auto& r : runs_) {
            std::size_t len = static_cast<std::size_t>(r.exp > 0 ? r.exp : -r.exp);
            (r.gen == 'a' ? a : b) += len;
        }
        return {a, b};
    }

    MonodromyWord pow(std::int64_t n) const {
        if (n < 0) throw std::invalid_argument("MonodromyWord::pow: negative exponent unsupported");
        MonodromyWord out;
        for (std::int64_t k = 0; k < n; ++k) out.append(*this);
        return out;
    }

    static MonodromyWord from_letters(const std::vector<std::pair<char, int>>& ls) {
        MonodromyWord out;
        for (auto [g, s] : ls) out.append(g, s);
        return out;
    }

    MonodromyWord rotated(std::size_t k) const {
        auto ls = letters();
        if (ls.empty()) return {};
        k %= ls.size();
        std::vector<std::pair<char, int>> rot(ls.begin() + static_cast<std::ptrdiff_t>(k), ls.end());
        rot.insert(rot.end(), ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(k));
        return from_letters(rot);
    }

    // Prefix of the first k letters (used as the conjugation certificate for
    // rotation: eval(rot_k(w)) = eval(prefix)^-1 * eval(w) * eval(prefix)).
    MonodromyWord prefix(std::size_t k) const {
        auto ls = letters();
        if (k > ls.size()) k = ls.size();
        return from_letters({ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(k)});
    }

    std::string str() const {
        std::string out;
        for (const auto& r : runs_) {
            if (!out.empty()) out += ' ';
            out += r.gen;
            if (r.exp != 1) out += "^" + std::to_string(r.exp);
        }
        return out;
    }

    bool operator==(const MonodromyWord&) const = default;

  private:
    std::vector<Run> runs_;
};

// Word literal syntax: "(a b)^6", "a^3 b a^3 b a^3 b", "a^-1 b". Whitespace
// insensitive; unknown letters rejected.
inline MonodromyWord parse_word(const std::string& text) {
    std::size_t pos = 0;
    auto skip = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    auto parse_exp = [&]() -> std::int64_t {
        skip();
        if (pos >= text.size() || text[pos] != '^') return 1;
        ++pos;
        skip();
        bool neg = false;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw parse_error("expected digits after '^' at position " + std::to_string(pos));
        std::int64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            v = ck_add(ck_mul(v, 10), text[pos++] - '0');
        return neg ? -v : v;
    };

    std::vector<MonodromyWord> stack(1);
    for (;;) {
        skip();
        if (pos >= text.size()) break;
        char c = text[pos];
        if (c == 'a' || c == 'b') {
            ++pos;
            stack.back().append(c, parse_exp());
        } else if (c == '(') {
            ++pos;
            stack.emplace_back();
        } else if (c == ')') {
            ++pos;
            if (stack.size() < 2) throw parse_error("unmatched ')' at position " + std::to_string(pos - 1));
            MonodromyWord inner = stack.back().pow(parse_exp());
            stack.pop_back();
            stack.back().append(inner);
        } else {
            throw parse_error(std::string("unexpected character '") + c + "' at position " + std::to_string(pos));
        }
    }
    if (stack.size() != 1) throw parse_error("unmatched '('");
    return stack.front();
}

// Left-to-right product of generator matrices.
inline Sl2Matrix eval(const MonodromyWord& w) {
    Sl2Matrix m = Sl2Matrix::identity();
    for (const auto& r : w.runs()) {
        Sl2Matrix g = r.gen == 'a' ? Sl2Matrix::gen_a() : Sl2Matrix::gen_b();
        if (r.exp < 0) g = g.inverse();
        for (std::int64_t k = 0; k < (r.exp > 0 ? r.exp : -r.exp); ++k) m = m * g;
    }
    return m;
}

// The global monodromy word (ab)^{6n} of E(n).
inline MonodromyWord global_monodromy(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("global_monodromy: n must be >= 1");
    return parse_word("(a b)").pow(6 * n);
}

// True iff some rotation of w1's letter sequence equals w2's.
inline bool cyclically_equal(const MonodromyWord& w1, const MonodromyWord& w2) {
    auto l1 = w1.letters(), l2 = w2.letters();
    if (l1.size() != l2.size()) return false;
    if (l1.empty()) return true;
    auto doubled = l1;
    doubled.insert(doubled.end(), l1.begin(), l1.end());
    return std::search(doubled.begin(), doubled.end(), l2.begin(), l2.end()) != doubled.end();
}

// The rewriting of the global monodromy into the a-heavy normal form:
// (ab)^{6n} equals (a^2 b a^3 b a^3 b a)^n as matrices, which is a cyclic
// rotation of (a^3 b a^3 b a^3 b)^n, whose letter counts are (9n, 3n).
struct Eq1Report {
    std::int64_t n = 0;
    bool matrices_equal = false;
    bool cyclic_match = false;
    std::size_t a_count = 0;
    std::size_t b_count = 0;
    bool counts_match = false;
    bool pass() const { return matrices_equal && cyclic_match && counts_match; }
};

inline Eq1Report verify_eq1(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("verify_eq1: n must be >= 1");
    Eq1Report rep;
    rep.n = n;
    MonodromyWord lhs = global_monodromy(n);
    MonodromyWord mid = parse_word("(a^2 b a^3 b a^3 b a)").pow(n);
    MonodromyWord rhs = parse_word("(a^3 b a^3 b a^3 b)").pow(n);
    rep.matrices_equal = eval(lhs) == eval(mid);
    rep.cyclic_match = cyclically_equal(mid, rhs);
    auto [ac, bc] = rhs.letter_counts();
    rep.a_count = ac;
    rep.b_count = bc;
    rep.counts_match = ac == static_cast<std::size_t>(9 * n) && bc == static_cast<std::size_t>(3 * n);
    return rep;
}

inline nlohmann::json to_json(const Eq1Report& r) {
    return nlohmann::json{{"n", r.n},
                          {"matrices_equal", r.matrices_equal},
                          {"cyclic_match", r.cyclic_match},
                          {"a_count", r.a_count},
                          {"b_count", r.b_count},
                          {"counts_match", r.counts_match},
                          {"pass", r.pass()}};
}

}  // namespace hk
