#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "handlekit/framed_link.hpp"

namespace hk {

using bigint = boost::multiprecision::cpp_int;

// Conserved quantities of the 2-handle block under handle slides: rank,
// signature, |det| and the elementary divisor chain d1 | d2 | ... (zeros
// last). Exact integer computations throughout; intermediate values use
// arbitrary precision, results must fit int64.
struct InvariantSummary {
    int rank = 0;
    int signature = 0;
    std::int64_t abs_determinant = 1;  // 1 for the empty block
    std::vector<std::int64_t> divisors;

    bool operator==(const InvariantSummary&) const = default;
};

namespace detail {

using BigMat = std::vector<std::vector<bigint>>;

inline BigMat two_handle_block(const FramedLink& link) {
    auto idx = link.two_handle_indices();
    BigMat m(idx.size(), std::vector<bigint>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) m[a][b] = link.linking(idx[a], idx[b]);
    return m;
}

inline bigint det_bareiss(BigMat m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    bigint prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Rank and signature by symmetric Bareiss elimination: the remaining block
// after step t equals the previous pivot times the exact Schur complement, so
// the t-th inertia sign is sign(pivot_t / pivot_{t-1}). Division by the
// previous pivot is exact (Sylvester's identity; it survives the integer
// congruence ops below by Cauchy-Binet), which keeps entries at minor size.
inline void rank_signature(BigMat m, int& rank, int& signature) {
    std::size_t n = m.size();
    rank = 0;
    signature = 0;
    bigint prev = 1;
    std::size_t t = 0;
    while (t < n) {
        // Find a nonzero diagonal entry at or below t.
        std::size_t p = t;
        while (p < n && m[p][p] == 0) ++p;
        if (p == n) {
            // All remaining diagonal entries are zero; look for an
            // off-diagonal entry and fold it onto the diagonal.
            std::size_t a = n, b = n;
            for (std::size_t i = t; i < n && a == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (m[i][j] != 0) {
                        a = i;
                        b = j;
                        break;
                    }
            if (a == n) break;  // remaining block is zero
            // row/col a += row/col b: new diagonal = 2*m[a][b] != 0
            for (std::size_t k = t; k < n; ++k) m[a][k] += m[b][k];
            for (std::size_t k = t; k < n; ++k) m[k][a] += m[k][b];
            p = a;
        }
        if (p != t) {
            std::swap(m[p], m[t]);
            for (std::size_t k = t; k < n; ++k) std::swap(m[k][p], m[k][t]);
        }
        bigint d = m[t][t];
        for (std::size_t i = t + 1; i < n; ++i)
            for (std::size_t j = t + 1; j < n; ++j) m[i][j] = (m[i][j] * d - m[i][t] * m[t][j]) / prev;
        ++rank;
        signature += ((d < 0) == (prev < 0)) ? 1 : -1;
        prev = d;
        ++t;
    }
}

// Smith normal form diagonal of a square symmetric integer matrix,
// normalized non-negative, divisibility chain d1 | d2 | ..., zeros last.
// Rank plus a nonzero rank-sized minor via Bareiss with complete pivoting.
// Entries stay at minor size; exact division is Sylvester's identity.
inline std::pair<std::size_t, bigint> rank_and_minor(BigMat m) {
    std::size_t n = m.size();
    bigint prev = 1, minor = 1;
    std::size_t r = 0;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t pi = n, pj = n;
        for (std::size_t i = t; i < n && pi == n; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (m[i][j] != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi == n) break;
        std::swap(m[t], m[pi]);
        for (std::size_t k = t; k < n; ++k) std::swap(m[k][t], m[k][pj]);
        bigint d = m[t][t];
        for (std::size_t i = t + 1; i < n; ++i)
            for (std::size_t j = t + 1; j < n; ++j) m[i][j] = (m[i][j] * d - m[i][t] * m[t][j]) / prev;
        prev = d;
        minor = abs(d);
        ++r;
    }
    return {r, minor};
}

// Elementary divisors via the modular method: every determinantal gcd g_k
// (k <= rank) divides any nonzero rank-minor D, and adding multiples of D to
// entries shifts every k-minor by a multiple of D, so gcd(g_k, D) is
// preserved when all arithmetic is reduced mod D. Entries therefore stay
// below D instead of swelling. The reduced diagonal is chain-fixed by
// gcd/lcm sweeps and d_k recovered as gcd(e_1...e_k, D) ratios.
inline std::vector<bigint> smith_divisors(const BigMat& input) {
    std::size_t n = input.size();
    auto [r, big_d] = rank_and_minor(input);
    std::vector<bigint> out;
    if (r == 0) {
        out.assign(n, 0);
        return out;
    }
    const bigint D = big_d;
    auto normalize = [&](const bigint& v) {
        bigint w = v % D;
        if (2 * abs(w) > D) w += w < 0 ? D : -D;
        return w;
    };
    BigMat m(n, std::vector<bigint>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = normalize(input[i][j]);
    // Nearest-integer quotient keeps remainders at most half the pivot.
    auto divround = [](const bigint& a, const bigint& b) {
        bigint q = a / b, rem = a - q * b;
        if (2 * abs(rem) > abs(b)) q += ((rem < 0) == (b < 0)) ? 1 : -1;
        return q;
    };
    std::size_t t = 0;
    while (t < n) {
        std::size_t pi = n, pj = n;
        for (std::size_t i = t; i < n; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (m[i][j] != 0 && (pi == n || abs(m[i][j]) < abs(m[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == n) break;
        std::swap(m[t], m[pi]);
        for (std::size_t k = t; k < n; ++k) std::swap(m[k][t], m[k][pj]);
        for (;;) {
            bool touched = false;
            for (std::size_t i = t + 1; i < n; ++i) {
                if (m[i][t] == 0) continue;
                bigint q = divround(m[i][t], m[t][t]);
                if (q != 0)
                    for (std::size_t k = t; k < n; ++k) m[i][k] = normalize(m[i][k] - q * m[t][k]);
                if (m[i][t] != 0) {
                    std::swap(m[t], m[i]);
                    touched = true;
                }
            }
            if (touched) continue;
            for (std::size_t j = t + 1; j < n; ++j) {
                if (m[t][j] == 0) continue;
                bigint q = divround(m[t][j], m[t][t]);
                if (q != 0)
                    for (std::size_t k = t; k < n; ++k) m[k][j] = normalize(m[k][j] - q * m[k][t]);
                if (m[t][j] != 0) {
                    for (std::size_t k = t; k < n; ++k) std::swap(m[k][t], m[k][j]);
                    touched = true;
                }
            }
            if (!touched) break;
        }
        ++t;
    }
    // Diagonal of a diagonal matrix chain-fixes by pairwise gcd/lcm, which is
    // the 2x2 Smith form diag(a,b) ~ diag(gcd, lcm); zeros migrate last.
    std::vector<bigint> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(abs(m[i][i]));
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j) {
                bigint g = gcd(e[i], e[j]);
                if (g == e[i]) continue;
                bigint l = g == 0 ? bigint(0) : e[i] / g * e[j];
                e[i] = g;
                e[j] = l;
                changed = true;
            }
    }
    bigint gamma_prev = 1, prod = 1;
    for (std::size_t k = 0; k < r; ++k) {
        prod = prod * e[k] % D;
        bigint gamma = gcd(prod, D);
        out.push_back(gamma / gamma_prev);
        gamma_prev = gamma;
    }
    while (out.size() < n) out.push_back(0);
    return out;
}

inline std::int64_t to_i64(const bigint& v, const char* what) {
    if (v > bigint(INT64_MAX) || v < bigint(INT64_MIN)) throw overflow_error(std::string("invariants: ") + what);
    return static_cast<std::int64_t>(v);
}

}  // namespace detail

inline InvariantSummary invariants(const FramedLink& link) {
    auto block = detail::two_handle_block(link);
    InvariantSummary out;
    detail::rank_signature(block, out.rank, out.signature);
    out.abs_determinant = detail::to_i64(abs(detail::det_bareiss(block)), "determinant overflow");
    auto divs = detail::smith_divisors(block);
    int nz = 0;
    for (auto& d : divs) {
        out.divisors.push_back(detail::to_i64(d, "elementary divisor overflow"));
        if (d != 0) ++nz;
    }
    if (nz != out.rank) throw move_error("invariants: rank disagreement between diagonalization and Smith form");
    if (nz == static_cast<int>(divs.size())) {
        bigint prod = 1;
        for (auto& d : divs) prod *= d;
        if (prod != abs(detail::det_bareiss(block)))
            throw move_error("invariants: determinant disagreement with divisor product");
    }
    return out;
}

}  // namespace hk
