// Explicit constructions of perfect colorings of Q_n:
//
//  * distance colorings with respect to a base vertex;
//  * constr0: doubling f on Q_{n-1} to (x_{n-1}, f) on Q_n;
//  * constr1: the four-quadrant combination of two symmetric 2-colorings;
//  * the degree-2 2-colorings and the f_{a,b} family of 3-colorings of Q_4,
//    recovered by constrained search (reconstruct_* below), with the derived
//    colorings g, g_{i,j} and the twin-color splitting construction constr3;
//  * the Q_9 colorings: the star-equation 2-colorings, the g-based
//    4-colorings, and the quasigroup 4-coloring;
//  * the linear 8-coloring example of Q_6.
//
// Every constructor verifies nothing by itself; the expected quotient
// matrices and spectra are asserted by the test suite.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include "equicube/canonical.hpp"
#include "equicube/refinement.hpp"
#include "equicube/search.hpp"
#include "equicube/spectral.hpp"

namespace equicube {

// Color = Hamming distance from `base`; quotient matrix is tridiagonal.
inline Coloring distance_coloring(int n, Vertex base = 0) {
    std::vector<std::uint8_t> col(num_vertices(n));
    for (std::uint32_t v = 0; v < col.size(); ++v)
        col[v] = std::uint8_t(hamming_weight(v ^ base));
    return Coloring(n, n + 1, std::move(col));
}

// g(x, x_{n-1}) = (x_{n-1}, f(x)): a perfect 2k-coloring of Q_n with block
// quotient matrix (S, Id; Id, S); every eigenvalue lambda of S contributes
// lambda+1 and lambda-1.
inline Coloring constr0(const Coloring& f) {
    auto q = quotient_matrix(f);
    if (!q.perfect()) throw std::invalid_argument("constr0: base coloring is not perfect");
    const int n = f.dim() + 1, k = f.num_colors();
    const std::uint32_t half = f.size();
    std::vector<std::uint8_t> col(half * 2);
    for (std::uint32_t v = 0; v < half; ++v) {
        col[v] = f(v);
        col[half + v] = std::uint8_t(k + f(v));
    }
    return Coloring(n, 2 * k, std::move(col));
}

// Four-quadrant combination over (x_{n-2}, x_{n-1}) of 1- or 2-colorings f, g
// of Q_{n-2} with symmetric matrices (parameters b and c); the result is a
// perfect 4-coloring with eigenvalues n, n-4, n-2(b+1), n-2(c+1).
inline Coloring constr1(const Coloring& f, const Coloring& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("constr1: dimension mismatch");
    for (auto* h : {&f, &g}) {
        if (h->num_colors() > 2) throw std::invalid_argument("constr1: base must have 1 or 2 colors");
        auto q = quotient_matrix(*h);
        if (!q.perfect()) throw std::invalid_argument("constr1: base coloring is not perfect");
        if (h->num_colors() == 2 && q.matrix->S[0][1] != q.matrix->S[1][0])
            throw std::invalid_argument("constr1: base matrix is not symmetric");
    }
    const int n = f.dim() + 2;
    const std::uint32_t quarter = f.size();
    std::vector<std::uint8_t> col(quarter * 4);
    for (std::uint32_t v = 0; v < quarter; ++v) {
        col[v] = f(v);                                      // (x_{n-2}, x_{n-1}) = (0,0)
        col[3 * quarter + v] = std::uint8_t(1 - f(v));      // (1,1)
        col[2 * quarter + v] = std::uint8_t(2 + g(v));      // (0,1)
        col[quarter + v] = std::uint8_t(3 - g(v));          // (1,0)
    }
    return Coloring(n, 4, std::move(col));
}

namespace detail {

inline const GroupTables& shared_tables(int n) {
    static std::map<int, GroupTables> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, GroupTables(n)).first;
    return it->second;
}

}  // namespace detail

// The perfect 2-colorings of degree exactly 2, recovered by scanning all
// fibers of Q_4 and projecting to essential coordinates.  Exactly three
// classes, with 2, 3, and 4 essential arguments.
inline const std::vector<Coloring>& reconstruct_degree2() {
    static const std::vector<Coloring> out = [] {
        std::map<std::pair<int, std::string>, Coloring> classes;
        for (std::uint32_t bits = 1; bits < 65535; ++bits) {
            Fiber t(4);
            for (std::uint32_t v = 0; v < 16; ++v)
                if (bits & (1u << v)) t.set(v);
            if (degree(t) != 2) continue;
            Coloring f = Coloring::from_fiber(t);
            if (!is_perfect(f)) continue;
            Coloring p = drop_nonessential(f);
            classes.emplace(std::make_pair(p.dim(), canonical_key(p, detail::shared_tables(p.dim()))), p);
        }
        std::vector<Coloring> reps;
        for (auto& [key, rep] : classes) reps.push_back(rep);
        return reps;
    }();
    return out;
}

namespace detail {

// The 4-essential-argument degree-2 2-coloring of Q_4 with matrix
// (2,2;2,2): the base coloring f whose colors get split by constr3.
inline const Coloring& constr3_base() {
    static const Coloring f = [] {
        for (auto& p : reconstruct_degree2())
            if (p.dim() == 4) return p;
        throw std::runtime_error("degree-2 reconstruction lacks the 4-argument class");
    }();
    return f;
}

// A signed permutation of Q_4 exchanging the two colors of constr3_base:
// f(alpha(x)) = 1 - f(x).
inline const std::vector<Vertex>& constr3_base_swap() {
    static const std::vector<Vertex> table = [] {
        const Coloring& f = constr3_base();
        SignedPerm a = SignedPerm::identity(4);
        std::array<int, 4> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end());
        do {
            for (Vertex flips = 0; flips < 16; ++flips) {
                for (int j = 0; j < 4; ++j) a.perm[j] = Vertex(idx[j]);
                a.flips = flips;
                auto tab = a.table();
                bool ok = true;
                for (Vertex v = 0; v < 16 && ok; ++v) ok = f(tab[v]) == 1 - f(v);
                if (ok) return tab;
            }
        } while (std::next_permutation(idx.begin(), idx.end()));
        throw std::runtime_error("base 2-coloring admits no color-swapping automorphism");
    }();
    return table;
}

}  // namespace detail

// The four perfect 3-colorings f_{a,b} of Q_4 (index a*2+b), recovered by
// search: each splits color 0 of the base 2-coloring into twin colors with
// quotient matrix ((1,1,2),(1,1,2),(1,1,2)); the pairs are pinned by the
// perfectness of the derived colorings g_{i,i} (on Q_5) and g_{i,j} (on Q_6).
inline const std::array<Coloring, 4>& reconstruct_fab() {
    static const std::array<Coloring, 4> fam = [] {
        const Coloring& base = detail::constr3_base();
        const auto zeros = base.fiber(0).ones();  // 8 vertices
        const std::vector<std::vector<int>> m3{{1, 1, 2}, {1, 1, 2}, {1, 1, 2}};
        const std::vector<std::vector<int>> m5{{1, 2, 2}, {2, 1, 2}, {1, 1, 3}};
        const std::vector<std::vector<int>> m6{{2, 2, 2}, {2, 2, 2}, {1, 1, 4}};

        // candidate splits: 3-colorings refining the base with the Q_4 matrix
        std::vector<Coloring> cand;
        for (std::uint32_t mask = 0; mask < 256; ++mask) {
            if (hamming_weight(mask) != 4) continue;
            std::vector<std::uint8_t> col(16, 2);
            for (int i = 0; i < 8; ++i)
                if (!(mask & (1u << i))) col[zeros[i]] = 0;
            for (int i = 0; i < 8; ++i)
                if (mask & (1u << i)) col[zeros[i]] = 1;
            Coloring h(4, 3, std::move(col));
            auto q = quotient_matrix(h);
            if (q.perfect() && q.matrix->S == m3) cand.push_back(std::move(h));
        }

        auto pack = [&](const Coloring& c00, const Coloring& c01, const Coloring& c10,
                        const Coloring& c11, int n, int i, int j) {
            // g_{i,j} with the family (c00, c01, c10, c11)
            const std::array<const Coloring*, 4> fs{&c00, &c01, &c10, &c11};
            std::vector<std::uint8_t> col(num_vertices(n));
            for (std::uint32_t v = 0; v < col.size(); ++v) {
                int a = int(v >> i & 1), b = int(v >> j & 1);
                col[v] = (*fs[a * 2 + b])(v & 15);
            }
            return Coloring(n, 3, std::move(col));
        };
        auto has_matrix = [&](const Coloring& h, const std::vector<std::vector<int>>& m) {
            auto q = quotient_matrix(h);
            return q.perfect() && q.matrix->S == m;
        };

        std::set<std::string> keys;
        std::optional<std::array<Coloring, 4>> found;
        for (auto& c00 : cand)
            for (auto& c11 : cand) {
                Coloring g55 = pack(c00, c00, c11, c11, 5, 4, 4);
                if (!has_matrix(g55, m5)) continue;
                if (hamming_weight(essential_arguments(g55)) != 5) continue;
                for (auto& c01 : cand)
                    for (auto& c10 : cand) {
                        Coloring g45 = pack(c00, c01, c10, c11, 6, 4, 5);
                        if (!has_matrix(g45, m6)) continue;
                        if (hamming_weight(essential_arguments(g45)) != 6) continue;
                        Coloring g54 = pack(c00, c10, c01, c11, 6, 4, 5);
                        if (!has_matrix(g54, m6)) continue;
                        keys.insert(canonical_key(g45, detail::shared_tables(6)));
                        if (!found) found = std::array<Coloring, 4>{c00, c01, c10, c11};
                    }
            }
        if (!found) throw std::runtime_error("no consistent f_{a,b} family exists");
        if (keys.size() != 1)
            throw std::runtime_error("f_{a,b} reconstruction is ambiguous: " +
                                     std::to_string(keys.size()) + " inequivalent families");
        return *found;
    }();
    return fam;
}

// g(x) = f_{0,0}(x_0..x_3) on Q_n, n >= 4.
inline Coloring g_of(int n) {
    if (n < 4) throw std::invalid_argument("g requires n >= 4");
    const auto& fab = reconstruct_fab();
    std::vector<std::uint8_t> col(num_vertices(n));
    for (std::uint32_t v = 0; v < col.size(); ++v) col[v] = fab[0](v & 15);
    return Coloring(n, 3, std::move(col));
}

// g_{i,j}(x) = f_{x_i, x_j}(x_0..x_3) on Q_n, n >= 5, i, j in {4..n-1}.
inline Coloring g_ij(int n, int i, int j) {
    if (n < 5 || i < 4 || j < 4 || i >= n || j >= n)
        throw std::invalid_argument("g_ij requires n >= 5 and 4 <= i, j < n");
    const auto& fab = reconstruct_fab();
    std::vector<std::uint8_t> col(num_vertices(n));
    for (std::uint32_t v = 0; v < col.size(); ++v) {
        int a = int(v >> i & 1), b = int(v >> j & 1);
        col[v] = fab[a * 2 + b](v & 15);
    }
    return Coloring(n, 3, std::move(col));
}

// How one color of the base 2-coloring is split into twin colors:
// b = 1 uses the fixed split f_{0,0} (adds no essential arguments),
// b = 2 selects f_{x_i, x_j} (i = j adds one, i != j adds two).
struct SplitChoice {
    int b = 1;
    int i = 4, j = 4;
};

// Splitting both colors of the base 2-coloring (extended to Q_n): a perfect
// 4-coloring with matrix rows (n-b-2, b, 1, 1), ..., (1, 1, c, n-c-2) and
// eigenvalues n, n-4, n-2b-2, n-2c-2.
inline Coloring constr3(int n, SplitChoice s1, SplitChoice s2) {
    for (auto& s : {s1, s2}) {
        if (s.b != 1 && s.b != 2) throw std::invalid_argument("constr3: b, c must be 1 or 2");
        if (s.b == 2 && (s.i < 4 || s.j < 4 || s.i >= n || s.j >= n))
            throw std::invalid_argument("constr3: selector coordinates out of range");
    }
    if (n < 3 + std::max(s1.b, s2.b)) throw std::invalid_argument("constr3: n too small");
    const auto& fab = reconstruct_fab();
    const Coloring& base = detail::constr3_base();
    const auto& swap_tab = detail::constr3_base_swap();
    std::vector<std::uint8_t> col(num_vertices(n));
    for (std::uint32_t v = 0; v < col.size(); ++v) {
        const Vertex low = v & 15;
        if (base(low) == 0) {
            int sel = s1.b == 1 ? 0 : int(v >> s1.i & 1) * 2 + int(v >> s1.j & 1);
            col[v] = fab[sel](low);
        } else {
            int sel = s2.b == 1 ? 0 : int(v >> s2.i & 1) * 2 + int(v >> s2.j & 1);
            col[v] = std::uint8_t(2 + fab[sel](swap_tab[low]));
        }
    }
    return Coloring(n, 4, std::move(col));
}

namespace detail {

// Pairs (x_a + x_b, x_a + x_c) as a 2-bit value.
inline int star_pair(Vertex v, int a, int b, int c) {
    return int((v >> a ^ v >> b) & 1) * 2 + int((v >> a ^ v >> c) & 1);
}

}  // namespace detail

// The two star-equation 2-colorings of Q_9 with quotient matrix (0,9;3,6):
// color 0 collects the solutions of p1 * p2 = p3 where * is Z_2 x Z_2 (xor)
// or Z_4 on the pairs {00, 01, 10, 11}.
inline Coloring q9_star(bool z4) {
    // Z_4 via the cyclic order 00, 01, 11, 10
    static const int to_z4[4] = {0, 1, 3, 2};
    static const int from_z4[4] = {0, 1, 3, 2};
    std::vector<std::uint8_t> col(num_vertices(9));
    for (std::uint32_t v = 0; v < col.size(); ++v) {
        int p1 = detail::star_pair(v, 0, 1, 2);
        int p2 = detail::star_pair(v, 3, 4, 5);
        int p3 = detail::star_pair(v, 6, 7, 8);
        int prod = z4 ? from_z4[(to_z4[p1] + to_z4[p2]) & 3] : (p1 ^ p2);
        col[v] = std::uint8_t(prod == p3 ? 0 : 1);
    }
    return Coloring(9, 2, std::move(col));
}

// f(x_0..x_2, y_0..y_5) = (g(y) + x_0 + x_1 + x_2, y_0 + ... + y_5): a
// perfect 4-coloring of Q_9 for every g with the all-3s quotient matrix.
inline Coloring q9_gbased(const Coloring& g) {
    if (g.dim() != 6 || g.num_colors() != 2)
        throw std::invalid_argument("q9_gbased: base must be a 2-coloring of Q_6");
    std::vector<std::uint8_t> col(num_vertices(9));
    for (std::uint32_t v = 0; v < col.size(); ++v) {
        const Vertex y = v >> 3;
        int b0 = (g(y) ^ hamming_weight(v & 7)) & 1;
        int b1 = hamming_weight(y) & 1;
        col[v] = std::uint8_t(b1 * 2 + b0);
    }
    return Coloring(9, 4, std::move(col));
}

// The remaining perfect 4-coloring of Q_9: f(x) = (p1 * p2) o p3 where * and
// o are two different group operations isomorphic to Z_4 on the pairs.
// Recovered by scanning all pairs of Z_4 structures for a perfect coloring
// with the all-0-diagonal, all-3-off-diagonal quotient matrix.
inline const Coloring& q9_quasigroup() {
    static const Coloring out = [] {
        const std::vector<std::vector<int>> want{
            {0, 3, 3, 3}, {3, 0, 3, 3}, {3, 3, 0, 3}, {3, 3, 3, 0}};
        // all Z_4 operation tables on {0,1,2,3}: op(a,b) = s^{-1}(s(a)+s(b))
        std::vector<std::array<int, 16>> ops;
        std::array<int, 4> s{0, 1, 2, 3};
        std::sort(s.begin(), s.end());
        do {
            std::array<int, 4> inv{};
            for (int i = 0; i < 4; ++i) inv[s[i]] = i;
            std::array<int, 16> op{};
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) op[a * 4 + b] = inv[(s[a] + s[b]) & 3];
            if (std::find(ops.begin(), ops.end(), op) == ops.end()) ops.push_back(op);
        } while (std::next_permutation(s.begin(), s.end()));

        for (auto& op1 : ops)
            for (auto& op2 : ops) {
                if (op1 == op2) continue;
                std::vector<std::uint8_t> col(num_vertices(9));
                for (std::uint32_t v = 0; v < col.size(); ++v) {
                    int p1 = detail::star_pair(v, 0, 1, 2);
                    int p2 = detail::star_pair(v, 3, 4, 5);
                    int p3 = detail::star_pair(v, 6, 7, 8);
                    col[v] = std::uint8_t(op2[op1[p1 * 4 + p2] * 4 + p3]);
                }
                Coloring f(9, 4, std::move(col));
                auto q = quotient_matrix(f);
                if (q.perfect() && q.matrix->S == want) return f;
            }
        throw std::runtime_error("no quasigroup composition yields the required matrix");
    }();
    return out;
}

// The linear 8-coloring example of Q_6: three parity bits of coordinate
// subsets {0,1,3,4}, {1,2,4,5}, {0,1,2}.  (The source names eight arguments
// but uses six; this is the six-argument reading.)
inline Coloring q6_linear8() {
    std::vector<std::uint8_t> col(num_vertices(6));
    for (std::uint32_t v = 0; v < col.size(); ++v) {
        int b0 = hamming_weight(v & 0b011011) & 1;
        int b1 = hamming_weight(v & 0b110110) & 1;
        int b2 = hamming_weight(v & 0b000111) & 1;
        col[v] = std::uint8_t(b2 * 4 + b1 * 2 + b0);
    }
    return Coloring(6, 8, std::move(col));
}

}  // namespace equicube
