// Perfectness verification, quotient matrices, exact eigenvalues, densities,
// and Walsh analysis of colorings of Q_n.
//
// All spectral computations are exact over the integers: candidate eigenvalues
// of a quotient matrix are n-2i, and multiplicities come from integer rank
// computations (quotient matrices of colorings are diagonalizable, so
// algebraic multiplicity = k - rank(S - lambda*I)).

#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "equicube/hypercube.hpp"

namespace equicube {

struct QuotientMatrix {
    int k = 0;
    std::vector<std::vector<int>> S;  // k x k, row sums = n

    std::vector<int>& operator[](int i) { return S[i]; }
    const std::vector<int>& operator[](int i) const { return S[i]; }
    bool operator==(const QuotientMatrix& o) const { return S == o.S; }
    bool operator<(const QuotientMatrix& o) const { return S < o.S; }

    QuotientMatrix permuted(const std::vector<int>& p) const {
        QuotientMatrix r;
        r.k = k;
        r.S.assign(k, std::vector<int>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) r.S[p[i]][p[j]] = S[i][j];
        return r;
    }

    // Lexicographically least simultaneous row/column permutation.
    QuotientMatrix canonical() const {
        std::vector<int> p(k);
        std::iota(p.begin(), p.end(), 0);
        QuotientMatrix best = *this;
        do {
            QuotientMatrix c = permuted(p);
            if (c.S < best.S) best = c;
        } while (std::next_permutation(p.begin(), p.end()));
        return best;
    }
};

struct NotPerfectWitness {
    Vertex u = 0, v = 0;  // same color, different neighbor color profiles
};

struct PerfectnessResult {
    std::optional<QuotientMatrix> matrix;
    std::optional<NotPerfectWitness> witness;
    bool perfect() const { return matrix.has_value(); }
};

inline PerfectnessResult quotient_matrix(const Coloring& f) {
    const int n = f.dim(), k = f.num_colors();
    const std::uint32_t nv = f.size();
    PerfectnessResult res;
    std::vector<std::vector<int>> rows(k);
    std::vector<Vertex> first(k);
    std::vector<int> prof(k);
    for (std::uint32_t v = 0; v < nv; ++v) {
        std::fill(prof.begin(), prof.end(), 0);
        for (int j = 0; j < n; ++j) ++prof[f(v ^ (Vertex{1} << j))];
        int c = f(v);
        if (rows[c].empty()) {
            rows[c] = prof;
            first[c] = v;
        } else if (rows[c] != prof) {
            res.witness = NotPerfectWitness{first[c], v};
            return res;
        }
    }
    QuotientMatrix S;
    S.k = k;
    S.S = std::move(rows);
    res.matrix = std::move(S);
    return res;
}

inline bool is_perfect(const Coloring& f) { return quotient_matrix(f).perfect(); }

// ---------------------------------------------------------------------------
// Densities.

struct Rational {
    long long num = 0, den = 1;
    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g) { num /= g; den /= g; }
    }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

inline std::vector<Rational> densities(const Coloring& f) {
    std::vector<Rational> rho;
    const long long nv = f.size();
    for (auto c : f.color_counts()) rho.emplace_back(c, nv);
    return rho;
}

// rho_i * S[i][j] == rho_j * S[j][i], checked with integer counts.
inline bool detailed_balance(const Coloring& f, const QuotientMatrix& S) {
    auto cnt = f.color_counts();
    for (int i = 0; i < S.k; ++i)
        for (int j = 0; j < S.k; ++j)
            if (std::int64_t(cnt[i]) * S[i][j] != std::int64_t(cnt[j]) * S[j][i]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Exact eigenvalues of a quotient matrix.

// Rank of an integer matrix over Q (fraction-free elimination).
inline int integer_rank(std::vector<std::vector<long long>> m) {
    const int rows = int(m.size());
    if (rows == 0) return 0;
    const int cols = int(m[0].size());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        for (int r = rank + 1; r < rows; ++r) {
            if (m[r][col] == 0) continue;
            long long a = m[rank][col], b = m[r][col];
            long long g = std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
            long long fa = b / g, fb = a / g;
            for (int c2 = col; c2 < cols; ++c2) {
                m[r][c2] = m[r][c2] * fb - m[rank][c2] * fa;
                // keep entries small
            }
            long long gg = 0;
            for (int c2 = col; c2 < cols; ++c2) {
                long long x = m[r][c2];
                gg = std::gcd(gg, x < 0 ? -x : x);
            }
            if (gg > 1)
                for (int c2 = col; c2 < cols; ++c2) m[r][c2] /= gg;
        }
        ++rank;
    }
    return rank;
}

struct Spectrum {
    // eigenvalue -> multiplicity, sorted descending by eigenvalue.
    std::vector<std::pair<int, int>> eigs;

    int min_eigenvalue() const { return eigs.back().first; }
    // Largest eigenvalue different from the main one (requires >= 2 distinct).
    int second_largest() const { return eigs[1].first; }
    int total_multiplicity() const {
        int s = 0;
        for (auto& [e, m] : eigs) s += m;
        return s;
    }
    bool operator==(const Spectrum& o) const { return eigs == o.eigs; }
};

// Exact eigenvalues with multiplicities; nullopt if some root lies outside
// {n-2i} (impossible for genuine quotient matrices of colorings of Q_n).
inline std::optional<Spectrum> eigenvalues(const QuotientMatrix& S, int n) {
    for (int i = 0; i < S.k; ++i) {
        long long sum = 0;
        for (int j = 0; j < S.k; ++j) {
            if (S[i][j] < 0) throw std::invalid_argument("negative quotient entry");
            sum += S[i][j];
        }
        if (sum != n) throw std::invalid_argument("row sum differs from n");
    }
    Spectrum sp;
    int total = 0;
    for (int i = 0; i <= n; ++i) {
        int lambda = n - 2 * i;
        std::vector<std::vector<long long>> m(S.k, std::vector<long long>(S.k));
        for (int r = 0; r < S.k; ++r)
            for (int c = 0; c < S.k; ++c) m[r][c] = S[r][c] - (r == c ? lambda : 0);
        int mult = S.k - integer_rank(std::move(m));
        if (mult > 0) {
            sp.eigs.emplace_back(lambda, mult);
            total += mult;
        }
    }
    if (total != S.k) return std::nullopt;  // diagonalizable quotient matrices always land here
    return sp;
}

// ---------------------------------------------------------------------------
// Walsh-Hadamard analysis.

struct WalshSpectrum {
    int n = 0;
    std::vector<std::int32_t> coeffs;  // coeffs[S] = sum_v (-1)^{<S,v>} t(v)
};

inline void walsh_inplace(std::vector<std::int32_t>& a) {
    const std::size_t nv = a.size();
    for (std::size_t len = 1; len < nv; len <<= 1)
        for (std::size_t i = 0; i < nv; i += len << 1)
            for (std::size_t j = i; j < i + len; ++j) {
                std::int32_t u = a[j], v = a[j + len];
                a[j] = u + v;
                a[j + len] = u - v;
            }
}

inline WalshSpectrum walsh(const Fiber& t) {
    WalshSpectrum w;
    w.n = t.dim();
    w.coeffs.resize(t.size());
    for (std::uint32_t v = 0; v < t.size(); ++v) w.coeffs[v] = t.test(v) ? 1 : 0;
    walsh_inplace(w.coeffs);
    return w;
}

inline int degree(const Fiber& t) {
    auto w = walsh(t);
    int d = 0;
    for (std::uint32_t s = 0; s < w.coeffs.size(); ++s)
        if (w.coeffs[s] != 0) d = std::max(d, hamming_weight(s));
    return d;
}

inline int degree(const Coloring& f) {
    int d = 0;
    for (int c = 0; c < f.num_colors(); ++c) d = std::max(d, degree(f.fiber(c)));
    return d;
}

// Largest t such that all Walsh coefficients on levels 1..t vanish for the
// fiber; n for constant fibers, by convention large enough for any caller.
inline int correlation_immunity(const Fiber& t) {
    auto w = walsh(t);
    int minlevel = t.dim() + 1;
    for (std::uint32_t s = 1; s < w.coeffs.size(); ++s)
        if (w.coeffs[s] != 0) minlevel = std::min(minlevel, hamming_weight(s));
    return minlevel - 1;
}

inline int correlation_immunity(const Coloring& f) {
    int t = f.dim();
    for (int c = 0; c < f.num_colors(); ++c)
        t = std::min(t, correlation_immunity(f.fiber(c)));
    return t;
}

// Largest t for which every retract density vector is uniform: equals the
// correlation-immunity order when all densities are 1/k, and -1 otherwise.
inline int resilience(const Coloring& f) {
    auto cnt = f.color_counts();
    for (auto c : cnt)
        if (std::uint64_t(c) * f.num_colors() != f.size()) return -1;
    return correlation_immunity(f);
}

inline std::uint32_t essential_arguments(const Coloring& f) {
    std::uint32_t mask = 0;
    for (std::uint32_t v = 0; v < f.size(); ++v)
        for (int j = 0; j < f.dim(); ++j)
            if (f(v) != f(v ^ (Vertex{1} << j))) mask |= std::uint32_t{1} << j;
    return mask;
}

inline std::uint32_t essential_arguments(const Fiber& t) {
    std::uint32_t mask = 0;
    for (std::uint32_t v = 0; v < t.size(); ++v)
        for (int j = 0; j < t.dim(); ++j)
            if (t.test(v) != t.test(v ^ (Vertex{1} << j))) mask |= std::uint32_t{1} << j;
    return mask;
}

// t'(v) = t(v) on even-weight vertices, 1-t(v) on odd-weight vertices.
inline Fiber bipartite_flip(const Fiber& t) {
    Fiber r(t.dim());
    for (std::uint32_t v = 0; v < t.size(); ++v) {
        bool b = t.test(v);
        if (hamming_weight(v) & 1) b = !b;
        if (b) r.set(v);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Color algebra.

inline Coloring merge_colors(const Coloring& f, int i, int j) {
    if (i == j) throw std::invalid_argument("merge_colors requires distinct colors");
    if (i > j) std::swap(i, j);
    std::vector<std::uint8_t> col(f.size());
    for (std::uint32_t v = 0; v < f.size(); ++v) {
        int c = f(v);
        if (c == j) c = i;
        else if (c > j) --c;
        col[v] = std::uint8_t(c);
    }
    return Coloring(f.dim(), f.num_colors() - 1, std::move(col));
}

// Common refinement by value pairs, colors renumbered by first occurrence.
inline Coloring combine(const Coloring& f, const Coloring& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("dimension mismatch");
    std::vector<int> pair_id(std::size_t(f.num_colors()) * g.num_colors(), -1);
    int next = 0;
    std::vector<std::uint8_t> col(f.size());
    for (std::uint32_t v = 0; v < f.size(); ++v) {
        int& id = pair_id[std::size_t(f(v)) * g.num_colors() + g(v)];
        if (id < 0) id = next++;
        col[v] = std::uint8_t(id);
    }
    return Coloring(f.dim(), next, std::move(col));
}

inline Coloring combine(const Coloring& f, const Fiber& t) {
    return combine(f, Coloring::from_fiber(t));
}

// ---------------------------------------------------------------------------
// Antipodal matching (perfect colorings only).

struct AntipodalMatching {
    std::vector<int> match;  // involution on colors
};

inline std::optional<AntipodalMatching> antipodal_matching(const Coloring& f) {
    if (!is_perfect(f)) return std::nullopt;
    const Vertex all = f.size() - 1;
    std::vector<int> m(f.num_colors(), -1);
    for (std::uint32_t v = 0; v < f.size(); ++v) {
        int a = f(v), b = f(v ^ all);
        if (m[a] < 0) m[a] = b;
        else if (m[a] != b) return std::nullopt;  // would signal a perfectness-check bug
    }
    for (int c = 0; c < f.num_colors(); ++c)
        if (m[m[c]] != c) return std::nullopt;
    return AntipodalMatching{std::move(m)};
}

}  // namespace equicube
