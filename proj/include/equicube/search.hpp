// Exhaustive enumeration machinery: admissible quotient matrices, perfect
// colorings with a prescribed matrix, mu-fold 1-perfect codes of Q_n, and
// splittability of codes.
//
// Core engine: depth-first color assignment to vertices in natural order.
// For vertex v all lower neighbors v ^ 2^j (bit j set) are already colored,
// so the partial neighbor-count rows can be checked incrementally against the
// quotient matrix; when the last neighbor of a vertex is placed, equality of
// its count row with the matrix row follows from the running inequalities.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "equicube/canonical.hpp"
#include "equicube/hypercube.hpp"
#include "equicube/spectral.hpp"

namespace equicube {

// ---------------------------------------------------------------------------
// Fiber sizes from detailed balance: w_i S_ij = w_j S_ji, sum w = 2^n.
// Returns nullopt if the matrix is disconnected, inconsistent, or the scaled
// sizes are not positive integers.
inline std::optional<std::vector<std::uint32_t>> fiber_counts(const QuotientMatrix& S, int n) {
    const int k = S.k;
    // rational weights via BFS from color 0
    std::vector<long long> num(k, 0), den(k, 0);
    num[0] = den[0] = 1;
    std::vector<int> queue{0};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int i = queue[qi];
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            if ((S[i][j] == 0) != (S[j][i] == 0)) return std::nullopt;
            if (S[i][j] == 0) continue;
            // w_j = w_i * S_ij / S_ji
            long long nj = num[i] * S[i][j], dj = den[i] * S[j][i];
            long long g = std::gcd(nj, dj);
            nj /= g;
            dj /= g;
            if (den[j] == 0) {
                num[j] = nj;
                den[j] = dj;
                queue.push_back(j);
            } else if (num[j] * dj != nj * den[j]) {
                return std::nullopt;
            }
        }
    }
    for (int j = 0; j < k; ++j)
        if (den[j] == 0) return std::nullopt;  // disconnected
    long long lcm = 1;
    for (int j = 0; j < k; ++j) lcm = lcm / std::gcd(lcm, den[j]) * den[j];
    std::vector<long long> w(k);
    long long total = 0;
    for (int j = 0; j < k; ++j) {
        w[j] = num[j] * (lcm / den[j]);
        total += w[j];
    }
    const long long nv = std::int64_t{1} << n;
    std::vector<std::uint32_t> counts(k);
    for (int j = 0; j < k; ++j) {
        long long c = w[j] * nv;
        if (c % total != 0) return std::nullopt;
        c /= total;
        if (c < 1) return std::nullopt;
        counts[j] = std::uint32_t(c);
    }
    return counts;
}

// ---------------------------------------------------------------------------
// Candidate quotient matrices.

struct MatrixConstraints {
    std::optional<int> min_eigenvalue;           // lambda_min >= value
    std::optional<int> max_nonmain;              // all non-main eigenvalues <= value
    std::optional<std::vector<int>> exact_eigenvalues;  // distinct-eigenvalue set
    std::optional<int> ci_min;                   // t-correlation-immune requirement
};

struct MatrixCandidateSet {
    int n = 0, k = 0;
    std::vector<QuotientMatrix> matrices;  // canonical representatives, sorted
};

inline MatrixCandidateSet candidate_matrices(int n, int k, const MatrixConstraints& cons = {}) {
    MatrixCandidateSet out;
    out.n = n;
    out.k = k;
    // An unbalanced t-CI set forces t <= 2n/3 - 1.  For k >= 3 the fiber
    // sizes cannot all equal 2^{n-1}, so merging all-but-one color gives an
    // unbalanced union that inherits the CI order; hence the bound applies.
    if (cons.ci_min && k >= 3 && *cons.ci_min > (2 * n) / 3 - 1) return out;

    std::set<std::vector<std::vector<int>>> seen;
    std::vector<std::vector<int>> S(k, std::vector<int>(k, 0));

    std::function<void(int, int, int)> rec = [&](int i, int j, int rem) {
        if (i == k) {
            QuotientMatrix M;
            M.k = k;
            M.S = S;
            if (!fiber_counts(M, n)) return;
            auto sp = eigenvalues(M, n);
            if (!sp) return;
            if (cons.min_eigenvalue && sp->min_eigenvalue() < *cons.min_eigenvalue) return;
            const bool has_nonmain = sp->eigs.size() >= 2;
            if (cons.max_nonmain && has_nonmain && sp->second_largest() > *cons.max_nonmain) return;
            if (cons.ci_min && has_nonmain && sp->second_largest() > n - 2 * (*cons.ci_min + 1))
                return;
            if (cons.exact_eigenvalues) {
                std::vector<int> got;
                for (auto& [e, m] : sp->eigs) got.push_back(e);
                auto want = *cons.exact_eigenvalues;
                std::sort(want.rbegin(), want.rend());
                if (got != want) return;
            }
            auto canon = M.canonical();
            if (seen.insert(canon.S).second) out.matrices.push_back(std::move(canon));
            return;
        }
        if (j == k) {
            if (rem == 0) rec(i + 1, 0, n);
            return;
        }
        int lo = 0, hi = rem;
        if (j < i) {
            // symmetry of the zero pattern with the already-fixed S[j][i]
            if (S[j][i] == 0) hi = 0;
            else lo = 1;
        }
        for (int v = lo; v <= hi; ++v) {
            S[i][j] = v;
            rec(i, j + 1, rem - v);
        }
        S[i][j] = 0;
    };
    rec(0, 0, n);
    std::sort(out.matrices.begin(), out.matrices.end());
    return out;
}

// ---------------------------------------------------------------------------
// DFS enumeration of colorings matching a quotient matrix exactly.

class MatrixSearch {
  public:
    MatrixSearch(int n, const QuotientMatrix& S) : n_(n), S_(S), k_(S.k) {
        auto c = fiber_counts(S, n);
        if (!c) throw std::invalid_argument("matrix admits no fiber size vector");
        counts_ = *c;
    }

    const std::vector<std::uint32_t>& counts() const { return counts_; }

    // Calls cb for every labeled coloring with quotient matrix exactly S
    // (colors = matrix rows).  cb returns false to abort the search.
    void run(const std::function<bool(const std::vector<std::uint8_t>&)>& cb) const {
        const std::uint32_t nv = num_vertices(n_);
        std::vector<std::uint8_t> col(nv, 255);
        std::vector<std::array<std::uint8_t, 256>> cnt(nv);
        for (auto& a : cnt) a.fill(0);
        std::vector<std::uint32_t> used(k_, 0);
        bool stop = false;

        std::function<void(std::uint32_t)> rec = [&](std::uint32_t v) {
            if (stop) return;
            if (v == nv) {
                if (!cb(col)) stop = true;
                return;
            }
            for (int c = 0; c < k_ && !stop; ++c) {
                if (used[c] >= counts_[c]) continue;
                // v's complete lower-neighbor profile vs row c
                bool ok = true;
                for (int cc = 0; cc < k_; ++cc)
                    if (cnt[v][cc] > S_[c][cc]) { ok = false; break; }
                if (!ok) continue;
                // lower neighbors' rows absorb one more c
                std::uint32_t x = v;
                while (x && ok) {
                    int j = __builtin_ctz(x);
                    x &= x - 1;
                    Vertex u = v ^ (Vertex{1} << j);
                    if (cnt[u][c] + 1 > S_[col[u]][c]) ok = false;
                }
                if (!ok) continue;
                col[v] = std::uint8_t(c);
                ++used[c];
                for (int j = 0; j < n_; ++j) ++cnt[v ^ (Vertex{1} << j)][c];
                rec(v + 1);
                for (int j = 0; j < n_; ++j) --cnt[v ^ (Vertex{1} << j)][c];
                --used[c];
                col[v] = 255;
            }
        };
        rec(0);
    }

    std::uint64_t count_labeled() const {
        std::uint64_t n = 0;
        run([&](const std::vector<std::uint8_t>&) {
            ++n;
            return true;
        });
        return n;
    }

  private:
    int n_;
    QuotientMatrix S_;
    int k_;
    std::vector<std::uint32_t> counts_;
};

// Isomorph-free coloring enumeration by orbit marking: the first labeled
// solution of a new class triggers one orbit BFS that marks the digests of
// every normalized member, so all later duplicates are skipped with a single
// hash probe and no canonicalization.
struct ColoringClass {
    Coloring rep;                   // canonical form of the class
    std::uint64_t orbit_size = 0;   // normalized color strings in the orbit
    std::uint64_t stab_order = 0;   // group_order(n) / orbit_size
};

struct ColoringEnumeration {
    int n = 0;
    std::vector<ColoringClass> classes;     // sorted by canonical key
    std::uint64_t labeled_count = 0;
};

inline ColoringEnumeration enumerate_coloring_classes(int n, const QuotientMatrix& S) {
    MatrixSearch ms(n, S);
    GroupTables gt(n);
    DigestSet seen;
    std::map<std::string, ColoringClass> classes;
    ColoringEnumeration out;
    out.n = n;
    ms.run([&](const std::vector<std::uint8_t>& col) {
        ++out.labeled_count;
        Coloring f = Coloring(n, S.k, col).canonical_colors();
        if (seen.count(detail::digest_of(color_key(f)))) return true;
        auto orb = coloring_orbit(f, gt, 0, nullptr, &seen);
        ColoringClass cc;
        cc.rep = coloring_from_key(n, orb.canon);
        cc.orbit_size = orb.orbit_size;
        cc.stab_order = group_order(n) / orb.orbit_size;
        classes.emplace(orb.canon, std::move(cc));
        return true;
    });
    for (auto& [key, cc] : classes) out.classes.push_back(std::move(cc));
    return out;
}

// One representative per equivalence class; reps are canonical forms, sorted.
inline std::vector<Coloring> enumerate_perfect_colorings(int n, const QuotientMatrix& S) {
    auto ce = enumerate_coloring_classes(n, S);
    std::vector<Coloring> out;
    for (auto& cc : ce.classes) out.push_back(std::move(cc.rep));
    return out;
}

// ---------------------------------------------------------------------------
// mu-fold 1-perfect codes: every radius-1 ball holds exactly mu codewords.
// Equivalently a perfect 2-coloring with rows (mu-1, n-mu+1), (mu, n-mu),
// degenerating to the full/empty set at mu = n+1 / 0.

inline QuotientMatrix code_matrix(int n, int mu) {
    QuotientMatrix S;
    S.k = 2;
    S.S = {{mu - 1, n - mu + 1}, {mu, n - mu}};
    return S;
}

inline bool is_code(const Fiber& c, int mu) {
    const int n = c.dim();
    for (std::uint32_t v = 0; v < c.size(); ++v) {
        int cnt = c.test(v) ? 1 : 0;
        for (int j = 0; j < n; ++j) cnt += c.test(v ^ (Vertex{1} << j));
        if (cnt != mu) return false;
    }
    return true;
}

// Labeled enumeration via the DFS engine, streaming each code fiber.
inline void for_each_code(int n, int mu, const std::function<bool(const Fiber&)>& cb) {
    if (mu < 0 || mu > n + 1) throw std::invalid_argument("mu out of range");
    if (mu == 0 || mu == n + 1) {
        Fiber t(n);
        cb(mu == 0 ? t : t.complement());
        return;
    }
    if ((std::uint64_t(mu) << n) % (n + 1)) return;  // no admissible code size
    MatrixSearch ms(n, code_matrix(n, mu));
    ms.run([&](const std::vector<std::uint8_t>& col) {
        Fiber t(n);
        for (std::uint32_t v = 0; v < t.size(); ++v)
            if (col[v] == 0) t.set(v);
        return cb(t);
    });
}

// Cycle lengths of the induced subgraph when it is 2-regular (mu = 3).
inline std::vector<int> induced_cycle_structure(const Fiber& c) {
    auto verts = c.ones();
    const int n = c.dim();
    std::vector<int> lens;
    std::unordered_set<Vertex> todo(verts.begin(), verts.end());
    for (Vertex start : verts) {
        if (!todo.count(start)) continue;
        int len = 0;
        Vertex v = start, prev = start;
        for (;;) {
            todo.erase(v);
            ++len;
            Vertex next = v;
            for (int j = 0; j < n; ++j) {
                Vertex u = v ^ (Vertex{1} << j);
                if (c.test(u) && u != prev) { next = u; break; }
            }
            if (next == v || next == start) break;
            prev = v;
            v = next;
        }
        lens.push_back(len);
    }
    std::sort(lens.begin(), lens.end());
    return lens;
}

// All 1-perfect codes of Q_n (labeled), cached per call site.
inline std::vector<Fiber> perfect_codes(int n) {
    std::vector<Fiber> out;
    for_each_code(n, 1, [&](const Fiber& t) {
        out.push_back(t);
        return true;
    });
    return out;
}

struct SplitReport {
    bool contains_1perfect = false;
    bool fully_splittable = false;
    std::vector<Fiber> split;  // mu disjoint 1-perfect codes when splittable
};

inline SplitReport splittability(const Fiber& c, int mu, const std::vector<Fiber>& ones_codes) {
    if (!is_code(c, mu)) throw std::invalid_argument("fiber is not a mu-fold 1-perfect code");
    SplitReport rep;
    std::vector<const Fiber*> inside;
    for (auto& h : ones_codes)
        if (h.subset_of(c)) inside.push_back(&h);
    rep.contains_1perfect = !inside.empty();
    // greedy-free exact search for a full split into mu disjoint 1-perfect codes
    std::function<bool(const Fiber&, int)> rec = [&](const Fiber& rest, int left) {
        if (left == 0) return rest.empty();
        for (auto* h : inside) {
            if (!h->subset_of(rest)) continue;
            rep.split.push_back(*h);
            if (rec(rest ^ *h, left - 1)) return true;
            rep.split.pop_back();
        }
        return false;
    };
    rep.fully_splittable = rec(c, mu);
    if (!rep.fully_splittable) rep.split.clear();
    return rep;
}

inline SplitReport splittability(const Fiber& c, int mu) {
    return splittability(c, mu, perfect_codes(c.dim()));
}

// ---------------------------------------------------------------------------
// Isomorph-free code enumeration with stabilizer orders.

struct CodeClass {
    Fiber rep;                  // member with the canonical bit string
    std::uint64_t stab_order = 0;
    std::vector<int> cycles;    // induced cycle structure (mu = 3 style); empty otherwise
    bool contains_1perfect = false;
    bool fully_splittable = false;
};

struct CodeEnumeration {
    int n = 0, mu = 0;
    std::vector<CodeClass> classes;
    std::uint64_t labeled_count = 0;
};

inline CodeEnumeration enumerate_codes(int n, int mu) {
    CodeEnumeration ce;
    ce.n = n;
    ce.mu = mu;
    GroupTables gt(n);
    DigestSet seen;
    std::map<std::string, CodeClass> classes;
    for_each_code(n, mu, [&](const Fiber& t) {
        ++ce.labeled_count;
        std::string raw(reinterpret_cast<const char*>(t.words().data()), t.words().size() * 8);
        if (seen.count(detail::digest_of(raw))) return true;
        auto orb = fiber_orbit(t, gt, 0, nullptr, &seen);
        CodeClass cc;
        cc.rep = t;
        cc.stab_order = group_order(n) / orb.orbit_size;
        classes.emplace(orb.canon, std::move(cc));
        return true;
    });
    std::vector<Fiber> ones = (0 < mu && mu <= n) ? perfect_codes(n) : std::vector<Fiber>{};
    for (auto& [key, cc] : classes) {
        if (mu == 3) cc.cycles = induced_cycle_structure(cc.rep);
        if (0 < mu && mu <= n + 1) {
            auto rep = splittability(cc.rep, mu, mu <= n ? ones : perfect_codes(n));
            cc.contains_1perfect = rep.contains_1perfect;
            cc.fully_splittable = rep.fully_splittable;
        }
        ce.classes.push_back(std::move(cc));
    }
    return ce;
}

}  // namespace equicube
