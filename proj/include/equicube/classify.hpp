// Exhaustive classification of perfect colorings with a spectral property,
// via the combine-and-refine closure:
//
//   1. sources: every 2-coloring that can occur as a fiber of a coloring with
//      the property (a Walsh-support condition, enumerated by a Gray-code scan
//      of all 5-variable functions and a meet-in-the-middle pairing of halves
//      for 6 variables);
//   2. fiber library T: refine every source and harvest all fibers of the
//      refinements that satisfy the property (T is closed under Aut(Q_n)
//      because the source set is);
//   3. closure: starting from the constant coloring, combine every known
//      class with every library fiber lying strictly inside one color class,
//      refine, keep the refinements with the property, and repeat until no
//      new class appears.
//
// Every perfect coloring with the property is reached: each of its fibers t
// is a fiber of the coarsest refinement of the 2-coloring (t, not-t), which
// is a source, so t is in the library; splitting off the fibers one by one
// walks down to the constant coloring.

#pragma once

#include <array>
#include <cstdio>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "equicube/canonical.hpp"
#include "equicube/refinement.hpp"
#include "equicube/spectral.hpp"

namespace equicube {

// ---------------------------------------------------------------------------
// Number of (n-4)-resilient Boolean functions of n variables (equivalently,
// by the bipartite flip, functions whose Walsh support lies in levels <= 3).
inline std::uint64_t kirienko_count(int n) {
    // numerator coefficients of the degree-10 counting polynomial over the
    // common denominator 90, from n^10 down to the constant term
    static const long long c[11] = {45,      105,      8900,     -109030,
                                    128576,  1906616,  -6707845, 4496255,
                                    6570324, -6293766, 0};
    __int128 acc = 0;
    for (int i = 0; i < 11; ++i) acc = acc * n + c[i];
    acc += 180;  // constant term folded in after the Horner loop
    if (acc % 90 != 0) throw std::logic_error("counting polynomial not integral");
    return std::uint64_t(acc / 90);
}

// ---------------------------------------------------------------------------
// Fast coarsest equitable refinement for n <= 6: flat arrays, signature of a
// vertex = own color plus the sorted multiset of neighbor colors, packed
// exactly into 6-bit fields of one 64-bit word (colors < 64 = vertex count).

namespace detail {

// Refines col[0..nv) in place to the coarsest equitable partition; labels are
// by first occurrence of each final class.  Returns the number of colors.
inline int flat_refine(int n, std::uint32_t nv, std::uint8_t* col, int k) {
    std::uint64_t sig[64], distinct[64];
    std::uint8_t nc[64], nb[6];
    for (;;) {
        for (std::uint32_t v = 0; v < nv; ++v) {
            for (int j = 0; j < n; ++j) nb[j] = col[v ^ (std::uint32_t{1} << j)];
            for (int j = 1; j < n; ++j) {  // insertion sort
                std::uint8_t x = nb[j];
                int i = j;
                while (i > 0 && nb[i - 1] > x) { nb[i] = nb[i - 1]; --i; }
                nb[i] = x;
            }
            std::uint64_t s = col[v];
            for (int j = 0; j < n; ++j) s |= std::uint64_t(nb[j]) << (6 + 6 * j);
            sig[v] = s;
        }
        int k2 = 0;
        for (std::uint32_t v = 0; v < nv; ++v) {
            int id = -1;
            for (int i = 0; i < k2; ++i)
                if (distinct[i] == sig[v]) { id = i; break; }
            if (id < 0) {
                distinct[k2] = sig[v];
                id = k2++;
            }
            nc[v] = std::uint8_t(id);
        }
        if (k2 == k) return k;
        std::copy(nc, nc + nv, col);
        k = k2;
    }
}

}  // namespace detail

inline Coloring fast_refine(const Coloring& f) {
    const int n = f.dim();
    if (n > 6) return coarsest_equitable_refinement(f);
    const std::uint32_t nv = f.size();
    std::uint8_t col[64];
    std::copy(f.colors().begin(), f.colors().end(), col);
    int k = detail::flat_refine(n, nv, col, f.num_colors());
    return Coloring(n, k, std::vector<std::uint8_t>(col, col + nv)).canonical_colors();
}

// ---------------------------------------------------------------------------
// Gray-code scan of all 5-variable Boolean functions, collecting the
// 1-correlation-immune ones (all first-level Walsh coefficients zero) and the
// balanced subset (1-resilient).  The result is cached on disk because the
// 2^32 scan takes tens of seconds.

struct Q5Scan {
    std::vector<std::uint32_t> ci1;         // 1-CI truth tables
    std::vector<std::uint32_t> resilient1;  // balanced 1-CI truth tables
};

namespace detail {

inline bool load_q5_cache(const std::string& path, Q5Scan& out) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) return false;
    std::uint64_t magic = 0, a = 0, b = 0;
    bool ok = std::fread(&magic, 8, 1, fp) == 1 && magic == 0x6571355343414eULL &&
              std::fread(&a, 8, 1, fp) == 1 && std::fread(&b, 8, 1, fp) == 1;
    if (ok) {
        out.ci1.resize(a);
        out.resilient1.resize(b);
        ok = std::fread(out.ci1.data(), 4, a, fp) == a &&
             std::fread(out.resilient1.data(), 4, b, fp) == b;
    }
    std::fclose(fp);
    if (!ok) out = Q5Scan{};
    return ok;
}

inline void save_q5_cache(const std::string& path, const Q5Scan& s) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) return;  // cache is an optimization only
    std::uint64_t magic = 0x6571355343414eULL, a = s.ci1.size(), b = s.resilient1.size();
    std::fwrite(&magic, 8, 1, fp);
    std::fwrite(&a, 8, 1, fp);
    std::fwrite(&b, 8, 1, fp);
    std::fwrite(s.ci1.data(), 4, a, fp);
    std::fwrite(s.resilient1.data(), 4, b, fp);
    std::fclose(fp);
}

}  // namespace detail

inline const Q5Scan& q5_scan(const std::string& cache_path = "equicube_q5scan.cache") {
    static const Q5Scan scan = [&] {
        Q5Scan out;
        if (!cache_path.empty() && detail::load_q5_cache(cache_path, out)) return out;
        // Walsh coefficients F(u) = sum_v (-1)^{f(v) xor par(u & v)} for the
        // five singletons u, updated incrementally along the Gray sequence
        // tt(i) = i ^ (i >> 1): step i flips vertex ctz(i).
        std::int8_t sgn[32][5];
        for (int p = 0; p < 32; ++p)
            for (int j = 0; j < 5; ++j) sgn[p][j] = (p >> j & 1) ? -1 : 1;
        std::int32_t F[5] = {32, 32, 32, 32, 32};
        // tt = 0: f = 0 identically, F(u) = sum (-1)^{par(u&v)} = 0 for u != 0
        for (int j = 0; j < 5; ++j) F[j] = 0;
        std::uint32_t tt = 0;
        int w = 0;
        auto emit = [&] {
            if (F[0] | F[1] | F[2] | F[3] | F[4]) return;
            out.ci1.push_back(tt);
            if (w == 16) out.resilient1.push_back(tt);
        };
        emit();
        for (std::uint64_t i = 1; i < (std::uint64_t{1} << 32); ++i) {
            const int p = __builtin_ctzll(i);
            const int b = int(tt >> p & 1);
            tt ^= std::uint32_t{1} << p;
            w += 1 - 2 * b;
            const std::int32_t s = std::int32_t(4 * b - 2);  // -2 * (-1)^{old bit}
            F[0] += s * sgn[p][0];
            F[1] += s * sgn[p][1];
            F[2] += s * sgn[p][2];
            F[3] += s * sgn[p][3];
            F[4] += s * sgn[p][4];
            emit();
        }
        if (!cache_path.empty()) detail::save_q5_cache(cache_path, out);
        return out;
    }();
    return scan;
}

// ---------------------------------------------------------------------------
// 6-variable sources by meet-in-the-middle.  Split f on x_5 into halves
// (f0, f1); f is 2-CI iff both halves are 1-CI with equal weight and opposite
// second-level Walsh coefficients, and 2-resilient iff both halves are
// additionally balanced.  Streams every matching ordered pair once.

namespace detail {

// second-level Walsh coefficients of a 5-variable truth table, plus weight
inline std::string q5_pair_key(std::uint32_t tt, bool negate) {
    static const std::array<std::uint32_t, 10> masks = [] {
        std::array<std::uint32_t, 10> m{};
        int idx = 0;
        for (int j1 = 0; j1 < 5; ++j1)
            for (int j2 = j1 + 1; j2 < 5; ++j2) {
                std::uint32_t u = (1u << j1) | (1u << j2), mask = 0;
                for (std::uint32_t v = 0; v < 32; ++v)
                    if (hamming_weight(u & v) & 1) mask |= 1u << v;
                m[idx++] = mask;
            }
        return m;
    }();
    std::string key(11, 0);
    key[0] = char(hamming_weight(tt));
    for (int i = 0; i < 10; ++i) {
        int f = 32 - 2 * hamming_weight(tt ^ masks[i]);
        key[1 + i] = char((negate ? -f : f) / 2 + 64);
    }
    return key;
}

}  // namespace detail

// Calls cb with the truth table of every 2-resilient (balanced = true) or
// 2-CI (balanced = false) function of 6 variables; returns the count.
inline std::uint64_t for_each_q6_source(bool balanced,
                                        const std::function<void(std::uint64_t)>& cb,
                                        const std::string& cache_path = "equicube_q5scan.cache") {
    const auto& scan = q5_scan(cache_path);
    const auto& halves = balanced ? scan.resilient1 : scan.ci1;
    std::unordered_map<std::string, std::vector<std::uint32_t>> buckets;
    for (auto tt : halves) buckets[detail::q5_pair_key(tt, false)].push_back(tt);
    std::uint64_t count = 0;
    for (auto hi : halves) {
        auto it = buckets.find(detail::q5_pair_key(hi, true));
        if (it == buckets.end()) continue;
        const std::uint64_t hi_part = std::uint64_t(hi) << 32;
        for (auto lo : it->second) {
            ++count;
            cb(hi_part | lo);
        }
    }
    return count;
}

// Bipartite flip of a 6-variable truth table (xor with the parity function).
inline std::uint64_t bipartite_flip64(std::uint64_t tt) { return tt ^ 0x6996966996696996ULL; }

// ---------------------------------------------------------------------------
// Spectral filtering by Walsh levels.  For a perfect coloring, the set of
// eigenvalues of the quotient matrix is exactly {n - 2l} over the Walsh
// support levels l of the fibers (level 0 giving the main eigenvalue n), so
// an "eigenvalues within E" condition is equivalent to "every fiber's Walsh
// support lies in the allowed levels" -- a few popcounts per fiber instead of
// an integer eigenvalue computation.

namespace detail {

// sign masks: bit v of level_mask(u) = parity of u & v
inline const std::array<std::uint64_t, 64>& walsh_sign_masks() {
    static const std::array<std::uint64_t, 64> masks = [] {
        std::array<std::uint64_t, 64> m{};
        for (std::uint32_t u = 0; u < 64; ++u)
            for (std::uint32_t v = 0; v < 64; ++v)
                if (hamming_weight(u & v) & 1) m[u] |= std::uint64_t{1} << v;
        return m;
    }();
    return masks;
}

}  // namespace detail

// Bitmask of Walsh support levels (bit l set iff some coefficient on level l
// is nonzero) of a fiber given as a truth table, n <= 6.
inline int walsh_levels(std::uint64_t t, int n) {
    const auto& masks = detail::walsh_sign_masks();
    const int pc = hamming_weight(std::uint32_t(t)) + hamming_weight(std::uint32_t(t >> 32));
    int levels = t ? 1 : 0;  // level 0 iff the fiber is nonempty
    const std::uint32_t lim = num_vertices(n);
    for (std::uint32_t u = 1; u < lim; ++u) {
        const std::uint64_t x = t & masks[u];
        if (2 * (hamming_weight(std::uint32_t(x)) + hamming_weight(std::uint32_t(x >> 32))) != pc)
            levels |= 1 << hamming_weight(u);
    }
    return levels;
}

// Allowed-level mask for "every eigenvalue of the quotient matrix >= lo and
// every non-main eigenvalue <= hi" at dimension n.
inline int allowed_levels(int n, int lo, int hi) {
    int mask = 1;
    for (int l = 1; l <= n; ++l) {
        int lambda = n - 2 * l;
        if (lambda >= lo && lambda <= hi) mask |= 1 << l;
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Fiber library: refine each source 2-coloring and harvest the fibers of the
// refinements whose fibers' Walsh support stays within the allowed levels.

class FiberLibraryBuilder {
  public:
    FiberLibraryBuilder(int n, int allowed_levels_mask)
        : n_(n), nv_(num_vertices(n)), allowed_(allowed_levels_mask) {
        if (n > 6) throw std::invalid_argument("fiber library supports n <= 6");
    }

    void add(std::uint64_t tt) {
        ++sources_;
        const std::uint64_t full = nv_ == 64 ? ~std::uint64_t{0}
                                             : (std::uint64_t{1} << nv_) - 1;
        tt &= full;
        if (tt == 0 || tt == full) return;
        std::uint8_t col[64];
        for (std::uint32_t v = 0; v < nv_; ++v) col[v] = std::uint8_t(1 - (tt >> v & 1));
        int k = detail::flat_refine(n_, nv_, col, 2);
        std::uint64_t fibs[64] = {};
        for (std::uint32_t v = 0; v < nv_; ++v) fibs[col[v]] |= std::uint64_t{1} << v;
        for (int i = 0; i < k; ++i)
            if (walsh_levels(fibs[i], n_) & ~allowed_) return;
        ++kept_;
        for (int i = 0; i < k; ++i) set_.insert(fibs[i]);
    }

    std::vector<std::uint64_t> take() {
        std::vector<std::uint64_t> out(set_.begin(), set_.end());
        std::sort(out.begin(), out.end());
        return out;
    }
    std::uint64_t sources() const { return sources_; }
    std::uint64_t kept() const { return kept_; }

  private:
    int n_;
    std::uint32_t nv_;
    int allowed_;
    std::unordered_set<std::uint64_t> set_;
    std::uint64_t sources_ = 0, kept_ = 0;
};

// Cached end-to-end 6-variable fiber library: sources are the 2-resilient
// functions (balanced = true, bipartite-flipped to the low-degree side) or
// all 2-CI functions (balanced = false, used as they are).
struct FiberLibrary {
    std::vector<std::uint64_t> fibers;
    std::uint64_t sources = 0, kept = 0;
};

inline FiberLibrary q6_fiber_library(bool balanced, int allowed,
                                     const std::string& cache_dir = ".") {
    const std::string path = cache_dir + "/equicube_q6lib_" + (balanced ? "r" : "c") + "_" +
                             std::to_string(allowed) + ".cache";
    FiberLibrary lib;
    if (std::FILE* fp = std::fopen(path.c_str(), "rb")) {
        std::uint64_t magic = 0, cnt = 0;
        bool ok = std::fread(&magic, 8, 1, fp) == 1 && magic == 0x65713654364c4942ULL &&
                  std::fread(&lib.sources, 8, 1, fp) == 1 &&
                  std::fread(&lib.kept, 8, 1, fp) == 1 && std::fread(&cnt, 8, 1, fp) == 1;
        if (ok) {
            lib.fibers.resize(cnt);
            ok = std::fread(lib.fibers.data(), 8, cnt, fp) == cnt;
        }
        std::fclose(fp);
        if (ok) return lib;
        lib = FiberLibrary{};
    }
    FiberLibraryBuilder fb(6, allowed);
    for_each_q6_source(balanced,
                       [&](std::uint64_t tt) { fb.add(balanced ? bipartite_flip64(tt) : tt); },
                       cache_dir + "/equicube_q5scan.cache");
    lib.fibers = fb.take();
    lib.sources = fb.sources();
    lib.kept = fb.kept();
    if (std::FILE* fp = std::fopen(path.c_str(), "wb")) {
        std::uint64_t magic = 0x65713654364c4942ULL, cnt = lib.fibers.size();
        std::fwrite(&magic, 8, 1, fp);
        std::fwrite(&lib.sources, 8, 1, fp);
        std::fwrite(&lib.kept, 8, 1, fp);
        std::fwrite(&cnt, 8, 1, fp);
        std::fwrite(lib.fibers.data(), 8, cnt, fp);
        std::fclose(fp);
    }
    return lib;
}

// ---------------------------------------------------------------------------
// The classification closure.

struct ClassifiedClass {
    Coloring rep;  // canonical form
    Spectrum spectrum;
    int essential = 0;
    std::uint64_t stab_order = 0;
    int iteration = 0;  // closure depth at which the class first appeared
};

struct ClassificationReport {
    int n = 0;
    std::vector<ClassifiedClass> classes;  // every class with >= 2 colors
    int iterations = 0;
};

inline ClassificationReport classify(int n, const std::vector<std::uint64_t>& fibers,
                                     int allowed_levels_mask) {
    if (n > 6) throw std::invalid_argument("classify supports n <= 6");
    GroupTables gt(n);
    const std::uint32_t nv = num_vertices(n);
    ClassificationReport rep;
    rep.n = n;
    DigestSet class_seen, combo_seen;
    std::vector<Coloring> queue{Coloring::constant(n)};
    std::vector<int> depth{0};
    std::vector<std::uint64_t> fib, rfib;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const Coloring g = queue[qi];
        const int k = g.num_colors();
        fib.assign(k, 0);
        for (std::uint32_t v = 0; v < nv; ++v) fib[g(v)] |= std::uint64_t{1} << v;
        for (std::uint64_t t : fibers) {
            int c = -1;
            for (int i = 0; i < k; ++i)
                if ((t & ~fib[i]) == 0) { c = i; break; }
            if (c < 0 || t == fib[c]) continue;
            // split the ones of t off color c
            std::vector<std::uint8_t> hcol(g.colors());
            for (std::uint32_t v = 0; v < nv; ++v)
                if (t >> v & 1) hcol[v] = std::uint8_t(k);
            Coloring h(n, k + 1, std::move(hcol));
            if (!combo_seen.insert(detail::digest_of(color_key(h))).second) continue;
            Coloring r = fast_refine(h);
            rfib.assign(r.num_colors(), 0);
            for (std::uint32_t v = 0; v < nv; ++v) rfib[r(v)] |= std::uint64_t{1} << v;
            bool ok = true;
            for (auto f : rfib)
                if (walsh_levels(f, n) & ~allowed_levels_mask) { ok = false; break; }
            if (!ok) continue;
            if (class_seen.count(detail::digest_of(color_key(r)))) continue;
            auto orb = coloring_orbit(r, gt, 0, nullptr, &class_seen);
            auto q = quotient_matrix(r);
            auto sp = eigenvalues(*q.matrix, n);
            ClassifiedClass cc;
            cc.rep = coloring_from_key(n, orb.canon);
            cc.spectrum = *sp;
            cc.essential = hamming_weight(essential_arguments(r));
            cc.stab_order = group_order(n) / orb.orbit_size;
            cc.iteration = depth[qi] + 1;
            rep.iterations = std::max(rep.iterations, cc.iteration);
            rep.classes.push_back(std::move(cc));
            queue.push_back(std::move(r));
            depth.push_back(depth[qi] + 1);
        }
    }
    return rep;
}

}  // namespace equicube
