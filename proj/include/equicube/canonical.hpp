// Equivalence testing, canonical forms, and stabilizer computation for
// colorings of Q_n under Aut(Q_n) (signed permutations) combined with color
// bijections, plus the argument-manipulation operators sigma_ij / tau_j.
//
// Two engines, used adaptively:
//   * orbit breadth-first search with the group generators (exact, memory
//     proportional to the orbit; preferred for symmetric objects and n <= 7);
//   * ordered backtracking over the affine structure of a signed permutation
//     (image of 0, then images of the basis directions), pruning by
//     lexicographic comparison (preferred for asymmetric objects, n >= 8).
// Both produce the same canonical string: the lexicographically least
// vertex-ordered color sequence over all relabelings rename(f(alpha(x))),
// where rename is first-occurrence color renumbering.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "equicube/hypercube.hpp"
#include "equicube/refinement.hpp"
#include "equicube/spectral.hpp"

namespace equicube {

inline std::uint64_t group_order(int n) {
    std::uint64_t g = std::uint64_t{1} << n;
    for (int i = 2; i <= n; ++i) g *= i;
    return g;
}

// Adjacent coordinate transpositions plus one coordinate flip generate the
// whole group of signed permutations.
inline std::vector<SignedPerm> aut_generators(int n) {
    std::vector<SignedPerm> gens;
    for (int j = 0; j + 1 < n; ++j) {
        SignedPerm a = SignedPerm::identity(n);
        std::swap(a.perm[j], a.perm[j + 1]);
        gens.push_back(a);
    }
    SignedPerm f = SignedPerm::identity(n);
    f.flips = 1;
    gens.push_back(f);
    return gens;
}

// Precomputed vertex-image tables for a generator set.
struct GroupTables {
    int n = 0;
    std::vector<SignedPerm> gens;
    std::vector<std::vector<Vertex>> maps;

    explicit GroupTables(int n_) : n(n_), gens(aut_generators(n_)) {
        for (auto& g : gens) maps.push_back(g.table());
    }
};

// First-occurrence color string of a coloring; the universal dedup key.
inline std::string color_key(const Coloring& f) {
    auto c = f.canonical_colors();
    return std::string(c.colors().begin(), c.colors().end());
}

namespace detail {

inline std::string remap_key(const std::string& key, const std::vector<Vertex>& map, int k) {
    // key2[x] = rename(key[map(x)])
    std::string out(key.size(), 0);
    int rename[256];
    for (int i = 0; i < k; ++i) rename[i] = -1;
    int next = 0;
    for (std::size_t x = 0; x < key.size(); ++x) {
        int c = std::uint8_t(key[map[x]]);
        if (rename[c] < 0) rename[c] = next++;
        out[x] = char(rename[c]);
    }
    return out;
}

struct Digest {
    std::uint64_t a = 0, b = 0;
    bool operator==(const Digest& o) const { return a == o.a && b == o.b; }
};
struct DigestHash {
    std::size_t operator()(const Digest& d) const { return d.a ^ (d.b * 0x9e3779b97f4a7c15ULL); }
};

inline Digest digest_of(const std::string& s) {
    std::uint64_t h1 = 0x2b358bc2d9c586f3ULL, h2 = 0x8f462907535ace1dULL;
    for (unsigned char c : s) {
        h1 = (h1 ^ c) * 0x100000001b3ULL;
        h2 = (h2 + c + 1) * 0xc2b2ae3d27d4eb4fULL;
        h2 ^= h2 >> 29;
    }
    return {h1, h2};
}

}  // namespace detail

struct OrbitResult {
    std::string canon;          // minimal key over the orbit
    std::uint64_t orbit_size = 0;
    bool complete = false;      // false if the element cap was hit
};

using DigestSet = std::unordered_set<detail::Digest, detail::DigestHash>;

// Orbit of a coloring (up to color renaming) under Aut(Q_n), via BFS over
// normalized color strings.  Stores 128-bit digests only.  When `mark` is
// given it doubles as the seen set, so repeated calls with one shared set
// cover disjoint orbits and later membership tests are O(1).
inline OrbitResult coloring_orbit(const Coloring& f, const GroupTables& gt,
                                  std::size_t cap = 0,
                                  std::vector<std::string>* elements = nullptr,
                                  DigestSet* mark = nullptr) {
    const int k = f.num_colors();
    OrbitResult res;
    std::string start = color_key(f);
    DigestSet local;
    DigestSet& seen = mark ? *mark : local;
    std::uint64_t inserted = 0;
    std::vector<std::string> frontier{start};
    seen.insert(detail::digest_of(start));
    ++inserted;
    res.canon = start;
    if (elements) elements->push_back(start);
    while (!frontier.empty()) {
        std::vector<std::string> next;
        for (auto& key : frontier) {
            for (auto& map : gt.maps) {
                std::string img = detail::remap_key(key, map, k);
                auto d = detail::digest_of(img);
                if (seen.insert(d).second) {
                    ++inserted;
                    if (img < res.canon) res.canon = img;
                    if (elements) elements->push_back(img);
                    if (cap && inserted > cap) {
                        res.orbit_size = inserted;
                        return res;
                    }
                    next.push_back(std::move(img));
                }
            }
        }
        frontier = std::move(next);
    }
    res.orbit_size = inserted;
    res.complete = true;
    return res;
}

// Set-orbit of a fiber under Aut(Q_n) (no color renaming): used for the
// |Aut| of codes.
inline OrbitResult fiber_orbit(const Fiber& t, const GroupTables& gt, std::size_t cap = 0,
                               std::vector<Fiber>* elements = nullptr,
                               DigestSet* mark = nullptr) {
    OrbitResult res;
    auto key_of = [&](const Fiber& x) {
        return std::string(reinterpret_cast<const char*>(x.words().data()),
                           x.words().size() * 8);
    };
    auto apply = [&](const Fiber& x, const std::vector<Vertex>& map) {
        Fiber r(x.dim());
        for (std::uint32_t v = 0; v < x.size(); ++v)
            if (x.test(v)) r.set(map[v]);
        return r;
    };
    DigestSet local;
    DigestSet& seen = mark ? *mark : local;
    std::uint64_t inserted = 0;
    std::vector<Fiber> frontier{t};
    seen.insert(detail::digest_of(key_of(t)));
    ++inserted;
    res.canon = key_of(t);
    if (elements) elements->push_back(t);
    while (!frontier.empty()) {
        std::vector<Fiber> next;
        for (auto& x : frontier) {
            for (auto& map : gt.maps) {
                Fiber img = apply(x, map);
                std::string key = key_of(img);
                if (seen.insert(detail::digest_of(key)).second) {
                    ++inserted;
                    if (key < res.canon) res.canon = std::move(key);
                    if (elements) elements->push_back(img);
                    if (cap && inserted > cap) {
                        res.orbit_size = inserted;
                        return res;
                    }
                    next.push_back(std::move(img));
                }
            }
        }
        frontier = std::move(next);
    }
    res.orbit_size = inserted;
    res.complete = true;
    return res;
}


// ---------------------------------------------------------------------------
// Backtracking canonicalizer.
//
// A signed permutation acts affinely: alpha(x) = P(x) ^ c.  Fix c = alpha(0),
// then choose the basis images p_j = P(e_j) level by level; after level j the
// positions x < 2^{j+1} of the relabeled string are determined.  Keep only the
// choices attaining the lexicographic minimum of each block.

namespace detail {

struct CanonCandidate {
    Vertex c = 0;
    std::uint32_t used = 0;                 // chosen directions (bitmask of original coords)
    std::array<std::uint8_t, kMaxDim> p{};  // p[j] = original coordinate mapped from e_j
    std::vector<std::int16_t> rename;       // f-color -> canonical color, -1 if unseen
    int next_color = 0;

    // alpha(x) = P(x) ^ c in SignedPerm form.
    SignedPerm alpha(int n) const {
        SignedPerm a;
        a.n = n;
        for (int j = 0; j < n; ++j) a.perm[j] = p[j];
        a.flips = 0;
        a.flips = a.inverse().apply(c);
        return a;
    }
};

}  // namespace detail

struct BacktrackCanonResult {
    std::string canon;
    std::uint64_t leaf_count = 0;  // = stabilizer order when search completes
    bool complete = false;         // false if the candidate cap was hit
    std::vector<detail::CanonCandidate> leaves;  // the minimal labelings (capped)
};

inline BacktrackCanonResult canonical_backtrack(const Coloring& f, std::size_t cand_cap = 1 << 20) {
    const int n = f.dim(), k = f.num_colors();
    const std::uint32_t nv = f.size();
    const auto& col = f.colors();
    BacktrackCanonResult res;
    res.canon.resize(nv);

    std::vector<detail::CanonCandidate> cands;
    cands.reserve(nv);
    for (Vertex c = 0; c < nv; ++c) {
        detail::CanonCandidate cd;
        cd.c = c;
        cd.rename.assign(k, -1);
        cd.rename[col[c]] = 0;
        cd.next_color = 1;
        cands.push_back(cd);
    }
    res.canon[0] = 0;

    std::vector<Vertex> alpha(nv);  // alpha values for the current candidate prefix
    std::string block, best_block;
    for (int level = 0; level < n; ++level) {
        const std::uint32_t blk = std::uint32_t{1} << level;
        std::vector<detail::CanonCandidate> keep;
        bool have_best = false;
        best_block.assign(blk, char(127));
        block.resize(blk);
        for (auto& cd : cands) {
            // alpha on [0, blk) from the candidate's chosen directions
            alpha[0] = cd.c;
            for (int j = 0; j < level; ++j) {
                const Vertex pj = Vertex{1} << cd.p[j];
                const std::uint32_t half = std::uint32_t{1} << j;
                for (std::uint32_t y = 0; y < half; ++y) alpha[half + y] = alpha[y] ^ pj;
            }
            for (int d = 0; d < n; ++d) {
                if (cd.used & (std::uint32_t{1} << d)) continue;
                const Vertex pd = Vertex{1} << d;
                auto rename = cd.rename;
                int next = cd.next_color;
                bool worse = false, better = false;
                for (std::uint32_t y = 0; y < blk; ++y) {
                    int cc = col[alpha[y] ^ pd];
                    if (rename[cc] < 0) rename[cc] = std::int16_t(next++);
                    unsigned char val = (unsigned char)rename[cc];
                    block[y] = char(val);
                    if (!better && have_best) {
                        unsigned char ref = (unsigned char)best_block[y];
                        if (val > ref) { worse = true; break; }
                        if (val < ref) better = true;
                    }
                }
                if (worse) continue;
                if (!have_best || better) {
                    keep.clear();
                    best_block.assign(block.begin(), block.end());
                    have_best = true;
                }
                detail::CanonCandidate nd = cd;
                nd.used |= std::uint32_t{1} << d;
                nd.p[level] = std::uint8_t(d);
                nd.rename = rename;
                nd.next_color = next;
                keep.push_back(nd);
                if (keep.size() > cand_cap) {
                    res.leaf_count = 0;
                    return res;  // cap hit: caller falls back to the orbit engine
                }
            }
        }
        std::copy(best_block.begin(), best_block.end(), res.canon.begin() + blk);
        cands = std::move(keep);
    }
    res.leaf_count = cands.size();
    res.complete = true;
    res.leaves = std::move(cands);
    return res;
}

// Canonical form of a fiber as a set (no color swap): minimizes the bit string
// x -> t(alpha(x)) over signed permutations alpha.  Leaf count = set-stabilizer
// order, matching the |Aut| convention for codes.
struct FiberCanonResult {
    std::string canon;  // 2^n bytes, values 0/1
    std::uint64_t stab_order = 0;
    bool complete = false;
};

inline FiberCanonResult fiber_canonical(const Fiber& t, std::size_t cand_cap = 1 << 20) {
    const int n = t.dim();
    const std::uint32_t nv = t.size();
    FiberCanonResult res;
    res.canon.resize(nv);

    struct Cand {
        Vertex c;
        std::uint32_t used;
        std::array<std::uint8_t, kMaxDim> p;
    };
    std::vector<Cand> cands;
    // position 0 of the minimal string: 0 if any vertex lies outside t
    const bool all_ones = t.popcount() == nv;
    for (Vertex c = 0; c < nv; ++c)
        if (t.test(c) == all_ones) cands.push_back({c, 0, {}});
    res.canon[0] = char(all_ones);

    std::vector<Vertex> alpha(nv);
    std::string block, best_block;
    for (int level = 0; level < n; ++level) {
        const std::uint32_t blk = std::uint32_t{1} << level;
        std::vector<Cand> keep;
        bool have_best = false;
        block.resize(blk);
        for (auto& cd : cands) {
            alpha[0] = cd.c;
            for (int j = 0; j < level; ++j) {
                const Vertex pj = Vertex{1} << cd.p[j];
                const std::uint32_t half = std::uint32_t{1} << j;
                for (std::uint32_t y = 0; y < half; ++y) alpha[half + y] = alpha[y] ^ pj;
            }
            for (int d = 0; d < n; ++d) {
                if (cd.used & (std::uint32_t{1} << d)) continue;
                const Vertex pd = Vertex{1} << d;
                bool worse = false, better = false;
                for (std::uint32_t y = 0; y < blk; ++y) {
                    char val = char(t.test(alpha[y] ^ pd));
                    block[y] = val;
                    if (!better && have_best) {
                        if (val > best_block[y]) { worse = true; break; }
                        if (val < best_block[y]) better = true;
                    }
                }
                if (worse) continue;
                if (!have_best || better) {
                    keep.clear();
                    best_block = block;
                    have_best = true;
                }
                Cand nd = cd;
                nd.used |= std::uint32_t{1} << d;
                nd.p[level] = std::uint8_t(d);
                keep.push_back(nd);
                if (keep.size() > cand_cap) return res;
            }
        }
        std::copy(best_block.begin(), best_block.end(), res.canon.begin() + blk);
        cands = std::move(keep);
    }
    res.stab_order = cands.size();
    res.complete = true;
    return res;
}

// Set-stabilizer order in Aut(Q_n), with orbit fallback for the rare
// ultra-symmetric fibers.
inline std::uint64_t stabilizer_order(const Fiber& t, const GroupTables& gt) {
    auto fc = fiber_canonical(t);
    if (fc.complete) return fc.stab_order;
    auto orb = fiber_orbit(t, gt);
    return group_order(t.dim()) / orb.orbit_size;
}

// ---------------------------------------------------------------------------
// Public canonical form / equivalence API.

struct CanonicalForm {
    Coloring canon;
    std::uint64_t aut_order = 0;  // stabilizer in Aut(Q_n) x colorBijections
    std::vector<ColoringEquivalence> generators;  // self-equivalences of canon
};

inline Coloring coloring_from_key(int n, const std::string& key) {
    int k = 0;
    for (unsigned char c : key) k = std::max(k, int(c) + 1);
    return Coloring(n, k, std::vector<std::uint8_t>(key.begin(), key.end()));
}

// Adaptive: the backtracking engine is fast when the stabilizer is small and
// hits its candidate cap otherwise; but a large stabilizer forces a small
// orbit (orbit * stabilizer = 2^n n! k-renamings), so the orbit BFS fallback
// is then cheap.  One of the two always terminates within memory for n <= 10.
inline CanonicalForm canonical_form(const Coloring& f, const GroupTables& gt) {
    const int n = f.dim();
    if (n > 10) throw std::invalid_argument("canonical_form: practical cap is n <= 10");
    const std::uint64_t g = group_order(n);
    if (f.num_colors() == 1) {
        CanonicalForm cf{Coloring::constant(n), g, {}};
        for (auto& a : gt.gens) cf.generators.push_back({a, {0}});
        return cf;
    }
    auto bt = canonical_backtrack(f);
    if (!bt.complete) {
        auto orb = coloring_orbit(f, gt);
        return {coloring_from_key(n, orb.canon), g / orb.orbit_size, {}};
    }
    CanonicalForm cf{coloring_from_key(n, bt.canon), bt.leaf_count, {}};
    // Stabilizer elements of canon from pairs of minimal labelings:
    // canon = pi_i . f . alpha_i for every leaf i, so
    // canon = (pi_i pi_0^-1) . canon . (alpha_0^-1 alpha_i).
    const auto& l0 = bt.leaves[0];
    SignedPerm a0inv = l0.alpha(n).inverse();
    const int k = f.num_colors();
    for (std::size_t i = 1; i < bt.leaves.size() && cf.generators.size() < 8; ++i) {
        const auto& li = bt.leaves[i];
        ColoringEquivalence e;
        e.aut = a0inv * li.alpha(n);
        e.color_map.resize(k);
        std::vector<int> pi0inv(k);
        for (int c = 0; c < k; ++c) pi0inv[l0.rename[c]] = c;
        for (int c = 0; c < k; ++c) e.color_map[c] = std::uint8_t(li.rename[pi0inv[c]]);
        cf.generators.push_back(std::move(e));
    }
    return cf;
}

inline std::string canonical_key(const Coloring& f, const GroupTables& gt) {
    if (f.num_colors() == 1) return std::string(f.size(), 0);
    auto bt = canonical_backtrack(f);
    if (bt.complete) return bt.canon;
    return coloring_orbit(f, gt).canon;
}

// Backtracking search for an explicit witness g(x) = pi(f(alpha(x))).
inline std::optional<ColoringEquivalence> find_equivalence(const Coloring& f, const Coloring& g) {
    if (f.dim() != g.dim() || f.num_colors() != g.num_colors()) return std::nullopt;
    const int n = f.dim(), k = f.num_colors();
    const std::uint32_t nv = f.size();
    const auto& fc = f.colors();
    const auto& gc = g.colors();

    // invariant prescreen
    {
        auto cf = f.color_counts(), cg = g.color_counts();
        std::sort(cf.begin(), cf.end());
        std::sort(cg.begin(), cg.end());
        if (cf != cg) return std::nullopt;
    }

    // Search alpha with g(x) = pi(f(alpha(x))): the color map pi is forced by
    // first matches.  alpha(x) = P(x) ^ c.
    std::vector<Vertex> alpha(nv);
    struct Frame {
        Vertex c;
        std::array<std::uint8_t, kMaxDim> p;
        std::uint32_t used;
        std::array<std::int16_t, 256> pi;      // f-color -> g-color
        std::array<std::int16_t, 256> pi_inv;  // g-color -> f-color
    };
    std::vector<Frame> stack;
    for (Vertex c = 0; c < nv; ++c) {
        Frame fr{};
        fr.c = c;
        fr.used = 0;
        fr.pi.fill(-1);
        fr.pi_inv.fill(-1);
        fr.pi[fc[c]] = gc[0];
        fr.pi_inv[gc[0]] = fc[c];
        stack.push_back(fr);
    }
    // depth-first over levels
    std::vector<std::vector<Frame>> levels(n + 1);
    levels[0] = std::move(stack);
    int level = 0;
    while (level >= 0) {
        if (level == n) {
            // alpha(x) = P(x) ^ c with P(e_j) = e_{p[j]}; in SignedPerm form
            // alpha(x) = Pm(x ^ flips) with Pm.perm[j] = p[j], flips = Pm^{-1}(c).
            const Frame& fr = levels[n].back();
            ColoringEquivalence e;
            e.aut.n = n;
            for (int j = 0; j < n; ++j) e.aut.perm[j] = fr.p[j];
            e.aut.flips = 0;
            e.aut.flips = e.aut.inverse().apply(fr.c);
            e.color_map.resize(k);
            for (int i = 0; i < k; ++i) e.color_map[i] = std::uint8_t(fr.pi[i]);
            return e;
        }
        if (levels[level].empty()) {
            --level;
            if (level >= 0) levels[level].pop_back();  // done with this frame
            continue;
        }
        // expand the last frame of this level
        const Frame fr = levels[level].back();
        const std::uint32_t blk = std::uint32_t{1} << level;
        alpha[0] = fr.c;
        for (int j = 0; j < level; ++j) {
            const Vertex pj = Vertex{1} << fr.p[j];
            const std::uint32_t half = std::uint32_t{1} << j;
            for (std::uint32_t y = 0; y < half; ++y) alpha[half + y] = alpha[y] ^ pj;
        }
        std::vector<Frame> children;
        for (int d = 0; d < n; ++d) {
            if (fr.used & (std::uint32_t{1} << d)) continue;
            Frame nd = fr;
            nd.used |= std::uint32_t{1} << d;
            nd.p[level] = std::uint8_t(d);
            const Vertex pd = Vertex{1} << d;
            bool ok = true;
            for (std::uint32_t y = 0; y < blk && ok; ++y) {
                int a = fc[alpha[y] ^ pd], b = gc[blk + y];
                if (nd.pi[a] < 0 && nd.pi_inv[b] < 0) {
                    nd.pi[a] = std::int16_t(b);
                    nd.pi_inv[b] = std::int16_t(a);
                } else if (nd.pi[a] != b) {
                    ok = false;
                }
            }
            if (ok) children.push_back(nd);
        }
        if (children.empty()) {
            // no extension: advance to the next frame at this level
            levels[level].pop_back();
            continue;
        }
        ++level;
        levels[level] = std::move(children);
    }
    return std::nullopt;
}

inline bool are_equivalent(const Coloring& f, const Coloring& g) {
    return find_equivalence(f, g).has_value();
}

// ---------------------------------------------------------------------------
// Argument manipulation (sigma_ij, tau_j, dummies).

inline Coloring swap_args(const Coloring& f, int i, int j) {
    if (i < 0 || j < 0 || i >= f.dim() || j >= f.dim()) throw std::out_of_range("argument index");
    ColoringEquivalence e = ColoringEquivalence::identity(f.dim(), f.num_colors());
    std::swap(e.aut.perm[i], e.aut.perm[j]);
    return apply_aut(f, e);
}

inline Fiber swap_args(const Fiber& t, int i, int j) {
    if (i < 0 || j < 0 || i >= t.dim() || j >= t.dim()) throw std::out_of_range("argument index");
    SignedPerm a = SignedPerm::identity(t.dim());
    std::swap(a.perm[i], a.perm[j]);
    return apply_perm(t, a);
}

inline Coloring flip_arg(const Coloring& f, int j) {
    if (j < 0 || j >= f.dim()) throw std::out_of_range("argument index");
    ColoringEquivalence e = ColoringEquivalence::identity(f.dim(), f.num_colors());
    e.aut.flips = std::uint32_t{1} << j;
    return apply_aut(f, e);
}

inline Coloring add_dummy_arg(const Coloring& f) {
    const std::uint32_t nv = f.size();
    std::vector<std::uint8_t> col(nv * 2);
    for (std::uint32_t v = 0; v < nv; ++v) col[v] = col[v + nv] = f(v);
    return Coloring(f.dim() + 1, f.num_colors(), std::move(col));
}

inline Fiber add_dummy_arg(const Fiber& t) {
    Fiber r(t.dim() + 1);
    for (std::uint32_t v = 0; v < t.size(); ++v)
        if (t.test(v)) {
            r.set(v);
            r.set(v + t.size());
        }
    return r;
}

// Projects onto the essential coordinates in ascending order.
inline Coloring drop_nonessential(const Coloring& f) {
    std::uint32_t ess = essential_arguments(f);
    std::vector<int> coords;
    for (int j = 0; j < f.dim(); ++j)
        if (ess & (std::uint32_t{1} << j)) coords.push_back(j);
    int m = int(coords.size());
    if (m == 0) m = 0;
    std::vector<std::uint8_t> col(std::size_t{1} << m);
    for (std::uint32_t y = 0; y < col.size(); ++y) {
        Vertex v = 0;
        for (int b = 0; b < m; ++b)
            if (y & (std::uint32_t{1} << b)) v |= Vertex{1} << coords[b];
        col[y] = f(v);
    }
    return Coloring(m, f.num_colors(), std::move(col));
}

// Extendability check from the classification algorithm: h = (g, t) with m
// essential arguments is extendable if adding a dummy coordinate and swapping
// it with some i yields a combined coloring with m+1 essential arguments and
// the same number of colors.
inline bool extendable(const Coloring& g, const Fiber& t) {
    Coloring h = combine(g, t);
    const int m = hamming_weight(essential_arguments(h));
    const int kh = h.num_colors();
    Coloring g2 = add_dummy_arg(g);
    Fiber t2 = add_dummy_arg(t);
    const int dummy = g.dim();  // index of the added coordinate
    for (int i = 0; i < g.dim(); ++i) {
        Fiber ts = swap_args(t2, i, dummy);
        Coloring h2 = combine(g2, ts);
        if (h2.num_colors() == kh && hamming_weight(essential_arguments(h2)) == m + 1) return true;
    }
    return false;
}

}  // namespace equicube
