// Core value types for the hypercube Q_n: vertices, fibers, colorings,
// signed-permutation automorphisms, and bit-exact serialization.
//
// Vertex convention: a vertex of Q_n is an integer in [0, 2^n); bit j of the
// index is coordinate x_j (bit 0 = least significant).  Neighbors of v are
// v XOR 2^j.  Hex truth tables pack 4 vertices per nibble, most significant
// bit of the nibble first (nibble "1" = 0001 sets vertex 4c+3).

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace equicube {

inline constexpr int kMaxDim = 24;

using Vertex = std::uint32_t;

inline std::uint32_t num_vertices(int n) {
    if (n < 0 || n > kMaxDim) throw std::invalid_argument("dimension out of range");
    return std::uint32_t{1} << n;
}

inline int hamming_weight(std::uint32_t v) { return __builtin_popcount(v); }

inline std::vector<Vertex> neighbors(Vertex v, int n) {
    if (v >= num_vertices(n)) throw std::out_of_range("vertex out of range");
    std::vector<Vertex> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) out.push_back(v ^ (Vertex{1} << j));
    return out;
}

// ---------------------------------------------------------------------------
// Fiber: one color class as a 2^n-bit vector.

class Fiber {
  public:
    Fiber() : n_(0), w_(1, 0) {}
    explicit Fiber(int n) : n_(n), w_(word_count(n), 0) { (void)num_vertices(n); }

    int dim() const { return n_; }
    std::uint32_t size() const { return num_vertices(n_); }

    bool test(Vertex v) const { return (w_[v >> 6] >> (v & 63)) & 1; }
    void set(Vertex v, bool b = true) {
        if (b) w_[v >> 6] |= std::uint64_t{1} << (v & 63);
        else   w_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }
    void flip(Vertex v) { w_[v >> 6] ^= std::uint64_t{1} << (v & 63); }

    std::uint32_t popcount() const {
        std::uint32_t c = 0;
        for (auto w : w_) c += __builtin_popcountll(w);
        return c;
    }
    bool empty() const {
        return std::all_of(w_.begin(), w_.end(), [](std::uint64_t w) { return w == 0; });
    }

    Fiber complement() const {
        Fiber r(*this);
        for (auto& w : r.w_) w = ~w;
        r.mask_tail();
        return r;
    }
    bool disjoint(const Fiber& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return false;
        return true;
    }
    bool subset_of(const Fiber& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    Fiber operator|(const Fiber& o) const {
        Fiber r(*this);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] |= o.w_[i];
        return r;
    }
    Fiber operator&(const Fiber& o) const {
        Fiber r(*this);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] &= o.w_[i];
        return r;
    }
    Fiber operator^(const Fiber& o) const {
        Fiber r(*this);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] ^= o.w_[i];
        return r;
    }

    bool operator==(const Fiber& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator<(const Fiber& o) const { return w_ < o.w_; }

    const std::vector<std::uint64_t>& words() const { return w_; }
    std::vector<std::uint64_t>& words() { return w_; }

    // Vertices of the fiber in increasing order.
    std::vector<Vertex> ones() const {
        std::vector<Vertex> out;
        out.reserve(popcount());
        for (std::size_t i = 0; i < w_.size(); ++i) {
            std::uint64_t w = w_[i];
            while (w) {
                out.push_back(Vertex(i * 64 + __builtin_ctzll(w)));
                w &= w - 1;
            }
        }
        return out;
    }

  private:
    static std::size_t word_count(int n) { return n <= 6 ? 1 : std::size_t{1} << (n - 6); }
    void mask_tail() {
        if (n_ < 6) w_[0] &= (std::uint64_t{1} << (1u << n_)) - 1;
    }

    int n_;
    std::vector<std::uint64_t> w_;
};

// Hex truth-table format: length 2^n/4 (n >= 2), nibble c encodes vertices
// 4c..4c+3, most significant bit of the nibble = vertex 4c.
inline Fiber parse_hex(const std::string& s, int n) {
    if (n < 2) throw std::invalid_argument("parse_hex requires n >= 2");
    const std::uint32_t nv = num_vertices(n);
    if (s.size() * 4 != nv) throw std::invalid_argument("hex string has wrong length for dimension");
    Fiber t(n);
    for (std::uint32_t c = 0; c < s.size(); ++c) {
        char ch = s[c];
        int val;
        if (ch >= '0' && ch <= '9') val = ch - '0';
        else if (ch >= 'a' && ch <= 'f') val = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') val = ch - 'A' + 10;
        else throw std::invalid_argument("non-hex character in truth table");
        for (int b = 0; b < 4; ++b)
            if ((val >> (3 - b)) & 1) t.set(4 * c + b);
    }
    return t;
}

inline std::string emit_hex(const Fiber& t) {
    if (t.dim() < 2) throw std::invalid_argument("emit_hex requires n >= 2");
    std::string s(t.size() / 4, '0');
    for (std::uint32_t c = 0; c < s.size(); ++c) {
        int val = 0;
        for (int b = 0; b < 4; ++b)
            if (t.test(4 * c + b)) val |= 1 << (3 - b);
        s[c] = "0123456789abcdef"[val];
    }
    return s;
}

// ---------------------------------------------------------------------------
// Coloring: a surjective vertex -> color map with colors in [0, k).

class Coloring {
  public:
    Coloring() : n_(0), k_(1), colors_(1, 0) {}
    Coloring(int n, int k, std::vector<std::uint8_t> colors)
        : n_(n), k_(k), colors_(std::move(colors)) {
        if (colors_.size() != num_vertices(n)) throw std::invalid_argument("color array size mismatch");
        if (k < 1 || k > 256) throw std::invalid_argument("bad color count");
        std::vector<bool> seen(k, false);
        for (auto c : colors_) {
            if (c >= k) throw std::invalid_argument("color out of range");
            seen[c] = true;
        }
        if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
            throw std::invalid_argument("coloring is not surjective onto [0,k)");
    }

    static Coloring constant(int n) {
        return Coloring(n, 1, std::vector<std::uint8_t>(num_vertices(n), 0));
    }

    // 2-coloring from a fiber (color 0 = ones of t) -- only if both classes
    // are nonempty; a constant fiber yields a 1-coloring.
    static Coloring from_fiber(const Fiber& t) {
        const std::uint32_t nv = t.size();
        std::uint32_t pc = t.popcount();
        if (pc == 0 || pc == nv) return constant(t.dim());
        std::vector<std::uint8_t> col(nv);
        for (std::uint32_t v = 0; v < nv; ++v) col[v] = t.test(v) ? 0 : 1;
        return Coloring(t.dim(), 2, std::move(col));
    }

    int dim() const { return n_; }
    int num_colors() const { return k_; }
    std::uint32_t size() const { return num_vertices(n_); }
    std::uint8_t operator()(Vertex v) const { return colors_[v]; }
    const std::vector<std::uint8_t>& colors() const { return colors_; }

    Fiber fiber(int color) const {
        Fiber t(n_);
        for (std::uint32_t v = 0; v < size(); ++v)
            if (colors_[v] == color) t.set(v);
        return t;
    }
    std::vector<std::uint32_t> color_counts() const {
        std::vector<std::uint32_t> c(k_, 0);
        for (auto x : colors_) ++c[x];
        return c;
    }

    // Relabels colors by first occurrence in vertex order.
    Coloring canonical_colors() const {
        std::vector<int> map(k_, -1);
        int next = 0;
        std::vector<std::uint8_t> col(colors_.size());
        for (std::uint32_t v = 0; v < colors_.size(); ++v) {
            if (map[colors_[v]] < 0) map[colors_[v]] = next++;
            col[v] = std::uint8_t(map[colors_[v]]);
        }
        return Coloring(n_, k_, std::move(col));
    }

    bool operator==(const Coloring& o) const {
        return n_ == o.n_ && k_ == o.k_ && colors_ == o.colors_;
    }
    bool operator<(const Coloring& o) const { return colors_ < o.colors_; }

  private:
    int n_;
    int k_;
    std::vector<std::uint8_t> colors_;
};

// ---------------------------------------------------------------------------
// SignedPermutation: an automorphism of Q_n, acting by v -> permute(v ^ flips)
// where permute moves bit j to bit perm[j].

struct SignedPerm {
    int n = 0;
    std::array<std::uint8_t, kMaxDim> perm{};
    std::uint32_t flips = 0;

    static SignedPerm identity(int n) {
        SignedPerm a;
        a.n = n;
        for (int j = 0; j < n; ++j) a.perm[j] = std::uint8_t(j);
        return a;
    }

    Vertex apply(Vertex v) const {
        std::uint32_t x = v ^ flips, y = 0;
        while (x) {
            int j = __builtin_ctz(x);
            y |= std::uint32_t{1} << perm[j];
            x &= x - 1;
        }
        return y;
    }

    // Composition: (a * b)(v) = a(b(v)).
    SignedPerm operator*(const SignedPerm& b) const {
        SignedPerm r;
        r.n = n;
        for (int j = 0; j < n; ++j) r.perm[j] = perm[b.perm[j]];
        r.flips = b.flips;
        // a(b(v)) = P_a((P_b(v ^ fb)) ^ fa) = (P_a P_b)(v ^ fb ^ P_b^{-1}(fa))
        std::uint32_t fa = flips;
        while (fa) {
            int j = __builtin_ctz(fa);
            for (int i = 0; i < n; ++i)
                if (b.perm[i] == j) { r.flips ^= std::uint32_t{1} << i; break; }
            fa &= fa - 1;
        }
        return r;
    }

    SignedPerm inverse() const {
        SignedPerm r;
        r.n = n;
        for (int j = 0; j < n; ++j) r.perm[perm[j]] = std::uint8_t(j);
        std::uint32_t f = 0, x = flips;
        while (x) {
            int j = __builtin_ctz(x);
            f |= std::uint32_t{1} << perm[j];
            x &= x - 1;
        }
        r.flips = f;
        return r;
    }

    bool operator==(const SignedPerm& o) const {
        if (n != o.n || flips != o.flips) return false;
        return std::equal(perm.begin(), perm.begin() + n, o.perm.begin());
    }

    // Vertex image table, for hot loops.
    std::vector<Vertex> table() const {
        std::vector<Vertex> t(num_vertices(n));
        for (std::uint32_t v = 0; v < t.size(); ++v) t[v] = apply(v);
        return t;
    }
};

inline Fiber apply_perm(const Fiber& t, const SignedPerm& a) {
    if (t.dim() != a.n) throw std::invalid_argument("dimension mismatch");
    Fiber r(t.dim());
    for (std::uint32_t v = 0; v < t.size(); ++v)
        if (t.test(v)) r.set(a.apply(v));
    return r;
}

struct ColoringEquivalence {
    SignedPerm aut;
    std::vector<std::uint8_t> color_map;  // bijection on [0,k)

    static ColoringEquivalence identity(int n, int k) {
        ColoringEquivalence e;
        e.aut = SignedPerm::identity(n);
        e.color_map.resize(k);
        std::iota(e.color_map.begin(), e.color_map.end(), 0);
        return e;
    }
};

// g(x) = colorMap(f(aut(x))).
inline Coloring apply_aut(const Coloring& f, const ColoringEquivalence& e) {
    if (e.aut.n != f.dim()) throw std::invalid_argument("dimension mismatch");
    if (int(e.color_map.size()) != f.num_colors()) throw std::invalid_argument("color count mismatch");
    std::vector<bool> hit(f.num_colors(), false);
    for (auto c : e.color_map) {
        if (c >= f.num_colors() || hit[c]) throw std::invalid_argument("color map is not a bijection");
        hit[c] = true;
    }
    std::vector<std::uint8_t> col(f.size());
    for (std::uint32_t v = 0; v < f.size(); ++v) col[v] = e.color_map[f(e.aut.apply(v))];
    return Coloring(f.dim(), f.num_colors(), std::move(col));
}

}  // namespace equicube
