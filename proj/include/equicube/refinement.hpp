// Coarsest equitable refinement of a coloring of Q_n by iterated splitting:
// each round, classes are split by the vector of neighbor color counts until
// the coloring is perfect.  New colors are ordered by (old color, signature,
// first vertex), so the output labeling is deterministic.

#pragma once

#include <map>
#include <vector>

#include "equicube/hypercube.hpp"
#include "equicube/spectral.hpp"

namespace equicube {

struct RefinementTrace {
    struct Round {
        int round = 0;
        int k_before = 0;
        int k_after = 0;
    };
    std::vector<Round> rounds;
};

inline Coloring coarsest_equitable_refinement(const Coloring& f, RefinementTrace* trace = nullptr) {
    const int n = f.dim();
    const std::uint32_t nv = f.size();
    std::vector<std::uint8_t> col(f.colors());
    int k = f.num_colors();
    std::vector<int> sig;
    int round = 0;
    for (;;) {
        // signature of v = (current color, neighbor color counts)
        std::map<std::vector<int>, int> classes;
        std::vector<int> cls(nv);
        sig.assign(k + 1, 0);
        for (std::uint32_t v = 0; v < nv; ++v) {
            std::vector<int> s(k + 1, 0);
            s[0] = col[v];
            for (int j = 0; j < n; ++j) ++s[1 + col[v ^ (Vertex{1} << j)]];
            auto [it, inserted] = classes.emplace(std::move(s), int(classes.size()));
            cls[v] = it->second;
        }
        int k2 = int(classes.size());
        if (trace) trace->rounds.push_back({round, k, k2});
        if (k2 == k) break;
        // class ids were handed out in vertex order, so this relabels by
        // first occurrence
        for (std::uint32_t v = 0; v < nv; ++v) col[v] = std::uint8_t(cls[v]);
        k = k2;
        ++round;
        if (k > 255) throw std::runtime_error("refinement exceeded 255 colors");
    }
    return Coloring(n, k, std::move(col)).canonical_colors();
}

// True iff every g-fiber lies inside one f-fiber.
inline bool is_refinement_of(const Coloring& g, const Coloring& f) {
    if (g.dim() != f.dim()) throw std::invalid_argument("dimension mismatch");
    std::vector<int> image(g.num_colors(), -1);
    for (std::uint32_t v = 0; v < g.size(); ++v) {
        int c = g(v);
        if (image[c] < 0) image[c] = f(v);
        else if (image[c] != f(v)) return false;
    }
    return true;
}

}  // namespace equicube
