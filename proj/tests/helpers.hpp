#pragma once

#include <random>

#include "equicube/hypercube.hpp"

namespace equicube::testutil {

// distance coloring with respect to `base`: color = Hamming distance
inline Coloring distance_coloring(int n, Vertex base = 0) {
    std::vector<std::uint8_t> col(num_vertices(n));
    for (std::uint32_t v = 0; v < col.size(); ++v)
        col[v] = std::uint8_t(hamming_weight(v ^ base));
    return Coloring(n, n + 1, std::move(col));
}

inline Fiber parity_fiber(int n, int par = 1) {
    Fiber t(n);
    for (std::uint32_t v = 0; v < t.size(); ++v)
        if ((hamming_weight(v) & 1) == par) t.set(v);
    return t;
}

inline Coloring parity_coloring(int n) { return Coloring::from_fiber(parity_fiber(n, 0)); }

inline Fiber random_fiber(int n, std::mt19937& rng) {
    Fiber t(n);
    for (std::uint32_t v = 0; v < t.size(); ++v)
        if (rng() & 1) t.set(v);
    return t;
}

inline Coloring random_coloring(int n, int k, std::mt19937& rng) {
    std::vector<std::uint8_t> col(num_vertices(n));
    for (std::uint32_t v = 0; v < col.size(); ++v) col[v] = std::uint8_t(v < std::uint32_t(k) ? v : rng() % k);
    return Coloring(n, k, std::move(col));
}

inline SignedPerm random_perm(int n, std::mt19937& rng) {
    SignedPerm a = SignedPerm::identity(n);
    for (int j = n - 1; j > 0; --j) std::swap(a.perm[j], a.perm[rng() % (j + 1)]);
    a.flips = rng() & (num_vertices(n) - 1);
    return a;
}

}  // namespace equicube::testutil
