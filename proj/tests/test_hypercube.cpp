#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "equicube/hypercube.hpp"
#include "equicube/spectral.hpp"
#include "helpers.hpp"

using namespace equicube;
using namespace equicube::testutil;

TEST_CASE("neighbors") {
    CHECK(neighbors(0, 3) == std::vector<Vertex>{1, 2, 4});
    CHECK(neighbors(7, 3) == std::vector<Vertex>{6, 5, 3});
    CHECK(neighbors(5, 4) == std::vector<Vertex>{4, 7, 1, 13});
    CHECK_THROWS(neighbors(8, 3));
    for (int n = 1; n <= 6; ++n)
        for (Vertex v = 0; v < num_vertices(n); ++v) {
            auto nb = neighbors(v, n);
            CHECK(int(nb.size()) == n);
            for (auto u : nb) CHECK(hamming_weight(u ^ v) == 1);
            CHECK(std::set<Vertex>(nb.begin(), nb.end()).size() == nb.size());
        }
}

TEST_CASE("hex parsing") {
    Fiber t = parse_hex("c3", 3);
    std::vector<int> expect{1, 1, 0, 0, 0, 0, 1, 1};
    for (Vertex v = 0; v < 8; ++v) CHECK(int(t.test(v)) == expect[v]);

    CHECK(parse_hex("00", 3).empty());
    const std::string code = "c30000c3003c3c00003c3c00c30000c3";
    CHECK(emit_hex(parse_hex(code, 7)) == code);
    CHECK_THROWS(parse_hex("c3", 4));
    CHECK_THROWS(parse_hex("zz", 3));

    std::mt19937 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        int n = 2 + int(rng() % 6);
        Fiber r = random_fiber(n, rng);
        CHECK(parse_hex(emit_hex(r), n) == r);
    }
}

TEST_CASE("fiber algebra") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 30; ++iter) {
        int n = 2 + int(rng() % 6);
        Fiber a = random_fiber(n, rng), b = random_fiber(n, rng);
        CHECK(a.complement().complement() == a);
        CHECK((a & b).popcount() + (a | b).popcount() == a.popcount() + b.popcount());
        CHECK((a ^ a).empty());
        CHECK((a & b).subset_of(a));
        CHECK(a.disjoint(a.complement()));
        auto ones = a.ones();
        CHECK(std::uint32_t(ones.size()) == a.popcount());
        for (auto v : ones) CHECK(a.test(v));
    }
}

TEST_CASE("apply_aut") {
    std::mt19937 rng(3);
    // identity
    Coloring f = distance_coloring(4);
    CHECK(apply_aut(f, ColoringEquivalence::identity(4, 5)) == f);

    // parity fiber invariant under even-weight flips
    Fiber par = parity_fiber(3);
    for (std::uint32_t m = 0; m < 8; ++m) {
        if (hamming_weight(m) & 1) continue;
        SignedPerm a = SignedPerm::identity(3);
        a.flips = m;
        CHECK(apply_perm(par, a) == par);
    }

    // distance coloring from 0 under flips=all -> distance coloring from 7
    {
        ColoringEquivalence e = ColoringEquivalence::identity(3, 4);
        e.aut.flips = 7;
        CHECK(apply_aut(distance_coloring(3, 0), e) == distance_coloring(3, 7));
    }

    // inverse composition is identity
    for (int iter = 0; iter < 40; ++iter) {
        int n = 2 + int(rng() % 4);
        SignedPerm a = random_perm(n, rng), b = random_perm(n, rng);
        for (Vertex v = 0; v < num_vertices(n); ++v) {
            CHECK((a * b).apply(v) == a.apply(b.apply(v)));
            CHECK(a.inverse().apply(a.apply(v)) == v);
        }
    }
}

TEST_CASE("apply_aut preserves spectral invariants") {
    std::mt19937 rng(5);
    for (int iter = 0; iter < 15; ++iter) {
        int n = 3 + int(rng() % 2);
        Coloring f = distance_coloring(n);
        ColoringEquivalence e;
        e.aut = random_perm(n, rng);
        e.color_map.resize(n + 1);
        std::iota(e.color_map.begin(), e.color_map.end(), 0);
        std::shuffle(e.color_map.begin(), e.color_map.end(), rng);
        Coloring g = apply_aut(f, e);
        CHECK(is_perfect(g));
        CHECK(degree(g) == degree(f));
        CHECK(correlation_immunity(g) == correlation_immunity(f));
        auto cf = f.color_counts(), cg = g.color_counts();
        std::sort(cf.begin(), cf.end());
        std::sort(cg.begin(), cg.end());
        CHECK(cf == cg);
        // quotient matrix conjugated by the color map
        auto Sf = quotient_matrix(f).matrix.value();
        auto Sg = quotient_matrix(g).matrix.value();
        std::vector<int> p(e.color_map.begin(), e.color_map.end());
        // g's color colorMap(c) plays the role of f's color c
        CHECK(Sf.permuted(p) == Sg);
    }
}

TEST_CASE("antipodal matching") {
    auto m = antipodal_matching(distance_coloring(3));
    REQUIRE(m);
    CHECK(m->match == std::vector<int>{3, 2, 1, 0});

    auto mp = antipodal_matching(parity_coloring(4));
    REQUIRE(mp);
    CHECK(mp->match == std::vector<int>{0, 1});

    auto code = Coloring::from_fiber(parse_hex("c30000c3003c3c00003c3c00c30000c3", 7));
    auto mc = antipodal_matching(code);
    REQUIRE(mc);
    CHECK(mc->match == std::vector<int>{0, 1});

    // non-perfect input rejected
    Fiber t(3);
    t.set(0);
    CHECK(!antipodal_matching(Coloring::from_fiber(t)));
}

TEST_CASE("coloring validation") {
    CHECK_THROWS(Coloring(2, 2, {0, 0, 0, 0}));          // not surjective
    CHECK_THROWS(Coloring(2, 1, {0, 0, 0}));             // wrong size
    CHECK_THROWS(Coloring(2, 2, {0, 1, 2, 0}));          // out of range
    CHECK(Coloring::from_fiber(Fiber(3)).num_colors() == 1);
}
