#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <set>

#include "equicube/classify.hpp"
#include "equicube/constructions.hpp"
#include "equicube/pipelines.hpp"
#include "helpers.hpp"

using namespace equicube;

namespace {

std::string canon_of(const Coloring& f) {
    auto cb = canonical_backtrack(f);
    REQUIRE(cb.complete);
    return cb.canon;
}

QuotientMatrix make_matrix(std::vector<std::vector<int>> rows) {
    QuotientMatrix q;
    q.k = int(rows.size());
    q.S = std::move(rows);
    return q;
}

bool has_matrix(const Coloring& f, const QuotientMatrix& want) {
    auto q = quotient_matrix(f);
    return q.perfect() && q.matrix->canonical() == want.canonical();
}

}  // namespace

TEST_CASE("4-correlation-immune colorings of Q_8 beyond 2 colors") {
    auto rep = q8_ci4();

    // two base classes with matrix (2,6;6,2): the parity flips of the two
    // balanced degree-2 classes (the square and the 4-dimensional doubling)
    REQUIRE(rep.bases.size() == 2);
    for (auto& f : rep.bases) CHECK(has_matrix(f, make_matrix({{2, 6}, {6, 2}})));

    const auto m3 = make_matrix({{0, 2, 6}, {2, 0, 6}, {3, 3, 2}});
    const auto m4 = make_matrix({{0, 2, 3, 3}, {2, 0, 3, 3}, {3, 3, 0, 2}, {3, 3, 2, 0}});

    REQUIRE(rep.three_colorings.size() == 3);
    for (auto& f : rep.three_colorings) {
        CHECK(has_matrix(f, m3));
        CHECK(correlation_immunity(f) >= 4);
    }
    REQUIRE(rep.four_colorings.size() == 11);
    for (auto& f : rep.four_colorings) {
        CHECK(has_matrix(f, m4));
        CHECK(correlation_immunity(f) >= 4);
    }

    // the classes are pairwise inequivalent
    std::set<std::string> canons;
    for (auto& f : rep.three_colorings) canons.insert(canon_of(f));
    for (auto& f : rep.four_colorings) canons.insert(canon_of(f));
    CHECK(canons.size() == 14);
}

TEST_CASE("5-correlation-immune colorings of Q_9") {
    auto rep = q9_ci5();

    // the exhaustive star-set search, cross-covered by its own orbit count
    CHECK(rep.labeled_star_sets == 21280);
    REQUIRE(rep.star_classes.size() == 2);
    CHECK(rep.star_orbits_cover_all);
    CHECK(std::multiset<std::uint64_t>(rep.star_stabs.begin(), rep.star_stabs.end()) ==
          std::multiset<std::uint64_t>{165888, 9216});
    for (auto& t : rep.star_classes) {
        Coloring f = Coloring::from_fiber(t);
        CHECK(has_matrix(f, make_matrix({{0, 9}, {3, 6}})));
        CHECK(correlation_immunity(f) >= 5);
    }

    // the two star-equation constructions hit both classes
    std::set<std::string> star_canons, star_constr;
    for (auto& t : rep.star_classes) star_canons.insert(canon_of(Coloring::from_fiber(t)));
    for (bool z4 : {false, true}) {
        Coloring f = q9_star(z4);
        CHECK(has_matrix(f, make_matrix({{0, 9}, {3, 6}})));
        star_constr.insert(canon_of(f));
    }
    CHECK(star_canons == star_constr);

    const auto m3 = make_matrix({{0, 3, 6}, {3, 0, 6}, {3, 3, 3}});
    const auto m4 = make_matrix({{0, 3, 3, 3}, {3, 0, 3, 3}, {3, 3, 0, 3}, {3, 3, 3, 0}});

    REQUIRE(rep.three_colorings.size() == 11);
    std::set<std::string> three_canons;
    for (auto& f : rep.three_colorings) {
        CHECK(has_matrix(f, m3));
        CHECK(correlation_immunity(f) >= 5);
        three_canons.insert(canon_of(f));
    }
    CHECK(three_canons.size() == 11);

    REQUIRE(rep.four_colorings.size() == 10);
    std::set<std::string> four_canons;
    for (auto& f : rep.four_colorings) {
        CHECK(has_matrix(f, m4));
        CHECK(correlation_immunity(f) >= 5);
        four_canons.insert(canon_of(f));
    }
    CHECK(four_canons.size() == 10);

    // nine of the ten 4-colorings come from the nine (3,3;3,3) classes of
    // Q_6, the tenth from the quasigroup composition
    auto lib = q6_fiber_library(true, allowed_levels(6, 0, 6));
    auto q6 = classify(6, lib.fibers, (1 << 0) | (1 << 3));
    std::set<std::string> built;
    int q6_33 = 0;
    for (auto& cc : q6.classes) {
        if (cc.rep.num_colors() != 2) continue;
        if (!has_matrix(cc.rep, make_matrix({{3, 3}, {3, 3}}))) continue;
        ++q6_33;
        built.insert(canon_of(q9_gbased(cc.rep)));
    }
    CHECK(q6_33 == 9);
    CHECK(built.size() == 9);
    built.insert(canon_of(q9_quasigroup()));
    CHECK(built == four_canons);

    // every 3-coloring arises from a 4-coloring by unifying two colors
    std::set<std::string> merged;
    for (auto& f : rep.four_colorings)
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                std::vector<std::uint8_t> col(f.size());
                for (std::uint32_t v = 0; v < f.size(); ++v) {
                    int c = f(v);
                    if (c == b) c = a;
                    col[v] = std::uint8_t(c > b ? c - 1 : c);
                }
                Coloring h(9, 3, std::move(col));
                if (is_perfect(h)) merged.insert(canon_of(h));
            }
    CHECK(merged == three_canons);
}

TEST_CASE("star-set search checkpointing resumes without loss") {
    const std::string ck = "equicube_test_q9star.ck";
    std::remove(ck.c_str());

    auto full = star_sets_q9();
    CHECK(full.size() == 21280);

    // interrupt the search every 50k nodes and resume from the checkpoint
    std::vector<Fiber> got;
    int runs = 0;
    for (;;) {
        StarSetSearch s(ck, 1e9, 50000);
        got = s.run();
        ++runs;
        REQUIRE(runs < 2000);
        if (!s.interrupted()) break;
    }
    CHECK(runs > 1);
    CHECK(std::set<Fiber>(got.begin(), got.end()) ==
          std::set<Fiber>(full.begin(), full.end()));

    // a finished checkpoint short-circuits the whole search
    StarSetSearch again(ck);
    auto reloaded = again.run();
    CHECK(again.finished_loaded());
    CHECK(again.nodes() == 0);
    CHECK(reloaded.size() == full.size());

    std::remove(ck.c_str());
}
