#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "equicube/refinement.hpp"
#include "equicube/search.hpp"
#include "helpers.hpp"

using namespace equicube;
using namespace equicube::testutil;

namespace {
QuotientMatrix mat(std::vector<std::vector<int>> rows) {
    QuotientMatrix S;
    S.k = int(rows.size());
    S.S = std::move(rows);
    return S;
}
}  // namespace

TEST_CASE("fiber counts from detailed balance") {
    auto c = fiber_counts(mat({{0, 5}, {5, 0}}), 5);
    REQUIRE(c);
    CHECK(*c == std::vector<std::uint32_t>{16, 16});

    c = fiber_counts(code_matrix(7, 2), 7);
    REQUIRE(c);
    CHECK(*c == std::vector<std::uint32_t>{32, 96});

    // inconsistent zero pattern
    CHECK(!fiber_counts(mat({{3, 0}, {1, 2}}), 3));
    // non-integral sizes: w0/w1 = 1, but odd split required
    CHECK(!fiber_counts(mat({{0, 3}, {2, 1}}), 3));
}

TEST_CASE("candidate matrices") {
    // Q_5 with eigenvalues exactly {5,1}
    MatrixConstraints cons;
    cons.exact_eigenvalues = std::vector<int>{5, 1};
    auto ms = candidate_matrices(5, 2, cons);
    REQUIRE(ms.matrices.size() == 2);
    std::set<std::vector<std::vector<int>>> got;
    for (auto& m : ms.matrices) got.insert(m.S);
    CHECK(got.count({{2, 3}, {1, 4}}));
    CHECK(got.count({{3, 2}, {2, 3}}));

    // Q_7 2-colorings with min eigenvalue -1 include all code matrices
    MatrixConstraints c7;
    c7.min_eigenvalue = -1;
    auto m7 = candidate_matrices(7, 2, c7);
    for (int mu = 1; mu <= 7; ++mu) {
        auto canon = code_matrix(7, mu).canonical();
        CHECK(std::count(m7.matrices.begin(), m7.matrices.end(), canon) == 1);
    }

    // Q_9, k=3, non-main eigenvalues <= -3: exactly the eq:34 left matrix
    MatrixConstraints c9;
    c9.max_nonmain = -3;
    auto m9 = candidate_matrices(9, 3, c9);
    REQUIRE(m9.matrices.size() == 1);
    CHECK(m9.matrices[0] == mat({{0, 3, 6}, {3, 0, 6}, {3, 3, 3}}).canonical());

    // FDF bound kills over-demanding CI requests with k >= 3
    MatrixConstraints cfdf;
    cfdf.ci_min = 5;
    CHECK(candidate_matrices(6, 3, cfdf).matrices.empty());
}

TEST_CASE("matrix search vs naive enumeration on Q_3 and Q_4") {
    for (int n = 3; n <= 4; ++n) {
        GroupTables gt(n);
        // naive: all 2-colorings, filter perfect, bucket by canonical matrix
        std::map<std::vector<std::vector<int>>, std::set<std::string>> naive;
        const std::uint32_t lim = (std::uint32_t{1} << num_vertices(n)) - 1;
        for (std::uint32_t bits = 1; bits < lim; ++bits) {
            Fiber t(n);
            for (std::uint32_t v = 0; v < num_vertices(n); ++v)
                if (bits & (1u << v)) t.set(v);
            Coloring f = Coloring::from_fiber(t);
            auto q = quotient_matrix(f);
            if (!q.perfect()) continue;
            naive[q.matrix->canonical().S].insert(canonical_key(f, gt));
        }
        // library: every admissible 2-color matrix
        auto cand = candidate_matrices(n, 2);
        std::set<std::vector<std::vector<int>>> cand_set;
        for (auto& m : cand.matrices) cand_set.insert(m.S);
        for (auto& [S, keys] : naive) CHECK(cand_set.count(S) == 1);
        for (auto& m : cand.matrices) {
            auto classes = enumerate_perfect_colorings(n, m);
            auto it = naive.find(m.S);
            std::size_t expect = it == naive.end() ? 0 : it->second.size();
            CHECK(classes.size() == expect);
            for (auto& rep : classes) {
                auto q = quotient_matrix(rep);
                REQUIRE(q.perfect());
                CHECK(q.matrix->canonical() == m);
            }
        }
    }
}

TEST_CASE("Q_5 (2,3),(1,4): one class, two antipodal 4-cycles") {
    auto classes = enumerate_perfect_colorings(5, mat({{2, 3}, {1, 4}}));
    REQUIRE(classes.size() == 1);
    Fiber c = classes[0].fiber(0);
    if (c.popcount() != 8) c = classes[0].fiber(1);
    CHECK(c.popcount() == 8);
    auto cyc = induced_cycle_structure(c);
    CHECK(cyc == std::vector<int>{4, 4});
    // antipodal: the two cycles map to each other under complementation
    Fiber cc(5);
    for (std::uint32_t v = 0; v < 32; ++v)
        if (c.test(v ^ 31)) cc.set(v);
    CHECK(cc == c);
}

TEST_CASE("Q_6 bipartition matrix has one class") {
    auto classes = enumerate_perfect_colorings(6, mat({{0, 6}, {6, 0}}));
    REQUIRE(classes.size() == 1);
    CHECK(are_equivalent(classes[0], parity_coloring(6)));
}

TEST_CASE("codes in Q_3") {
    auto ce = enumerate_codes(3, 1);
    CHECK(ce.classes.size() == 1);
    CHECK(ce.labeled_count == 4);
    for (auto& cc : ce.classes) {
        CHECK(cc.rep.popcount() == 2);
        auto ones = cc.rep.ones();
        CHECK((ones[0] ^ ones[1]) == 7u);  // antipodal pair
    }
}

TEST_CASE("1-perfect codes in Q_7") {
    auto ce = enumerate_codes(7, 1);
    CHECK(ce.classes.size() == 1);
    CHECK(ce.labeled_count == 240);
    CHECK(ce.classes[0].stab_order * 240 == group_order(7));
    CHECK(is_code(ce.classes[0].rep, 1));
}

TEST_CASE("2-fold codes in Q_7") {
    auto ce = enumerate_codes(7, 2);
    REQUIRE(ce.classes.size() == 3);
    CHECK(ce.labeled_count == 12180);
    std::multiset<std::uint64_t> stabs;
    std::uint64_t orbit_sum = 0;
    for (auto& cc : ce.classes) {
        stabs.insert(cc.stab_order);
        orbit_sum += group_order(7) / cc.stab_order;
        CHECK(is_code(cc.rep, 2));
        CHECK(cc.contains_1perfect);
        CHECK(cc.fully_splittable);  // mu != 3: always contains a 1-perfect code
    }
    CHECK(stabs == std::multiset<std::uint64_t>{1536, 128, 96});
    CHECK(orbit_sum == ce.labeled_count);
    // the three published representatives are among the classes
    GroupTables gt(7);
    std::set<std::string> keys;
    for (auto& cc : ce.classes) keys.insert(fiber_canonical(cc.rep).canon);
    for (auto s : {"c30000c3003c3c00003c3c00c30000c3", "c30000a5005a3c00003c5a00a50000c3",
                   "c2100426021c91800189384064200843"})
        CHECK(keys.count(fiber_canonical(parse_hex(s, 7)).canon) == 1);
}

TEST_CASE("splittability basics") {
    auto hams = perfect_codes(7);
    CHECK(hams.size() == 240);
    // complement of a 1-perfect code is a 7-fold code containing 1-perfect codes
    auto rep = hams[0].complement();
    CHECK(is_code(rep, 7));
    auto sr = splittability(rep, 7, hams);
    CHECK(sr.contains_1perfect);
    CHECK(sr.fully_splittable);
    REQUIRE(sr.split.size() == 7);
    Fiber un(7);
    for (auto& h : sr.split) {
        CHECK(un.disjoint(h));
        un = un | h;
    }
    CHECK(un == rep);
}

TEST_CASE("complement duality mu <-> n+1-mu") {
    // complements of the mu=2 class representatives are 6-fold codes with the
    // same stabilizer orders
    GroupTables gt(7);
    auto ce = enumerate_codes(7, 2);
    for (auto& cc : ce.classes) {
        Fiber comp = cc.rep.complement();
        CHECK(is_code(comp, 6));
        CHECK(stabilizer_order(comp, gt) == cc.stab_order);
    }
}

TEST_CASE("3-fold codes in Q_7: stabilizers, cycles, splittability") {
    auto ce = enumerate_codes(7, 3);
    REQUIRE(ce.classes.size() == 9);
    CHECK(ce.labeled_count == 322896);
    std::uint64_t orbit_sum = 0;
    for (auto& cc : ce.classes) orbit_sum += group_order(7) / cc.stab_order;
    CHECK(orbit_sum == ce.labeled_count);

    // the published nine representatives with |Aut|, cycle structure and
    // splittability (the first four split into three 1-perfect codes)
    struct Ref {
        const char* hex;
        std::uint64_t aut;
        std::vector<int> cycles;
        bool splittable;
    };
    const std::vector<Ref> refs{
        {"e70000db00bd7e00007ebd00db0000e7", 384, {6, 6, 6, 6, 6, 6, 6, 6}, true},
        {"e610049b029d7680016eb940d9200867", 32, {12, 12, 12, 12}, true},
        {"e610049b025eb58001ad7a40d9200867", 8, {24, 24}, true},
        {"e424128709395ac0035a9c90e1482427", 12, {24, 24}, true},
        {"f00c0c3303c33cc0033cc3c0cc30300f", 480, {4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4}, false},
        {"f009096906996660066699609690900f", 160, {4, 4, 10, 10, 10, 10}, false},
        {"f00c0c3303a55ac0035aa5c0cc30300f", 16, {4, 4, 4, 4, 16, 16}, false},
        {"f00c0963063699c003996c60c690300f", 16, {4, 4, 10, 10, 10, 10}, false},
        {"e428141b03659ac00359a6c0d8281427", 8, {10, 10, 14, 14}, false},
    };
    std::map<std::string, const CodeClass*> by_canon;
    for (auto& cc : ce.classes) by_canon[fiber_canonical(cc.rep).canon] = &cc;
    for (auto& r : refs) {
        Fiber t = parse_hex(r.hex, 7);
        CHECK(is_code(t, 3));
        auto it = by_canon.find(fiber_canonical(t).canon);
        REQUIRE(it != by_canon.end());
        const CodeClass& cc = *it->second;
        CHECK(cc.stab_order == r.aut);
        std::vector<int> cyc = cc.cycles;
        std::sort(cyc.begin(), cyc.end());
        std::vector<int> want = r.cycles;
        std::sort(want.begin(), want.end());
        CHECK(cyc == want);
        CHECK(cc.fully_splittable == r.splittable);
        // for mu = 3, containing a 1-perfect code is the same as splitting
        CHECK(cc.contains_1perfect == r.splittable);
    }
    CHECK(by_canon.size() == 9);  // the nine references cover all classes

    // complements: unsplittable 5-fold codes exist, yet every one of these
    // 5-fold codes still contains a 1-perfect code
    int unsplit5 = 0;
    for (auto& cc : ce.classes) {
        Fiber comp = cc.rep.complement();
        CHECK(is_code(comp, 5));
        auto sr = splittability(comp, 5);
        CHECK(sr.contains_1perfect);
        if (!sr.fully_splittable) ++unsplit5;
    }
    CHECK(unsplit5 > 0);
}

TEST_CASE("6-fold codes in Q_7 are fully splittable") {
    auto ce = enumerate_codes(7, 2);
    for (auto& cc : ce.classes) {
        auto sr = splittability(cc.rep.complement(), 6);
        CHECK(sr.fully_splittable);
    }
}

TEST_CASE("4-fold codes in Q_7", "[.long]") {
    auto ce = enumerate_codes(7, 4);
    // 21 = 1 + 1 + 7 + 12 classes, matching the (4,3;3,4) column of the
    // degree table; every 4-fold code contains a 1-perfect code, but some
    // cannot be split completely
    REQUIRE(ce.classes.size() == 21);
    std::uint64_t orbit_sum = 0;
    int split = 0;
    for (auto& cc : ce.classes) {
        orbit_sum += group_order(7) / cc.stab_order;
        CHECK(cc.contains_1perfect);
        split += cc.fully_splittable;
    }
    CHECK(orbit_sum == ce.labeled_count);
    CHECK(split == 17);
}
