// Exhaustive pipelines for the correlation-immunity families of Q_8 and Q_9.
//
// Q_8: every 4-CI perfect coloring apart from the 2-colorings refines a
// 2-coloring with quotient matrix (2,6;6,2).  Those bases are the
// parity-character flips of the three balanced degree-2 colorings, and the
// refinements split one color into two alternating independent halves.
//
// Q_9: every color of a 5-CI coloring with more than two colors is an
// unbalanced CI-5 function of density 1/4, hence itself a perfect 2-coloring
// with quotient matrix (0,9;3,6) (a "star set": an independent 128-set whose
// outside vertices each see exactly 3 members).  Star sets are antipodally
// symmetric, so they are searched as independent exact-3-cover sets of the
// 256-vertex folded 9-cube.  3-colorings are disjoint pairs of star sets and
// 4-colorings are partitions into four star sets, both automatically perfect.

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <ctime>
#include <functional>
#include <string>
#include <vector>

#include "equicube/canonical.hpp"
#include "equicube/constructions.hpp"
#include "equicube/search.hpp"

namespace equicube {

// Multiplies the fiber's +-1 function by the parity character: Walsh support
// level l moves to n - l, negating every quotient eigenvalue.
inline Fiber parity_flip(const Fiber& t) {
    Fiber r(t.dim());
    for (std::uint32_t v = 0; v < t.size(); ++v)
        if (t.test(v) != (hamming_weight(v) & 1)) r.set(v);
    return r;
}

// Splits color `c` of a perfect coloring into two independent halves A and B
// of equal size, where the fiber of `c` induces a bipartite subgraph and
// every vertex outside `c` sees A and B equally often.  Each connected
// component of the induced subgraph contributes one binary phase choice; the
// DFS prunes with exact per-vertex count bounds.  The results are exactly
// the perfect refinements in which color c splits symmetrically: A keeps
// color c, B becomes color k.  cb returns false to abort.
inline void for_each_even_split(const Coloring& f, int c,
                                const std::function<bool(const Coloring&)>& cb) {
    const int n = f.dim(), k = f.num_colors();
    const std::uint32_t nv = f.size();
    auto q = quotient_matrix(f);
    if (!q.perfect()) throw std::invalid_argument("coloring is not perfect");
    for (int r = 0; r < k; ++r)
        if (r != c && (*q.matrix)[r][c] % 2) return;  // no symmetric split

    // bipartition of each induced component
    std::vector<int> comp(nv, -1), side(nv, 0);
    std::vector<std::array<std::uint32_t, 2>> comp_size;
    for (std::uint32_t v0 = 0; v0 < nv; ++v0) {
        if (f(v0) != c || comp[v0] >= 0) continue;
        int ci = int(comp_size.size());
        comp_size.push_back({0, 0});
        std::vector<Vertex> stack{Vertex(v0)};
        comp[v0] = ci;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            ++comp_size[ci][side[v]];
            for (int j = 0; j < n; ++j) {
                Vertex u = v ^ (Vertex{1} << j);
                if (f(u) != c) continue;
                if (comp[u] < 0) {
                    comp[u] = ci;
                    side[u] = side[v] ^ 1;
                    stack.push_back(u);
                } else if (side[u] == side[v]) {
                    return;  // odd cycle: not bipartite, no splits
                }
            }
        }
    }
    const int m = int(comp_size.size());

    // outside-vertex contributions per component, and exact requirements
    struct Touch {
        std::uint32_t v;
        std::uint8_t d0, d1;  // neighbors on side 0 / side 1
    };
    std::vector<std::vector<Touch>> touch(m);
    std::vector<std::uint8_t> req(nv, 0), cntA(nv, 0), cntB(nv, 0), undec(nv, 0);
    for (std::uint32_t v = 0; v < nv; ++v) {
        if (f(v) == c) continue;
        req[v] = std::uint8_t((*q.matrix)[f(v)][c] / 2);
        std::vector<std::pair<int, std::array<std::uint8_t, 2>>> per;
        for (int j = 0; j < n; ++j) {
            Vertex u = v ^ (Vertex{1} << j);
            if (f(u) != c) continue;
            undec[v] = std::uint8_t(undec[v] + 1);
            bool found = false;
            for (auto& [ci, d] : per)
                if (ci == comp[u]) {
                    ++d[side[u]];
                    found = true;
                }
            if (!found) per.push_back({comp[u], {std::uint8_t(side[u] == 0), std::uint8_t(side[u] == 1)}});
        }
        for (auto& [ci, d] : per) touch[ci].push_back({v, d[0], d[1]});
    }

    // phase DFS with count pruning; phase 0 sends side 0 to half A
    std::vector<int> phase(m, -1);
    std::uint32_t szA = 0, szB = 0;
    const std::uint32_t half = [&] {
        std::uint32_t tot = 0;
        for (auto& s : comp_size) tot += s[0] + s[1];
        return tot / 2;
    }();
    bool stop = false;
    std::function<void(int)> rec = [&](int ci) {
        if (stop) return;
        if (ci == m) {
            if (szA != szB) return;
            std::vector<std::uint8_t> col(nv);
            for (std::uint32_t v = 0; v < nv; ++v) {
                if (f(v) != c) col[v] = f(v);
                else col[v] = (side[v] ^ phase[comp[v]]) ? std::uint8_t(k) : std::uint8_t(c);
            }
            if (!cb(Coloring(n, k + 1, std::move(col)))) stop = true;
            return;
        }
        for (int p = 0; p < 2 && !stop; ++p) {
            bool ok = szA + comp_size[ci][p] <= half && szB + comp_size[ci][p ^ 1] <= half;
            std::size_t done = 0;
            for (; ok && done < touch[ci].size(); ++done) {
                auto& t = touch[ci][done];
                std::uint8_t a = p ? t.d1 : t.d0, b = p ? t.d0 : t.d1;
                cntA[t.v] = std::uint8_t(cntA[t.v] + a);
                cntB[t.v] = std::uint8_t(cntB[t.v] + b);
                undec[t.v] = std::uint8_t(undec[t.v] - a - b);
                if (cntA[t.v] > req[t.v] || cntB[t.v] > req[t.v] ||
                    cntA[t.v] + undec[t.v] < req[t.v] || cntB[t.v] + undec[t.v] < req[t.v]) {
                    ++done;
                    ok = false;
                    break;
                }
            }
            if (ok) {
                phase[ci] = p;
                szA += comp_size[ci][p];
                szB += comp_size[ci][p ^ 1];
                rec(ci + 1);
                szA -= comp_size[ci][p];
                szB -= comp_size[ci][p ^ 1];
                phase[ci] = -1;
            }
            for (std::size_t i = 0; i < done; ++i) {
                auto& t = touch[ci][i];
                std::uint8_t a = p ? t.d1 : t.d0, b = p ? t.d0 : t.d1;
                cntA[t.v] = std::uint8_t(cntA[t.v] - a);
                cntB[t.v] = std::uint8_t(cntB[t.v] - b);
                undec[t.v] = std::uint8_t(undec[t.v] + a + b);
            }
        }
    };
    rec(0);
}

// Keeps the first representative of each equivalence class, in input order.
inline std::vector<Coloring> dedupe_by_equivalence(const std::vector<Coloring>& cands) {
    std::vector<Coloring> reps;
    for (auto& f : cands) {
        bool dup = false;
        for (auto& r : reps)
            if (find_equivalence(r, f)) {
                dup = true;
                break;
            }
        if (!dup) reps.push_back(f);
    }
    return reps;
}

// ---------------------------------------------------------------------------
// Q_8

struct Q8Report {
    std::vector<Coloring> bases;            // (2,6;6,2) 2-colorings
    std::vector<Coloring> three_colorings;  // (0,2,6;2,0,6;3,3,2)
    std::vector<Coloring> four_colorings;   // (0,2,3,3;2,0,3,3;3,3,0,2;3,3,2,0)
};

inline Q8Report q8_ci4() {
    Q8Report rep;
    // The (2,6;6,2) colorings are exactly the parity flips of the balanced
    // degree-2 colorings (Walsh support {2} <-> {6}), which are classified
    // completely by reconstruct_degree2().
    for (Coloring g : reconstruct_degree2()) {
        if (g.fiber(0).popcount() * 2 != g.size()) continue;  // unbalanced: flip not perfect
        while (g.dim() < 8) g = add_dummy_arg(g);
        Coloring base = Coloring::from_fiber(parity_flip(g.fiber(0)));
        auto q = quotient_matrix(base);
        if (q.perfect() && (*q.matrix)[0][0] != 2)
            base = Coloring::from_fiber(base.fiber(1));
        q = quotient_matrix(base);
        if (!q.perfect() || (*q.matrix)[0][0] != 2 || (*q.matrix)[0][1] != 6 ||
            (*q.matrix)[1][0] != 6 || (*q.matrix)[1][1] != 2)
            throw std::logic_error("flip of balanced degree-2 base has unexpected matrix");
        rep.bases.push_back(std::move(base));
    }
    rep.bases = dedupe_by_equivalence(rep.bases);

    std::vector<Coloring> cands;
    for (auto& b : rep.bases)
        for_each_even_split(b, 0, [&](const Coloring& h) {
            if (is_perfect(h)) cands.push_back(h);
            return true;
        });
    rep.three_colorings = dedupe_by_equivalence(cands);

    cands.clear();
    for (auto& f3 : rep.three_colorings) {
        auto counts = f3.color_counts();
        int big = int(std::max_element(counts.begin(), counts.end()) - counts.begin());
        for_each_even_split(f3, big, [&](const Coloring& h) {
            if (is_perfect(h)) cands.push_back(h);
            return true;
        });
    }
    rep.four_colorings = dedupe_by_equivalence(cands);
    return rep;
}

// ---------------------------------------------------------------------------
// Q_9 star sets

namespace detail {

// Folded 9-cube: vertices are antipodal pairs of Q_9, represented by the
// member with top bit 0; 9-regular.
inline std::array<std::uint16_t, 9> folded9_neighbors(std::uint16_t p) {
    std::array<std::uint16_t, 9> nb;
    for (int j = 0; j < 8; ++j) nb[j] = std::uint16_t(p ^ (1u << j));
    nb[8] = std::uint16_t(p ^ 0xff);
    return nb;
}

}  // namespace detail

// Exhaustive DFS with unit propagation for independent 64-sets of the folded
// 9-cube whose outside vertices have exactly 3 set neighbors; lifted to Q_9
// these are the labeled (0,9;3,6) colorings ("star sets").  The search
// checkpoints its decision stack and the solutions found so far, and resumes
// from `checkpoint` when the file exists.
class StarSetSearch {
  public:
    explicit StarSetSearch(std::string checkpoint = "", double checkpoint_seconds = 60,
                           std::uint64_t node_budget = 0)
        : path_(std::move(checkpoint)), period_(checkpoint_seconds), budget_(node_budget) {}

    // Runs (or resumes) until completion or until the node budget is spent,
    // returning the solutions found so far as Q_9 fibers.  Replayed checkpoint
    // nodes do not count against the budget, so every resumed run progresses.
    std::vector<Fiber> run() {
        sols_.clear();
        interrupted_ = false;
        std::vector<std::uint8_t> replay;
        load(replay);
        if (finished_) return sols_;

        state_.assign(256, kUndec);
        in_cnt_.assign(256, 0);
        undec_cnt_.assign(256, 9);
        trail_.clear();
        frames_.clear();
        in_total_ = 0;
        last_save_ = std::clock();

        // rebuild the saved decision stack; propagation is deterministic
        for (std::uint8_t choice : replay) {
            int v = branch_vertex();
            if (v < 0) throw std::runtime_error("star search checkpoint is inconsistent");
            frames_.push_back({v, choice, trail_.size()});
            if (!assign_and_propagate(std::uint16_t(v), choice == 0 ? kIn : kOut))
                throw std::runtime_error("star search checkpoint is inconsistent");
        }

        const std::uint64_t base_nodes = nodes_;
        for (;;) {
            if (budget_ && nodes_ - base_nodes >= budget_) {
                save(false);
                interrupted_ = true;
                return sols_;
            }
            int v = branch_vertex();
            if (v >= 0) {
                frames_.push_back({v, 0, trail_.size()});
                if (assign_and_propagate(std::uint16_t(v), kIn)) {
                    maybe_save();
                    continue;
                }
            } else if (complete()) {
                record_solution();
            }
            // backtrack to the deepest frame with an untried branch
            for (;;) {
                if (frames_.empty()) {
                    save(true);
                    return sols_;
                }
                Frame fr = frames_.back();
                unwind(fr.trail_mark);
                if (fr.choice == 0) {
                    frames_.back().choice = 1;
                    if (assign_and_propagate(std::uint16_t(fr.vertex), kOut)) break;
                }
                frames_.pop_back();
            }
        }
    }

    std::uint64_t nodes() const { return nodes_; }

  private:
    static constexpr std::int8_t kUndec = -1, kOut = 0, kIn = 1;
    struct Frame {
        int vertex;
        std::uint8_t choice;  // 0 = in, 1 = out
        std::size_t trail_mark;
    };

    bool complete() const { return in_total_ == 64; }

    int branch_vertex() const {
        // most-constrained undecided vertex (deterministic for replay)
        int best = -1, best_in = -1;
        for (int v = 0; v < 256; ++v)
            if (state_[v] == kUndec && in_cnt_[v] > best_in) {
                best = v;
                best_in = in_cnt_[v];
            }
        return best;
    }

    bool assign_and_propagate(std::uint16_t v0, std::int8_t s0) {
        std::vector<std::pair<std::uint16_t, std::int8_t>> queue{{v0, s0}};
        while (!queue.empty()) {
            auto [v, s] = queue.back();
            queue.pop_back();
            if (state_[v] != kUndec) {
                if (state_[v] != s) return false;
                continue;
            }
            ++nodes_;
            state_[v] = s;
            trail_.push_back(v);
            // finish every counter update for the trailed vertex before any
            // failure return, so unwind() reverses exactly what happened
            bool fail = false;
            if (s == kIn && ++in_total_ > 64) fail = true;
            auto nb = detail::folded9_neighbors(v);
            for (auto u : nb) {
                --undec_cnt_[u];
                if (s == kIn) {
                    ++in_cnt_[u];
                    if (state_[u] == kIn) fail = true;           // independence
                    else if (state_[u] == kUndec) queue.push_back({u, kOut});
                }
            }
            if (fail) return false;
            // re-check the exact-3 constraint around every touched vertex
            for (auto u : nb) {
                if (state_[u] == kIn) continue;  // in-vertices carry no count
                if (in_cnt_[u] > 3) return false;
                if (in_cnt_[u] + undec_cnt_[u] < 3 && state_[u] == kOut) return false;
                if (state_[u] == kOut || state_[u] == kUndec) {
                    if (in_cnt_[u] == 3)
                        for (auto w : detail::folded9_neighbors(u))
                            if (state_[w] == kUndec) queue.push_back({w, kOut});
                    if (state_[u] == kOut && in_cnt_[u] + undec_cnt_[u] == 3)
                        for (auto w : detail::folded9_neighbors(u))
                            if (state_[w] == kUndec) queue.push_back({w, kIn});
                }
            }
            // an out-vertex's own constraint when it gets decided
            if (s == kOut) {
                if (in_cnt_[v] > 3 || in_cnt_[v] + undec_cnt_[v] < 3) return false;
                if (in_cnt_[v] == 3) {
                    for (auto u : detail::folded9_neighbors(v))
                        if (state_[u] == kUndec) queue.push_back({u, kOut});
                } else if (in_cnt_[v] + undec_cnt_[v] == 3) {
                    for (auto u : detail::folded9_neighbors(v))
                        if (state_[u] == kUndec) queue.push_back({u, kIn});
                }
            }
        }
        return true;
    }

    void unwind(std::size_t mark) {
        while (trail_.size() > mark) {
            std::uint16_t v = trail_.back();
            trail_.pop_back();
            std::int8_t s = state_[v];
            state_[v] = kUndec;
            if (s == kIn) --in_total_;
            for (auto u : detail::folded9_neighbors(v)) {
                ++undec_cnt_[u];
                if (s == kIn) --in_cnt_[u];
            }
        }
    }

    void record_solution() {
        Fiber t(9);
        for (int v = 0; v < 256; ++v)
            if (state_[v] == kIn) {
                t.set(Vertex(v));
                t.set(Vertex(v) ^ Vertex(0x1ff));
            }
        sols_.push_back(std::move(t));
    }

    void maybe_save() {
        if (path_.empty()) return;
        if (double(std::clock() - last_save_) / CLOCKS_PER_SEC < period_) return;
        save(false);
        last_save_ = std::clock();
    }

    void save(bool final) {
        if (path_.empty()) return;
        std::string tmp = path_ + ".tmp";
        std::FILE* fp = std::fopen(tmp.c_str(), "wb");
        if (!fp) return;
        std::uint64_t magic = 0x6571395354415220ULL, cnt = sols_.size(),
                      depth = final ? ~std::uint64_t{0} : frames_.size();
        std::fwrite(&magic, 8, 1, fp);
        std::fwrite(&cnt, 8, 1, fp);
        std::fwrite(&depth, 8, 1, fp);
        for (auto& t : sols_) std::fwrite(t.words().data(), 8, t.words().size(), fp);
        if (!final)
            for (auto& fr : frames_) {
                std::uint8_t c = fr.choice;
                std::fwrite(&c, 1, 1, fp);
            }
        std::fclose(fp);
        std::rename(tmp.c_str(), path_.c_str());
    }

    // returns solutions + replay stack loaded from the checkpoint
    void load(std::vector<std::uint8_t>& replay) {
        finished_ = false;
        if (path_.empty()) return;
        std::FILE* fp = std::fopen(path_.c_str(), "rb");
        if (!fp) return;
        std::uint64_t magic = 0, cnt = 0, depth = 0;
        bool ok = std::fread(&magic, 8, 1, fp) == 1 && magic == 0x6571395354415220ULL &&
                  std::fread(&cnt, 8, 1, fp) == 1 && std::fread(&depth, 8, 1, fp) == 1;
        if (ok) {
            sols_.assign(cnt, Fiber(9));
            for (std::uint64_t i = 0; i < cnt && ok; ++i)
                ok = std::fread(sols_[i].words().data(), 8, 8, fp) == 8;
        }
        if (ok && depth != ~std::uint64_t{0}) {
            replay.assign(depth, 0);
            ok = depth == 0 || std::fread(replay.data(), 1, depth, fp) == depth;
        } else if (ok) {
            finished_ = true;
        }
        std::fclose(fp);
        if (!ok) {
            sols_.clear();
            replay.clear();
            finished_ = false;
        }
    }

  public:
    bool finished_loaded() const { return finished_; }
    bool interrupted() const { return interrupted_; }
    const std::vector<Fiber>& solutions() const { return sols_; }

  private:
    std::string path_;
    double period_;
    std::uint64_t budget_ = 0;
    std::vector<std::int8_t> state_;
    std::vector<std::uint8_t> in_cnt_, undec_cnt_;
    std::vector<std::uint16_t> trail_;
    std::vector<Frame> frames_;
    std::vector<Fiber> sols_;
    int in_total_ = 0;
    std::uint64_t nodes_ = 0;
    std::clock_t last_save_ = 0;
    bool finished_ = false;
    bool interrupted_ = false;
};

// All labeled (0,9;3,6) colorings of Q_9, with optional checkpoint/resume.
inline std::vector<Fiber> star_sets_q9(const std::string& checkpoint = "") {
    StarSetSearch s(checkpoint);
    return s.run();
}

struct Q9Report {
    std::vector<Fiber> star_classes;        // (0,9;3,6) class representatives
    std::vector<std::uint64_t> star_stabs;  // their stabilizer orders
    std::uint64_t labeled_star_sets = 0;
    bool star_orbits_cover_all = false;     // sum of orbit sizes == labeled count
    std::vector<Coloring> three_colorings;  // (0,3,6;3,0,6;3,3,3)
    std::vector<Coloring> four_colorings;   // all off-diagonal 3
};

// Classifies the 5-CI colorings of Q_9 with the eq. (0,9;3,6)-based matrices.
inline Q9Report q9_ci5(const std::string& checkpoint = "") {
    Q9Report rep;
    auto sols = star_sets_q9(checkpoint);
    rep.labeled_star_sets = sols.size();

    // star set classes: orbit marking with a shared digest set; completeness
    // follows when the orbits exactly cover the labeled solution list
    GroupTables gt(9);
    DigestSet seen;
    auto fiber_key = [](const Fiber& x) {
        return std::string(reinterpret_cast<const char*>(x.words().data()),
                           x.words().size() * 8);
    };
    std::uint64_t orbit_total = 0;
    for (auto& t : sols) {
        if (seen.count(detail::digest_of(fiber_key(t)))) continue;
        auto orb = fiber_orbit(t, gt, 0, nullptr, &seen);
        orbit_total += orb.orbit_size;
        rep.star_classes.push_back(t);
        rep.star_stabs.push_back(group_order(9) / orb.orbit_size);
    }
    rep.star_orbits_cover_all = orbit_total == rep.labeled_star_sets;

    // 3-colorings: disjoint pairs anchored at a class representative
    std::vector<Coloring> cands;
    for (auto& a : rep.star_classes)
        for (auto& b : sols) {
            bool disjoint = true;
            for (std::size_t w = 0; w < a.words().size() && disjoint; ++w)
                disjoint = (a.words()[w] & b.words()[w]) == 0;
            if (!disjoint) continue;
            std::vector<std::uint8_t> col(num_vertices(9), 2);
            for (auto v : a.ones()) col[v] = 0;
            for (auto v : b.ones()) col[v] = 1;
            cands.push_back(Coloring(9, 3, std::move(col)));
        }
    for (auto& h : cands)
        if (!is_perfect(h)) throw std::logic_error("disjoint star pair is not perfect");
    auto dedupe_by_canon = [](const std::vector<Coloring>& cs) {
        std::map<std::string, Coloring> by_canon;
        for (auto& h : cs) {
            auto cb = canonical_backtrack(h);
            if (!cb.complete) throw std::logic_error("canonical backtrack cap hit");
            by_canon.emplace(cb.canon, h);
        }
        std::vector<Coloring> out;
        for (auto& [key, h] : by_canon) out.push_back(h);
        return out;
    };
    rep.three_colorings = dedupe_by_canon(cands);

    // 4-colorings: partitions into four star sets anchored at a class rep
    cands.clear();
    for (auto& a : rep.star_classes) {
        std::vector<const Fiber*> rest;
        for (auto& b : sols) {
            bool disjoint = true;
            for (std::size_t w = 0; w < a.words().size() && disjoint; ++w)
                disjoint = (a.words()[w] & b.words()[w]) == 0;
            if (disjoint) rest.push_back(&b);
        }
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (std::size_t j = i + 1; j < rest.size(); ++j) {
                bool ok = true;
                for (std::size_t w = 0; w < a.words().size() && ok; ++w)
                    ok = (rest[i]->words()[w] & rest[j]->words()[w]) == 0;
                if (!ok) continue;
                // fourth part is the remainder; it must be a star set, which
                // is automatic by the quotient condition but checked anyway
                std::vector<std::uint8_t> col(num_vertices(9), 3);
                for (auto v : a.ones()) col[v] = 0;
                for (auto v : rest[i]->ones()) col[v] = 1;
                for (auto v : rest[j]->ones()) col[v] = 2;
                Coloring h(9, 4, std::move(col));
                if (is_perfect(h)) cands.push_back(std::move(h));
            }
    }
    rep.four_colorings = dedupe_by_canon(cands);
    return rep;
}

}  // namespace equicube
