// Partitions of Q_n into multifold 1-perfect codes.
//
// A partition with spectrum (mu_1 >= ... >= mu_s), sum mu_i = n+1, is stored
// as an s-coloring whose color-i fiber is a mu_i-fold code; two partitions
// are equivalent iff the colorings are (part sizes 2^n mu / (n+1) determine
// mu, so color bijections respect the spectrum automatically).
//
// Enumeration is a depth-first cover search: the part containing the
// smallest uncovered vertex is chosen from per-minimum-vertex buckets of the
// labeled code lists, so every set partition is generated exactly once, and
// parts appear in first-occurrence order (the generated color string is
// already normalized).  Classes are separated by orbit marking.

#pragma once

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "equicube/canonical.hpp"
#include "equicube/search.hpp"

namespace equicube {

// All labeled mu-fold 1-perfect codes of Q_n, cached in memory and (when
// cache_dir is nonempty) on disk; mu > (n+1)/2 is built by complementation.
inline const std::vector<Fiber>& labeled_codes(int n, int mu, const std::string& cache_dir = "") {
    static std::map<std::pair<int, int>, std::vector<Fiber>> cache;
    auto key = std::make_pair(n, mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<Fiber> codes;
    if (2 * mu > n + 1) {
        for (auto& c : labeled_codes(n, n + 1 - mu, cache_dir)) codes.push_back(c.complement());
        return cache.emplace(key, std::move(codes)).first->second;
    }

    const std::string path = cache_dir.empty()
                                 ? std::string()
                                 : cache_dir + "/equicube_codes_n" + std::to_string(n) + "_mu" +
                                       std::to_string(mu) + ".cache";
    const std::size_t words = Fiber(n).words().size();
    if (!path.empty()) {
        if (std::FILE* fp = std::fopen(path.c_str(), "rb")) {
            std::uint64_t magic = 0, cnt = 0;
            bool ok = std::fread(&magic, 8, 1, fp) == 1 && magic == 0x6571434f444553ULL &&
                      std::fread(&cnt, 8, 1, fp) == 1;
            if (ok) {
                codes.assign(cnt, Fiber(n));
                for (std::uint64_t i = 0; i < cnt && ok; ++i)
                    ok = std::fread(codes[i].words().data(), 8, words, fp) == words;
            }
            std::fclose(fp);
            if (ok && !codes.empty()) return cache.emplace(key, std::move(codes)).first->second;
            codes.clear();
        }
    }
    for_each_code(n, mu, [&](const Fiber& t) {
        codes.push_back(t);
        return true;
    });
    if (!path.empty()) {
        if (std::FILE* fp = std::fopen(path.c_str(), "wb")) {
            std::uint64_t magic = 0x6571434f444553ULL, cnt = codes.size();
            std::fwrite(&magic, 8, 1, fp);
            std::fwrite(&cnt, 8, 1, fp);
            for (auto& c : codes) std::fwrite(c.words().data(), 8, words, fp);
            std::fclose(fp);
        }
    }
    return cache.emplace(key, std::move(codes)).first->second;
}

struct PartitionClass {
    Coloring rep;  // canonical form
    std::uint64_t stab_order = 0;
    std::uint64_t orbit_size = 0;  // labeled partitions in the class
};

struct PartitionEnumeration {
    std::vector<int> spectrum;  // sorted descending
    std::vector<PartitionClass> classes;
    std::uint64_t labeled_count = 0;
};

inline PartitionEnumeration enumerate_partitions(int n, std::vector<int> spectrum,
                                                 const std::string& cache_dir = "") {
    if (n > 7) throw std::invalid_argument("partition enumeration supports n <= 7");
    std::sort(spectrum.rbegin(), spectrum.rend());
    int total_mu = 0;
    for (int mu : spectrum) {
        if (mu < 1) throw std::invalid_argument("spectrum entries must be positive");
        total_mu += mu;
    }
    if (total_mu != n + 1) throw std::invalid_argument("spectrum must sum to n+1");

    PartitionEnumeration out;
    out.spectrum = spectrum;
    const std::uint32_t nv = num_vertices(n);
    const int s = int(spectrum.size());

    // distinct mu values with multiplicities
    std::vector<int> mus;
    std::vector<int> remaining;
    for (int mu : spectrum) {
        if (!mus.empty() && mus.back() == mu) ++remaining.back();
        else {
            mus.push_back(mu);
            remaining.push_back(1);
        }
    }

    // per-mu buckets of codes by minimum vertex, as raw two-word masks
    struct Mask {
        std::uint64_t w0 = 0, w1 = 0;
    };
    std::vector<std::vector<std::vector<Mask>>> bucket(mus.size());
    for (std::size_t mi = 0; mi < mus.size(); ++mi) {
        bucket[mi].assign(nv, {});
        for (auto& c : labeled_codes(n, mus[mi], cache_dir)) {
            const auto& w = c.words();
            Mask m{w[0], w.size() > 1 ? w[1] : 0};
            Vertex v0 = Vertex(m.w0 ? __builtin_ctzll(m.w0) : 64 + __builtin_ctzll(m.w1));
            bucket[mi][v0].push_back(m);
        }
    }

    GroupTables gt(n);
    DigestSet seen;
    std::map<std::string, PartitionClass> classes;
    std::vector<std::uint8_t> col(nv, 255);
    std::uint64_t cw0 = 0, cw1 = 0;  // covered vertices
    const std::uint64_t full0 = nv >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nv) - 1;
    const std::uint64_t full1 = nv > 64 ? ~std::uint64_t{0} >> (128 - nv) : 0;

    std::function<void(int)> rec = [&](int placed) {
        if (placed == s) {
            ++out.labeled_count;
            std::string key(col.begin(), col.end());
            if (seen.count(detail::digest_of(key))) return;
            Coloring f(n, s, col);
            auto orb = coloring_orbit(f, gt, 0, nullptr, &seen);
            PartitionClass pc;
            pc.rep = coloring_from_key(n, orb.canon);
            pc.orbit_size = orb.orbit_size;
            pc.stab_order = group_order(n) / orb.orbit_size;
            classes.emplace(orb.canon, std::move(pc));
            return;
        }
        // smallest uncovered vertex
        Vertex v = ~cw0 & full0 ? Vertex(__builtin_ctzll(~cw0 & full0))
                                : Vertex(64 + __builtin_ctzll(~cw1 & full1));
        for (std::size_t mi = 0; mi < mus.size(); ++mi) {
            if (!remaining[mi]) continue;
            --remaining[mi];
            for (auto& m : bucket[mi][v]) {
                if ((m.w0 & cw0) || (m.w1 & cw1)) continue;
                cw0 |= m.w0;
                cw1 |= m.w1;
                std::uint64_t x = m.w0;
                while (x) {
                    col[__builtin_ctzll(x)] = std::uint8_t(placed);
                    x &= x - 1;
                }
                x = m.w1;
                while (x) {
                    col[64 + __builtin_ctzll(x)] = std::uint8_t(placed);
                    x &= x - 1;
                }
                rec(placed + 1);
                cw0 &= ~m.w0;
                cw1 &= ~m.w1;
            }
            ++remaining[mi];
        }
    };
    rec(0);
    for (auto& [key, pc] : classes) out.classes.push_back(std::move(pc));
    return out;
}

}  // namespace equicube
