// equicube command-line tool: verification, canonical forms, searches and
// classification reports for perfect colorings of the hypercube.
//
// Exit codes: 0 success, 1 domain error (a machine-readable JSON error object
// is printed to stderr), 2 usage error.

#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "equicube/canonical.hpp"
#include "equicube/classify.hpp"
#include "equicube/constructions.hpp"
#include "equicube/hypercube.hpp"
#include "equicube/partitions.hpp"
#include "equicube/pipelines.hpp"
#include "equicube/refinement.hpp"
#include "equicube/search.hpp"
#include "equicube/spectral.hpp"

using json = nlohmann::ordered_json;
using namespace equicube;

namespace {

struct DomainError : std::runtime_error {
    json object;
    DomainError(std::string type, json detail = json::object())
        : std::runtime_error(type), object(json{{"error", std::move(type)}}) {
        for (auto& [k, v] : detail.items()) object[k] = v;
    }
};

// ---------------------------------------------------------------------------
// I/O helpers

Coloring load_coloring(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("FileNotFound", {{"path", path}});
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DomainError("BadJson", {{"path", path}, {"what", e.what()}});
    }
    if (!j.contains("n") || !j.contains("colors"))
        throw DomainError("BadColoringFile", {{"path", path}, {"want", "{n, colors}"}});
    int n = j["n"].get<int>();
    if (n < 0 || n > 20) throw DomainError("BadDimension", {{"n", n}});
    auto colors = j["colors"].get<std::vector<int>>();
    if (colors.size() != num_vertices(n))
        throw DomainError("BadColoringFile",
                          {{"path", path}, {"want_colors", num_vertices(n)},
                           {"got_colors", colors.size()}});
    int k = 0;
    for (int c : colors) {
        if (c < 0 || c >= 256) throw DomainError("BadColorValue", {{"value", c}});
        k = std::max(k, c + 1);
    }
    std::vector<std::uint8_t> col(colors.begin(), colors.end());
    return Coloring(n, k, std::move(col));
}

json coloring_to_json(const Coloring& f) {
    json j;
    j["n"] = f.dim();
    j["k"] = f.num_colors();
    j["colors"] = std::vector<int>(f.colors().begin(), f.colors().end());
    return j;
}

json matrix_to_json(const QuotientMatrix& S) { return json(S.S); }

std::string matrix_to_text(const QuotientMatrix& S) {
    std::string out;
    for (auto& row : S.S) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? " " : "") + std::to_string(row[i]);
        out += "\n";
    }
    return out;
}

QuotientMatrix parse_matrix(const std::string& text) {
    // either JSON ([[0,6],[2,4]]) or the "0,6;2,4" shorthand
    QuotientMatrix q;
    if (!text.empty() && text[0] == '[') {
        json j;
        try {
            j = json::parse(text);
            q.S = j.get<std::vector<std::vector<int>>>();
        } catch (const json::exception& e) {
            throw DomainError("BadMatrix", {{"matrix", text}, {"what", e.what()}});
        }
    } else {
        std::vector<int> row;
        std::string cur;
        auto flush_cell = [&] {
            if (cur.empty()) throw DomainError("BadMatrix", {{"matrix", text}});
            row.push_back(std::stoi(cur));
            cur.clear();
        };
        for (char ch : text) {
            if (ch == ',') {
                flush_cell();
            } else if (ch == ';') {
                flush_cell();
                q.S.push_back(std::move(row));
                row.clear();
            } else if (!std::isspace(static_cast<unsigned char>(ch))) {
                cur += ch;
            }
        }
        flush_cell();
        q.S.push_back(std::move(row));
    }
    q.k = int(q.S.size());
    for (auto& row : q.S)
        if (int(row.size()) != q.k) throw DomainError("BadMatrix", {{"matrix", text}});
    return q;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            out.push_back(std::stoi(cur));
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(std::stoi(cur));
    return out;
}

struct Output {
    std::string format = "text";  // text | json | hex

    void emit(const json& j, const std::function<std::string()>& text,
              const std::function<std::string()>& hex = nullptr) const {
        if (format == "json")
            std::cout << j.dump(2) << "\n";
        else if (format == "hex" && hex)
            std::cout << hex();
        else
            std::cout << text();
    }
};

std::string coloring_hex(const Coloring& f) {
    std::string out;
    for (int c = 0; c < f.num_colors(); ++c) out += emit_hex(f.fiber(c)) + "\n";
    return out;
}

json spectrum_to_json(const Spectrum& sp) {
    json j = json::array();
    for (auto& [lambda, mult] : sp.eigs) j.push_back({{"eigenvalue", lambda}, {"multiplicity", mult}});
    return j;
}

// ---------------------------------------------------------------------------
// subcommand handlers

int cmd_verify(const std::string& path, const Output& out) {
    Coloring f = load_coloring(path);
    auto q = quotient_matrix(f);
    if (!q.perfect()) {
        auto& w = *q.witness;
        throw DomainError("NotPerfect", {{"witness", {w.u, w.v}}});
    }
    json j{{"perfect", true}, {"n", f.dim()}, {"k", f.num_colors()},
           {"matrix", matrix_to_json(*q.matrix)}};
    out.emit(j, [&] { return matrix_to_text(*q.matrix); }, [&] { return coloring_hex(f); });
    return 0;
}

int cmd_spectrum(const std::string& path, const Output& out) {
    Coloring f = load_coloring(path);
    auto q = quotient_matrix(f);
    if (!q.perfect()) {
        auto& w = *q.witness;
        throw DomainError("NotPerfect", {{"witness", {w.u, w.v}}});
    }
    auto sp = eigenvalues(*q.matrix, f.dim());
    if (!sp) throw DomainError("IrrationalSpectrum");
    json j{{"matrix", matrix_to_json(*q.matrix)},
           {"eigenvalues", spectrum_to_json(*sp)},
           {"degree", degree(f)},
           {"correlation_immunity", correlation_immunity(f)},
           {"resilience", resilience(f)},
           {"essential_arguments", hamming_weight(essential_arguments(f))}};
    out.emit(j, [&] {
        std::string s = "eigenvalues:";
        for (auto& [lambda, mult] : sp->eigs)
            s += " " + std::to_string(lambda) + "^" + std::to_string(mult);
        s += "\ndegree: " + std::to_string(degree(f));
        s += "\ncorrelation immunity: " + std::to_string(correlation_immunity(f));
        s += "\nessential arguments: " +
             std::to_string(hamming_weight(essential_arguments(f))) + "\n";
        return s;
    });
    return 0;
}

int cmd_refine(const std::string& path, const Output& out) {
    Coloring f = load_coloring(path);
    Coloring r = coarsest_equitable_refinement(f);
    json j{{"input_colors", f.num_colors()}, {"colors", r.num_colors()},
           {"coloring", coloring_to_json(r)}};
    out.emit(j, [&] { return coloring_to_json(r).dump(2) + "\n"; },
             [&] { return coloring_hex(r); });
    return 0;
}

int cmd_canon(const std::string& path, const Output& out) {
    Coloring f = load_coloring(path);
    GroupTables gt(f.dim());
    auto cf = canonical_form(f, gt);
    json j{{"canonical", coloring_to_json(cf.canon)},
           {"stabilizer_order", cf.aut_order},
           {"group_order", group_order(f.dim())}};
    out.emit(j, [&] {
        return "stabilizer order: " + std::to_string(cf.aut_order) + "\n" +
               coloring_to_json(cf.canon).dump(2) + "\n";
    }, [&] { return coloring_hex(cf.canon); });
    return 0;
}

int cmd_equiv(const std::string& path, const std::string& other, const Output& out) {
    Coloring f = load_coloring(path), g = load_coloring(other);
    if (f.dim() != g.dim())
        throw DomainError("DimensionMismatch", {{"lhs", f.dim()}, {"rhs", g.dim()}});
    auto e = find_equivalence(f, g);
    json j{{"equivalent", bool(e)}};
    if (e) {
        j["perm"] = std::vector<int>(e->aut.perm.begin(), e->aut.perm.begin() + f.dim());
        j["flips"] = e->aut.flips;
        j["color_map"] = std::vector<int>(e->color_map.begin(), e->color_map.end());
    }
    out.emit(j, [&] {
        return std::string(e ? "equivalent\n" : "inequivalent\n");
    });
    return 0;
}

int cmd_autorder(const std::string& path, const Output& out) {
    Coloring f = load_coloring(path);
    GroupTables gt(f.dim());
    auto orb = coloring_orbit(f, gt);
    std::uint64_t stab = group_order(f.dim()) / orb.orbit_size;
    json j{{"group_order", group_order(f.dim())}, {"orbit_size", orb.orbit_size},
           {"stabilizer_order", stab}};
    out.emit(j, [&] { return "stabilizer order: " + std::to_string(stab) + "\n"; });
    return 0;
}

int cmd_search(int n, const std::string& matrix, const Output& out) {
    auto S = parse_matrix(matrix);
    auto ce = enumerate_coloring_classes(n, S);
    json classes = json::array();
    for (auto& cc : ce.classes) {
        classes.push_back({{"stabilizer_order", cc.stab_order},
                           {"fibers", [&] {
                                std::vector<std::string> v;
                                for (int c = 0; c < cc.rep.num_colors(); ++c)
                                    v.push_back(emit_hex(cc.rep.fiber(c)));
                                return v;
                            }()}});
    }
    json j{{"n", n}, {"matrix", matrix_to_json(S)}, {"classes", classes},
           {"class_count", ce.classes.size()}, {"labeled_count", ce.labeled_count}};
    out.emit(j, [&] {
        std::string s = std::to_string(ce.classes.size()) + " classes, " +
                        std::to_string(ce.labeled_count) + " labeled colorings\n";
        for (auto& cc : ce.classes)
            s += "  stab " + std::to_string(cc.stab_order) + "  " +
                 emit_hex(cc.rep.fiber(0)) + "\n";
        return s;
    }, [&] {
        std::string s;
        for (auto& cc : ce.classes) s += coloring_hex(cc.rep);
        return s;
    });
    return 0;
}

int cmd_codes(int n, int mu, const Output& out) {
    auto ce = enumerate_codes(n, mu);
    json classes = json::array();
    for (auto& cc : ce.classes) {
        json c{{"hex", emit_hex(cc.rep)}, {"aut_order", cc.stab_order},
               {"contains_1perfect", cc.contains_1perfect},
               {"fully_splittable", cc.fully_splittable}};
        if (!cc.cycles.empty()) c["cycles"] = cc.cycles;
        classes.push_back(std::move(c));
    }
    json j{{"n", n}, {"mu", mu}, {"class_count", ce.classes.size()},
           {"labeled_count", ce.labeled_count}, {"classes", classes}};
    out.emit(j, [&] {
        std::string s = std::to_string(ce.classes.size()) + " classes, " +
                        std::to_string(ce.labeled_count) + " labeled codes\n";
        for (auto& cc : ce.classes) {
            s += "  " + emit_hex(cc.rep) + "  |Aut|=" + std::to_string(cc.stab_order);
            if (!cc.cycles.empty()) {
                s += "  cycles";
                for (int c : cc.cycles) s += " " + std::to_string(c);
            }
            s += cc.fully_splittable ? "  splittable" : "  unsplittable";
            s += "\n";
        }
        return s;
    }, [&] {
        std::string s;
        for (auto& cc : ce.classes) s += emit_hex(cc.rep) + "\n";
        return s;
    });
    return 0;
}

json partition_row(const PartitionEnumeration& pe) {
    json j{{"spectrum", pe.spectrum}, {"class_count", pe.classes.size()},
           {"labeled_count", pe.labeled_count}};
    json classes = json::array();
    for (auto& pc : pe.classes)
        classes.push_back({{"stabilizer_order", pc.stab_order},
                           {"fibers", [&] {
                                std::vector<std::string> v;
                                for (int c = 0; c < pc.rep.num_colors(); ++c)
                                    v.push_back(emit_hex(pc.rep.fiber(c)));
                                return v;
                            }()}});
    j["classes"] = std::move(classes);
    return j;
}

std::string partition_row_text(const PartitionEnumeration& pe) {
    std::string s = "(";
    for (std::size_t i = 0; i < pe.spectrum.size(); ++i)
        s += (i ? "," : "") + std::to_string(pe.spectrum[i]);
    s += "):" + std::to_string(pe.classes.size()) + ":" +
         std::to_string(pe.labeled_count) + "\n";
    return s;
}

int cmd_partitions(int n, const std::string& spectrum, bool long_mode, const Output& out) {
    if (!long_mode) {
        if (spectrum.empty()) throw DomainError("MissingSpectrum");
        auto pe = enumerate_partitions(n, parse_int_list(spectrum), ".");
        out.emit(partition_row(pe), [&] { return partition_row_text(pe); });
        return 0;
    }
    // full table: every multiset of code multiplicities summing to n + 1
    std::vector<std::vector<int>> spectra;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int left, int maxp) {
        if (left == 0) {
            spectra.push_back(cur);
            return;
        }
        for (int p = std::min(left, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p);
            cur.pop_back();
        }
    };
    rec(n + 1, n + 1);
    json rows = json::array();
    std::string text;
    for (auto& sp : spectra) {
        if (sp.size() < 2) continue;  // a single n+1-fold code is the trivial coloring
        auto pe = enumerate_partitions(n, sp, ".");
        rows.push_back(partition_row(pe));
        text += partition_row_text(pe);
    }
    out.emit(json{{"n", n}, {"rows", rows}}, [&] { return text; });
    return 0;
}

int cmd_classify(int n, int degree_max, int ci_min, const std::string& library,
                 const Output& out) {
    if ((degree_max < 0) == (ci_min < 0))
        throw DomainError("BadArguments", {{"want", "exactly one of --degree-max, --ci-min"}});
    std::vector<std::uint64_t> fibers;
    int mask;
    if (n <= 4) {
        mask = degree_max >= 0 ? allowed_levels(n, n - 2 * degree_max, n)
                               : allowed_levels(n, -n, n - 2 * (ci_min + 1));
        FiberLibraryBuilder fb(n, mask);
        for (std::uint64_t tt = 0; tt < (std::uint64_t{1} << num_vertices(n)); ++tt) fb.add(tt);
        fibers = fb.take();
    } else if (n == 6 && degree_max == 3) {
        mask = allowed_levels(n, 0, n);
        fibers = q6_fiber_library(true, mask, library.empty() ? "." : library).fibers;
    } else if (n == 6 && ci_min == 2) {
        mask = allowed_levels(n, -n, 0);
        fibers = q6_fiber_library(false, mask, library.empty() ? "." : library).fibers;
    } else {
        throw DomainError("Unsupported",
                          {{"supported", "n<=4 (any), n=6 with --degree-max 3 or --ci-min 2"}});
    }
    auto rep = classify(n, fibers, mask);
    std::map<std::vector<std::vector<int>>, int> by_matrix;
    for (auto& cc : rep.classes) {
        auto q = quotient_matrix(cc.rep);
        ++by_matrix[q.matrix->canonical().S];
    }
    json rows = json::array();
    std::string text;
    for (auto& [S, count] : by_matrix) {
        rows.push_back({{"matrix", S}, {"classes", count}});
        for (std::size_t i = 0; i < S.size(); ++i) {
            for (std::size_t jx = 0; jx < S[i].size(); ++jx)
                text += (jx ? "," : i ? ";" : "") + std::to_string(S[i][jx]);
        }
        text += " ^" + std::to_string(count) + "\n";
    }
    text += "total: " + std::to_string(rep.classes.size()) + " classes\n";
    json j{{"n", n}, {"class_count", rep.classes.size()}, {"by_matrix", rows}};
    out.emit(j, [&] { return text; });
    return 0;
}

int cmd_construct(const std::string& name, int n, const std::string& group,
                  const std::string& base, const Output& out) {
    Coloring f = [&] {
        if (name == "distance") return distance_coloring(n);
        if (name == "star") {
            if (group != "z2xz2" && group != "z4")
                throw DomainError("BadGroup", {{"want", "z2xz2|z4"}});
            return q9_star(group == "z4");
        }
        if (name == "quasigroup") return q9_quasigroup();
        if (name == "gbased") {
            if (base.empty()) throw DomainError("MissingBase");
            return q9_gbased(load_coloring(base));
        }
        if (name == "linear8") return q6_linear8();
        if (name == "g") return g_of(n);
        throw DomainError("UnknownConstruction",
                          {{"known", "distance|star|quasigroup|gbased|linear8|g"}});
    }();
    auto q = quotient_matrix(f);
    if (!q.perfect()) throw DomainError("NotPerfect");
    json j{{"name", name}, {"matrix", matrix_to_json(*q.matrix)},
           {"coloring", coloring_to_json(f)}};
    out.emit(j, [&] { return matrix_to_text(*q.matrix); }, [&] { return coloring_hex(f); });
    return 0;
}

int cmd_bench(bool long_mode, const Output& out) {
    auto timeit = [](const std::function<void()>& fn) {
        auto t0 = std::clock();
        fn();
        return double(std::clock() - t0) / CLOCKS_PER_SEC;
    };
    json rows = json::array();
    std::string text;
    auto report = [&](const std::string& name, double sec) {
        rows.push_back({{"benchmark", name}, {"seconds", sec}});
        text += name + ": " + std::to_string(sec) + " s\n";
    };
    report("refine distance Q_10", timeit([] {
               coarsest_equitable_refinement(distance_coloring(10));
           }));
    report("orbit of distance coloring Q_6", timeit([] {
               GroupTables gt(6);
               coloring_orbit(distance_coloring(6), gt);
           }));
    report("1-perfect codes Q_7", timeit([] { enumerate_codes(7, 1); }));
    if (long_mode) {
        report("3-fold codes Q_7", timeit([] { enumerate_codes(7, 3); }));
        report("star sets Q_9", timeit([] { star_sets_q9(); }));
    }
    out.emit(json{{"results", rows}}, [&] { return text; });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"perfect colorings of the hypercube: verification, canonical forms,"
                 " enumeration and classification"};
    app.require_subcommand(1);

    Output out;
    int threads = 1;
    if (const char* env = std::getenv("EQUICUBE_THREADS")) threads = std::atoi(env);
    app.add_option("--threads", threads, "worker thread count (reports are single-threaded)");

    std::string coloring_path, other_path, matrix, spectrum, library, name = "distance",
                group = "z2xz2", base;
    int n = 0, mu = 0, degree_max = -1, ci_min = -1;
    bool long_mode = false;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", out.format, "output format")
            ->check(CLI::IsMember({"text", "json", "hex"}));
    };

    auto* verify = app.add_subcommand("verify", "check perfectness, print the quotient matrix");
    verify->add_option("--coloring", coloring_path)->required();
    add_format(verify);

    auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and derived parameters");
    spectrum_cmd->add_option("--coloring", coloring_path)->required();
    add_format(spectrum_cmd);

    auto* refine = app.add_subcommand("refine", "coarsest equitable refinement");
    refine->add_option("--coloring", coloring_path)->required();
    add_format(refine);

    auto* canon = app.add_subcommand("canon", "canonical form and stabilizer order");
    canon->add_option("--coloring", coloring_path)->required();
    add_format(canon);

    auto* equiv = app.add_subcommand("equiv", "find an equivalence between two colorings");
    equiv->add_option("--coloring", coloring_path)->required();
    equiv->add_option("--other", other_path)->required();
    add_format(equiv);

    auto* autorder = app.add_subcommand("autorder", "stabilizer order under Aut(Q_n)");
    autorder->add_option("--coloring", coloring_path)->required();
    add_format(autorder);

    auto* search = app.add_subcommand("search", "enumerate classes with a quotient matrix");
    search->add_option("--n", n)->required();
    search->add_option("--matrix", matrix, "JSON or \"a,b;c,d\"")->required();
    add_format(search);

    auto* codes = app.add_subcommand("codes", "enumerate multifold 1-perfect codes");
    codes->add_option("--n", n)->required();
    codes->add_option("--mu", mu)->required();
    add_format(codes);

    auto* partitions = app.add_subcommand("partitions", "partitions into multifold codes");
    partitions->add_option("--n", n)->required();
    partitions->add_option("--spectrum", spectrum, "code multiplicities, e.g. 5,3");
    partitions->add_flag("--long", long_mode, "full table over all spectra");
    add_format(partitions);

    auto* classify_cmd = app.add_subcommand("classify", "classification closure report");
    classify_cmd->add_option("--n", n)->required();
    classify_cmd->add_option("--degree-max", degree_max);
    classify_cmd->add_option("--ci-min", ci_min);
    classify_cmd->add_option("--library", library, "fiber-library cache directory");
    classify_cmd->add_flag("--long", long_mode);
    add_format(classify_cmd);

    auto* construct = app.add_subcommand("construct", "emit a named construction");
    construct->add_option("--name", name,
                          "distance|star|quasigroup|gbased|linear8|g");
    construct->add_option("--n", n);
    construct->add_option("--group", group, "z2xz2|z4 (star equation)");
    construct->add_option("--base", base, "base coloring file (gbased)");
    add_format(construct);

    auto* bench = app.add_subcommand("bench", "timing micro-benchmarks");
    bench->add_flag("--long", long_mode);
    add_format(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    (void)threads;  // report assembly is single-threaded by design

    try {
        if (verify->parsed()) return cmd_verify(coloring_path, out);
        if (spectrum_cmd->parsed()) return cmd_spectrum(coloring_path, out);
        if (refine->parsed()) return cmd_refine(coloring_path, out);
        if (canon->parsed()) return cmd_canon(coloring_path, out);
        if (equiv->parsed()) return cmd_equiv(coloring_path, other_path, out);
        if (autorder->parsed()) return cmd_autorder(coloring_path, out);
        if (search->parsed()) return cmd_search(n, matrix, out);
        if (codes->parsed()) return cmd_codes(n, mu, out);
        if (partitions->parsed()) return cmd_partitions(n, spectrum, long_mode, out);
        if (classify_cmd->parsed()) return cmd_classify(n, degree_max, ci_min, library, out);
        if (construct->parsed()) return cmd_construct(name, n, group, base, out);
        if (bench->parsed()) return cmd_bench(long_mode, out);
    } catch (const DomainError& e) {
        std::cerr << e.object.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "DomainError"}, {"what", e.what()}}.dump() << "\n";
        return 1;
    }
    return 2;
}
