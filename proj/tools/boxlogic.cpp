// boxlogic: build the propositional structure of a k-box no-signaling model,
// cache it, and run algebraic and linear-programming checks against it.
//
// Commands: generate | check | lo-check | lp-max | localized | copies
// All results go to standard output as JSON; diagnostics go to standard
// error. Exit codes: 0 success, 1 check-mismatch, 2 missing or invalid
// input, 3 resource cap.

#include <boxlogic/axioms.hpp>
#include <boxlogic/cache.hpp>
#include <boxlogic/generate.hpp>
#include <boxlogic/lo.hpp>
#include <boxlogic/reports.hpp>
#include <boxlogic/states.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace boxlogic;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_MISMATCH = 1;
constexpr int EXIT_BAD_INPUT = 2;
constexpr int EXIT_CAP = 3;

struct Options {
    std::string spec_path;
    size_t k = 0;
    std::string kind = "effect";
    std::string cache_dir;
    std::string structure;
    std::string objective;
    std::string state_path;
    std::string checks = "axioms,coherence,omp,lattice,order-det";
    std::string boxes_csv;
    size_t copies = 1;
    size_t max_size = 0;
    bool maximal_only = false;
    size_t max_elements = 2'000'000;
    size_t max_cliques = 5'000'000;
    unsigned threads = 0;
    uint64_t seed = 0;
};

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string resolved_cache_dir(const Options& opt) {
    if (!opt.cache_dir.empty()) return opt.cache_dir;
    if (const char* env = std::getenv("BOXLOGIC_CACHE_DIR"); env && *env) return env;
    return ".";
}

SumRule rule_of_kind(const std::string& kind) {
    if (kind == "effect") return SumRule::EffectSum;
    if (kind == "omp") return SumRule::UnionSum;
    throw std::invalid_argument("unknown kind '" + kind + "' (expected effect or omp)");
}

std::vector<BoxSpec> load_boxes_for(const Options& opt) {
    if (opt.spec_path.empty()) throw std::invalid_argument("--spec is required");
    std::vector<BoxSpec> boxes = boxes_from_json(load_json_file(opt.spec_path));
    if (opt.k == 0 || opt.k == boxes.size()) return boxes;
    if (boxes.size() == 1) {
        std::vector<BoxSpec> rep(opt.k, boxes[0]);
        return rep;
    }
    throw std::invalid_argument("-k " + std::to_string(opt.k) + " conflicts with a spec of " +
                                std::to_string(boxes.size()) + " boxes");
}

size_t cells_of_boxes(const std::vector<BoxSpec>& boxes) {
    size_t cells = 1;
    for (const BoxSpec& b : boxes) cells *= b.phase_cells();
    return cells;
}

// The mask width is a template parameter everywhere in the library; read the
// cell count first, then instantiate the right width.
size_t peek_cache_cells(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CacheError("cannot open cache file: " + path);
    std::string line;
    for (int i = 0; i < 8 && std::getline(in, line); ++i) {
        if (line.rfind("cells ", 0) == 0) return detail_cache::parse_count(line.substr(6), path);
    }
    throw CacheError("malformed cache file " + path + ": no cells line");
}

std::string locate_structure(const Options& opt) {
    if (!opt.structure.empty()) return opt.structure;
    if (opt.spec_path.empty())
        throw std::invalid_argument("give --structure <cache>, or --spec (with -k/--kind) to "
                                    "locate one in the cache directory");
    std::vector<BoxSpec> boxes = load_boxes_for(opt);
    fs::path p = fs::path(resolved_cache_dir(opt)) / cache_basename(rule_of_kind(opt.kind), boxes);
    if (!fs::exists(p))
        throw CacheError("no cache at " + p.string() + " (run generate first)");
    return p.string();
}

template <class F>
int dispatch_width(size_t cells, F&& f) {
    size_t words = (cells + 63) / 64;
    if (words <= 1) return f(std::integral_constant<size_t, 1>{});
    if (words <= 2) return f(std::integral_constant<size_t, 2>{});
    if (words <= 3) return f(std::integral_constant<size_t, 3>{});
    if (words <= 4) return f(std::integral_constant<size_t, 4>{});
    if (words <= 8) return f(std::integral_constant<size_t, 8>{});
    if (words <= 16) return f(std::integral_constant<size_t, 16>{});
    throw std::invalid_argument("phase space too large: " + std::to_string(cells) +
                                " cells (limit 1024)");
}

Json structure_summary(const std::string& kind, size_t k, size_t cells, size_t elements,
                       size_t atoms) {
    return Json{{"kind", kind}, {"k", k},         {"cells", cells},
                {"elements", elements}, {"atoms", atoms}};
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

template <size_t W>
int run_generate(const Options& opt) {
    std::vector<BoxSpec> boxes = load_boxes_for(opt);
    GenerateOptions gopt;
    gopt.max_elements = opt.max_elements;
    gopt.threads = opt.threads;
    auto [s, rep] = box_product<W>(boxes, rule_of_kind(opt.kind), gopt);

    fs::path dir = resolved_cache_dir(opt);
    fs::create_directories(dir);
    fs::path file = dir / cache_basename(s.rule, boxes);
    std::vector<std::string> notes;
    if (s.rule == SumRule::UnionSum && s.atoms.size() > s.atom_infos->size())
        notes.push_back("atoms exceed the generators; state checks use the pinned polytope "
                        "(base rows plus one certificate equality per extra atom)");
    save_cache(file.string(), s, rep, boxes, notes);

    Json j = generation_to_json(rep);
    j["cache"] = file.string();
    emit(j);
    return EXIT_OK;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct Expected {
    bool axioms, coherence, omp, lattice, order_det;
};

// classification a binary (2x2) model must reproduce, keyed by box count
std::optional<Expected> expected_for(const std::vector<BoxSpec>& boxes, SumRule rule) {
    for (const BoxSpec& b : boxes) {
        if (b.num_inputs() != 2) return std::nullopt;
        for (const auto& in : b.inputs)
            if (in.outcomes.size() != 2) return std::nullopt;
    }
    size_t k = boxes.size();
    if (k == 1) return Expected{true, true, true, true, true};
    if (k == 2) return Expected{true, true, true, false, true};
    if (k == 3) {
        if (rule == SumRule::EffectSum) return Expected{true, false, false, false, true};
        return Expected{true, true, true, false, true};
    }
    return std::nullopt;
}

template <size_t W>
int run_check(const Options& opt) {
    auto loaded = load_cache<W>(locate_structure(opt));
    const Structure<W>& s = loaded.s;
    CheckPolicy pol;
    pol.seed = opt.seed;

    std::set<std::string> want;
    {
        std::stringstream ss(opt.checks);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            static const std::set<std::string> known{"axioms", "coherence", "omp", "lattice",
                                                     "order-det"};
            if (!known.count(item))
                throw std::invalid_argument("unknown check '" + item +
                                            "' (axioms, coherence, omp, lattice, order-det)");
            want.insert(item);
        }
        if (want.empty()) throw std::invalid_argument("no checks requested");
    }

    Json checks = Json::object();
    std::map<std::string, bool> got;

    if (want.count("axioms")) {
        auto reports = check_effect_algebra(s, pol);
        reports.push_back(check_atomistic(s));
        bool pass = true;
        for (const auto& r : reports) pass = pass && r.pass;
        checks["axioms"] = Json{{"pass", pass}, {"reports", axiom_reports_to_json(reports)}};
        got["axioms"] = pass;
    }
    if (want.count("coherence")) {
        auto rep = check_coherence_law(s, pol);
        checks["coherence"] = coherence_to_json(rep);
        got["coherence"] = rep.pass;
    }
    if (want.count("omp")) {
        auto reports = check_orthoposet(s, pol);
        bool pass = true;
        for (const auto& r : reports) pass = pass && r.pass;
        checks["omp"] = Json{{"pass", pass}, {"reports", axiom_reports_to_json(reports)}};
        got["omp"] = pass;
    }
    if (want.count("lattice")) {
        auto rep = check_lattice_and_boolean(s, pol);
        checks["lattice"] = lattice_to_json(rep);
        got["lattice"] = rep.is_lattice;
    }
    if (want.count("order-det")) {
        auto rep = check_order_determining_classical(s);
        checks["order-det"] = order_det_to_json(rep);
        got["order-det"] = rep.pass;
    }

    auto exp = expected_for(loaded.boxes, s.rule);
    Json j;
    j["structure"] = structure_summary(kind_name(s.rule), loaded.boxes.size(), s.cells,
                                       s.elems.size(), s.atoms.size());
    j["checks"] = checks;

    bool match = true;
    if (exp) {
        Json ej = Json::object();
        auto compare = [&](const std::string& name, bool expected) {
            if (!got.count(name)) return;
            ej[name] = expected;
            if (got[name] != expected) match = false;
        };
        compare("axioms", exp->axioms);
        compare("coherence", exp->coherence);
        compare("omp", exp->omp);
        compare("lattice", exp->lattice);
        compare("order-det", exp->order_det);
        j["expected"] = ej;
    } else {
        j["expected"] = nullptr;
    }
    j["matches_expected"] = match;
    emit(j);
    return match ? EXIT_OK : EXIT_MISMATCH;
}

// ---------------------------------------------------------------------------
// shared state-space plumbing for lo-check / lp-max / copies
// ---------------------------------------------------------------------------

// Either the structure's own state space (atoms == generators) or, for a
// closure with extra atoms, the generator structure's state space plus the
// pinned system over the closure.
template <size_t W>
struct Analysis {
    Structure<W> closure;      // the loaded structure
    Structure<W> base;         // generator structure (same object unless pinned)
    StateSpace<W> ss;          // state space of base
    std::optional<PinnedSpace<W>> pinned;
    std::vector<BoxSpec> boxes;
    bool is_pinned() const { return pinned.has_value(); }
};

template <size_t W>
Analysis<W> make_analysis(const Options& opt, CachedStructure<W>&& loaded) {
    Analysis<W> an;
    an.boxes = std::move(loaded.boxes);
    an.closure = std::move(loaded.s);
    if (an.closure.atoms.size() == an.closure.atom_infos->size()) {
        an.base = an.closure;
        an.ss = build_state_space(an.base);
        return an;
    }
    // closure atoms outgrow the generators: get the generator structure,
    // preferring its cache next to the loaded one
    fs::path dir = fs::path(locate_structure(opt)).parent_path();
    fs::path sibling = dir / cache_basename(SumRule::EffectSum, an.boxes);
    if (fs::exists(sibling)) {
        auto basec = load_cache<W>(sibling.string());
        an.base = std::move(basec.s);
        std::cerr << "using generator structure from " << sibling.string() << "\n";
    } else {
        std::cerr << "generating the generator structure (no cache at " << sibling.string()
                  << ")\n";
        GenerateOptions gopt;
        gopt.max_elements = opt.max_elements;
        gopt.threads = opt.threads;
        auto [bs, brep] = box_product<W>(an.boxes, SumRule::EffectSum, gopt);
        an.base = std::move(bs);
        try {
            save_cache(sibling.string(), an.base, brep, an.boxes);
        } catch (const CacheError&) {
            // cache directory not writable; keep going with the in-memory copy
        }
    }
    an.ss = build_state_space(an.base);
    an.pinned = build_pinned_space(an.closure, an.ss);
    return an;
}

template <size_t W>
std::vector<std::vector<uint32_t>> gather_cliques(const Options& opt, const StateSpace<W>& ss) {
    auto g = build_orthogonality_graph(ss);
    if (opt.max_size > 0 && !opt.maximal_only)
        return cliques_up_to(g, opt.max_size, opt.max_cliques);
    return maximal_cliques(g, opt.max_cliques);
}

// ---------------------------------------------------------------------------
// lo-check
// ---------------------------------------------------------------------------

template <size_t W>
int run_lo(const Options& opt) {
    auto an = make_analysis(opt, load_cache<W>(locate_structure(opt)));
    auto cliques = gather_cliques(opt, an.ss);
    LOReport rep = an.is_pinned() ? check_lo_violations_pinned(*an.pinned, cliques)
                                  : check_lo_violations(an.ss, cliques);

    Json j;
    j["structure"] = structure_summary(kind_name(an.closure.rule), an.boxes.size(),
                                       an.closure.cells, an.closure.elems.size(),
                                       an.closure.atoms.size());
    j["cliques"] = cliques.size();
    j["violated"] = rep.violated_count;
    j["max_lp"] = rat_frac(rep.max_lp);
    j["lp_runs"] = rep.lp_runs;
    j["rows"] = lo_report_to_json(rep);
    emit(j);
    return EXIT_OK;
}

// ---------------------------------------------------------------------------
// lp-max
// ---------------------------------------------------------------------------

template <size_t W>
std::vector<uint32_t> objective_positions(const Analysis<W>& an, const Json& oj) {
    size_t nvars = an.is_pinned() ? an.pinned->poly.nvars : an.ss.poly.nvars;
    std::vector<uint32_t> pos;
    if (oj.contains("positions")) {
        for (const auto& v : oj["positions"]) {
            size_t p = v.get<size_t>();
            if (p >= nvars)
                throw std::invalid_argument("objective position " + std::to_string(p) +
                                            " out of range (" + std::to_string(nvars) + " vars)");
            pos.push_back(uint32_t(p));
        }
    } else if (oj.contains("atoms")) {
        const auto& infos = *an.base.atom_infos;
        for (const auto& v : oj["atoms"]) {
            std::string label = v.get<std::string>();
            uint32_t found = UINT32_MAX;
            for (uint32_t i = 0; i < infos.size(); ++i)
                if (infos[i].label == label) { found = i; break; }
            if (found == UINT32_MAX)
                throw std::invalid_argument("unknown atom label '" + label + "'");
            // labels live in generator info order; polytope columns are atom
            // positions, so map through the context table
            uint32_t p = an.ss.ct.pos_of_info[found];
            pos.push_back(an.is_pinned() ? an.pinned->gen_pos[p] : p);
        }
    } else {
        throw std::invalid_argument("objective file needs an 'atoms' or 'positions' array");
    }
    if (pos.empty()) throw std::invalid_argument("objective is empty");
    return pos;
}

template <size_t W>
int run_lp(const Options& opt) {
    if (opt.objective.empty()) throw std::invalid_argument("--objective is required");
    auto an = make_analysis(opt, load_cache<W>(locate_structure(opt)));
    Json oj = load_json_file(opt.objective);
    std::vector<uint32_t> pos = objective_positions(an, oj);

    Json j;
    if (an.is_pinned()) {
        const PolySystem& sys = an.pinned->sys;
        RatVec c = indicator_objective(sys.nvars, pos);
        LpResult r = lp_maximize(sys.A, sys.b, c);
        if (r.status != LpStatus::Optimal)
            throw std::runtime_error("state polytope LP did not solve: internal error");
        j["lp_max"] = rat_frac(r.value);
        j["iterations"] = r.iterations;
    } else {
        RatVec c = indicator_objective(an.ss.poly.nvars, pos);
        LinearOptimum r = maximize_linear(an.ss, c);
        j["lp_max"] = rat_frac(r.value);
        j["iterations"] = r.iterations;
        j["argmax"] = pr_state_to_json(an.ss.ct, logic_state_to_pr(an.ss, LogicState{r.argmax}));
    }
    Json pj = Json::array();
    for (uint32_t p : pos) pj.push_back(p);
    j["positions"] = pj;
    emit(j);
    return EXIT_OK;
}

// ---------------------------------------------------------------------------
// localized
// ---------------------------------------------------------------------------

template <size_t W>
int run_localized(const Options& opt) {
    auto loaded = load_cache<W>(locate_structure(opt));
    if (opt.boxes_csv.empty()) throw std::invalid_argument("--boxes is required (e.g. --boxes 1,2)");
    std::vector<size_t> subset;
    std::stringstream ss(opt.boxes_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t idx = detail_cache::parse_count(item, "--boxes");
        if (idx == 0 || idx > loaded.boxes.size())
            throw std::invalid_argument("box number " + item + " out of range 1.." +
                                        std::to_string(loaded.boxes.size()));
        subset.push_back(idx - 1); // 1-based on the command line
    }
    auto elems = localized_elements<W>(loaded.s, subset);

    Json masks = Json::array();
    for (const auto& m : elems) masks.push_back(m.to_hex());
    Json bj = Json::array();
    for (size_t b : subset) bj.push_back(b + 1);
    emit(Json{{"boxes", bj}, {"count", elems.size()}, {"masks", masks}});
    return EXIT_OK;
}

// ---------------------------------------------------------------------------
// copies
// ---------------------------------------------------------------------------

template <size_t W>
int run_copies(const Options& opt) {
    auto an = make_analysis(opt, load_cache<W>(locate_structure(opt)));
    PRState P = opt.state_path.empty()
                    ? uniform_state(an.ss)
                    : pr_state_from_json(an.ss.ct, load_json_file(opt.state_path));
    size_t max_size = opt.max_size ? opt.max_size : 4;
    CopiesReport rep = check_lo_copies(an.ss, P, opt.copies, max_size, opt.max_cliques);
    emit(copies_to_json(rep));
    if (!rep.complete) {
        std::cerr << "search hit the visit cap; the reported maximum is a lower bound\n";
        return EXIT_CAP;
    }
    return EXIT_OK;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"propositional structures of k-box no-signaling models"};
    app.require_subcommand(1);

    auto add_locator = [&](CLI::App* cmd) {
        cmd->add_option("--structure", opt.structure, "path to a structure cache file");
        cmd->add_option("--spec", opt.spec_path, "model spec JSON (alternative to --structure)");
        cmd->add_option("-k,--boxes-count", opt.k, "number of boxes (replicates a 1-box spec)");
        cmd->add_option("--kind", opt.kind, "closure rule: effect | omp")
            ->check(CLI::IsMember({"effect", "omp"}));
        cmd->add_option("--cache-dir", opt.cache_dir,
                        "cache directory (default $BOXLOGIC_CACHE_DIR, then .)");
    };

    CLI::App* gen = app.add_subcommand("generate", "close the atom set and cache the structure");
    gen->add_option("--spec", opt.spec_path, "model spec JSON")->required();
    gen->add_option("-k,--boxes-count", opt.k, "number of boxes (replicates a 1-box spec)");
    gen->add_option("--kind", opt.kind, "closure rule: effect | omp")
        ->check(CLI::IsMember({"effect", "omp"}));
    gen->add_option("--cache-dir", opt.cache_dir,
                    "cache directory (default $BOXLOGIC_CACHE_DIR, then .)");
    gen->add_option("--max-elements", opt.max_elements, "element cap for the closure");
    gen->add_option("--threads", opt.threads, "worker threads (0 = hardware)");

    CLI::App* chk = app.add_subcommand("check", "run algebraic checks against the expected "
                                                "classification");
    add_locator(chk);
    chk->add_option("--checks", opt.checks,
                    "comma list from axioms,coherence,omp,lattice,order-det");
    chk->add_option("--seed", opt.seed, "seed for sampled sweeps");

    CLI::App* lo = app.add_subcommand("lo-check", "clique inequalities vs the state polytope");
    add_locator(lo);
    lo->add_option("--max-size", opt.max_size, "enumerate all cliques up to this size");
    lo->add_flag("--maximal-only", opt.maximal_only, "maximal cliques only (default)");
    lo->add_option("--max-cliques", opt.max_cliques, "clique enumeration cap");

    CLI::App* lp = app.add_subcommand("lp-max", "maximize an atom-indicator sum over the "
                                                "state polytope");
    add_locator(lp);
    lp->add_option("--objective", opt.objective, "JSON file with 'atoms' labels or 'positions'")
        ->required();

    CLI::App* locz = app.add_subcommand("localized", "elements trivial outside chosen boxes");
    add_locator(locz);
    locz->add_option("--boxes", opt.boxes_csv, "comma list of 1-based box numbers");

    CLI::App* cp = app.add_subcommand("copies", "clique sums over n independent copies of a "
                                                "behaviour");
    add_locator(cp);
    cp->add_option("-n,--copies", opt.copies, "number of copies (1 or 2)");
    cp->add_option("--state", opt.state_path, "behaviour JSON (default: uniform)");
    cp->add_option("--max-size", opt.max_size, "clique size bound (default 4)");
    cp->add_option("--max-cliques", opt.max_cliques, "search visit cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_BAD_INPUT;
    }

    try {
        if (gen->parsed()) {
            std::vector<BoxSpec> boxes = load_boxes_for(opt);
            return dispatch_width(cells_of_boxes(boxes),
                                  [&](auto w) { return run_generate<decltype(w)::value>(opt); });
        }
        size_t cells = peek_cache_cells(locate_structure(opt));
        if (chk->parsed())
            return dispatch_width(cells, [&](auto w) { return run_check<decltype(w)::value>(opt); });
        if (lo->parsed())
            return dispatch_width(cells, [&](auto w) { return run_lo<decltype(w)::value>(opt); });
        if (lp->parsed())
            return dispatch_width(cells, [&](auto w) { return run_lp<decltype(w)::value>(opt); });
        if (locz->parsed())
            return dispatch_width(cells,
                                  [&](auto w) { return run_localized<decltype(w)::value>(opt); });
        if (cp->parsed())
            return dispatch_width(cells,
                                  [&](auto w) { return run_copies<decltype(w)::value>(opt); });
        std::cerr << "no command\n";
        return EXIT_BAD_INPUT;
    } catch (const ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return EXIT_CAP;
    } catch (const CacheError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_BAD_INPUT;
    } catch (const NoSignalingViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_BAD_INPUT;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_BAD_INPUT;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_BAD_INPUT;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_BAD_INPUT;
    }
}
