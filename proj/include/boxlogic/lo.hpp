#pragma once

// Local-orthogonality machinery:
//  - the orthogonality graph on generating atoms (edges from input
//    coincidence with differing outcomes, cross-checked against realization
//    disjointness),
//  - clique enumeration: maximal cliques via Bron-Kerbosch with pivoting, or
//    every clique up to a size bound, both in deterministic canonical order,
//  - evaluation of each clique inequality against the exact state polytope
//    (an affine-hull shortcut settles cliques whose indicator is constant on
//    the equality system; the rest go to the simplex),
//  - the pinned polytope of a unions-rule closure: the base equality system
//    plus one equality per (new atom, partition certificate of its
//    complement) pair, which is how states extend to the enlarged structure,
//  - a bounded clique sweep for product states on n <= 2 copies of a model,
//    working directly on the product graph so the n-fold structure is never
//    generated.

#include "linalg.hpp"
#include "rational.hpp"
#include "simplex.hpp"
#include "states.hpp"
#include "structure.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace boxlogic {

// ---------------------------------------------------------------------------
// Orthogonality graph
// ---------------------------------------------------------------------------

struct OrthogonalityGraph {
    size_t n = 0;
    std::vector<std::vector<char>> adj;       // dense, symmetric, no loops
    std::vector<std::vector<uint32_t>> nbr;   // ascending adjacency lists

    bool edge(uint32_t a, uint32_t b) const { return adj[a][b] != 0; }
};

// Vertices are atom positions. Two atoms are locally orthogonal when some box
// gets the same input in both but reports different outcomes; for phase-space
// models this is equivalent to their realizations being disjoint. Both
// characterizations are computed and compared; a mismatch would mean the
// structure is inconsistent, which is reported as an internal error.
template <size_t W>
OrthogonalityGraph build_orthogonality_graph(const StateSpace<W>& ss) {
    const Structure<W>& s = *ss.s;
    const ContextTable& ct = ss.ct;
    const auto& infos = *s.atom_infos;
    const auto& factors = *s.factors;
    size_t n = s.atoms.size();
    auto masks = s.atom_masks();

    // per atom position: (input, outcome) per box
    std::vector<std::vector<std::pair<int, int>>> io(n);
    for (uint32_t p = 0; p < n; ++p) {
        uint32_t t = ct.info_of_pos[p];
        io[p].resize(ct.k);
        for (size_t i = 0; i < ct.k; ++i) {
            const Factor::Atom& fa = factors[i].atoms[infos[t].factor_atom[i]];
            io[p][i] = {fa.input, fa.outcome};
        }
    }

    OrthogonalityGraph g;
    g.n = n;
    g.adj.assign(n, std::vector<char>(n, 0));
    g.nbr.assign(n, {});
    for (uint32_t a = 0; a < n; ++a)
        for (uint32_t b = uint32_t(a + 1); b < n; ++b) {
            bool by_inputs = false;
            for (size_t i = 0; i < ct.k && !by_inputs; ++i)
                if (io[a][i].first == io[b][i].first && io[a][i].second != io[b][i].second)
                    by_inputs = true;
            bool by_masks = !masks[a].intersects(masks[b]);
            if (by_inputs != by_masks)
                throw std::logic_error("orthogonality characterizations disagree: internal error");
            if (by_inputs) {
                g.adj[a][b] = g.adj[b][a] = 1;
                g.nbr[a].push_back(b);
                g.nbr[b].push_back(a);
            }
        }
    return g;
}

// ---------------------------------------------------------------------------
// Clique enumeration
// ---------------------------------------------------------------------------

namespace detail_lo {

inline std::vector<uint32_t> intersect_sorted(const std::vector<uint32_t>& a,
                                              const std::vector<uint32_t>& b) {
    std::vector<uint32_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Bron-Kerbosch with pivoting. Deterministic: the pivot is the vertex of
// P u X with the most neighbours in P, lowest index on ties, and candidates
// are visited in ascending order.
inline void bk_pivot(const OrthogonalityGraph& g, std::vector<uint32_t>& R,
                     std::vector<uint32_t> P, std::vector<uint32_t> X,
                     std::vector<std::vector<uint32_t>>& out, size_t cap) {
    if (P.empty() && X.empty()) {
        if (R.size() >= 2) {
            if (out.size() >= cap)
                throw ResourceCapError("clique enumeration exceeded the cap (" +
                                       std::to_string(cap) + "); " +
                                       std::to_string(out.size()) + " cliques found so far");
            out.push_back(R);
        }
        return;
    }
    uint32_t pivot = UINT32_MAX;
    size_t best = 0;
    for (const auto* side : {&P, &X})
        for (uint32_t u : *side) {
            size_t cnt = 0;
            for (uint32_t v : P)
                if (g.adj[u][v]) ++cnt;
            if (pivot == UINT32_MAX || cnt > best || (cnt == best && u < pivot)) {
                pivot = u;
                best = cnt;
            }
        }
    std::vector<uint32_t> order;
    for (uint32_t v : P)
        if (pivot == UINT32_MAX || !g.adj[pivot][v]) order.push_back(v);
    for (uint32_t v : order) {
        R.push_back(v);
        bk_pivot(g, R, intersect_sorted(P, g.nbr[v]), intersect_sorted(X, g.nbr[v]), out, cap);
        R.pop_back();
        P.erase(std::find(P.begin(), P.end(), v));
        X.insert(std::lower_bound(X.begin(), X.end(), v), v);
    }
}

struct WeightedCliqueResult {
    std::vector<uint32_t> best;
    Rational best_sum = 0;
    size_t checked = 0;
    bool complete = true;
};

// Maximum-weight clique of size <= max_size by branch and bound. Vertices
// are visited in descending weight order; an optional seed clique primes the
// incumbent; a branch is cut when even the heaviest `allow` remaining
// candidates cannot strictly beat the incumbent. A completed run is exact; a
// capped run reports complete = false with the incumbent as a lower bound.
inline WeightedCliqueResult max_weight_clique(const OrthogonalityGraph& g, const RatVec& weight,
                                              size_t max_size, size_t cap,
                                              std::vector<uint32_t> seed = {},
                                              Rational seed_sum = 0) {
    WeightedCliqueResult res;
    if (!seed.empty()) {
        res.best = std::move(seed);
        res.best_sum = seed_sum;
    }
    std::vector<uint32_t> order;
    for (uint32_t v = 0; v < g.n; ++v)
        if (weight[v] > 0) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (weight[a] != weight[b]) return weight[a] > weight[b];
        return a < b;
    });
    // greedy incumbent
    {
        std::vector<uint32_t> gr;
        Rational gs = 0;
        for (uint32_t v : order) {
            if (gr.size() >= max_size) break;
            bool ok = true;
            for (uint32_t u : gr)
                if (!g.adj[u][v]) { ok = false; break; }
            if (ok) {
                gr.push_back(v);
                gs += weight[v];
            }
        }
        if (gr.size() >= 2 && gs > res.best_sum) {
            res.best = std::move(gr);
            res.best_sum = gs;
        }
    }
    size_t visited = 0;
    bool capped = false;
    std::vector<uint32_t> R;
    Rational cur = 0;
    auto dfs = [&](auto&& self, const std::vector<uint32_t>& cands) -> void {
        if (capped) return;
        std::vector<Rational> pre(cands.size() + 1);
        for (size_t j = 0; j < cands.size(); ++j) pre[j + 1] = pre[j] + weight[cands[j]];
        size_t allow = max_size - R.size();
        for (size_t i = 0; i < cands.size(); ++i) {
            if (capped) return;
            Rational bound = cur + pre[std::min(cands.size(), i + allow)] - pre[i];
            if (!(bound > res.best_sum)) return;
            uint32_t v = cands[i];
            if (++visited > cap) {
                capped = true;
                return;
            }
            R.push_back(v);
            cur += weight[v];
            if (R.size() >= 2) {
                ++res.checked;
                if (cur > res.best_sum) {
                    res.best_sum = cur;
                    res.best = R;
                }
            }
            if (R.size() < max_size) {
                std::vector<uint32_t> next;
                for (size_t j = i + 1; j < cands.size(); ++j)
                    if (g.adj[v][cands[j]]) next.push_back(cands[j]);
                self(self, next);
            }
            cur -= weight[v];
            R.pop_back();
        }
    };
    dfs(dfs, order);
    res.complete = !capped;
    return res;
}

inline void all_cliques_dfs(const OrthogonalityGraph& g, std::vector<uint32_t>& R,
                            const std::vector<uint32_t>& cands, size_t max_size,
                            std::vector<std::vector<uint32_t>>& out, size_t cap) {
    for (uint32_t v : cands) {
        R.push_back(v);
        if (R.size() >= 2) {
            if (out.size() >= cap)
                throw ResourceCapError("clique enumeration exceeded the cap (" +
                                       std::to_string(cap) + "); " +
                                       std::to_string(out.size()) + " cliques found so far");
            out.push_back(R);
        }
        if (R.size() < max_size) {
            std::vector<uint32_t> next;
            for (uint32_t u : g.nbr[v])
                if (u > v && std::binary_search(cands.begin(), cands.end(), u)) next.push_back(u);
            all_cliques_dfs(g, R, next, max_size, out, cap);
        }
        R.pop_back();
    }
}

} // namespace detail_lo

// All maximal cliques of size >= 2, sorted lexicographically.
inline std::vector<std::vector<uint32_t>> maximal_cliques(const OrthogonalityGraph& g,
                                                          size_t cap = 5'000'000) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> R, P(g.n), X;
    for (uint32_t v = 0; v < g.n; ++v) P[v] = v;
    detail_lo::bk_pivot(g, R, std::move(P), std::move(X), out, cap);
    std::sort(out.begin(), out.end());
    return out;
}

// Every clique of size 2..max_size, in lexicographic order by construction.
inline std::vector<std::vector<uint32_t>> cliques_up_to(const OrthogonalityGraph& g,
                                                        size_t max_size,
                                                        size_t cap = 5'000'000) {
    if (max_size < 2) throw std::invalid_argument("clique size bound must be at least 2");
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> R, cands(g.n);
    for (uint32_t v = 0; v < g.n; ++v) cands[v] = v;
    detail_lo::all_cliques_dfs(g, R, cands, max_size, out, cap);
    return out;
}

// ---------------------------------------------------------------------------
// Clique inequalities against an equality system
// ---------------------------------------------------------------------------

// An equality system A x = b, x >= 0, kept together with its RREF so
// constant functionals can be recognized without running the simplex.
struct PolySystem {
    size_t nvars = 0;
    RatMat A;
    RatVec b;
    RatMat rref_rows;
    RrefResult rr;
    size_t rank = 0;
};

inline PolySystem make_system(const StatePolytope& poly) {
    PolySystem sys;
    sys.nvars = poly.nvars;
    sys.A = poly.A;
    sys.b = poly.b;
    sys.rref_rows = poly.A;
    for (size_t i = 0; i < sys.rref_rows.size(); ++i) sys.rref_rows[i].push_back(poly.b[i]);
    sys.rr = rref(sys.rref_rows, sys.nvars);
    sys.rank = sys.rr.rank;
    return sys;
}

struct LOInequality {
    std::vector<uint32_t> events;  // variable indices (atom positions)
    Rational lp_max;
    bool violated = false;         // lp_max > 1
    bool sum_defined = false;      // the events' total sum exists in the structure
    bool by_affine = false;        // settled by the constant-functional shortcut
};

struct LOReport {
    std::vector<LOInequality> rows;
    Rational max_lp = 0;
    size_t violated_count = 0;
    size_t lp_runs = 0;            // cliques that needed the simplex
};

template <typename SumDefFn>
LOReport check_cliques_against(const PolySystem& sys,
                               const std::vector<std::vector<uint32_t>>& cliques,
                               SumDefFn&& sum_defined) {
    LOReport rep;
    for (const auto& cl : cliques) {
        LOInequality row;
        row.events = cl;
        row.sum_defined = sum_defined(cl);
        RatVec obj(sys.nvars, Rational(0));
        for (uint32_t v : cl) obj[v] = 1;
        if (auto c = affine_constant(sys.rref_rows, sys.rr, obj)) {
            row.lp_max = *c;
            row.by_affine = true;
        } else {
            LpResult r = lp_maximize(sys.A, sys.b, obj);
            if (r.status != LpStatus::Optimal)
                throw std::logic_error("clique LP not optimal: impossible by construction");
            row.lp_max = r.value;
            ++rep.lp_runs;
        }
        row.violated = row.lp_max > 1;
        if (row.violated) ++rep.violated_count;
        if (row.lp_max > rep.max_lp) rep.max_lp = row.lp_max;
        // a family whose sum exists can never exceed 1 on any state
        if (row.sum_defined && row.violated)
            throw std::logic_error("defined sum with LP above 1: internal error");
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// Clique inequalities over the box model's own state polytope.
template <size_t W>
LOReport check_lo_violations(const StateSpace<W>& ss,
                             const std::vector<std::vector<uint32_t>>& cliques) {
    PolySystem sys;
    sys.nvars = ss.poly.nvars;
    sys.A = ss.poly.A;
    sys.b = ss.poly.b;
    sys.rref_rows = ss.rref_rows;
    sys.rr = ss.rr;
    sys.rank = ss.poly.rank;
    const Structure<W>& s = *ss.s;
    return check_cliques_against(sys, cliques, [&](const std::vector<uint32_t>& cl) {
        std::vector<uint32_t> idx;
        idx.reserve(cl.size());
        for (uint32_t p : cl) idx.push_back(s.atoms[p]);
        return s.nsum_defined(idx);
    });
}

// ---------------------------------------------------------------------------
// Pinned polytope of a unions-rule closure
// ---------------------------------------------------------------------------

// States of the enlarged structure, as an equality system: one variable per
// atom of the closure, the base model's normalization and marginal rows on
// the generating atoms, and one row per (new atom, partition certificate of
// its complement): x_new + sum(certificate atoms) = 1. Multiple certificates
// give multiple rows; the redundancy is kept and shows up in the rank.
template <size_t W>
struct PinnedSpace {
    const Structure<W>* closure = nullptr;
    StatePolytope poly;
    PolySystem sys;
    std::vector<uint32_t> gen_pos;   // base atom position -> closure atom position
    std::vector<uint32_t> new_pos;   // closure positions of non-generating atoms
    size_t pin_rows = 0;
    std::vector<std::string> doc;    // human-readable construction notes
};

template <size_t W>
PinnedSpace<W> build_pinned_space(const Structure<W>& closure, const StateSpace<W>& base) {
    const Structure<W>& eb = *base.s;
    PinnedSpace<W> ps;
    ps.closure = &closure;
    size_t n = closure.atoms.size();
    ps.poly.nvars = n;

    // locate base atoms inside the closure's atom list
    auto cmasks = closure.atom_masks();
    MaskMap<W, uint32_t> pos_by_mask;
    for (uint32_t p = 0; p < n; ++p) pos_by_mask.put(cmasks[p], p);
    auto bmasks = eb.atom_masks();
    ps.gen_pos.resize(bmasks.size());
    std::vector<char> is_gen(n, 0);
    for (uint32_t bp = 0; bp < bmasks.size(); ++bp) {
        const uint32_t* cp = pos_by_mask.find(bmasks[bp]);
        if (!cp) throw std::logic_error("closure lost a generating atom");
        ps.gen_pos[bp] = *cp;
        is_gen[*cp] = 1;
    }
    for (uint32_t p = 0; p < n; ++p)
        if (!is_gen[p]) ps.new_pos.push_back(p);

    // base rows, re-indexed into closure positions
    for (size_t r = 0; r < base.poly.A.size(); ++r) {
        RatVec row(n, Rational(0));
        for (size_t bp = 0; bp < bmasks.size(); ++bp) row[ps.gen_pos[bp]] = base.poly.A[r][bp];
        ps.poly.A.push_back(std::move(row));
        ps.poly.b.push_back(base.poly.b[r]);
    }
    ps.poly.normalization_rows = base.poly.normalization_rows;
    ps.poly.nosignaling_rows = base.poly.nosignaling_rows;
    ps.doc.push_back("base rows: " + std::to_string(base.poly.A.size()) +
                     " (normalizations + marginal equalities on the generating atoms)");

    // pin rows: every new atom q has complement decomposable into generating
    // atoms; each partition c yields x_q + sum_{a in c} x_a = 1
    DecompOracle<W>* oracle = base.s->oracle ? base.s->oracle.get() : base.local_oracle.get();
    for (uint32_t p : ps.new_pos) {
        Bitset<W> comp = closure.comp(cmasks[p]);
        auto certs = oracle->all_certificates(comp, 1 << 20);
        if (certs.empty())
            throw std::logic_error("new atom's complement has no generating-atom partition");
        for (const auto& c : certs) {
            RatVec row(n, Rational(0));
            row[p] = 1;
            for (uint32_t t : c) row[ps.gen_pos[base.oracle_id_to_pos[t]]] += 1;
            ps.poly.A.push_back(std::move(row));
            ps.poly.b.push_back(Rational(1));
            ++ps.pin_rows;
        }
    }
    ps.doc.push_back("pin rows: " + std::to_string(ps.pin_rows) +
                     " (one per new atom and partition certificate of its complement: "
                     "x_atom + sum(certificate) = 1)");

    ps.sys = make_system(ps.poly);
    ps.poly.rank = ps.sys.rank;
    ps.doc.push_back("rank: " + std::to_string(ps.poly.rank) + " over " + std::to_string(n) +
                     " variables");
    return ps;
}

// Clique inequalities of the base model, evaluated over the closure's pinned
// polytope. Events arrive as base atom positions and are re-indexed.
template <size_t W>
LOReport check_lo_violations_pinned(const PinnedSpace<W>& ps,
                                    const std::vector<std::vector<uint32_t>>& base_cliques) {
    std::vector<std::vector<uint32_t>> mapped;
    mapped.reserve(base_cliques.size());
    for (const auto& cl : base_cliques) {
        std::vector<uint32_t> m;
        m.reserve(cl.size());
        for (uint32_t p : cl) m.push_back(ps.gen_pos[p]);
        std::sort(m.begin(), m.end());
        mapped.push_back(std::move(m));
    }
    const Structure<W>& s = *ps.closure;
    return check_cliques_against(ps.sys, mapped, [&](const std::vector<uint32_t>& cl) {
        std::vector<uint32_t> idx;
        idx.reserve(cl.size());
        for (uint32_t p : cl) idx.push_back(s.atoms[p]);
        return s.nsum_defined(idx);
    });
}

// ---------------------------------------------------------------------------
// Diagnostic: do product behaviours extend to the closure?
// ---------------------------------------------------------------------------

// Open question probe, reported without asserting either way: a behaviour's
// extension to the closure is forced by the pin equalities, so it extends (in
// the pinned-polytope sense) exactly when every new atom's forced value is
// the same across its complement's partitions and lands in [0, 1].
struct ExtensionDiagnostic {
    bool extends = true;
    size_t new_atoms = 0;
    std::optional<uint32_t> failed_atom;   // closure atom position
    std::string note;
};

template <size_t W>
ExtensionDiagnostic extension_diagnostic(const PinnedSpace<W>& ps, const StateSpace<W>& base,
                                         const PRState& P) {
    LogicState st = pr_to_logic_state(base, P);
    ExtensionDiagnostic d;
    d.new_atoms = ps.new_pos.size();
    const Structure<W>& closure = *ps.closure;
    auto cmasks = closure.atom_masks();
    DecompOracle<W>* oracle = base.s->oracle ? base.s->oracle.get() : base.local_oracle.get();
    for (uint32_t p : ps.new_pos) {
        auto certs = oracle->all_certificates(closure.comp(cmasks[p]), 1 << 20);
        std::optional<Rational> forced;
        for (const auto& c : certs) {
            Rational v = 1;
            for (uint32_t t : c) v -= st.atom_values[base.oracle_id_to_pos[t]];
            if (!forced) {
                forced = v;
            } else if (*forced != v) {
                d.extends = false;
                d.failed_atom = p;
                d.note = "partition certificates force inconsistent values";
                return d;
            }
        }
        if (*forced < 0 || *forced > 1) {
            d.extends = false;
            d.failed_atom = p;
            d.note = "forced value " + rat_str(*forced) + " is outside [0, 1]";
            return d;
        }
    }
    d.note = "all forced values consistent and in [0, 1] (pinned-polytope sense)";
    return d;
}

// ---------------------------------------------------------------------------
// Copies: product states on n <= 2 copies of the model
// ---------------------------------------------------------------------------

struct CopiesReport {
    size_t copies = 0;
    size_t support = 0;           // product atoms with positive weight
    size_t cliques_checked = 0;
    Rational max_sum = 0;
    bool violated = false;
    bool complete = true;         // false when the visit cap cut the search short,
                                  // making max_sum a lower bound only
    std::vector<uint32_t> witness; // flattened (pos1, pos2, ...) per event of the best clique
};

// Evaluates the product state P^(x)n against clique inequalities of the
// n-copy model, entirely on the product orthogonality graph: vertices are
// n-tuples of base atoms with positive weight, joined when some copy's pair
// is orthogonal. The n-copy structure itself is never generated. The heaviest
// clique of size <= max_size is found by branch and bound: candidates are
// visited in descending weight order, a greedy clique seeds the incumbent,
// and a branch is cut when even taking every remaining candidate cannot beat
// it, so a completed search is exact. A run that hits the visit cap reports
// complete = false and its best-so-far as a lower bound.
template <size_t W>
CopiesReport check_lo_copies(const StateSpace<W>& ss, const PRState& P, size_t n,
                             size_t max_size = 4, size_t cap = 5'000'000) {
    if (n < 1 || n > 2) throw std::invalid_argument("copies supports n = 1 or 2 only");
    validate_pr_state(ss, P);
    LogicState st = pr_to_logic_state(ss, P);
    OrthogonalityGraph base = build_orthogonality_graph(ss);
    size_t nb = base.n;

    CopiesReport rep;
    rep.copies = n;

    // product vertices with positive weight
    std::vector<std::vector<uint32_t>> verts;   // tuples of base positions
    RatVec weight;
    if (n == 1) {
        for (uint32_t p = 0; p < nb; ++p)
            if (st.atom_values[p] > 0) {
                verts.push_back({p});
                weight.push_back(st.atom_values[p]);
            }
    } else {
        // marginal consistency of P^(x)2 reduces to the base behaviour's:
        // summing the product over one copy's box factorizes into the other
        // copy's value times a base marginal, and validate_pr_state above has
        // already checked every base marginal pair exactly
        for (uint32_t p = 0; p < nb; ++p) {
            if (st.atom_values[p] == 0) continue;
            for (uint32_t q = 0; q < nb; ++q) {
                if (st.atom_values[q] == 0) continue;
                verts.push_back({p, q});
                weight.push_back(st.atom_values[p] * st.atom_values[q]);
            }
        }
    }
    rep.support = verts.size();

    // product adjacency: orthogonal when any copy is orthogonal
    size_t nv = verts.size();
    OrthogonalityGraph g;
    g.n = nv;
    g.adj.assign(nv, std::vector<char>(nv, 0));
    g.nbr.assign(nv, {});
    for (uint32_t a = 0; a < nv; ++a)
        for (uint32_t b = uint32_t(a + 1); b < nv; ++b) {
            bool e = false;
            for (size_t i = 0; i < n && !e; ++i)
                if (base.adj[verts[a][i]][verts[b][i]]) e = true;
            if (e) {
                g.adj[a][b] = g.adj[b][a] = 1;
                g.nbr[a].push_back(b);
                g.nbr[b].push_back(a);
            }
        }

    // seed for two copies: the square of the best single-copy clique is
    // always a product clique (distinct pairs differ in some copy, and that
    // copy's components are orthogonal), worth (base sum)^2
    std::vector<uint32_t> seed;
    Rational seed_sum = 0;
    if (n == 2) {
        size_t root = 0;
        while ((root + 1) * (root + 1) <= max_size) ++root;
        if (root >= 2) {
            auto base_best = detail_lo::max_weight_clique(base, st.atom_values, root,
                                                          std::min<size_t>(cap, 1'000'000));
            if (base_best.best.size() >= 2) {
                // map base pairs to product vertex ids
                std::vector<std::vector<uint32_t>> vid(nb, std::vector<uint32_t>(nb, UINT32_MAX));
                for (uint32_t v = 0; v < nv; ++v) vid[verts[v][0]][verts[v][1]] = v;
                bool ok = true;
                for (uint32_t p : base_best.best)
                    for (uint32_t q : base_best.best) {
                        if (vid[p][q] == UINT32_MAX) { ok = false; break; }
                        seed.push_back(vid[p][q]);
                    }
                if (ok) {
                    std::sort(seed.begin(), seed.end());
                    seed_sum = base_best.best_sum * base_best.best_sum;
                } else {
                    seed.clear();
                }
            }
        }
    }

    auto found = detail_lo::max_weight_clique(g, weight, max_size, cap, std::move(seed), seed_sum);
    rep.cliques_checked = found.checked;
    rep.max_sum = found.best_sum;
    rep.complete = found.complete;
    rep.violated = found.best_sum > 1;
    for (uint32_t v : found.best)
        for (size_t i = 0; i < n; ++i) rep.witness.push_back(verts[v][i]);
    return rep;
}

} // namespace boxlogic
