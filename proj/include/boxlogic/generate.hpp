#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "decompose.hpp"
#include "model.hpp"
#include "structure.hpp"

namespace boxlogic {

struct GenerateOptions {
    size_t max_elements = 1'000'000; // cap on any generated family, incl. intermediates
    unsigned threads = 1;            // 0 = hardware concurrency
};

struct GenerationReport {
    size_t element_count = 0;
    size_t atom_count = 0;
    int closure_rounds = 0;
    double wall_seconds = 0.0;
    SumRule rule = SumRule::EffectSum;
};

inline const char* kind_name(SumRule r) {
    return r == SumRule::EffectSum ? "effect-algebra" : "orthoposet";
}

namespace detail {

inline unsigned resolve_threads(unsigned t) {
    if (t != 0) return t;
    unsigned h = std::thread::hardware_concurrency();
    return h ? h : 1;
}

template <size_t W>
std::vector<uint32_t> cells_of(const Bitset<W>& m) {
    std::vector<uint32_t> out;
    for (size_t i = 0; i < W; ++i) {
        uint64_t x = m.w[i];
        while (x) {
            out.push_back(uint32_t(64 * i + size_t(__builtin_ctzll(x))));
            x &= x - 1;
        }
    }
    return out;
}

template <size_t W>
Bitset<W> mask_of(const std::vector<uint32_t>& cells) {
    Bitset<W> m;
    for (uint32_t c : cells) m.set(c);
    return m;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

[[noreturn]] inline void cap_exceeded(size_t cap) {
    throw ResourceCapError("generation exceeded the element cap (" + std::to_string(cap) +
                           "); raise the cap to continue");
}

// Run fn(i) for i in [0, n) across the requested worker count. Workers take
// disjoint contiguous chunks; with one worker this degenerates to a plain loop.
template <typename F>
void parallel_for(size_t n, unsigned threads, F&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i, 0u);
        return;
    }
    unsigned nw = unsigned(std::min<size_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned t = 0; t < nw; ++t) {
        size_t lo = n * t / nw, hi = n * (t + 1) / nw;
        pool.emplace_back([lo, hi, t, &fn] {
            for (size_t i = lo; i < hi; ++i) fn(i, t);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Decomposable family: every disjoint union of generating atoms, grown one
// atom per round from the previous round's discoveries. Round r holds exactly
// the unions of r atoms, so the round count is the longest decomposition plus
// one and the fixed point is certain.
// ---------------------------------------------------------------------------
template <size_t W>
struct DecomposableFamily {
    std::vector<Bitset<W>> members; // discovery order; use sorted() for canon
    MaskSet<W> seen;
    int rounds = 0;

    bool contains(const Bitset<W>& m) const { return seen.contains(m); }

    std::vector<Bitset<W>> sorted() const {
        std::vector<Bitset<W>> s = members;
        std::sort(s.begin(), s.end());
        return s;
    }
};

template <size_t W>
DecomposableFamily<W> decomposable_closure(const std::vector<Bitset<W>>& atoms, size_t ncells,
                                           const GenerateOptions& opt = {}) {
    if (ncells > Bitset<W>::capacity)
        throw std::invalid_argument("cell count exceeds bitset width");
    DecomposableFamily<W> fam;
    fam.seen.insert(Bitset<W>{});
    fam.members.push_back(Bitset<W>{});
    std::vector<Bitset<W>> frontier{Bitset<W>{}};
    unsigned threads = detail::resolve_threads(opt.threads);

    while (!frontier.empty()) {
        ++fam.rounds;
        std::vector<Bitset<W>> next;
        if (threads <= 1) {
            for (const Bitset<W>& f : frontier)
                for (const Bitset<W>& a : atoms) {
                    if (f.intersects(a)) continue;
                    Bitset<W> u = f | a;
                    if (fam.seen.insert(u)) {
                        fam.members.push_back(u);
                        next.push_back(u);
                        if (fam.members.size() > opt.max_elements)
                            detail::cap_exceeded(opt.max_elements);
                    }
                }
        } else {
            // the seen-set is frozen during the scan, so concurrent reads are
            // fine; thread buffers hold only candidates new to this round
            std::vector<std::vector<Bitset<W>>> buf(threads);
            detail::parallel_for(frontier.size(), threads, [&](size_t i, unsigned t) {
                const Bitset<W>& f = frontier[i];
                for (const Bitset<W>& a : atoms) {
                    if (f.intersects(a)) continue;
                    Bitset<W> u = f | a;
                    if (!fam.seen.contains(u)) buf[t].push_back(u);
                }
            });
            for (auto& b : buf)
                for (const Bitset<W>& u : b)
                    if (fam.seen.insert(u)) {
                        fam.members.push_back(u);
                        next.push_back(u);
                        if (fam.members.size() > opt.max_elements)
                            detail::cap_exceeded(opt.max_elements);
                    }
        }
        frontier = std::move(next);
    }
    return fam;
}

// ---------------------------------------------------------------------------
// Effect-algebra generation.
//
// The closure of {0} union atoms under  p (+) q := p u q  (defined when the
// masks are disjoint and the complement of the union decomposes into atoms)
// is exactly  { m : m and ~m both decompose }, provided every atom's
// complement decomposes:
//   - closure is contained in that family by induction (a sum's two halves
//     decompose, so their union does; the complement decomposes by the
//     definedness condition);
//   - conversely any such m = a1 u ... u an (disjoint atoms) is reached by
//     summing left prefixes: after i atoms the complement so far is
//     a_{i+1} u ... u an u ~m, a disjoint union of atoms, so each step is a
//     defined sum.
// That turns generation into one decomposable-family closure plus a filter.
// closure_by_pair_sums below is the definitional fixed-point computation;
// the test-suite holds the two equal on every structure small enough to run
// both. If some atom's complement fails to decompose (no product of one-box
// structures does this), the code falls back to the definitional closure.
// ---------------------------------------------------------------------------
template <size_t W>
std::vector<Bitset<W>> closure_by_pair_sums(const std::vector<Bitset<W>>& atoms, size_t ncells,
                                            const GenerateOptions& opt = {}) {
    DecompOracle<W> oracle(atoms, ncells);
    Bitset<W> full = Bitset<W>::full(ncells);
    MaskSet<W> seen;
    std::vector<Bitset<W>> members;
    std::vector<Bitset<W>> frontier;
    auto add = [&](const Bitset<W>& m) {
        if (seen.insert(m)) {
            members.push_back(m);
            frontier.push_back(m);
            if (members.size() > opt.max_elements) detail::cap_exceeded(opt.max_elements);
        }
    };
    add(Bitset<W>{});
    for (const Bitset<W>& a : atoms) add(a);

    while (!frontier.empty()) {
        // snapshot includes the frontier itself, so pairs inside one round's
        // additions are covered the following round
        std::vector<Bitset<W>> snapshot = members;
        std::sort(snapshot.begin(), snapshot.end());
        std::vector<Bitset<W>> work = std::move(frontier);
        frontier.clear();
        for (const Bitset<W>& p : work) {
            Bitset<W> room = full - p;
            for_each_subset(snapshot, room, [&](size_t qi) {
                const Bitset<W>& q = snapshot[qi];
                Bitset<W> u = p | q;
                if (seen.contains(u)) return;
                if (oracle.decomposable(full - u)) add(u);
            });
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

template <size_t W>
std::pair<Structure<W>, GenerationReport> generate_effect_algebra(
    std::vector<Bitset<W>> atom_masks, size_t ncells, const GenerateOptions& opt = {},
    std::shared_ptr<const std::vector<Factor>> factors = nullptr,
    std::shared_ptr<const std::vector<ProductAtomInfo>> atom_infos = nullptr) {
    detail::Timer timer;
    Bitset<W> full = Bitset<W>::full(ncells);

    Structure<W> s;
    s.cells = ncells;
    s.full = full;
    s.rule = SumRule::EffectSum;
    s.oracle = std::make_shared<DecompOracle<W>>(atom_masks, ncells);
    s.factors = std::move(factors);
    s.atom_infos = std::move(atom_infos);

    GenerationReport rep;
    rep.rule = SumRule::EffectSum;

    DecomposableFamily<W> fam = decomposable_closure(atom_masks, ncells, opt);
    rep.closure_rounds = fam.rounds;

    bool atoms_complemented = true;
    for (const Bitset<W>& a : atom_masks)
        if (!fam.contains(full - a)) { atoms_complemented = false; break; }

    if (atoms_complemented) {
        for (const Bitset<W>& m : fam.members)
            if (fam.contains(full - m)) s.elems.push_back(m);
        std::sort(s.elems.begin(), s.elems.end());
    } else {
        s.elems = closure_by_pair_sums(atom_masks, ncells, opt);
    }

    for (const Bitset<W>& a : atom_masks) s.atoms.push_back(s.require_index(a));
    std::sort(s.atoms.begin(), s.atoms.end());
    s.atoms.erase(std::unique(s.atoms.begin(), s.atoms.end()), s.atoms.end());

    rep.element_count = s.elems.size();
    rep.atom_count = s.atoms.size();
    rep.wall_seconds = timer.seconds();
    return {std::move(s), rep};
}

// ---------------------------------------------------------------------------
// Concrete-logic generation: smallest family containing {0} union atoms that
// is closed under set complement and unions of disjoint members. Pairwise
// closure gives all finite disjoint families, since partial unions stay
// inside the family.
// ---------------------------------------------------------------------------
template <size_t W>
std::pair<Structure<W>, GenerationReport> generate_orthoposet(
    std::vector<Bitset<W>> atom_masks, size_t ncells, const GenerateOptions& opt = {},
    std::shared_ptr<const std::vector<Factor>> factors = nullptr,
    std::shared_ptr<const std::vector<ProductAtomInfo>> atom_infos = nullptr) {
    if (ncells > Bitset<W>::capacity)
        throw std::invalid_argument("cell count exceeds bitset width");
    detail::Timer timer;
    Bitset<W> full = Bitset<W>::full(ncells);
    unsigned threads = detail::resolve_threads(opt.threads);

    MaskSet<W> seen;
    std::vector<Bitset<W>> members;
    std::vector<Bitset<W>> frontier;
    auto add = [&](const Bitset<W>& m) {
        if (seen.insert(m)) {
            members.push_back(m);
            frontier.push_back(m);
            if (members.size() > opt.max_elements) detail::cap_exceeded(opt.max_elements);
        }
    };
    add(Bitset<W>{});
    for (const Bitset<W>& a : atom_masks) add(a);

    int rounds = 0;
    while (!frontier.empty()) {
        ++rounds;
        std::vector<Bitset<W>> snapshot = members;
        std::sort(snapshot.begin(), snapshot.end());
        std::vector<Bitset<W>> work = std::move(frontier);
        frontier.clear();

        if (threads <= 1) {
            for (const Bitset<W>& f : work) {
                add(full - f);
                Bitset<W> room = full - f;
                for_each_subset(snapshot, room, [&](size_t qi) {
                    add(f | snapshot[qi]);
                });
            }
        } else {
            std::vector<std::vector<Bitset<W>>> buf(threads);
            detail::parallel_for(work.size(), threads, [&](size_t i, unsigned t) {
                const Bitset<W>& f = work[i];
                Bitset<W> room = full - f;
                if (!seen.contains(room)) buf[t].push_back(room);
                for_each_subset(snapshot, room, [&](size_t qi) {
                    Bitset<W> u = f | snapshot[qi];
                    if (!seen.contains(u)) buf[t].push_back(u);
                });
            });
            for (auto& b : buf)
                for (const Bitset<W>& u : b) add(u);
        }
    }

    Structure<W> s;
    s.cells = ncells;
    s.full = full;
    s.rule = SumRule::UnionSum;
    s.factors = std::move(factors);
    s.atom_infos = std::move(atom_infos);
    s.elems = std::move(members);
    s.sort_canonical();
    s.atoms = s.find_atoms();

    GenerationReport rep;
    rep.rule = SumRule::UnionSum;
    rep.element_count = s.elems.size();
    rep.atom_count = s.atoms.size();
    rep.closure_rounds = rounds;
    rep.wall_seconds = timer.seconds();
    return {std::move(s), rep};
}

// ---------------------------------------------------------------------------
// Product plumbing: atom masks for a flat list of one-box factors, and for
// the two-structure product used by the associativity check.
// ---------------------------------------------------------------------------
template <size_t W>
std::vector<Bitset<W>> product_atom_masks(const std::vector<Factor>& factors,
                                          const std::vector<ProductAtomInfo>& infos) {
    ProductLayout lay(factors);
    if (lay.cells > Bitset<W>::capacity)
        throw std::invalid_argument("product phase space exceeds bitset width");
    std::vector<Bitset<W>> out;
    out.reserve(infos.size());
    for (const ProductAtomInfo& info : infos) {
        // cartesian product of per-factor atom cell lists, combined by strides
        std::vector<uint32_t> cells{0};
        for (size_t i = 0; i < factors.size(); ++i) {
            const auto& fc = factors[i].atoms[info.factor_atom[i]].cells;
            std::vector<uint32_t> nxt;
            nxt.reserve(cells.size() * fc.size());
            for (uint32_t base : cells)
                for (uint32_t c : fc)
                    nxt.push_back(base + uint32_t(c * lay.strides[i]));
            cells = std::move(nxt);
        }
        out.push_back(detail::mask_of<W>(cells));
    }
    return out;
}

// atoms of a two-factor product of already-built structures, left index
// slowest: cell = c_left * cells_right + c_right
template <size_t W, size_t WL, size_t WR>
std::vector<Bitset<W>> tensor_atom_masks(const std::vector<Bitset<WL>>& left, size_t,
                                         const std::vector<Bitset<WR>>& right,
                                         size_t cells_right) {
    std::vector<Bitset<W>> out;
    out.reserve(left.size() * right.size());
    for (const Bitset<WL>& l : left) {
        std::vector<uint32_t> lc = detail::cells_of(l);
        for (const Bitset<WR>& r : right) {
            std::vector<uint32_t> cells;
            for (uint32_t cl : lc)
                for (uint32_t cr : detail::cells_of(r))
                    cells.push_back(uint32_t(cl * cells_right + cr));
            out.push_back(detail::mask_of<W>(cells));
        }
    }
    return out;
}

template <size_t W>
std::pair<Structure<W>, GenerationReport> box_product(const std::vector<BoxSpec>& boxes,
                                                      SumRule rule,
                                                      const GenerateOptions& opt = {}) {
    auto factors = std::make_shared<std::vector<Factor>>();
    for (const BoxSpec& b : boxes) factors->push_back(one_box_factor(b));
    auto infos = std::make_shared<std::vector<ProductAtomInfo>>(product_atom_infos(*factors));
    ProductLayout lay(*factors);
    std::vector<Bitset<W>> masks = product_atom_masks<W>(*factors, *infos);
    if (rule == SumRule::EffectSum)
        return generate_effect_algebra<W>(std::move(masks), lay.cells, opt, factors, infos);
    return generate_orthoposet<W>(std::move(masks), lay.cells, opt, factors, infos);
}

// single box: both closure rules provably coincide; the union rule is cheaper
template <size_t W>
std::pair<Structure<W>, GenerationReport> one_box_logic(const BoxSpec& box,
                                                        const GenerateOptions& opt = {}) {
    return box_product<W>({box}, SumRule::UnionSum, opt);
}

// ---------------------------------------------------------------------------
// Localized elements: products X_1 x ... x X_k with X_i the full factor space
// off the chosen boxes and any 1-box logic element on them. box_subset uses
// 0-based factor indices.
// ---------------------------------------------------------------------------
template <size_t W>
std::vector<Bitset<W>> localized_elements(const Structure<W>& s,
                                          const std::vector<size_t>& box_subset) {
    if (!s.factors) throw std::invalid_argument("structure carries no factor metadata");
    const std::vector<Factor>& factors = *s.factors;
    for (size_t b : box_subset)
        if (b >= factors.size()) throw std::invalid_argument("box index out of range");

    ProductLayout lay(factors);
    std::set<size_t> chosen(box_subset.begin(), box_subset.end());

    // per-factor choice lists as cell vectors over the factor's own space
    std::vector<std::vector<std::vector<uint32_t>>> choices(factors.size());
    for (size_t i = 0; i < factors.size(); ++i) {
        if (!chosen.count(i)) {
            std::vector<uint32_t> all(factors[i].cells);
            for (uint32_t c = 0; c < factors[i].cells; ++c) all[c] = c;
            choices[i].push_back(std::move(all));
            continue;
        }
        std::vector<Bitset<1>> fatoms;
        for (const auto& at : factors[i].atoms) fatoms.push_back(detail::mask_of<1>(at.cells));
        auto [flogic, frep] = generate_orthoposet<1>(std::move(fatoms), factors[i].cells);
        (void)frep;
        for (const Bitset<1>& e : flogic.elems) choices[i].push_back(detail::cells_of(e));
    }

    std::vector<Bitset<W>> out;
    std::vector<size_t> idx(factors.size(), 0);
    for (;;) {
        std::vector<uint32_t> cells{0};
        for (size_t i = 0; i < factors.size() && !cells.empty(); ++i) {
            const auto& fc = choices[i][idx[i]];
            std::vector<uint32_t> nxt;
            nxt.reserve(cells.size() * fc.size());
            for (uint32_t base : cells)
                for (uint32_t c : fc)
                    nxt.push_back(base + uint32_t(c * lay.strides[i]));
            cells = std::move(nxt);
        }
        out.push_back(detail::mask_of<W>(cells));

        size_t i = factors.size();
        while (i-- > 0) {
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
            if (i == 0) goto done;
        }
        if (factors.empty()) break;
    }
done:
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (const Bitset<W>& m : out)
        if (!s.is_element(m))
            throw std::logic_error("localized candidate is not an element: 0x" + m.to_hex());
    return out;
}

// ---------------------------------------------------------------------------
// Associativity of the box product: generate (b1 x b2) x b3 and b1 x (b2 x b3)
// and compare canonical element vectors. Inner products are generated first
// and contribute their atom lists to the outer product.
// ---------------------------------------------------------------------------
struct AssociativityResult {
    bool pass = false;
    size_t left_elements = 0;
    size_t right_elements = 0;
    size_t atom_count = 0;
};

template <size_t W>
AssociativityResult check_product_associativity(const BoxSpec& b1, const BoxSpec& b2,
                                                const BoxSpec& b3,
                                                const GenerateOptions& opt = {}) {
    Factor f1 = one_box_factor(b1), f2 = one_box_factor(b2), f3 = one_box_factor(b3);
    auto atom_masks_of = [](const Factor& f) {
        std::vector<Bitset<W>> v;
        for (const auto& at : f.atoms) v.push_back(detail::mask_of<W>(at.cells));
        return v;
    };
    std::vector<Bitset<W>> a1 = atom_masks_of(f1), a2 = atom_masks_of(f2), a3 = atom_masks_of(f3);

    auto [s12, r12] = generate_effect_algebra<W>(
        tensor_atom_masks<W>(a1, f1.cells, a2, f2.cells), f1.cells * f2.cells, opt);
    auto [s23, r23] = generate_effect_algebra<W>(
        tensor_atom_masks<W>(a2, f2.cells, a3, f3.cells), f2.cells * f3.cells, opt);
    (void)r12;
    (void)r23;

    std::vector<Bitset<W>> left_atoms =
        tensor_atom_masks<W>(s12.atom_masks(), s12.cells, a3, f3.cells);
    std::vector<Bitset<W>> right_atoms =
        tensor_atom_masks<W>(a1, f1.cells, s23.atom_masks(), s23.cells);

    size_t cells = f1.cells * f2.cells * f3.cells;
    auto [sl, rl] = generate_effect_algebra<W>(left_atoms, cells, opt);
    auto [sr, rr] = generate_effect_algebra<W>(right_atoms, cells, opt);
    (void)rl;
    (void)rr;

    std::vector<Bitset<W>> la = sl.atom_masks(), ra = sr.atom_masks();
    std::sort(la.begin(), la.end());
    std::sort(ra.begin(), ra.end());

    AssociativityResult res;
    res.left_elements = sl.elems.size();
    res.right_elements = sr.elems.size();
    res.atom_count = la.size();
    res.pass = (la == ra) && (sl.elems == sr.elems);
    return res;
}

// ---------------------------------------------------------------------------
// Fixtures and independent cross-checks.
// ---------------------------------------------------------------------------

// all even-cardinality subsets of a ground set, with disjoint-union sum
template <size_t W>
Structure<W> even_set_logic(size_t ground_size) {
    if (ground_size > 20) throw std::invalid_argument("even-set fixture limited to 20 points");
    Structure<W> s;
    s.cells = ground_size;
    s.full = Bitset<W>::full(ground_size);
    s.rule = SumRule::UnionSum;
    for (uint64_t m = 0; m < (uint64_t(1) << ground_size); ++m) {
        if (__builtin_popcountll(m) & 1) continue;
        Bitset<W> b;
        b.w[0] = m;
        s.elems.push_back(b);
    }
    s.sort_canonical();
    s.atoms = s.find_atoms();
    return s;
}

// Brute-force characterization over the whole power set: m is an element iff
// m and its complement are both disjoint unions of atoms. Independent of the
// closure machinery (array DP on mask integers); only for small spaces.
inline std::vector<uint64_t> characterization_elements(const std::vector<uint64_t>& atoms,
                                                       size_t ncells) {
    if (ncells > 24) throw std::invalid_argument("brute-force characterization limited to 24 cells");
    uint64_t full = (ncells == 64) ? ~uint64_t(0) : ((uint64_t(1) << ncells) - 1);
    size_t n = size_t(1) << ncells;
    std::vector<uint8_t> dec(n, 0);
    dec[0] = 1;
    for (uint64_t m = 1; m < n; ++m) {
        uint64_t low = m & (~m + 1); // lowest set bit
        for (uint64_t a : atoms) {
            if (!(a & low)) continue;       // branch only on atoms covering it
            if ((a & m) != a) continue;     // atom must fit
            if (dec[m ^ a]) { dec[m] = 1; break; }
        }
    }
    std::vector<uint64_t> out;
    for (uint64_t m = 0; m < n; ++m)
        if (dec[m] && dec[full ^ m]) out.push_back(m);
    return out;
}

} // namespace boxlogic
