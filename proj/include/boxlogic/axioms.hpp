#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "structure.hpp"

namespace boxlogic {

struct AxiomReport {
    std::string axiom;
    bool pass = true;
    std::vector<uint32_t> witness; // element indices; first failure in canonical scan order
    std::string note;              // verification route and scope, diagnostics only
};

struct CheckPolicy {
    size_t pair_exhaustive_limit = 4096;  // full n^2 sweeps at or below this size
    size_t triple_exhaustive_limit = 128; // full n^3 sweeps at or below
    size_t family_exhaustive_limit = 128; // element-family DFS at or below
    size_t naive_order_limit = 256;       // naive sup/inf machinery at or below
    size_t coherence_bound = 4;           // element-family size bound for the sweep
    size_t cert_cap = 1024;               // atom partitions examined per element
    size_t sample_triples = 20000;        // distributivity sample for large lattices
    uint64_t seed = 0;
};

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Complement sanity gate run before any axiom sweep: 0 and 1 must be members
// and every member's complement must again be a member (double complement is
// then the identity at the mask level). A failure here means the input
// structure is malformed, not that an axiom fails, hence an exception rather
// than a report entry.
template <size_t W>
void verify_structure(const Structure<W>& s) {
    if (s.size() == 0 || s.elems[0].any())
        throw StructuralError("structure lacks a zero element");
    if (s.elems.back() != s.full)
        throw StructuralError("structure lacks the unit element");
    for (uint32_t i = 0; i < s.size(); ++i) {
        Bitset<W> c = s.comp(s.elems[i]);
        if (!s.is_element(c))
            throw StructuralError("complement of element " + std::to_string(i) + " (mask 0x" +
                                  s.elems[i].to_hex() + ") is not an element");
        if (s.comp(c) != s.elems[i])
            throw StructuralError("complement is not involutive at element " + std::to_string(i));
    }
}

namespace detail {

// Elements order-above every member of the family. Any upper bound contains
// the setwise union, and supersets of a mask sort at or after it, so only the
// tail of the canonical order needs scanning.
template <size_t W>
std::vector<uint32_t> upper_bounds(const Structure<W>& s, const std::vector<uint32_t>& family) {
    Bitset<W> u;
    for (uint32_t f : family) u = u | s.elems[f];
    std::vector<uint32_t> out;
    auto it = std::lower_bound(s.elems.begin(), s.elems.end(), u);
    for (size_t j = size_t(it - s.elems.begin()); j < s.size(); ++j) {
        if (!u.subset_of(s.elems[j])) continue;
        bool ok = true;
        for (uint32_t f : family)
            if (!s.leq_member(s.elems[f], s.elems[j])) { ok = false; break; }
        if (ok) out.push_back(uint32_t(j));
    }
    return out;
}

// Elements order-below every member. They are all contained in the setwise
// intersection, so a subset walk enumerates the candidates.
template <size_t W>
std::vector<uint32_t> lower_bounds(const Structure<W>& s, const std::vector<uint32_t>& family) {
    Bitset<W> w = s.full;
    for (uint32_t f : family) w = w & s.elems[f];
    std::vector<uint32_t> out;
    for_each_subset(s.elems, w, [&](size_t j) {
        bool ok = true;
        for (uint32_t f : family)
            if (!s.leq_member(s.elems[j], s.elems[f])) { ok = false; break; }
        if (ok) out.push_back(uint32_t(j));
    });
    return out;
}

// The least upper bound, when it exists, must equal the setwise intersection
// of all upper bounds: it is ordered below each of them (hence contained in
// each) while being one of them. So one pass collects the bounds, and the
// intersection then has to be a bound ordered below all of them.
template <size_t W>
std::optional<uint32_t> least_upper_bound(const Structure<W>& s, const std::vector<uint32_t>& family) {
    std::vector<uint32_t> ub = upper_bounds(s, family);
    if (ub.empty()) return std::nullopt;
    Bitset<W> m = s.elems[ub[0]];
    for (size_t t = 1; t < ub.size(); ++t) m = m & s.elems[ub[t]];
    auto mi = s.index_of(m);
    if (!mi || !std::binary_search(ub.begin(), ub.end(), *mi)) return std::nullopt;
    for (uint32_t b : ub)
        if (!s.leq_member(m, s.elems[b])) return std::nullopt;
    return mi;
}

// Dual of the above: the greatest lower bound must equal the setwise union of
// all lower bounds.
template <size_t W>
std::optional<uint32_t> greatest_lower_bound(const Structure<W>& s, const std::vector<uint32_t>& family) {
    std::vector<uint32_t> lb = lower_bounds(s, family);
    if (lb.empty()) return std::nullopt;
    Bitset<W> g;
    for (uint32_t z : lb) g = g | s.elems[z];
    auto gi = s.index_of(g);
    if (!gi || !std::binary_search(lb.begin(), lb.end(), *gi)) return std::nullopt;
    for (uint32_t z : lb)
        if (!s.leq_member(s.elems[z], g)) return std::nullopt;
    return gi;
}

// For union-rule structures: verifies the element family is a fixed point of
// "add disjoint unions of members". The structural shortcuts for L4/L5 and
// associativity rest on this property, so it is checked, not assumed.
template <size_t W>
std::optional<std::pair<uint32_t, uint32_t>> find_union_gap(const Structure<W>& s) {
    for (uint32_t i = 1; i + 1 < s.size(); ++i) {
        Bitset<W> allow = s.comp(s.elems[i]);
        std::optional<std::pair<uint32_t, uint32_t>> bad;
        for_each_subset(s.elems, allow, [&](size_t j) {
            if (bad || j <= i) return;
            if (!s.is_element(s.elems[i] | s.elems[j])) bad = std::make_pair(i, uint32_t(j));
        });
        if (bad) return bad;
    }
    return std::nullopt;
}

} // namespace detail

// Result of scanning every proper inclusion between nonzero elements. The
// difference characterization of the sum-derived order (p <= q iff q\p is a
// member, for members p inside q) turns order failure into a membership miss;
// the pairs where it misses drive the L4/L5 analyses and the
// order-determination check. With use_real_leq set (small structures) each
// pair additionally runs through the sum oracle, on the pair and on its
// complement pair, guarding the shortcut and axiom L2 concretely.
struct InclusionSweep {
    std::vector<std::pair<uint32_t, uint32_t>> violating; // (p, q): p proper subset of q, not p <= q
    size_t inclusion_pairs = 0;                           // proper inclusions among nonzero elements
    std::optional<std::array<uint32_t, 2>> l2_witness;
};

template <size_t W>
InclusionSweep inclusion_sweep(const Structure<W>& s, bool use_real_leq) {
    InclusionSweep out;
    for (uint32_t jq = 1; jq < s.size(); ++jq) {
        const Bitset<W>& q = s.elems[jq];
        for_each_subset(s.elems, q, [&](size_t jp) {
            if (jp == 0 || jp == jq) return;
            ++out.inclusion_pairs;
            Bitset<W> d = q - s.elems[jp];
            bool le = s.is_element(d);
            if (use_real_leq) {
                if (s.leq(s.elems[jp], q) != le)
                    throw StructuralError("membership order shortcut disagrees with the sum-derived order");
                if (le && !out.l2_witness && !s.leq(s.comp(q), s.comp(s.elems[jp])))
                    out.l2_witness = {{uint32_t(jp), jq}};
            }
            if (!le) out.violating.emplace_back(uint32_t(jp), jq);
        });
    }
    return out;
}

// Depth-first enumeration of pairwise-summable atom families, as strictly
// increasing position tuples into s.atoms. fn runs on every family of size
// >= 2 with (positions, union mask, total-sum-defined); returning false stops
// the whole enumeration. Pre-order traversal delivers families in
// lexicographic order of their tuples, so the first hit is the least one.
template <size_t W, typename F>
void for_each_orthogonal_atom_family(const Structure<W>& s, F&& fn) {
    const size_t na = s.atoms.size();
    std::vector<Bitset<W>> am = s.atom_masks();
    std::vector<uint32_t> fam;
    Bitset<W> umask;
    bool stop = false;
    std::function<void(size_t)> rec = [&](size_t start) {
        for (size_t a = start; a < na && !stop; ++a) {
            if (umask.intersects(am[a])) continue;
            bool ok = true;
            for (uint32_t f : fam)
                if (!s.sum_defined(am[f], am[a])) { ok = false; break; }
            if (!ok) continue;
            fam.push_back(uint32_t(a));
            Bitset<W> prev = umask;
            umask = umask | am[a];
            if (fam.size() >= 2) {
                bool total = s.rule == SumRule::UnionSum
                                 ? s.is_element(umask)
                                 : s.oracle->decomposable(s.comp(umask));
                if (!fn(static_cast<const std::vector<uint32_t>&>(fam), umask, total)) stop = true;
            }
            if (!stop) rec(a + 1);
            umask = prev;
            fam.pop_back();
        }
    };
    rec(0);
}

// E1..E4 of the partial-sum axioms. Small structures get raw exhaustive
// sweeps; large ones combine exhaustive generator sweeps with the structural
// facts that make the general case follow (each noted on the report).
template <size_t W>
std::vector<AxiomReport> check_effect_algebra(const Structure<W>& s, const CheckPolicy& pol = {}) {
    verify_structure(s);
    const uint32_t n = uint32_t(s.size());
    std::vector<AxiomReport> out;

    std::vector<uint32_t> gens = s.atoms;
    gens.push_back(s.zero_index());
    gens.push_back(s.one_index());
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

    { // E1: definedness and value of p+q are symmetric
        AxiomReport r{"E1", true, {}, "", };
        auto scan = [&](const std::vector<uint32_t>& idx) {
            for (size_t x = 0; x < idx.size() && r.pass; ++x)
                for (size_t y = x + 1; y < idx.size() && r.pass; ++y)
                    if (s.sum_defined(idx[x], idx[y]) != s.sum_defined(idx[y], idx[x])) {
                        r.pass = false;
                        r.witness = {idx[x], idx[y]};
                    }
        };
        if (n <= pol.pair_exhaustive_limit) {
            std::vector<uint32_t> all(n);
            for (uint32_t i = 0; i < n; ++i) all[i] = i;
            scan(all);
            r.note = "all element pairs";
        } else {
            scan(gens);
            r.note = "generator pairs; disjointness and union are symmetric at the mask level";
        }
        out.push_back(std::move(r));
    }

    { // E2: bracketing. Both chains' conditions are decomposability of
      // complements of partial unions, so each implies the other once every
      // element is itself decomposable (the difference of a decomposable
      // total by a disjoint summand stays decomposable); union-rule
      // structures need closure under disjoint unions instead. Small
      // structures additionally sweep every triple raw.
        AxiomReport r{"E2", true, {}, ""};
        auto tri = [&](uint32_t i, uint32_t j, uint32_t k) {
            bool right = s.sum_defined(j, k) && s.sum_defined(s.elems[i], s.elems[j] | s.elems[k]);
            bool left = s.sum_defined(i, j) && s.sum_defined(s.elems[i] | s.elems[j], s.elems[k]);
            if (right != left) {
                r.pass = false;
                r.witness = {i, j, k};
            }
        };
        if (n <= pol.triple_exhaustive_limit) {
            for (uint32_t i = 0; i < n && r.pass; ++i)
                for (uint32_t j = 0; j < n && r.pass; ++j)
                    for (uint32_t k = 0; k < n && r.pass; ++k) tri(i, j, k);
            r.note = "all element triples";
        } else {
            if (s.rule == SumRule::EffectSum) {
                for (uint32_t i = 0; i < n && r.pass; ++i)
                    if (!s.oracle->decomposable(s.elems[i])) {
                        r.pass = false;
                        r.witness = {i};
                        r.note = "element not decomposable into generating atoms";
                    }
            } else if (auto gap = detail::find_union_gap(s)) {
                r.pass = false;
                r.witness = {gap->first, gap->second};
                r.note = "element family not closed under disjoint unions";
            }
            for (size_t x = 0; x < gens.size() && r.pass; ++x)
                for (size_t y = 0; y < gens.size() && r.pass; ++y)
                    for (size_t z = 0; z < gens.size() && r.pass; ++z) tri(gens[x], gens[y], gens[z]);
            if (r.pass)
                r.note = "generator triples; the general case follows from closure of the "
                         "element family under summand differences";
        }
        out.push_back(std::move(r));
    }

    { // E3: the complement is the unique summand to 1
        AxiomReport r{"E3", true, {}, ""};
        if (n <= pol.pair_exhaustive_limit) {
            for (uint32_t i = 0; i < n && r.pass; ++i) {
                uint32_t hits = 0;
                std::optional<uint32_t> wrong;
                for (uint32_t j = 0; j < n; ++j) {
                    if (!s.sum_defined(i, j) || (s.elems[i] | s.elems[j]) != s.full) continue;
                    ++hits;
                    if (s.elems[j] != s.comp(s.elems[i])) wrong = j;
                }
                if (hits != 1 || wrong) {
                    r.pass = false;
                    r.witness = wrong ? std::vector<uint32_t>{i, *wrong} : std::vector<uint32_t>{i};
                }
            }
            r.note = "all element pairs";
        } else {
            for (uint32_t i = 0; i < n && r.pass; ++i) {
                auto ci = s.index_of(s.comp(s.elems[i]));
                if (!ci || !s.sum_defined(i, *ci)) {
                    r.pass = false;
                    r.witness = {i};
                }
            }
            r.note = "per-element complement sum; uniqueness is forced at the mask level";
        }
        out.push_back(std::move(r));
    }

    { // E4: summability with 1 forces zero (and the zero pair stays defined)
        AxiomReport r{"E4", true, {}, "all elements"};
        uint32_t one = s.one_index();
        for (uint32_t i = 0; i < n && r.pass; ++i)
            if (s.sum_defined(one, i) != (i == s.zero_index())) {
                r.pass = false;
                r.witness = {i};
            }
        out.push_back(std::move(r));
    }

    return out;
}

struct CoherenceReport {
    bool pass = true;
    std::vector<uint32_t> witness; // element indices: pairwise summable, total sum undefined
    size_t bound = 0;              // element-family size bound that was swept
    size_t families_checked = 0;
    std::string note;
};

// Coherence: every pairwise-summable family must have a defined total sum.
// Assumes check_effect_algebra already passed. Two sweeps: all atom families
// (any size, exhaustive), plus on small structures all element families up to
// pol.coherence_bound. Witnesses are the lexicographically least failing
// tuple each sweep encounters; size-2 families cannot fail since their pair
// test is the total test.
template <size_t W>
CoherenceReport check_coherence_law(const Structure<W>& s, const CheckPolicy& pol = {}) {
    CoherenceReport rep;
    rep.bound = pol.coherence_bound;
    const uint32_t n = uint32_t(s.size());

    std::vector<uint32_t> atom_wit;
    for_each_orthogonal_atom_family(s, [&](const std::vector<uint32_t>& fam, const Bitset<W>&, bool total) {
        ++rep.families_checked;
        if (fam.size() >= 3 && !total) {
            for (uint32_t a : fam) atom_wit.push_back(s.atoms[a]);
            return false;
        }
        return true;
    });

    std::vector<uint32_t> elem_wit;
    if (n <= pol.family_exhaustive_limit) {
        // families of nonzero elements up to the bound; 0 never changes a sum
        std::vector<uint32_t> fam;
        Bitset<W> umask;
        bool stop = false;
        std::function<void(uint32_t)> rec = [&](uint32_t start) {
            for (uint32_t e = start; e < n && !stop; ++e) {
                if (umask.intersects(s.elems[e])) continue;
                bool ok = true;
                for (uint32_t f : fam)
                    if (!s.sum_defined(f, e)) { ok = false; break; }
                if (!ok) continue;
                fam.push_back(e);
                Bitset<W> prev = umask;
                umask = umask | s.elems[e];
                ++rep.families_checked;
                if (fam.size() >= 3 && !s.nsum_defined(fam)) {
                    elem_wit = fam;
                    stop = true;
                }
                if (!stop && fam.size() < pol.coherence_bound) rec(e + 1);
                umask = prev;
                fam.pop_back();
            }
        };
        rec(1);
        rep.note = "atom families exhaustively, element families to the bound";
    } else {
        rep.note = "atom families exhaustively; element families beyond atoms not swept at this size";
    }

    if (!atom_wit.empty() && (elem_wit.empty() || atom_wit < elem_wit))
        rep.witness = atom_wit;
    else
        rep.witness = elem_wit;
    rep.pass = rep.witness.empty();
    return rep;
}

// L1-L5 of the orthoposet axioms over the sum-derived order.
template <size_t W>
std::vector<AxiomReport> check_orthoposet(const Structure<W>& s, const CheckPolicy& pol = {}) {
    verify_structure(s);
    const uint32_t n = uint32_t(s.size());
    std::vector<AxiomReport> out;
    const bool small = n <= pol.pair_exhaustive_limit;

    InclusionSweep inc = inclusion_sweep(s, small);

    { // L1: least and greatest elements bound everything
        AxiomReport r{"L1", true, {}, "all elements"};
        uint32_t one = s.one_index();
        for (uint32_t i = 0; i < n && r.pass; ++i)
            if (!s.leq(s.zero_index(), i) || !s.leq(i, one)) {
                r.pass = false;
                r.witness = {i};
            }
        out.push_back(std::move(r));
    }

    { // L2: complement reverses the order
        AxiomReport r{"L2", true, {},
                      small ? "all comparable pairs through the sum-derived order"
                            : "all comparable pairs; the complement pair's order difference "
                              "is the same mask, so reversal holds whenever the pair is comparable"};
        if (inc.l2_witness) {
            r.pass = false;
            r.witness = {(*inc.l2_witness)[0], (*inc.l2_witness)[1]};
        }
        out.push_back(std::move(r));
    }

    { // L3: complement is an involution into the structure
        AxiomReport r{"L3", true, {}, "all elements"};
        for (uint32_t i = 0; i < n && r.pass; ++i) {
            Bitset<W> c = s.comp(s.elems[i]);
            if (!s.is_element(c) || s.comp(c) != s.elems[i]) {
                r.pass = false;
                r.witness = {i};
            }
        }
        out.push_back(std::move(r));
    }

    { // L4: suprema of orthogonal families exist
        AxiomReport r{"L4", true, {}, ""};
        bool settled = false;
        if (s.rule == SumRule::UnionSum && inc.violating.empty()) {
            if (!detail::find_union_gap(s)) {
                // rigorous for every family of elements: unions of disjoint
                // members stay members (verified fixed point), the union
                // upper-bounds its family, any upper bound contains it, and
                // with no violating inclusions containment is order
                settled = true;
                r.note = "structural: disjoint unions stay members and order coincides with "
                         "inclusion, so each orthogonal family's union is its supremum";
            }
        }
        if (!settled && small && n <= pol.family_exhaustive_limit) {
            // exhaustive over element families: DFS over pairwise-summable
            // sets (summability equals poset orthogonality here: both demand
            // disjointness plus membership of the union)
            std::vector<uint32_t> fam;
            Bitset<W> umask;
            bool stop = false;
            std::function<void(uint32_t)> rec = [&](uint32_t start) {
                for (uint32_t e = start; e < n && !stop; ++e) {
                    if (umask.intersects(s.elems[e])) continue;
                    bool ok = true;
                    for (uint32_t f : fam)
                        if (!s.sum_defined(f, e)) { ok = false; break; }
                    if (!ok) continue;
                    fam.push_back(e);
                    Bitset<W> prev = umask;
                    umask = umask | s.elems[e];
                    if (fam.size() >= 2 && !detail::least_upper_bound(s, fam)) {
                        r.pass = false;
                        r.witness = fam;
                        stop = true;
                    }
                    if (!stop) rec(e + 1);
                    umask = prev;
                    fam.pop_back();
                }
            };
            rec(1);
            settled = true;
            r.note = "all element families";
        }
        if (!settled && s.rule == SumRule::EffectSum) {
            // Families with a defined total: the total u is a member, it
            // upper-bounds the family, and every upper bound contains it
            // setwise, so the supremum is missing exactly when some upper
            // bound b has (u, b) among the violating inclusions. Scan those
            // pairs against every atom partition of u.
            for (auto& [t, rr] : inc.violating) {
                if (!r.pass) break;
                auto certs = s.oracle->all_certificates(s.elems[t], pol.cert_cap);
                for (auto& c : certs) {
                    if (c.size() < 2) continue;
                    bool ub = true;
                    for (uint32_t ai : c)
                        if (!s.leq_member(s.oracle->atoms()[ai], s.elems[rr])) { ub = false; break; }
                    if (ub) {
                        r.pass = false;
                        r.witness.clear();
                        for (uint32_t ai : c) r.witness.push_back(s.require_index(s.oracle->atoms()[ai]));
                        std::sort(r.witness.begin(), r.witness.end());
                        break;
                    }
                }
            }
            // Families whose total is undefined are the only ones the
            // argument above misses; settle each by the naive supremum scan.
            if (r.pass) {
                for_each_orthogonal_atom_family(s, [&](const std::vector<uint32_t>& fam, const Bitset<W>&, bool total) {
                    if (total) return true;
                    std::vector<uint32_t> fel;
                    for (uint32_t a : fam) fel.push_back(s.atoms[a]);
                    if (!detail::least_upper_bound(s, fel)) {
                        r.pass = false;
                        r.witness = fel;
                        return false;
                    }
                    return true;
                });
            }
            settled = true;
            r.note = r.pass ? "atom families exhaustively; element families reduce to the "
                              "violating-inclusion scan when their total sum is defined"
                            : "orthogonal family with no least upper bound";
        }
        if (!settled) {
            // union-rule structure that failed the structural route: sweep
            // atom families naively
            for_each_orthogonal_atom_family(s, [&](const std::vector<uint32_t>& fam, const Bitset<W>&, bool) {
                std::vector<uint32_t> fel;
                for (uint32_t a : fam) fel.push_back(s.atoms[a]);
                if (!detail::least_upper_bound(s, fel)) {
                    r.pass = false;
                    r.witness = fel;
                    return false;
                }
                return true;
            });
            r.note = "atom families";
        }
        out.push_back(std::move(r));
    }

    { // L5: the orthomodular law on every comparable pair. With d := q\p a
      // member, d lower-bounds {q, ~p} and every lower bound is contained in
      // d, so the meet is missing exactly when some lower bound fails to sit
      // below d; dually q upper-bounds {p, d} setwise-minimally, so the join
      // is missing exactly when some upper bound fails to dominate q. Both
      // failure modes reduce to scans over the violating inclusions; no
      // violating inclusions means the law holds outright.
        AxiomReport r{"L5", true, {}, ""};
        if (inc.violating.empty()) {
            r.note = "structural: order coincides with inclusion, so q and ~p meet in q\\p "
                     "and p joins with it back to q";
        } else {
            // meet failures: (z, d) violating, q an element containing d with
            // q\d a member (that is p), and z below both q and ~p
            for (auto& [z, dd] : inc.violating) {
                if (!r.pass) break;
                const Bitset<W>& d = s.elems[dd];
                auto it = std::lower_bound(s.elems.begin(), s.elems.end(), d);
                for (size_t jq = size_t(it - s.elems.begin()); jq < n; ++jq) {
                    const Bitset<W>& q = s.elems[jq];
                    if (!d.subset_of(q)) continue;
                    Bitset<W> pm = q - d;
                    if (!s.is_element(pm)) continue;
                    if (!s.is_element(q - s.elems[z])) continue; // z <= q
                    Bitset<W> cp = s.comp(pm);
                    if (!s.is_element(cp - s.elems[z])) continue; // z <= ~p
                    r.pass = false;
                    r.witness = {s.require_index(pm), uint32_t(jq)};
                    r.note = "comparable pair whose meet with the complement does not exist";
                    break;
                }
            }
            // join failures: (q, b) violating and p <= q with p and q\p both
            // below b, making b an upper bound of {p, q\p} that q does not
            // precede
            for (auto& [qi, b] : inc.violating) {
                if (!r.pass) break;
                const Bitset<W>& q = s.elems[qi];
                const Bitset<W>& bm = s.elems[b];
                bool done = false;
                for_each_subset(s.elems, q, [&](size_t jp) {
                    if (done || jp == 0 || jp == qi) return;
                    Bitset<W> d = q - s.elems[jp];
                    if (!s.is_element(d)) return;
                    if (!s.is_element(bm - s.elems[jp])) return;
                    if (!s.is_element(bm - d)) return;
                    done = true;
                    r.pass = false;
                    r.witness = {uint32_t(jp), qi};
                    r.note = "comparable pair whose parts rejoin below an incomparable bound";
                });
            }
            if (r.pass) r.note = "reduction over violating inclusions, complete for both failure modes";
        }
        out.push_back(std::move(r));
    }

    return out;
}

struct LatticeReport {
    bool is_lattice = true;
    bool is_boolean = true;
    std::vector<uint32_t> lattice_witness; // pair with no least upper bound
    std::vector<uint32_t> boolean_witness; // triple violating distributivity
    bool exhaustive = true;
    std::string note;
};

// Lattice: every pair needs a least upper bound. Boolean: additionally the
// distributive law on triples. Small structures get exhaustive sweeps with
// precomputed join/meet tables; large ones get a directed atom-pair sweep and
// seeded sampling, flagged non-exhaustive.
template <size_t W>
LatticeReport check_lattice_and_boolean(const Structure<W>& s, const CheckPolicy& pol = {}) {
    LatticeReport rep;
    const uint32_t n = uint32_t(s.size());

    std::vector<int64_t> join_tab, meet_tab;
    if (n <= pol.naive_order_limit) {
        join_tab.assign(size_t(n) * n, -1);
        meet_tab.assign(size_t(n) * n, -1);
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = i; j < n; ++j) {
                auto ju = detail::least_upper_bound(s, {i, j});
                auto me = detail::greatest_lower_bound(s, {i, j});
                join_tab[size_t(i) * n + j] = join_tab[size_t(j) * n + i] = ju ? int64_t(*ju) : -1;
                meet_tab[size_t(i) * n + j] = meet_tab[size_t(j) * n + i] = me ? int64_t(*me) : -1;
                if (!ju && rep.is_lattice) {
                    rep.is_lattice = false;
                    rep.lattice_witness = {i, j};
                }
            }
        rep.note = "all element pairs";
    } else {
        rep.exhaustive = false;
        rep.note = "atom pairs only at this size";
        for (size_t a = 0; a < s.atoms.size() && rep.is_lattice; ++a)
            for (size_t b = a + 1; b < s.atoms.size() && rep.is_lattice; ++b)
                if (!detail::least_upper_bound(s, {s.atoms[a], s.atoms[b]})) {
                    rep.is_lattice = false;
                    rep.lattice_witness = {s.atoms[a], s.atoms[b]};
                }
    }

    if (!rep.is_lattice) {
        rep.is_boolean = false;
        return rep;
    }

    auto join = [&](uint32_t i, uint32_t j) -> std::optional<uint32_t> {
        if (!join_tab.empty()) {
            int64_t v = join_tab[size_t(i) * n + j];
            return v < 0 ? std::nullopt : std::optional<uint32_t>(uint32_t(v));
        }
        return detail::least_upper_bound(s, {i, j});
    };
    auto meet = [&](uint32_t i, uint32_t j) -> std::optional<uint32_t> {
        if (!meet_tab.empty()) {
            int64_t v = meet_tab[size_t(i) * n + j];
            return v < 0 ? std::nullopt : std::optional<uint32_t>(uint32_t(v));
        }
        return detail::greatest_lower_bound(s, {i, j});
    };
    auto distributes = [&](uint32_t a, uint32_t b, uint32_t c) {
        auto bc = meet(b, c);
        auto ab = join(a, b);
        auto ac = join(a, c);
        if (!bc || !ab || !ac) return false;
        auto lhs = join(a, *bc);
        auto rhs = meet(*ab, *ac);
        return lhs && rhs && *lhs == *rhs;
    };

    if (n <= pol.naive_order_limit) {
        for (uint32_t a = 0; a < n && rep.is_boolean; ++a)
            for (uint32_t b = 0; b < n && rep.is_boolean; ++b)
                for (uint32_t c = 0; c < n && rep.is_boolean; ++c)
                    if (!distributes(a, b, c)) {
                        rep.is_boolean = false;
                        rep.boolean_witness = {a, b, c};
                    }
        rep.note += "; all triples";
    } else {
        rep.exhaustive = false;
        std::mt19937_64 rng(pol.seed);
        for (size_t t = 0; t < pol.sample_triples && rep.is_boolean; ++t) {
            uint32_t a = uint32_t(rng() % n), b = uint32_t(rng() % n), c = uint32_t(rng() % n);
            if (!distributes(a, b, c)) {
                rep.is_boolean = false;
                rep.boolean_witness = {a, b, c};
            }
        }
        rep.note += "; sampled triples";
    }
    return rep;
}

struct CompatibilityWitness {
    uint32_t p1, q1, r;
};

// Decomposition witness p = p1 (+) r, q = q1 (+) r with p1 (+) q1 (+) r
// defined. Pairwise disjointness of the triple forces r to contain p∩q while
// r <= p and r <= q force the reverse, so r = p∩q is the only viable choice;
// the exhaustive fallback over smaller members keeps the search honest for
// structures that break the expectation.
template <size_t W>
std::optional<CompatibilityWitness> check_compatible(const Structure<W>& s, uint32_t ip, uint32_t iq) {
    if (ip >= s.size() || iq >= s.size()) throw std::domain_error("element index out of range");
    const Bitset<W> p = s.elems[ip];
    const Bitset<W> q = s.elems[iq];
    const Bitset<W> r0 = p & q;
    auto attempt = [&](const Bitset<W>& rm) -> std::optional<CompatibilityWitness> {
        auto ir = s.index_of(rm);
        if (!ir) return std::nullopt;
        Bitset<W> p1 = p - rm, q1 = q - rm;
        if (p1.intersects(q1)) return std::nullopt;
        auto i1 = s.index_of(p1);
        auto j1 = s.index_of(q1);
        if (!i1 || !j1) return std::nullopt;
        if (!s.nsum_defined({*i1, *j1, *ir})) return std::nullopt;
        if (!s.sum_defined(*i1, *ir) || !s.sum_defined(*j1, *ir)) return std::nullopt;
        return CompatibilityWitness{*i1, *j1, *ir};
    };
    if (auto w = attempt(r0)) return w;
    std::optional<CompatibilityWitness> found;
    for_each_subset(s.elems, r0, [&](size_t jr) {
        if (found || s.elems[jr] == r0) return;
        if (auto w = attempt(s.elems[jr])) found = w;
    });
    return found;
}

// Every nonzero element must be a defined sum of a disjoint family of the
// structure's atoms.
template <size_t W>
AxiomReport check_atomistic(const Structure<W>& s) {
    AxiomReport r{"atomistic", true, {}, "every element decomposed into structure atoms"};
    std::vector<Bitset<W>> am = s.atom_masks();
    DecompOracle<W> local(am, s.cells);
    for (uint32_t i = 1; i < s.size() && r.pass; ++i) {
        auto cert = local.certificate(s.elems[i]);
        bool ok = cert.has_value();
        if (ok) {
            std::vector<uint32_t> idxs;
            for (uint32_t a : *cert) idxs.push_back(s.atoms[a]);
            ok = s.nsum_defined(idxs);
        }
        if (!ok) {
            r.pass = false;
            r.witness = {i};
        }
    }
    return r;
}

} // namespace boxlogic
