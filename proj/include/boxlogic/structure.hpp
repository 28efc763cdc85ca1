#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitset.hpp"
#include "decompose.hpp"
#include "model.hpp"

namespace boxlogic {

// How the partial sum is decided:
//   EffectSum: p (+) q defined iff masks disjoint and the complement of the
//              union decomposes into generating atoms (oracle query).
//   UnionSum:  p (+) q defined iff masks disjoint and the union is a member
//              (families closed under complement and disjoint unions; also
//              the right rule for single boxes and the even-set fixtures).
enum class SumRule { EffectSum, UnionSum };

struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A finite family of cell sets with the partial sum, complement, and derived
// order. Elements are kept sorted ascending by mask (canonical order); all
// report indices refer to that order.
template <size_t W>
struct Structure {
    size_t cells = 0;
    Bitset<W> full;
    SumRule rule = SumRule::UnionSum;

    std::vector<Bitset<W>> elems; // sorted ascending, elems[0] == 0
    std::vector<uint32_t> atoms;  // element indices, ascending

    std::shared_ptr<DecompOracle<W>> oracle; // EffectSum only
    // product metadata: present when built from factors
    std::shared_ptr<const std::vector<Factor>> factors;
    std::shared_ptr<const std::vector<ProductAtomInfo>> atom_infos; // parallel to generating atoms

    mutable MaskMap<W, uint32_t> index_; // mask -> element index
    void build_index() const {
        if (index_.size() == elems.size()) return;
        for (uint32_t i = 0; i < elems.size(); ++i) index_.put(elems[i], i);
    }

    size_t size() const { return elems.size(); }

    bool is_element(const Bitset<W>& m) const {
        build_index();
        return index_.find(m) != nullptr;
    }
    std::optional<uint32_t> index_of(const Bitset<W>& m) const {
        build_index();
        const uint32_t* p = index_.find(m);
        if (!p) return std::nullopt;
        return *p;
    }
    uint32_t require_index(const Bitset<W>& m) const {
        auto i = index_of(m);
        if (!i) throw std::invalid_argument("mask is not an element: 0x" + m.to_hex());
        return *i;
    }

    Bitset<W> comp(const Bitset<W>& m) const { return full - m; }
    uint32_t comp_index(uint32_t i) const { return require_index(comp(elems[i])); }

    uint32_t zero_index() const { return 0; }
    uint32_t one_index() const { return require_index(full); }

    bool sum_defined(const Bitset<W>& p, const Bitset<W>& q) const {
        if (p.intersects(q)) return false;
        Bitset<W> u = p | q;
        if (rule == SumRule::UnionSum) return is_element(u);
        return oracle->decomposable(comp(u));
    }
    bool sum_defined(uint32_t i, uint32_t j) const { return sum_defined(elems[i], elems[j]); }

    // n-ary sum: defined iff pairwise disjoint and, for EffectSum, the union's
    // complement decomposes (equivalent to iterated pair sums existing in some
    // order; for these families every bracketing agrees), or for UnionSum the
    // union is a member.
    bool nsum_defined(const std::vector<uint32_t>& idxs) const {
        Bitset<W> u;
        for (uint32_t i : idxs) {
            if (elems[i].intersects(u)) return false;
            u = u | elems[i];
        }
        if (rule == SumRule::UnionSum) return is_element(u);
        return oracle->decomposable(comp(u));
    }

    // order derived from the sum: p <= q iff q = p (+) r for some element r.
    // The residue is mask-forced to q\p, so the test is containment plus
    // membership of the difference plus definedness of that pair sum.
    bool leq(const Bitset<W>& p, const Bitset<W>& q) const {
        if (!p.subset_of(q)) return false;
        Bitset<W> d = q - p;
        if (d.none()) return true;
        if (!is_element(d)) return false;
        return sum_defined(p, d);
    }
    bool leq(uint32_t i, uint32_t j) const { return leq(elems[i], elems[j]); }

    // Order test for two known members. Equivalent to leq but skips the sum
    // oracle: with p, q both elements and p subset of q, the pair sum
    // p (+) (q\p) is automatically defined once q\p is a member, because its
    // definedness condition is exactly decomposability of ~q (EffectSum,
    // guaranteed by q's membership) resp. membership of q (UnionSum).
    // Checkers run this on tens of millions of pairs; the test suite holds it
    // equal to leq on every structure small enough to compare exhaustively.
    bool leq_member(const Bitset<W>& p, const Bitset<W>& q) const {
        if (!p.subset_of(q)) return false;
        Bitset<W> d = q - p;
        if (d.none()) return true;
        return is_element(d);
    }
    bool leq_member(uint32_t i, uint32_t j) const { return leq_member(elems[i], elems[j]); }

    void sort_canonical() {
        std::sort(elems.begin(), elems.end());
        elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
        index_ = MaskMap<W, uint32_t>{};
    }

    // Minimal nonzero elements. Any q < a has mask strictly contained in a's,
    // hence a smaller canonical position, so only the prefix needs scanning.
    std::vector<uint32_t> find_atoms() const {
        std::vector<uint32_t> out;
        for (uint32_t i = 1; i < elems.size(); ++i) {
            bool minimal = true;
            for (uint32_t j = 1; j < i && minimal; ++j)
                if (elems[j].subset_of(elems[i]) && leq(j, i)) minimal = false;
            if (minimal) out.push_back(i);
        }
        return out;
    }

    // generating atom masks (the library keeps them also as element indices)
    std::vector<Bitset<W>> atom_masks() const {
        std::vector<Bitset<W>> out;
        out.reserve(atoms.size());
        for (uint32_t i : atoms) out.push_back(elems[i]);
        return out;
    }
};

} // namespace boxlogic
