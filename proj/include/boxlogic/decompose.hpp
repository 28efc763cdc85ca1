#pragma once

#include <cassert>
#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

#include "bitset.hpp"

namespace boxlogic {

// Decides whether a mask is an exact disjoint union of generating atoms, and
// produces certificates (the atom lists realizing it). Depth-first search
// branches only on atoms covering the lowest-index uncovered cell; results are
// memoized on the residual mask, which is shared heavily across queries.
template <size_t W>
class DecompOracle {
public:
    DecompOracle(std::vector<Bitset<W>> atom_masks, size_t ncells)
        : atoms_(std::move(atom_masks)), ncells_(ncells) {
        by_cell_.resize(ncells_);
        for (uint32_t i = 0; i < atoms_.size(); ++i)
            for (size_t c = 0; c < ncells_; ++c)
                if (atoms_[i].test(c)) by_cell_[c].push_back(i);
    }

    const std::vector<Bitset<W>>& atoms() const { return atoms_; }
    size_t cells() const { return ncells_; }

    bool decomposable(const Bitset<W>& m) {
        std::lock_guard<std::mutex> lk(mu_);
        return dec_locked(m);
    }

    // first certificate in canonical atom order, or nullopt
    std::optional<std::vector<uint32_t>> certificate(const Bitset<W>& m) {
        std::lock_guard<std::mutex> lk(mu_);
        if (!dec_locked(m)) return std::nullopt;
        std::vector<uint32_t> cert;
        Bitset<W> rest = m;
        // walk the memoized yes-path greedily; dec_locked guarantees progress
        while (rest.any()) {
            size_t c = rest.lowest();
            bool step = false;
            for (uint32_t ai : by_cell_[c]) {
                if (!atoms_[ai].subset_of(rest)) continue;
                if (dec_locked(rest - atoms_[ai])) {
                    cert.push_back(ai);
                    rest = rest - atoms_[ai];
                    step = true;
                    break;
                }
            }
            if (!step) return std::nullopt; // unreachable if dec_locked was true
        }
        assert(validate_cert(m, cert));
        return cert;
    }

    // all certificates of m, each a sorted atom-index list, in lexicographic
    // order; cap == 0 means unbounded
    std::vector<std::vector<uint32_t>> all_certificates(const Bitset<W>& m, size_t cap = 0) {
        std::lock_guard<std::mutex> lk(mu_);
        std::vector<std::vector<uint32_t>> out;
        std::vector<uint32_t> cur;
        enum_all(m, cur, out, cap);
#ifndef NDEBUG
        for (const auto& c : out) assert(validate_cert(m, c));
#endif
        return out;
    }

    // number of certificates, counting stops at cap (cap >= 1)
    size_t count_certificates(const Bitset<W>& m, size_t cap) {
        std::lock_guard<std::mutex> lk(mu_);
        std::vector<std::vector<uint32_t>> out;
        std::vector<uint32_t> cur;
        enum_all(m, cur, out, cap);
        return out.size();
    }

    size_t memo_size() const { return memo_.size(); }

private:
    // debug-build invariant: a certificate is a pairwise disjoint atom list
    // whose union is exactly the queried mask
    bool validate_cert(const Bitset<W>& m, const std::vector<uint32_t>& cert) const {
        Bitset<W> u;
        for (uint32_t ai : cert) {
            if (ai >= atoms_.size()) return false;
            if (u.intersects(atoms_[ai])) return false;
            u = u | atoms_[ai];
        }
        return u == m;
    }

    bool dec_locked(const Bitset<W>& m) {
        if (m.none()) return true;
        if (const uint8_t* v = memo_.find(m)) return *v;
        size_t c = m.lowest();
        bool ok = false;
        for (uint32_t ai : by_cell_[c]) {
            if (!atoms_[ai].subset_of(m)) continue;
            if (dec_locked(m - atoms_[ai])) { ok = true; break; }
        }
        memo_.put(m, uint8_t(ok));
        return ok;
    }

    void enum_all(const Bitset<W>& m, std::vector<uint32_t>& cur,
                  std::vector<std::vector<uint32_t>>& out, size_t cap) {
        if (cap && out.size() >= cap) return;
        if (m.none()) {
            out.push_back(cur);
            return;
        }
        size_t c = m.lowest();
        for (uint32_t ai : by_cell_[c]) {
            if (!atoms_[ai].subset_of(m)) continue;
            if (!dec_locked(m - atoms_[ai])) continue;
            cur.push_back(ai);
            enum_all(m - atoms_[ai], cur, out, cap);
            cur.pop_back();
            if (cap && out.size() >= cap) return;
        }
    }

    std::vector<Bitset<W>> atoms_;
    size_t ncells_;
    std::vector<std::vector<uint32_t>> by_cell_;
    MaskMap<W, uint8_t> memo_;
    std::mutex mu_; // concurrent closure workers share the memo
};

} // namespace boxlogic
