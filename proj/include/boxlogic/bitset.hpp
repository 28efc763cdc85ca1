#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <string>
#include <stdexcept>
#include <vector>

namespace boxlogic {

// Fixed-width bitset over W 64-bit words. Cell i lives at word i/64, bit i%64.
// Canonical comparison treats the whole thing as one unsigned integer with
// word W-1 most significant, so "sorted ascending" matches plain integer order
// when W == 1.
template <size_t W>
struct Bitset {
    std::array<uint64_t, W> w{};

    static constexpr size_t words = W;
    static constexpr size_t capacity = 64 * W;

    constexpr Bitset() = default;

    static Bitset full(size_t ncells) {
        if (ncells > capacity) throw std::invalid_argument("bitset: too many cells");
        Bitset r;
        for (size_t i = 0; i < W; ++i) {
            size_t lo = 64 * i;
            if (ncells >= lo + 64) r.w[i] = ~uint64_t(0);
            else if (ncells > lo) r.w[i] = (uint64_t(1) << (ncells - lo)) - 1;
        }
        return r;
    }

    void set(size_t i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
    bool test(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }

    bool any() const {
        for (size_t i = 0; i < W; ++i) if (w[i]) return true;
        return false;
    }
    bool none() const { return !any(); }

    size_t count() const {
        size_t c = 0;
        for (size_t i = 0; i < W; ++i) c += size_t(__builtin_popcountll(w[i]));
        return c;
    }

    // index of lowest set bit; undefined when empty
    size_t lowest() const {
        for (size_t i = 0; i < W; ++i)
            if (w[i]) return 64 * i + size_t(__builtin_ctzll(w[i]));
        return capacity;
    }

    bool intersects(const Bitset& o) const {
        for (size_t i = 0; i < W; ++i) if (w[i] & o.w[i]) return true;
        return false;
    }
    bool subset_of(const Bitset& o) const {
        for (size_t i = 0; i < W; ++i) if (w[i] & ~o.w[i]) return false;
        return true;
    }

    friend Bitset operator|(Bitset a, const Bitset& b) {
        for (size_t i = 0; i < W; ++i) a.w[i] |= b.w[i];
        return a;
    }
    friend Bitset operator&(Bitset a, const Bitset& b) {
        for (size_t i = 0; i < W; ++i) a.w[i] &= b.w[i];
        return a;
    }
    // set difference a \ b
    friend Bitset operator-(Bitset a, const Bitset& b) {
        for (size_t i = 0; i < W; ++i) a.w[i] &= ~b.w[i];
        return a;
    }

    bool operator==(const Bitset& o) const { return w == o.w; }
    bool operator!=(const Bitset& o) const { return w != o.w; }
    bool operator<(const Bitset& o) const {
        for (size_t i = W; i-- > 0;)
            if (w[i] != o.w[i]) return w[i] < o.w[i];
        return false;
    }
    bool operator<=(const Bitset& o) const { return !(o < *this); }

    uint64_t hash() const {
        // FNV-1a over words; decent spread for open addressing
        uint64_t h = 1469598103934665603ull;
        for (size_t i = 0; i < W; ++i) {
            uint64_t x = w[i];
            for (int b = 0; b < 8; ++b) {
                h ^= (x >> (8 * b)) & 0xff;
                h *= 1099511628211ull;
            }
        }
        return h;
    }

    // minimal lowercase hex, like printf %x of the whole integer
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        bool started = false;
        for (size_t i = W; i-- > 0;) {
            for (int n = 15; n >= 0; --n) {
                unsigned d = unsigned((w[i] >> (4 * n)) & 0xf);
                if (!started) {
                    if (d == 0) continue;
                    started = true;
                }
                s.push_back(digits[d]);
            }
        }
        if (!started) s = "0";
        return s;
    }

    static Bitset from_hex(const std::string& s) {
        Bitset r;
        for (char c : s) {
            unsigned d;
            if (c >= '0' && c <= '9') d = unsigned(c - '0');
            else if (c >= 'a' && c <= 'f') d = unsigned(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') d = unsigned(c - 'A' + 10);
            else throw std::invalid_argument("bad hex mask: " + s);
            // r = r*16 + d
            uint64_t carry = d;
            for (size_t i = 0; i < W; ++i) {
                uint64_t hi = r.w[i] >> 60;
                r.w[i] = (r.w[i] << 4) | carry;
                carry = hi;
            }
            if (carry) throw std::invalid_argument("hex mask overflows width: " + s);
        }
        return r;
    }
};

template <size_t W>
inline Bitset<W> complement(const Bitset<W>& m, const Bitset<W>& full) {
    return full - m;
}

// Open-addressing hash set of bitsets. std::unordered_map's node overhead is
// fatal at the 2M-element scale this code runs at, hence the hand-rolled one.
template <size_t W>
class MaskSet {
    std::vector<Bitset<W>> slots_;
    std::vector<uint8_t> used_;
    size_t size_ = 0, mask_ = 0;

    void grow() {
        size_t ncap = slots_.empty() ? 1024 : slots_.size() * 2;
        std::vector<Bitset<W>> ns(ncap);
        std::vector<uint8_t> nu(ncap, 0);
        size_t nmask = ncap - 1;
        for (size_t i = 0; i < slots_.size(); ++i) {
            if (!used_[i]) continue;
            size_t j = slots_[i].hash() & nmask;
            while (nu[j]) j = (j + 1) & nmask;
            ns[j] = slots_[i];
            nu[j] = 1;
        }
        slots_ = std::move(ns);
        used_ = std::move(nu);
        mask_ = nmask;
    }

public:
    size_t size() const { return size_; }

    bool contains(const Bitset<W>& m) const {
        if (slots_.empty()) return false;
        size_t j = m.hash() & mask_;
        while (used_[j]) {
            if (slots_[j] == m) return true;
            j = (j + 1) & mask_;
        }
        return false;
    }

    // returns true if inserted (was absent)
    bool insert(const Bitset<W>& m) {
        if (slots_.empty() || size_ * 10 >= slots_.size() * 7) grow();
        size_t j = m.hash() & mask_;
        while (used_[j]) {
            if (slots_[j] == m) return false;
            j = (j + 1) & mask_;
        }
        slots_[j] = m;
        used_[j] = 1;
        ++size_;
        return true;
    }
};

// Open-addressing map mask -> small value (memo tables).
template <size_t W, typename V>
class MaskMap {
    std::vector<Bitset<W>> keys_;
    std::vector<V> vals_;
    std::vector<uint8_t> used_;
    size_t size_ = 0, mask_ = 0;

    void grow() {
        size_t ncap = keys_.empty() ? 1024 : keys_.size() * 2;
        std::vector<Bitset<W>> nk(ncap);
        std::vector<V> nv(ncap);
        std::vector<uint8_t> nu(ncap, 0);
        size_t nmask = ncap - 1;
        for (size_t i = 0; i < keys_.size(); ++i) {
            if (!used_[i]) continue;
            size_t j = keys_[i].hash() & nmask;
            while (nu[j]) j = (j + 1) & nmask;
            nk[j] = keys_[i];
            nv[j] = vals_[i];
            nu[j] = 1;
        }
        keys_ = std::move(nk);
        vals_ = std::move(nv);
        used_ = std::move(nu);
        mask_ = nmask;
    }

public:
    size_t size() const { return size_; }

    const V* find(const Bitset<W>& m) const {
        if (keys_.empty()) return nullptr;
        size_t j = m.hash() & mask_;
        while (used_[j]) {
            if (keys_[j] == m) return &vals_[j];
            j = (j + 1) & mask_;
        }
        return nullptr;
    }

    void put(const Bitset<W>& m, V v) {
        if (keys_.empty() || size_ * 10 >= keys_.size() * 7) grow();
        size_t j = m.hash() & mask_;
        while (used_[j]) {
            if (keys_[j] == m) { vals_[j] = v; return; }
            j = (j + 1) & mask_;
        }
        keys_[j] = m;
        vals_[j] = v;
        used_[j] = 1;
        ++size_;
    }
};

// Enumerate, over a sorted ascending unique array of masks, every entry that is
// a subset of `allowed`, invoking fn(index). Recursion splits on the highest
// bit where the current range differs; ranges whose common prefix already
// escapes `allowed` are pruned wholesale. Cost is near-linear in matches.
template <size_t W, typename F>
void for_each_subset(const std::vector<Bitset<W>>& sorted, size_t lo, size_t hi,
                     const Bitset<W>& allowed, F&& fn) {
    while (lo < hi) {
        const Bitset<W>& a = sorted[lo];
        const Bitset<W>& b = sorted[hi - 1];
        // highest differing bit between range ends; above it everything agrees
        size_t word = W, bit = 0;
        for (size_t i = W; i-- > 0;) {
            uint64_t x = a.w[i] ^ b.w[i];
            if (x) { word = i; bit = 63 - size_t(__builtin_clzll(x)); break; }
        }
        if (word == W) {
            // single distinct value
            if (a.subset_of(allowed)) fn(lo);
            return;
        }
        // prune if the shared prefix (strictly above the differing bit) leaks
        Bitset<W> pref = a;
        for (size_t i = 0; i < word; ++i) pref.w[i] = 0;
        pref.w[word] &= ~((bit == 63) ? ~uint64_t(0) >> 0 : ((uint64_t(1) << (bit + 1)) - 1));
        if (!pref.subset_of(allowed)) return;
        // split: first index whose differing bit is 1
        Bitset<W> pivot = pref;
        pivot.w[word] |= uint64_t(1) << bit;
        size_t mid = size_t(std::lower_bound(sorted.begin() + long(lo), sorted.begin() + long(hi), pivot)
                            - sorted.begin());
        for_each_subset(sorted, lo, mid, allowed, fn);
        if (allowed.test(64 * word + bit)) { lo = mid; continue; }
        return;
    }
}

template <size_t W, typename F>
void for_each_subset(const std::vector<Bitset<W>>& sorted, const Bitset<W>& allowed, F&& fn) {
    for_each_subset(sorted, 0, sorted.size(), allowed, std::forward<F>(fn));
}

} // namespace boxlogic
