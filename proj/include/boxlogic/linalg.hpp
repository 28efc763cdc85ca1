#pragma once

// Exact rational dense linear algebra: reduced row echelon form, rank,
// nullspace bases, and row-span membership tests. Everything here works on
// row-major std::vector<std::vector<Rational>> matrices and stays exact;
// nothing in the library touches floating point.

#include "rational.hpp"

#include <cstddef>
#include <vector>

namespace boxlogic {

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

struct RrefResult {
    size_t rank = 0;
    std::vector<size_t> pivot_cols; // one per nonzero row, ascending
};

// In-place reduced row echelon form over the first `cols` columns (pass
// cols < row width to keep trailing columns, e.g. an augmented rhs, as
// passengers that get transformed but never pivoted on).
inline RrefResult rref(RatMat& m, size_t cols) {
    RrefResult res;
    if (m.empty()) return res;
    size_t rows = m.size();
    size_t width = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        if (m[r][c] != 1) {
            Rational inv = m[r][c];
            for (size_t j = c; j < width; ++j) m[r][j] /= inv;
        }
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (size_t j = c; j < width; ++j) m[i][j] -= f * m[r][j];
        }
        res.pivot_cols.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

inline RrefResult rref(RatMat& m) {
    return rref(m, m.empty() ? 0 : m[0].size());
}

inline size_t matrix_rank(RatMat m) {
    return rref(m).rank;
}

// Reduce v against an already-RREF'd matrix; afterwards v is the canonical
// coset representative of v modulo the row span (zero iff v was in the span).
inline void reduce_against_rref(const RatMat& m, const RrefResult& rr, RatVec& v) {
    for (size_t i = 0; i < rr.rank; ++i) {
        size_t c = rr.pivot_cols[i];
        if (v[c] == 0) continue;
        Rational f = v[c];
        for (size_t j = 0; j < v.size(); ++j) v[j] -= f * m[i][j];
    }
}

inline bool in_rowspan(const RatMat& m, const RrefResult& rr, RatVec v) {
    reduce_against_rref(m, rr, v);
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

// Basis of { x : A x = 0 } read off an RREF of A: one vector per free column.
inline RatMat nullspace(const RatMat& rref_m, const RrefResult& rr, size_t cols) {
    std::vector<char> is_pivot(cols, 0);
    for (size_t c : rr.pivot_cols) is_pivot[c] = 1;
    RatMat basis;
    for (size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        RatVec v(cols, Rational(0));
        v[fc] = 1;
        for (size_t i = 0; i < rr.rank; ++i)
            v[rr.pivot_cols[i]] = -rref_m[i][fc];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace boxlogic
