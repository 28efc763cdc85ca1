#pragma once

// Exact two-phase primal simplex over the rationals for problems in standard
// equality form:  maximize c.x  subject to  A x = b,  x >= 0.
//
// Pivot selection uses Bland's rule in both phases (lowest eligible entering
// column, ties in the ratio test broken by lowest basic variable index), so
// the run is deterministic and cannot cycle. Phase 1 introduces one
// artificial variable per row and minimizes their sum; artificials that are
// still basic at a zero level afterwards are pivoted out on an original
// column when possible, otherwise their row is redundant and is dropped.

#include "rational.hpp"
#include "linalg.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace boxlogic {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    Rational value;   // optimum of c.x (meaningful for Optimal)
    RatVec x;         // an optimal vertex (meaningful for Optimal)
    size_t iterations = 0;
};

namespace detail_lp {

struct Tableau {
    size_t ncols = 0;              // structural columns (rhs lives at T[i][ncols])
    RatMat T;                      // one row per constraint
    RatVec z;                      // reduced-cost row, width ncols+1
    std::vector<size_t> basis;     // basic variable per row
    size_t iterations = 0;

    void pivot(size_t r, size_t col) {
        RatVec& pr = T[r];
        if (pr[col] != 1) {
            Rational inv = pr[col];
            for (auto& v : pr) v /= inv;
        }
        for (size_t i = 0; i < T.size(); ++i) {
            if (i == r || T[i][col] == 0) continue;
            Rational f = T[i][col];
            for (size_t j = 0; j <= ncols; ++j) T[i][j] -= f * pr[j];
        }
        if (z[col] != 0) {
            Rational f = z[col];
            for (size_t j = 0; j <= ncols; ++j) z[j] -= f * pr[j];
        }
        basis[r] = col;
        ++iterations;
    }

    // Bland step for the current minimization objective in z. Returns
    // Optimal when no reduced cost is negative, Unbounded when an improving
    // column has no positive entry. `col_limit` restricts entering columns
    // (phase 2 must not re-enter artificial columns).
    LpStatus run(size_t col_limit, size_t iter_cap) {
        for (;;) {
            size_t enter = col_limit;
            for (size_t j = 0; j < col_limit; ++j) {
                if (z[j] < 0) { enter = j; break; }
            }
            if (enter == col_limit) return LpStatus::Optimal;
            size_t leave = T.size();
            Rational best;
            for (size_t i = 0; i < T.size(); ++i) {
                if (T[i][enter] <= 0) continue;
                Rational ratio = T[i][ncols] / T[i][enter];
                if (leave == T.size() || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == T.size()) return LpStatus::Unbounded;
            pivot(leave, enter);
            if (iterations > iter_cap)
                throw std::runtime_error("simplex iteration cap exceeded");
        }
    }
};

} // namespace detail_lp

inline LpResult lp_maximize(const RatMat& A, const RatVec& b, const RatVec& c,
                            size_t iter_cap = 1000000) {
    size_t m = A.size();
    size_t n = c.size();
    detail_lp::Tableau tab;
    tab.ncols = n + m;
    tab.T.assign(m, RatVec(tab.ncols + 1, Rational(0)));
    tab.basis.resize(m);
    for (size_t i = 0; i < m; ++i) {
        bool flip = b[i] < 0;
        for (size_t j = 0; j < n; ++j) tab.T[i][j] = flip ? -A[i][j] : A[i][j];
        tab.T[i][tab.ncols] = flip ? -b[i] : b[i];
        tab.T[i][n + i] = 1;
        tab.basis[i] = n + i;
    }

    // phase 1: minimize the sum of artificials, all of which start basic
    tab.z.assign(tab.ncols + 1, Rational(0));
    for (size_t j = 0; j <= tab.ncols; ++j) {
        Rational s = 0;
        for (size_t i = 0; i < m; ++i) s += tab.T[i][j];
        if (j < n) tab.z[j] = -s;
        else if (j < tab.ncols) tab.z[j] = Rational(1) - s;
        else tab.z[j] = -s;
    }
    LpStatus st = tab.run(tab.ncols, iter_cap);
    if (st == LpStatus::Unbounded)
        throw std::runtime_error("phase 1 unbounded: impossible");
    Rational art_sum = -tab.z[tab.ncols];
    LpResult res;
    res.iterations = tab.iterations;
    if (art_sum != 0) {
        res.status = LpStatus::Infeasible;
        return res;
    }

    // drive remaining artificials out of the basis; a row with no pivotable
    // original column is a redundant constraint and goes away entirely
    for (size_t i = tab.T.size(); i-- > 0;) {
        if (tab.basis[i] < n) continue;
        size_t col = n;
        for (size_t j = 0; j < n; ++j) {
            if (tab.T[i][j] != 0) { col = j; break; }
        }
        if (col < n) {
            tab.pivot(i, col);
        } else {
            tab.T.erase(tab.T.begin() + static_cast<ptrdiff_t>(i));
            tab.basis.erase(tab.basis.begin() + static_cast<ptrdiff_t>(i));
        }
    }

    // strip artificial columns and rebuild the cost row for minimize(-c)
    for (auto& row : tab.T) {
        row[n] = row[tab.ncols];
        row.resize(n + 1);
    }
    tab.ncols = n;
    tab.z.assign(n + 1, Rational(0));
    for (size_t j = 0; j < n; ++j) tab.z[j] = -c[j];
    for (size_t i = 0; i < tab.T.size(); ++i) {
        Rational cb = -c[tab.basis[i]];
        if (cb == 0) continue;
        for (size_t j = 0; j <= n; ++j) tab.z[j] -= cb * tab.T[i][j];
    }
    // the invariant run() preserves: z holds reduced costs with zeros on
    // basic columns, so clear them explicitly (exact zeros already, but the
    // loop above only guarantees that up to the basis being consistent)
    for (size_t i = 0; i < tab.T.size(); ++i) tab.z[tab.basis[i]] = 0;

    st = tab.run(n, iter_cap);
    res.iterations = tab.iterations;
    if (st == LpStatus::Unbounded) {
        res.status = LpStatus::Unbounded;
        return res;
    }
    res.status = LpStatus::Optimal;
    res.x.assign(n, Rational(0));
    for (size_t i = 0; i < tab.T.size(); ++i) res.x[tab.basis[i]] = tab.T[i][n];
    Rational val = 0;
    for (size_t j = 0; j < n; ++j) val += c[j] * res.x[j];
    res.value = val;
    return res;
}

} // namespace boxlogic
