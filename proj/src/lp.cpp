#include "fairdiv/lp.hpp"

#include <cstddef>

namespace fairdiv {

namespace {

// Dense simplex tableau: rows of [coefficients | rhs], an objective row of
// [reduced costs | value], and the basis column index per row.
struct Tableau {
    std::vector<std::vector<Rational>> row;  // m x (n+1)
    std::vector<Rational> z;                 // n+1
    std::vector<std::size_t> basis;
    std::size_t n = 0;

    void pivot(std::size_t r, std::size_t col) {
        Rational piv = row[r][col];
        for (auto& v : row[r]) v /= piv;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i == r || row[i][col] == 0) continue;
            Rational f = row[i][col];
            for (std::size_t j = 0; j <= n; ++j) row[i][j] -= f * row[r][j];
        }
        if (z[col] != 0) {
            Rational f = z[col];
            for (std::size_t j = 0; j <= n; ++j) z[j] -= f * row[r][j];
        }
        basis[r] = col;
    }

    // Bland: entering = least-index column with positive reduced cost;
    // leaving = least ratio, ties to least basis index.  Returns false when
    // optimal, throws on unbounded.
    bool step() {
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j)
            if (z[j] > 0) {
                col = j;
                break;
            }
        if (col == n) return false;
        std::size_t leave = row.size();
        Rational best;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i][col] <= 0) continue;
            Rational ratio = row[i][n] / row[i][col];
            if (leave == row.size() || ratio < best ||
                (ratio == best && basis[i] < basis[leave]))
                leave = i, best = ratio;
        }
        if (leave == row.size()) throw CapExceeded("lp-unbounded");
        pivot(leave, col);
        return true;
    }

    void run() {
        while (step()) {}
    }
};

}  // namespace

LpResult solve_lp_eq(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                     const std::vector<Rational>& c) {
    std::size_t m = A.size(), n = c.size();
    Tableau t;
    t.n = n + m;  // original variables + phase-1 artificials
    t.basis.resize(m);
    t.row.assign(m, std::vector<Rational>(t.n + 1, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        int sgn = b[i] < 0 ? -1 : 1;  // keep rhs non-negative
        for (std::size_t j = 0; j < n; ++j) t.row[i][j] = A[i][j] * sgn;
        t.row[i][n + i] = 1;
        t.row[i][t.n] = b[i] * sgn;
        t.basis[i] = n + i;
    }

    // Phase 1: maximize -(sum of artificials).
    t.z.assign(t.n + 1, Rational(0));
    for (std::size_t i = 0; i < m; ++i) t.z[n + i] = -1;
    for (std::size_t i = 0; i < m; ++i)  // cancel reduced costs of the basis
        for (std::size_t j = 0; j <= t.n; ++j) t.z[j] += t.row[i][j];
    t.run();
    if (t.z[t.n] != 0) return {LpResult::Status::infeasible, Rational(0), {}};

    // Pivot lingering artificials out of the basis (or drop redundant rows).
    for (std::size_t i = 0; i < t.row.size();) {
        if (t.basis[i] < n) {
            ++i;
            continue;
        }
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j)
            if (t.row[i][j] != 0) {
                col = j;
                break;
            }
        if (col < n) {
            t.pivot(i, col);
            ++i;
        } else {
            t.row.erase(t.row.begin() + i);
            t.basis.erase(t.basis.begin() + i);
        }
    }

    // Drop the artificial columns entirely (the basis is now artificial-free).
    for (auto& r : t.row) r.erase(r.begin() + n, r.begin() + t.n);
    t.n = n;

    // Phase 2 on the original objective.
    t.z.assign(n + 1, Rational(0));
    for (std::size_t j = 0; j < n; ++j) t.z[j] = c[j];
    for (std::size_t i = 0; i < t.row.size(); ++i) {
        if (t.z[t.basis[i]] == 0) continue;
        Rational f = t.z[t.basis[i]];
        for (std::size_t j = 0; j <= n; ++j) t.z[j] -= f * t.row[i][j];
    }
    try {
        t.run();
    } catch (const CapExceeded&) {
        return {LpResult::Status::unbounded, Rational(0), {}};
    }

    LpResult res;
    res.status = LpResult::Status::optimal;
    res.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < t.row.size(); ++i)
        if (t.basis[i] < n) res.x[t.basis[i]] = t.row[i][n];
    Rational obj(0);
    for (std::size_t j = 0; j < n; ++j) obj += c[j] * res.x[j];
    res.objective = obj;
    return res;
}

namespace {

// Solves the square rational system M y = rhs by Gaussian elimination;
// returns false when singular.
bool solve_square(std::vector<std::vector<Rational>> M, std::vector<Rational> rhs,
                  std::vector<Rational>& y) {
    std::size_t k = M.size();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        while (piv < k && M[piv][col] == 0) ++piv;
        if (piv == k) return false;
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        Rational d = M[col][col];
        for (auto& v : M[col]) v /= d;
        rhs[col] /= d;
        for (std::size_t i = 0; i < k; ++i) {
            if (i == col || M[i][col] == 0) continue;
            Rational f = M[i][col];
            for (std::size_t j = col; j < k; ++j) M[i][j] -= f * M[col][j];
            rhs[i] -= f * rhs[col];
        }
    }
    y = rhs;
    return true;
}

}  // namespace

std::size_t for_each_vertex(const std::vector<std::vector<Rational>>& A,
                            const std::vector<Rational>& b,
                            const std::function<void(const std::vector<Rational>&)>& visit) {
    std::size_t m = A.size(), n = A.empty() ? 0 : A[0].size();
    std::vector<std::size_t> pick(m);
    for (std::size_t i = 0; i < m; ++i) pick[i] = i;
    std::size_t count = 0;
    std::vector<Rational> x(n), y;
    while (true) {
        std::vector<std::vector<Rational>> M(m, std::vector<Rational>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) M[i][j] = A[i][pick[j]];
        if (solve_square(std::move(M), b, y)) {
            bool feasible = true;
            for (const auto& v : y)
                if (v < 0) {
                    feasible = false;
                    break;
                }
            if (feasible) {
                std::fill(x.begin(), x.end(), Rational(0));
                for (std::size_t j = 0; j < m; ++j) x[pick[j]] = y[j];
                visit(x);
                ++count;
            }
        }
        // next m-combination of {0..n-1}
        std::size_t i = m;
        while (i > 0) {
            --i;
            if (pick[i] + (m - i) < n) {
                ++pick[i];
                for (std::size_t j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
                break;
            }
            if (i == 0) return count;
        }
        if (m == 0) return count;
    }
}

}  // namespace fairdiv
