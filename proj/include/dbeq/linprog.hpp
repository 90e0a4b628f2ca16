#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "dbeq/errors.hpp"

namespace dbeq {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> x;
};

/**
 * Dense two-phase simplex for   max c.x  s.t.  A x <= b,  x >= 0.
 *
 * Tableau layout and pivoting follow the classic competitive-programming
 * formulation; ties are broken by (ratio, index) pairs, which is Bland-like
 * and has been robust on the small, well-scaled programs this library
 * produces (tens of rows). Equality rows are encoded by callers as two
 * opposing inequalities, free variables as differences of two nonnegative
 * ones.
 */
class SimplexSolver {
public:
    SimplexSolver(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                  const std::vector<double>& c)
        : m_(b.size()), n_(c.size()), basis_out_(n_ + 1), basis_in_(m_),
          tab_(m_ + 2, std::vector<double>(n_ + 2)) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (A[i].size() != n_) throw shape_error("lp row length mismatch");
            for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = A[i][j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            basis_in_[i] = int(n_ + i);
            tab_[i][n_] = -1.0;
            tab_[i][n_ + 1] = b[i];
        }
        for (std::size_t j = 0; j < n_; ++j) {
            basis_out_[j] = int(j);
            tab_[m_][j] = -c[j];
        }
        basis_out_[n_] = -1;
        tab_[m_ + 1][n_] = 1.0;
    }

    LpResult solve() {
        LpResult res;
        // start from the most infeasible row, if any
        std::size_t r = 0;
        for (std::size_t i = 1; i < m_; ++i)
            if (tab_[i][n_ + 1] < tab_[r][n_ + 1]) r = i;
        if (m_ > 0 && tab_[r][n_ + 1] < -kEps) {
            pivot(r, n_);
            if (!simplex(2) || tab_[m_ + 1][n_ + 1] < -kEps) {
                res.status = LpStatus::Infeasible;
                return res;
            }
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_in_[i] == -1) {
                    std::size_t s = 0;
                    for (std::size_t j = 1; j <= n_; ++j)
                        if (better(i, j, s)) s = j;
                    pivot(i, s);
                }
        }
        bool bounded = simplex(1);
        res.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_in_[i] >= 0 && basis_in_[i] < int(n_)) res.x[basis_in_[i]] = tab_[i][n_ + 1];
        if (!bounded) {
            res.status = LpStatus::Unbounded;
            return res;
        }
        res.status = LpStatus::Optimal;
        res.value = tab_[m_][n_ + 1];
        return res;
    }

private:
    static constexpr double kEps = 1e-10;

    bool better(std::size_t row, std::size_t j, std::size_t s) const {
        return std::pair(tab_[row][j], basis_out_[j]) < std::pair(tab_[row][s], basis_out_[s]);
    }

    void pivot(std::size_t r, std::size_t s) {
        double* a = tab_[r].data();
        double inv = 1.0 / a[s];
        for (std::size_t i = 0; i < m_ + 2; ++i) {
            if (i == r || std::abs(tab_[i][s]) <= kEps) continue;
            double f = tab_[i][s] * inv;
            for (std::size_t j = 0; j <= n_ + 1; ++j) tab_[i][j] -= f * a[j];
            tab_[i][s] = -f;  // column of the leaving variable
        }
        for (std::size_t j = 0; j <= n_ + 1; ++j)
            if (j != s) tab_[r][j] *= inv;
        tab_[r][s] = inv;
        std::swap(basis_in_[r], basis_out_[s]);
    }

    bool simplex(int phase) {
        const std::size_t obj = m_ + std::size_t(phase) - 1;
        for (;;) {
            std::size_t s = n_ + 2;
            for (std::size_t j = 0; j <= n_; ++j) {
                if (basis_out_[j] == -phase) continue;
                if (s == n_ + 2 || better(obj, j, s)) s = j;
            }
            if (s == n_ + 2 || tab_[obj][s] >= -kEps) return true;
            std::size_t r = m_;
            for (std::size_t i = 0; i < m_; ++i) {
                if (tab_[i][s] <= kEps) continue;
                if (r == m_ ||
                    std::pair(tab_[i][n_ + 1] / tab_[i][s], basis_in_[i]) <
                        std::pair(tab_[r][n_ + 1] / tab_[r][s], basis_in_[r]))
                    r = i;
            }
            if (r == m_) return false;  // unbounded
            pivot(r, s);
        }
    }

    std::size_t m_, n_;
    std::vector<int> basis_out_, basis_in_;
    std::vector<std::vector<double>> tab_;
};

inline LpResult lp_maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                            const std::vector<double>& c) {
    if (A.size() != b.size()) throw shape_error("lp needs one rhs entry per row");
    return SimplexSolver(A, b, c).solve();
}

// Incremental row assembly for the cut-generation loops.
struct LpRows {
    std::vector<std::vector<double>> A;
    std::vector<double> b;

    void add(std::vector<double> row, double rhs) {
        A.push_back(std::move(row));
        b.push_back(rhs);
    }

    // lhs . x == rhs as two opposing inequalities
    void add_equality(const std::vector<double>& row, double rhs) {
        A.push_back(row);
        b.push_back(rhs);
        std::vector<double> neg(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) neg[j] = -row[j];
        A.push_back(std::move(neg));
        b.push_back(-rhs);
    }
};

} // namespace dbeq
