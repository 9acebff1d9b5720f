#pragma once

// Dense two-phase primal simplex for small linear programs.
//
//   maximize    c . x
//   subject to  A_eq x  = b_eq
//               A_le x <= b_le
//               x >= 0
//
// Bland's rule is used for both entering and leaving variables, so degenerate
// problems (the norm for probability polytopes) terminate.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bellcheck::lp {

enum class Status { optimal, infeasible, unbounded };

struct Problem {
    std::size_t num_vars = 0;
    std::vector<double> objective;  // size num_vars, maximized
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> le_rows;
    std::vector<double> le_rhs;

    explicit Problem(std::size_t n = 0) : num_vars(n), objective(n, 0.0) {}

    void add_equality(std::vector<double> row, double rhs) {
        if (row.size() != num_vars) throw std::invalid_argument("lp: row width mismatch");
        eq_rows.push_back(std::move(row));
        eq_rhs.push_back(rhs);
    }
    void add_less_equal(std::vector<double> row, double rhs) {
        if (row.size() != num_vars) throw std::invalid_argument("lp: row width mismatch");
        le_rows.push_back(std::move(row));
        le_rhs.push_back(rhs);
    }
};

struct Solution {
    Status status = Status::infeasible;
    std::vector<double> x;
    double objective = 0.0;
    /// Sum of artificial variables left after phase one; zero when feasible.
    double infeasibility = 0.0;
};

struct Options {
    double pivot_tolerance = 1e-11;
    double feasibility_tolerance = 1e-9;
    std::size_t max_iterations = 100000;
};

namespace detail {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c < cols_; ++c) at(pr, c) /= p;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

// Runs simplex iterations on constraint rows [0, m) with the objective row m.
// The objective row stores reduced costs of a minimization; the last column
// is the right-hand side. Columns with allowed[c] == false never enter.
inline Status iterate(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& allowed,
                      const Options& opt) {
    const std::size_t m = basis.size();
    const std::size_t rhs = t.cols() - 1;
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        std::size_t enter = rhs;
        for (std::size_t c = 0; c < rhs; ++c) {
            if (allowed[c] && t.at(m, c) < -opt.pivot_tolerance) {
                enter = c;
                break;
            }
        }
        if (enter == rhs) return Status::optimal;

        std::size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            const double a = t.at(r, enter);
            if (a > opt.pivot_tolerance) {
                const double ratio = t.at(r, rhs) / a;
                if (ratio < best - 1e-14 ||
                    (std::abs(ratio - best) <= 1e-14 && basis[r] < basis[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
        }
        if (leave == m) return Status::unbounded;
        t.pivot(leave, enter);
        basis[leave] = enter;
    }
    throw std::runtime_error("lp: iteration limit reached");
}

}  // namespace detail

inline Solution solve(const Problem& p, const Options& opt = {}) {
    const std::size_t n = p.num_vars;
    const std::size_t m_eq = p.eq_rows.size();
    const std::size_t m_le = p.le_rows.size();
    const std::size_t m = m_eq + m_le;
    if (p.objective.size() != n) throw std::invalid_argument("lp: objective width mismatch");

    // Columns: structural [0,n), slacks [n, n+m_le), artificials [n+m_le, n+m_le+m), rhs.
    const std::size_t first_art = n + m_le;
    const std::size_t total = first_art + m;
    detail::Tableau t(m + 1, total + 1);
    std::vector<std::size_t> basis(m);

    for (std::size_t r = 0; r < m; ++r) {
        const bool is_eq = r < m_eq;
        const auto& row = is_eq ? p.eq_rows[r] : p.le_rows[r - m_eq];
        double b = is_eq ? p.eq_rhs[r] : p.le_rhs[r - m_eq];
        const double sign = b < 0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign * row[c];
        if (!is_eq) t.at(r, n + (r - m_eq)) = sign;
        t.at(r, first_art + r) = 1.0;
        t.at(r, total) = sign * b;
        basis[r] = first_art + r;
    }

    // Phase one: minimize the sum of artificials.
    for (std::size_t c = 0; c <= total; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r) s += t.at(r, c);
        t.at(m, c) = (c >= first_art && c < total) ? 0.0 : -s;
    }
    std::vector<bool> allowed(total, true);
    if (detail::iterate(t, basis, allowed, opt) != Status::optimal)
        throw std::runtime_error("lp: phase one did not terminate at an optimum");

    Solution sol;
    sol.infeasibility = -t.at(m, total);
    double scale = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
        const double b = r < m_eq ? p.eq_rhs[r] : p.le_rhs[r - m_eq];
        scale = std::max(scale, std::abs(b));
    }
    if (sol.infeasibility > opt.feasibility_tolerance * scale) {
        sol.status = Status::infeasible;
        return sol;
    }

    // Drive remaining (zero-valued) artificials out of the basis; rows where
    // that is impossible are redundant and are dropped from further pivots.
    std::vector<bool> keep(m, true);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < first_art) continue;
        std::size_t col = first_art;
        for (std::size_t c = 0; c < first_art; ++c) {
            if (std::abs(t.at(r, c)) > 1e-9) {
                col = c;
                break;
            }
        }
        if (col == first_art) {
            keep[r] = false;
        } else {
            t.pivot(r, col);
            basis[r] = col;
        }
    }

    // Phase two on the reduced tableau.
    std::size_t m2 = 0;
    for (bool k : keep) m2 += k ? 1 : 0;
    detail::Tableau t2(m2 + 1, first_art + 1);
    std::vector<std::size_t> basis2;
    basis2.reserve(m2);
    for (std::size_t r = 0, r2 = 0; r < m; ++r) {
        if (!keep[r]) continue;
        for (std::size_t c = 0; c < first_art; ++c) t2.at(r2, c) = t.at(r, c);
        t2.at(r2, first_art) = std::max(0.0, t.at(r, total));
        basis2.push_back(basis[r]);
        ++r2;
    }
    // Objective row: reduced costs for minimizing -c.x.
    for (std::size_t c = 0; c < n; ++c) t2.at(m2, c) = -p.objective[c];
    for (std::size_t r = 0; r < m2; ++r) {
        const std::size_t bc = basis2[r];
        const double cost = bc < n ? -p.objective[bc] : 0.0;
        if (cost == 0.0) continue;
        for (std::size_t c = 0; c <= first_art; ++c) t2.at(m2, c) -= cost * t2.at(r, c);
    }
    std::vector<bool> allowed2(first_art, true);
    const Status st = detail::iterate(t2, basis2, allowed2, opt);
    if (st == Status::unbounded) {
        sol.status = Status::unbounded;
        return sol;
    }

    sol.status = Status::optimal;
    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m2; ++r) {
        if (basis2[r] < n) sol.x[basis2[r]] = t2.at(r, first_art);
    }
    double obj = 0.0;
    for (std::size_t c = 0; c < n; ++c) obj += p.objective[c] * sol.x[c];
    sol.objective = obj;
    return sol;
}

}  // namespace bellcheck::lp
