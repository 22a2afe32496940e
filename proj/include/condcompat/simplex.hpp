#pragma once

#include "condcompat/conditional.hpp"
#include "condcompat/matrix.hpp"
#include "condcompat/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace condcompat {

class Malformed : public Error {
  public:
    using Error::Error;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

/**
 * Maximize objective . x subject to equalities . x = rhs, x >= 0, and
 * (when present) x_i <= upper_bounds[i] for every variable. Upper bounds are
 * turned into explicit slack rows by the solver.
 */
struct LPProblem {
    std::vector<Rational> objective;
    RatMatrix equalities;
    std::vector<Rational> rhs;
    std::optional<std::vector<Rational>> upper_bounds;

    void validate() const {
        if (objective.size() != equalities.cols())
            throw Malformed("objective length " + std::to_string(objective.size()) +
                            " does not match " + std::to_string(equalities.cols()) +
                            " variables");
        if (rhs.size() != equalities.rows())
            throw Malformed("rhs length " + std::to_string(rhs.size()) + " does not match " +
                            std::to_string(equalities.rows()) + " constraint rows");
        if (upper_bounds && upper_bounds->size() != objective.size())
            throw Malformed("upper bound list length does not match variable count");
    }
};

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    Rational optimum = 0;
    std::vector<Rational> solution;
    std::size_t iterations = 0;
};

/** Exact feasibility re-check of an Optimal result by direct substitution. */
inline bool check_feasible(const LPProblem& p, const std::vector<Rational>& x) {
    if (x.size() != p.objective.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0) return false;
        if (p.upper_bounds && x[i] > (*p.upper_bounds)[i]) return false;
    }
    for (std::size_t r = 0; r < p.equalities.rows(); ++r) {
        Rational acc = 0;
        for (std::size_t c = 0; c < p.equalities.cols(); ++c) {
            if (p.equalities(r, c) == 0) continue;
            acc += p.equalities(r, c) * x[c];
        }
        if (acc != p.rhs[r]) return false;
    }
    return true;
}

namespace detail {

/** Dense simplex tableau. Row 0 carries the reduced-cost row (c_j - z_j, so a
 *  positive entry means an improving column for maximization); the last column
 *  is the right-hand side. */
class Tableau {
  public:
    Tableau(std::size_t rows, std::size_t cols) : cols_(cols), data_((rows + 1) * (cols + 1)) {
        basis_.resize(rows, SIZE_MAX);
    }

    std::size_t constraint_rows() const { return basis_.size(); }
    std::size_t var_count() const { return cols_; }

    Rational& at(std::size_t row, std::size_t col) { return data_[row * (cols_ + 1) + col]; }
    const Rational& at(std::size_t row, std::size_t col) const {
        return data_[row * (cols_ + 1) + col];
    }
    Rational& rhs(std::size_t row) { return at(row, cols_); }
    const Rational& rhs(std::size_t row) const { return at(row, cols_); }

    std::size_t& basis(std::size_t row) { return basis_[row]; }

    /** Pivots on constraint row `r` (1-based within the tableau) and column
     *  `c`, making variable c basic in that row. */
    void pivot(std::size_t r, std::size_t c) {
        const Rational inv = Rational(1) / at(r, c);
        if (inv != 1)
            for (std::size_t j = 0; j <= cols_; ++j)
                if (at(r, j) != 0) at(r, j) *= inv;
        at(r, c) = 1;
        for (std::size_t i = 0; i <= constraint_rows(); ++i) {
            if (i == r) continue;
            const Rational factor = at(i, c);
            if (factor == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (at(r, j) == 0) continue;
                at(i, j) -= factor * at(r, j);
            }
            at(i, c) = 0;
        }
        basis_[r - 1] = c;
    }

    /** Installs the reduced-cost row for objective `c` given the current
     *  basis (whose columns must be unit columns). */
    void install_objective(const std::vector<Rational>& c) {
        for (std::size_t j = 0; j < cols_; ++j) at(0, j) = j < c.size() ? c[j] : Rational(0);
        rhs(0) = 0;
        for (std::size_t r = 1; r <= constraint_rows(); ++r) {
            const std::size_t var = basis_[r - 1];
            const Rational cost = var < c.size() ? c[var] : Rational(0);
            if (cost == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (at(r, j) == 0) continue;
                at(0, j) -= cost * at(r, j);
            }
        }
    }

    /** Bland's rule iteration loop. Returns false when the problem is
     *  unbounded in the current objective. */
    bool run_simplex(std::size_t max_vars, std::size_t& iterations) {
        for (;;) {
            std::size_t entering = SIZE_MAX;
            for (std::size_t j = 0; j < max_vars; ++j)
                if (at(0, j) > 0) {
                    entering = j;
                    break;
                }
            if (entering == SIZE_MAX) return true;

            std::size_t leaving = SIZE_MAX;
            Rational best_ratio = 0;
            for (std::size_t r = 1; r <= constraint_rows(); ++r) {
                if (at(r, entering) <= 0) continue;
                Rational ratio = rhs(r) / at(r, entering);
                if (leaving == SIZE_MAX || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[r - 1] < basis_[leaving - 1])) {
                    leaving = r;
                    best_ratio = ratio;
                }
            }
            if (leaving == SIZE_MAX) return false;
            pivot(leaving, entering);
            ++iterations;
        }
    }

  private:
    std::size_t cols_;
    std::vector<Rational> data_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

/**
 * Exact two-phase simplex with Bland's anti-cycling rule. Equality rows that
 * lack an obvious basic column receive artificial variables; phase 1 drives
 * the artificial mass to zero or proves infeasibility, phase 2 maximizes the
 * stated objective. Every returned Optimal solution satisfies the constraints
 * exactly.
 */
inline LPResult solve(const LPProblem& problem) {
    problem.validate();
    const std::size_t n = problem.objective.size();
    const std::size_t m = problem.equalities.rows();
    const std::size_t n_bounds = problem.upper_bounds ? n : 0;
    const std::size_t rows = m + n_bounds;
    const std::size_t structural = n + n_bounds;  // decision vars + bound slacks

    // Constraint block with normalized (nonnegative) right-hand sides.
    RatMatrix body(rows, structural);
    std::vector<Rational> rhs(rows);
    for (std::size_t r = 0; r < m; ++r) {
        bool flip = problem.rhs[r] < 0;
        rhs[r] = flip ? -problem.rhs[r] : problem.rhs[r];
        for (std::size_t c = 0; c < n; ++c)
            body(r, c) = flip ? -problem.equalities(r, c) : problem.equalities(r, c);
    }
    for (std::size_t i = 0; i < n_bounds; ++i) {
        const Rational& u = (*problem.upper_bounds)[i];
        bool flip = u < 0;
        rhs[m + i] = flip ? -u : u;
        body(m + i, i) = flip ? -1 : 1;
        body(m + i, n + i) = flip ? -1 : 1;
    }

    // Crash basis: a column usable as the initial basic variable of row r is
    // positive there and zero in every other row.
    std::vector<std::size_t> row_basic(rows, SIZE_MAX);
    {
        std::vector<std::size_t> nonzeros(structural, 0), owner(structural, 0);
        std::vector<bool> negative(structural, false);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < structural; ++c) {
                if (body(r, c) == 0) continue;
                ++nonzeros[c];
                owner[c] = r;
                if (body(r, c) < 0) negative[c] = true;
            }
        for (std::size_t c = 0; c < structural; ++c)
            if (nonzeros[c] == 1 && !negative[c] && row_basic[owner[c]] == SIZE_MAX)
                row_basic[owner[c]] = c;
    }

    // Rows with a zero right-hand side and no crash column can be made basic
    // by pivoting directly: the entering variable comes in at value 0, so
    // feasibility of the other rows is untouched and no artificial variable
    // is needed. Only nonzero-rhs rows fall back to artificials.
    std::size_t artificials = 0;
    std::vector<bool> needs_artificial(rows, false);
    for (std::size_t r = 0; r < rows; ++r)
        if (row_basic[r] == SIZE_MAX && rhs[r] != 0) {
            needs_artificial[r] = true;
            ++artificials;
        }

    const std::size_t total = structural + artificials;
    detail::Tableau tab(rows, total);
    LPResult result;
    {
        std::size_t next_artificial = structural;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < structural; ++c) tab.at(r + 1, c) = body(r, c);
            tab.rhs(r + 1) = rhs[r];
            std::size_t basic = row_basic[r];
            if (basic == SIZE_MAX) {
                if (needs_artificial[r]) {
                    basic = next_artificial++;
                    tab.at(r + 1, basic) = 1;
                }
            } else if (tab.at(r + 1, basic) != 1) {
                const Rational inv = Rational(1) / tab.at(r + 1, basic);
                for (std::size_t j = 0; j <= total; ++j)
                    if (tab.at(r + 1, j) != 0) tab.at(r + 1, j) *= inv;
            }
            tab.basis(r) = basic;
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (tab.basis(r) != SIZE_MAX) continue;
            std::size_t best = SIZE_MAX, best_score = 0;
            for (std::size_t c = 0; c < structural; ++c) {
                if (tab.at(r + 1, c) == 0) continue;
                std::size_t score = bit_length_score(tab.at(r + 1, c));
                if (best == SIZE_MAX || score < best_score) {
                    best = c;
                    best_score = score;
                }
            }
            if (best == SIZE_MAX) continue;  // row reduced to 0 = 0: inert
            tab.pivot(r + 1, best);
            ++result.iterations;
        }
    }

    if (artificials > 0) {
        std::vector<Rational> phase1(total);
        for (std::size_t j = structural; j < total; ++j) phase1[j] = -1;
        tab.install_objective(phase1);
        tab.run_simplex(total, result.iterations);  // bounded below by 0, never unbounded
        if (tab.rhs(0) != 0) {                      // -objective value; nonzero => infeasible
            result.status = LPStatus::Infeasible;
            return result;
        }
        // Pivot remaining artificials out of the basis; rows with no
        // structural coefficient left are redundant and harmless.
        for (std::size_t r = 1; r <= rows; ++r) {
            if (tab.basis(r - 1) < structural) continue;
            for (std::size_t c = 0; c < structural; ++c)
                if (tab.at(r, c) != 0) {
                    tab.pivot(r, c);
                    ++result.iterations;
                    break;
                }
        }
    }

    std::vector<Rational> phase2(total);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = problem.objective[j];
    tab.install_objective(phase2);
    // Artificial columns stay out of the basis: restrict entering candidates
    // to structural columns.
    if (!tab.run_simplex(structural, result.iterations)) {
        result.status = LPStatus::Unbounded;
        return result;
    }

    result.status = LPStatus::Optimal;
    result.solution.assign(n, Rational(0));
    for (std::size_t r = 1; r <= rows; ++r) {
        const std::size_t var = tab.basis(r - 1);
        if (var < n) result.solution[var] = tab.rhs(r);
    }
    result.optimum = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (result.solution[j] != 0) result.optimum += problem.objective[j] * result.solution[j];
    return result;
}

namespace detail {

/** max sum(y) s.t. (rref rows of D) y = 0, y >= 0, sum(y) <= 1, with the sum
 *  constraint carried by an explicit slack variable. */
inline LPResult marginal_lp(const RrefResult& rrD, std::size_t I) {
    const std::size_t r = rrD.pivot_columns.size();
    RatMatrix eq(r + 1, I + 1);
    std::vector<Rational> rhs(r + 1);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t c = 0; c < I; ++c) eq(k, c) = rrD.reduced(k, c);
    for (std::size_t c = 0; c <= I; ++c) eq(r, c) = 1;
    rhs[r] = 1;

    std::vector<Rational> objective(I + 1);
    for (std::size_t c = 0; c < I; ++c) objective[c] = 1;

    LPResult res = solve({std::move(objective), std::move(eq), std::move(rhs), std::nullopt});
    if (res.status == LPStatus::Optimal) res.solution.resize(I);
    return res;
}

inline LPResult joint_lp_for(RatMatrix c) {
    const std::size_t cells = c.cols();
    std::vector<Rational> rhs(cells);
    std::vector<Rational> objective(cells, Rational(1));
    std::vector<Rational> bounds(cells, Rational(1));
    return solve({std::move(objective), std::move(c), std::move(rhs), std::move(bounds)});
}

}  // namespace detail

/**
 * The marginal-space LP: maximize sum(y) subject to D_r y = 0 (the nonzero
 * rows of rref(D)), y >= 0 and sum(y) <= 1. A positive optimum scales to a
 * candidate marginal of X; a zero optimum refutes compatibility.
 */
inline LPResult eta_lp(const ConditionalPair& pair) {
    return detail::marginal_lp(rref(build_D(pair)), pair.I());
}

/**
 * The joint-space LP of Theorem 2: maximize sum(p) subject to C p = 0 and
 * 0 <= p_ij <= 1. Always Optimal (p = 0 is feasible); the optimum is positive
 * exactly when the pair is compatible.
 */
inline LPResult joint_lp(const ConditionalPair& pair) {
    return detail::joint_lp_for(build_C(pair));
}

}  // namespace condcompat
