#pragma once

// Test-facing verification machinery. Everything here deliberately avoids the
// engine's linear algebra and LP code paths: systems are integerized and
// reduced with fraction-free Bareiss elimination, small solves go through
// Cramer's rule, and feasibility questions are settled by exhaustive vertex
// enumeration at oracle scale. Only the scalar types are shared.

#include "condcompat/conditional.hpp"
#include "condcompat/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace condcompat {

class InfeasiblePattern : public Error {
  public:
    using Error::Error;
};
class ScaleExceeded : public Error {
  public:
    using Error::Error;
};
class StochasticityViolated : public Error {
  public:
    using Error::Error;
};

/** Deterministic random-instance description. `zero_pattern[i*J + j]` forces
 *  cell (i, j) to zero; every row and column must keep an unmasked cell.
 *  Generated entries are fractions over a total mass of at most
 *  `denominator_bound`. */
struct InstanceSpec {
    std::size_t I = 2;
    std::size_t J = 2;
    std::optional<std::vector<bool>> zero_pattern;
    std::uint64_t seed = 0;
    std::uint64_t denominator_bound = 120;
};

struct BruteForceResult {
    bool compatible = false;
    std::vector<std::vector<Rational>> witnesses;  // polytope vertices, sorted
};

namespace oracle_detail {

using IntMatrix = std::vector<std::vector<BigInt>>;
using RatGrid = std::vector<std::vector<Rational>>;

/** Fraction-free Bareiss elimination to row echelon form, in place.
 *  Returns the pivot columns. */
inline std::vector<std::size_t> bareiss_echelon(IntMatrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size(), cols = m[0].size();
    BigInt prev = 1;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < cols && lead < rows; ++col) {
        std::size_t pr = lead;
        while (pr < rows && m[pr][col] == 0) ++pr;
        if (pr == rows) continue;
        if (pr != lead) std::swap(m[pr], m[lead]);
        for (std::size_t i = lead + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                m[i][j] = (m[lead][col] * m[i][j] - m[i][col] * m[lead][j]) / prev;
            m[i][col] = 0;
        }
        prev = m[lead][col];
        pivots.push_back(col);
        ++lead;
    }
    return pivots;
}

/** Nullspace basis of an integer echelon matrix by back substitution; one
 *  column per free variable, that variable set to 1. Returns a cols x d grid
 *  indexed [row][basis vector]. */
inline RatGrid echelon_nullspace(const IntMatrix& ech, const std::vector<std::size_t>& pivots,
                                 std::size_t cols) {
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    RatGrid basis(cols, std::vector<Rational>(free_cols.size(), Rational(0)));
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::vector<Rational> x(cols, Rational(0));
        x[free_cols[k]] = 1;
        for (std::size_t back = pivots.size(); back-- > 0;) {
            const std::size_t pc = pivots[back];
            Rational acc = 0;
            for (std::size_t j = pc + 1; j < cols; ++j)
                if (ech[back][j] != 0 && x[j] != 0) acc += Rational(ech[back][j]) * x[j];
            x[pc] = -acc / Rational(ech[back][pc]);
        }
        for (std::size_t c = 0; c < cols; ++c) basis[c][k] = x[c];
    }
    return basis;
}

inline Rational determinant(RatGrid m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pr = col;
        while (pr < n && m[pr][col] == 0) ++pr;
        if (pr == n) return 0;
        if (pr != col) {
            std::swap(m[pr], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m[i][col] == 0) continue;
            Rational f = m[i][col] / m[col][col];
            for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
        }
    }
    return det;
}

/** Cramer solve of a small square system; nullopt when singular. */
inline std::optional<std::vector<Rational>> cramer_solve(const RatGrid& a,
                                                         const std::vector<Rational>& b) {
    const std::size_t n = a.size();
    Rational det = determinant(a);
    if (det == 0) return std::nullopt;
    std::vector<Rational> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        RatGrid ak = a;
        for (std::size_t r = 0; r < n; ++r) ak[r][k] = b[r];
        x[k] = determinant(ak) / det;
    }
    return x;
}

/** Clears denominators of a rational row, returning an integer row. */
inline std::vector<BigInt> integerize_row(const std::vector<Rational>& row) {
    BigInt common = 1;
    for (const auto& q : row)
        common = boost::multiprecision::lcm(common, denominator_of(q));
    std::vector<BigInt> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c)
        out[c] = numerator_of(row[c]) * (common / denominator_of(row[c]));
    return out;
}

/** All vertices of Q = {lambda : N lambda >= 0 rowwise, c . lambda = 1},
 *  mapped back through N. N must have full column rank d; every vertex has
 *  d - 1 active inequality rows alongside the equality. */
inline std::vector<std::vector<Rational>> simplex_slice_vertices(const RatGrid& n_basis,
                                                                 std::size_t d) {
    const std::size_t rows = n_basis.size();
    std::vector<Rational> c(d, Rational(0));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < d; ++k) c[k] += n_basis[r][k];

    std::vector<std::vector<Rational>> vertices;
    std::vector<std::size_t> subset(d > 0 ? d - 1 : 0);
    auto try_subset = [&](const std::vector<std::size_t>& rows_active) {
        RatGrid a(d, std::vector<Rational>(d, Rational(0)));
        std::vector<Rational> b(d, Rational(0));
        for (std::size_t t = 0; t < rows_active.size(); ++t)
            for (std::size_t k = 0; k < d; ++k) a[t][k] = n_basis[rows_active[t]][k];
        for (std::size_t k = 0; k < d; ++k) a[d - 1][k] = c[k];
        b[d - 1] = 1;
        auto lambda = cramer_solve(a, b);
        if (!lambda) return;
        std::vector<Rational> point(rows, Rational(0));
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t k = 0; k < d; ++k)
                if (n_basis[r][k] != 0 && (*lambda)[k] != 0) point[r] += n_basis[r][k] * (*lambda)[k];
            if (point[r] < 0) return;
        }
        vertices.push_back(std::move(point));
    };

    // Enumerate all (d-1)-subsets of the inequality rows.
    std::vector<std::size_t> combo;
    auto recurse = [&](auto&& self, std::size_t start, std::size_t need) -> void {
        if (need == 0) {
            try_subset(combo);
            return;
        }
        for (std::size_t r = start; r + need <= rows; ++r) {
            combo.push_back(r);
            self(self, r + 1, need - 1);
            combo.pop_back();
        }
    };
    if (d > 0) recurse(recurse, 0, d - 1);

    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;  // slight modulo bias is irrelevant here; keeps output
                       // identical across standard libraries
}

/** A random composition of total into exactly `parts` positive integers. */
inline std::vector<std::uint64_t> random_composition(std::mt19937_64& rng, std::uint64_t total,
                                                     std::size_t parts) {
    std::vector<std::uint64_t> cuts;
    while (cuts.size() + 1 < parts) {
        std::uint64_t c = 1 + bounded(rng, total - 1);
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::uint64_t> out;
    std::uint64_t prev = 0;
    for (std::uint64_t c : cuts) {
        out.push_back(c - prev);
        prev = c;
    }
    out.push_back(total - prev);
    return out;
}

inline void check_pattern(const InstanceSpec& spec) {
    if (spec.I == 0 || spec.J == 0) throw InfeasiblePattern("empty dimensions");
    if (!spec.zero_pattern) return;
    const auto& mask = *spec.zero_pattern;
    if (mask.size() != spec.I * spec.J)
        throw InfeasiblePattern("zero pattern size does not match dimensions");
    for (std::size_t i = 0; i < spec.I; ++i) {
        bool open = false;
        for (std::size_t j = 0; j < spec.J; ++j) open |= !mask[i * spec.J + j];
        if (!open) throw InfeasiblePattern("row " + std::to_string(i) + " is fully masked");
    }
    for (std::size_t j = 0; j < spec.J; ++j) {
        bool open = false;
        for (std::size_t i = 0; i < spec.I; ++i) open |= !mask[i * spec.J + j];
        if (!open) throw InfeasiblePattern("column " + std::to_string(j) + " is fully masked");
    }
}

inline bool masked(const InstanceSpec& spec, std::size_t i, std::size_t j) {
    return spec.zero_pattern && (*spec.zero_pattern)[i * spec.J + j];
}

}  // namespace oracle_detail

/**
 * Deterministic random joint distribution respecting the zero pattern: the
 * unmasked cells receive a random composition k_1 + ... + k_m = Q of the
 * total mass Q = denominator_bound, so every entry is k/Q > 0 and all row and
 * column sums are positive.
 */
inline JointMatrix random_joint(const InstanceSpec& spec) {
    oracle_detail::check_pattern(spec);
    std::size_t unmasked = 0;
    for (std::size_t i = 0; i < spec.I; ++i)
        for (std::size_t j = 0; j < spec.J; ++j)
            if (!oracle_detail::masked(spec, i, j)) ++unmasked;
    if (spec.denominator_bound < unmasked)
        throw InfeasiblePattern("denominator bound " + std::to_string(spec.denominator_bound) +
                                " too small for " + std::to_string(unmasked) + " positive cells");

    std::mt19937_64 rng(spec.seed);
    auto parts = oracle_detail::random_composition(rng, spec.denominator_bound, unmasked);
    RatMatrix p(spec.I, spec.J);
    std::size_t next = 0;
    for (std::size_t i = 0; i < spec.I; ++i)
        for (std::size_t j = 0; j < spec.J; ++j)
            if (!oracle_detail::masked(spec, i, j))
                p(i, j) = Rational(BigInt(parts[next++]), BigInt(spec.denominator_bound));
    return JointMatrix(std::move(p));
}

/**
 * Deterministic random conditional pair: each column of A and each row of B
 * gets an independent random composition over its unmasked cells. With a
 * shared zero pattern this produces type-2 instances; such pairs are
 * generically incompatible.
 */
inline ConditionalPair random_pair(const InstanceSpec& spec) {
    oracle_detail::check_pattern(spec);
    std::mt19937_64 rng(spec.seed);
    RatMatrix a(spec.I, spec.J), b(spec.I, spec.J);
    for (std::size_t j = 0; j < spec.J; ++j) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < spec.I; ++i)
            if (!oracle_detail::masked(spec, i, j)) open.push_back(i);
        auto parts = oracle_detail::random_composition(rng, spec.denominator_bound, open.size());
        for (std::size_t k = 0; k < open.size(); ++k)
            a(open[k], j) = Rational(BigInt(parts[k]), BigInt(spec.denominator_bound));
    }
    for (std::size_t i = 0; i < spec.I; ++i) {
        std::vector<std::size_t> open;
        for (std::size_t j = 0; j < spec.J; ++j)
            if (!oracle_detail::masked(spec, i, j)) open.push_back(j);
        auto parts = oracle_detail::random_composition(rng, spec.denominator_bound, open.size());
        for (std::size_t k = 0; k < open.size(); ++k)
            b(i, open[k]) = Rational(BigInt(parts[k]), BigInt(spec.denominator_bound));
    }
    return validate_pair(a, b);
}

/**
 * Independent compatibility decision: builds its own integerized copy of the
 * marginal system a_ij sum_s b_sj eta_s - b_ij eta_i = 0, reduces it with
 * fraction-free Bareiss elimination, and enumerates the vertices of
 * {eta : D eta = 0, eta >= 0, sum(eta) = 1}. Compatible exactly when a vertex
 * exists; the vertex list is returned as witnesses.
 */
inline BruteForceResult brute_force_compatible(const ConditionalPair& pair) {
    const std::size_t I = pair.I(), J = pair.J();
    if (I > 4 || J > 4)
        throw ScaleExceeded("brute-force oracle handles at most 4x4 instances");
    const RatMatrix& a = pair.A();
    const RatMatrix& b = pair.B();

    oracle_detail::IntMatrix d;
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) {
            std::vector<Rational> row(I);
            for (std::size_t s = 0; s < I; ++s)
                row[s] = s == i ? Rational(b(i, j) * (a(i, j) - 1))
                                : Rational(a(i, j) * b(s, j));
            d.push_back(oracle_detail::integerize_row(row));
        }

    auto pivots = oracle_detail::bareiss_echelon(d);
    const std::size_t dim = I - pivots.size();
    BruteForceResult out;
    if (dim == 0) return out;

    auto basis = oracle_detail::echelon_nullspace(d, pivots, I);
    out.witnesses = oracle_detail::simplex_slice_vertices(basis, dim);
    out.compatible = !out.witnesses.empty();
    return out;
}

/**
 * Shifts mass delta onto A(i, j), compensating on the next row of the same
 * column so A stays column-stochastic. Generic nonzero deltas on strictly
 * positive 2x2 pairs break the cross-product-ratio identity.
 */
inline ConditionalPair perturb_to_incompatible(const ConditionalPair& pair, std::size_t i,
                                               std::size_t j, const Rational& delta) {
    const std::size_t I = pair.I();
    if (i >= I || j >= pair.J()) throw Error("perturbation cell out of range");
    RatMatrix a = pair.A();
    const std::size_t other = (i + 1) % I;
    a(i, j) += delta;
    a(other, j) -= delta;
    if (a(i, j) < 0 || a(i, j) > 1 || a(other, j) < 0 || a(other, j) > 1)
        throw StochasticityViolated("delta " + to_fraction_string(delta) +
                                    " leaves column " + std::to_string(j) +
                                    " of A outside [0, 1]");
    return validate_pair(a, pair.B());
}

/**
 * Exact maximum of sum(p) over {C p = 0, 0 <= p <= 1} by exhaustive vertex
 * enumeration: the joint system is integerized and reduced independently, and
 * every choice of d cells pinned to 0 or 1 is solved through Cramer's rule.
 * Oracle scale only (at most 9 cells).
 */
inline Rational joint_polytope_max_sum(const ConditionalPair& pair) {
    const std::size_t I = pair.I(), J = pair.J(), n = I * J;
    if (n > 9) throw ScaleExceeded("joint polytope enumeration handles at most 9 cells");
    const RatMatrix& a = pair.A();
    const RatMatrix& b = pair.B();

    oracle_detail::IntMatrix c;
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) {
            std::vector<Rational> row(n, Rational(0));
            for (std::size_t s = 0; s < I; ++s) row[s * J + j] += a(i, j);
            for (std::size_t k = 0; k < J; ++k) row[i * J + k] -= b(i, j);
            c.push_back(oracle_detail::integerize_row(row));
        }

    auto pivots = oracle_detail::bareiss_echelon(c);
    const std::size_t d = n - pivots.size();
    if (d == 0) return 0;
    auto basis = oracle_detail::echelon_nullspace(c, pivots, n);

    Rational best = 0;  // p = 0 is always feasible
    std::vector<std::size_t> cells;
    auto try_assignment = [&](const std::vector<std::size_t>& pinned, std::uint32_t bits) {
        oracle_detail::RatGrid sys(d, std::vector<Rational>(d, Rational(0)));
        std::vector<Rational> rhs(d, Rational(0));
        for (std::size_t t = 0; t < d; ++t) {
            for (std::size_t k = 0; k < d; ++k) sys[t][k] = basis[pinned[t]][k];
            rhs[t] = (bits >> t) & 1 ? 1 : 0;
        }
        auto lambda = oracle_detail::cramer_solve(sys, rhs);
        if (!lambda) return;
        Rational total = 0;
        for (std::size_t r = 0; r < n; ++r) {
            Rational v = 0;
            for (std::size_t k = 0; k < d; ++k)
                if (basis[r][k] != 0 && (*lambda)[k] != 0) v += basis[r][k] * (*lambda)[k];
            if (v < 0 || v > 1) return;
            total += v;
        }
        if (total > best) best = total;
    };
    auto recurse = [&](auto&& self, std::size_t start, std::size_t need) -> void {
        if (need == 0) {
            for (std::uint32_t bits = 0; bits < (1u << d); ++bits) try_assignment(cells, bits);
            return;
        }
        for (std::size_t r = start; r + need <= n; ++r) {
            cells.push_back(r);
            self(self, r + 1, need - 1);
            cells.pop_back();
        }
    };
    recurse(recurse, 0, d);
    return best;
}

}  // namespace condcompat
