#pragma once

#include "condcompat/conditional.hpp"
#include "condcompat/matrix.hpp"
#include "condcompat/rational.hpp"
#include "condcompat/simplex.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace condcompat {

class ConsistencyFailure : public Error {
  public:
    using Error::Error;
};

/** Raised when the independent decision procedures disagree; always an
 *  implementation bug, never swallowed. */
class InternalInconsistency : public Error {
  public:
    using Error::Error;
};

enum class Verdict { CompatibleUnique, CompatibleNonUnique, Incompatible };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::CompatibleUnique: return "compatible-unique";
        case Verdict::CompatibleNonUnique: return "compatible-nonunique";
        default: return "incompatible";
    }
}

/** Outcome of the rank criterion on D. */
struct RankMethodResult {
    std::size_t rank = 0;
    bool compatible = false;
    bool unique = false;
    std::optional<std::vector<Rational>> eta;  // normalized witness, when one exists
    std::vector<RatMatrix> nullspace_basis;    // free-variable basis of null(D)
};

struct LPMethodResult {
    bool compatible = false;
    Rational optimum = 0;
};

/**
 * Theorem-1 solution space of C p = 0: M = C⁻C is idempotent, the projector
 * I - M annihilates C, and Omega = (I - M) z. `basis` collects a maximal
 * independent set of the projector's columns (IJ - rank(C) of them).
 */
struct SolutionSpace {
    RatMatrix M;
    RatMatrix projector;  // I - M
    RatMatrix basis;      // independent columns of I - M, one per column
    std::size_t rank_C = 0;
};

struct SolutionSpaceMethodResult {
    bool compatible = false;
    Rational optimum = 0;
    std::size_t rank_C = 0;
    std::size_t basis_size = 0;
};

struct CrossRatioMethodResult {
    bool applicable = false;
    bool compatible = false;
};

struct MethodResults {
    RankMethodResult rank;
    LPMethodResult joint_lp;
    LPMethodResult eta_lp;
    SolutionSpaceMethodResult solution_space;
    CrossRatioMethodResult cross_ratio;
};

struct CompatReport {
    Verdict verdict = Verdict::Incompatible;
    std::size_t I = 0, J = 0;
    std::size_t rank_D = 0;
    std::optional<MarginalVector> eta;
    std::optional<MarginalVector> tau;
    std::optional<JointMatrix> joint;
    std::vector<RatMatrix> nullspace_basis_D;
    MethodResults methods;
    bool degenerate = false;

    bool compatible() const { return verdict != Verdict::Incompatible; }
};

namespace detail {

/** Rescales each column to a primitive integer vector (multiplying a column
 *  by a positive rational changes neither its span nor any projector built
 *  from it, and keeps downstream coefficient growth down). */
inline RatMatrix primitive_columns(const RatMatrix& m) {
    RatMatrix out = m;
    for (std::size_t k = 0; k < m.cols(); ++k) {
        BigInt den_lcm = 1, num_gcd = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (m(i, k) == 0) continue;
            den_lcm = boost::multiprecision::lcm(den_lcm, denominator_of(m(i, k)));
            num_gcd = boost::multiprecision::gcd(num_gcd,
                                                 boost::multiprecision::abs(numerator_of(m(i, k))));
        }
        if (num_gcd == 0) continue;
        const Rational factor(den_lcm, num_gcd);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (out(i, k) != 0) out(i, k) *= factor;
    }
    return out;
}

inline RankMethodResult rank_method(const RrefResult& rrD, std::size_t I) {
    RankMethodResult out;
    out.rank = rrD.pivot_columns.size();
    out.nullspace_basis = condcompat::nullspace_from_rref(rrD, I);

    if (out.rank == I) return out;  // only the null vector solves D eta = 0

    if (out.nullspace_basis.size() == 1) {
        const RatMatrix& v = out.nullspace_basis[0];
        bool all_nonneg = true, all_nonpos = true;
        for (std::size_t i = 0; i < I; ++i) {
            if (v(i, 0) < 0) all_nonneg = false;
            if (v(i, 0) > 0) all_nonpos = false;
        }
        if (!all_nonneg && !all_nonpos) return out;  // sign-indefinite: no witness
        Rational total = 0;
        for (std::size_t i = 0; i < I; ++i) total += v(i, 0);
        std::vector<Rational> eta(I);
        for (std::size_t i = 0; i < I; ++i) eta[i] = v(i, 0) / total;
        out.eta = std::move(eta);
        out.compatible = true;
    } else {
        LPResult lp = marginal_lp(rrD, I);
        if (lp.status == LPStatus::Optimal && lp.optimum > 0) {
            std::vector<Rational> eta(I);
            for (std::size_t i = 0; i < I; ++i) eta[i] = lp.solution[i] / lp.optimum;
            out.eta = std::move(eta);
            out.compatible = true;
        }
    }
    out.unique = out.compatible && out.rank + 1 == I;
    return out;
}

inline SolutionSpace solution_space_for(const RatMatrix& c) {
    const std::size_t n = c.cols();
    RrefResult rr = rref(c);
    const std::size_t r = rr.pivot_columns.size();
    const std::size_t d = n - r;

    std::vector<RatMatrix> null_basis = condcompat::nullspace_from_rref(rr, n);
    RatMatrix big_n(n, d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < n; ++i) big_n(i, k) = null_basis[k](i, 0);
    big_n = primitive_columns(big_n);

    // M = C⁻C with the rank-factorization g-inverse reduces algebraically to
    // the orthogonal projector onto the row space of C; both
    // Hᵀ(HHᵀ)⁻¹H and I - N(NᵀN)⁻¹Nᵀ equal it exactly, so use whichever
    // needs the smaller inverse.
    SolutionSpace out{RatMatrix(n, n), RatMatrix(n, n), RatMatrix(n, 0), r};
    if (r == 0) {
        out.projector = RatMatrix::identity(n);
        out.basis = out.projector;
        return out;
    }
    if (d == 0) {
        out.M = RatMatrix::identity(n);
        return out;
    }
    if (d <= r) {
        RatMatrix nt = big_n.transpose();
        RatMatrix gram = nt * big_n;
        RatMatrix w = inverse(gram);
        if (!(gram * w == RatMatrix::identity(d)))
            throw InternalInconsistency("projector certificate (NtN)(NtN)^-1 = I failed");
        out.projector = big_n * w * nt;
        out.M = RatMatrix::identity(n) - out.projector;
    } else {
        RatMatrix h(r, n);
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t col = 0; col < n; ++col) h(k, col) = rr.reduced(k, col);
        RatMatrix ht = h.transpose();
        RatMatrix gram = h * ht;
        RatMatrix v = inverse(gram);
        if (!(gram * v == RatMatrix::identity(r)))
            throw InternalInconsistency("projector certificate (HHt)(HHt)^-1 = I failed");
        out.M = ht * v * h;
        out.projector = RatMatrix::identity(n) - out.M;
    }

    // C annihilates the nullspace basis, hence C (I - M) = 0.
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t row = 0; row < n; ++row) {
            Rational acc = 0;
            for (std::size_t col = 0; col < n; ++col) {
                if (c(row, col) == 0 || big_n(col, k) == 0) continue;
                acc += c(row, col) * big_n(col, k);
            }
            if (acc != 0)
                throw InternalInconsistency("C does not annihilate the solution-space basis");
        }

    // Independent columns of the projector. Pivot-column selection is scale
    // invariant, so run the elimination on the primitively scaled copy.
    RrefResult rp = rref(primitive_columns(out.projector));
    if (rp.pivot_columns.size() != d)
        throw InternalInconsistency("solution-space basis size is not IJ - rank(C)");
    out.basis = RatMatrix(n, d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < n; ++i) out.basis(i, k) = out.projector(i, rp.pivot_columns[k]);
    return out;
}

/**
 * LP over the column space of (I - M) intersected with the sub-simplex:
 * maximize sum(q) for q = basis . lambda with q >= 0 and sum(q) <= 1.
 * A positive optimum exhibits the Proposition-1 witness; zero refutes
 * compatibility (Proposition 2).
 */
inline LPResult solution_space_lp(const SolutionSpace& space) {
    const std::size_t n = space.projector.rows();
    const std::size_t d = space.basis.cols();
    if (d == 0) {
        LPResult res;
        res.status = LPStatus::Optimal;
        return res;
    }

    // Variables: lambda+ (d), lambda- (d), t (n, with t_i = q_i), u (slack of
    // the sum row). Rows: t_i - basis_i (lambda+ - lambda-) = 0, then the sum
    // row with t already substituted out, sum_k colsum_k (lambda+ - lambda-) +
    // u = 1, so every row starts with a basic slack and no artificials are
    // needed. Columns are rescaled primitive; that only reparametrizes lambda
    // and leaves the set of feasible q unchanged.
    RatMatrix span = detail::primitive_columns(space.basis);
    const std::size_t vars = 2 * d + n + 1;
    RatMatrix eq(n + 1, vars);
    std::vector<Rational> rhs(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            eq(i, k) = -span(i, k);
            eq(i, d + k) = span(i, k);
        }
        eq(i, 2 * d + i) = 1;
    }
    for (std::size_t k = 0; k < d; ++k) {
        Rational colsum = 0;
        for (std::size_t i = 0; i < n; ++i) colsum += span(i, k);
        eq(n, k) = colsum;
        eq(n, d + k) = -colsum;
    }
    eq(n, 2 * d + n) = 1;
    rhs[n] = 1;

    std::vector<Rational> objective(vars);
    for (std::size_t i = 0; i < n; ++i) objective[2 * d + i] = 1;

    LPResult res = solve({std::move(objective), std::move(eq), std::move(rhs), std::nullopt});
    if (res.status == LPStatus::Optimal) {
        // Report the point q rather than the internal parametrization.
        std::vector<Rational> q(res.solution.begin() + 2 * d, res.solution.begin() + 2 * d + n);
        res.solution = std::move(q);
    }
    return res;
}

}  // namespace detail

/**
 * The rank criterion (Theorem 3, in its repaired form): rank(D) = I refutes
 * compatibility outright; otherwise a nonnegative nonzero vector of null(D)
 * is required as a witness — sign analysis of the single basis vector when
 * the nullspace is one-dimensional, an auxiliary LP otherwise. The witness is
 * unique exactly when rank(D) = I - 1.
 */
inline RankMethodResult check_rank_method(const ConditionalPair& pair) {
    return detail::rank_method(rref(build_D(pair)), pair.I());
}

/** tau_j = sum_s b_sj eta_s; row-stochasticity of B makes it sum to 1. */
inline MarginalVector recover_tau(const ConditionalPair& pair, const MarginalVector& eta) {
    const RatMatrix& b = pair.B();
    std::vector<Rational> tau(pair.J());
    for (std::size_t j = 0; j < pair.J(); ++j)
        for (std::size_t s = 0; s < pair.I(); ++s) tau[j] += b(s, j) * eta[s];
    return MarginalVector(std::move(tau), MarginalAxis::Y);
}

/**
 * The joint built from a witness marginal: p_ij = b_ij eta_i. Verifies
 * a_ij p_.j = p_ij exactly for every cell before returning; failure means the
 * candidate does not actually witness compatibility.
 */
inline JointMatrix recover_joint(const ConditionalPair& pair, const MarginalVector& eta) {
    const RatMatrix& a = pair.A();
    const RatMatrix& b = pair.B();
    RatMatrix p(pair.I(), pair.J());
    for (std::size_t i = 0; i < pair.I(); ++i)
        for (std::size_t j = 0; j < pair.J(); ++j) p(i, j) = b(i, j) * eta[i];
    for (std::size_t j = 0; j < pair.J(); ++j) {
        Rational colsum = 0;
        for (std::size_t i = 0; i < pair.I(); ++i) colsum += p(i, j);
        for (std::size_t i = 0; i < pair.I(); ++i)
            if (a(i, j) * colsum != p(i, j))
                throw ConsistencyFailure("candidate marginal does not reproduce A at cell (" +
                                         std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    return JointMatrix(std::move(p));
}

inline SolutionSpace solution_space(const ConditionalPair& pair) {
    return detail::solution_space_for(build_C(pair));
}

/**
 * Runs all decision procedures — rank criterion, joint-space LP, marginal
 * LP, solution-space LP and (for all-positive 2x2 pairs) the cross-product
 * ratio — asserts that they agree, and assembles the unified report.
 */
inline CompatReport classify(const ConditionalPair& pair) {
    const std::size_t I = pair.I(), J = pair.J();
    RatMatrix d_matrix = build_D(pair);
    RatMatrix c_matrix = build_C(pair);
    RrefResult rrD = rref(d_matrix);

    CompatReport report;
    report.I = I;
    report.J = J;

    RankMethodResult rank_res = detail::rank_method(rrD, I);
    LPResult joint_res = detail::joint_lp_for(c_matrix);
    LPResult eta_res = detail::marginal_lp(rrD, I);
    SolutionSpace space = detail::solution_space_for(c_matrix);
    LPResult space_res = detail::solution_space_lp(space);

    report.rank_D = rank_res.rank;
    report.methods.rank = rank_res;
    report.methods.joint_lp = {joint_res.optimum > 0, joint_res.optimum};
    report.methods.eta_lp = {eta_res.optimum > 0, eta_res.optimum};
    report.methods.solution_space = {space_res.optimum > 0, space_res.optimum, space.rank_C,
                                     space.basis.cols()};

    bool cross_applicable = I == 2 && J == 2;
    if (cross_applicable)
        for (std::size_t i = 0; i < 2 && cross_applicable; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                if (pair.A()(i, j) == 0 || pair.B()(i, j) == 0) {
                    cross_applicable = false;
                    break;
                }
    if (cross_applicable)
        report.methods.cross_ratio = {true, cross_ratio_compatible_2x2(pair)};

    const bool compatible = rank_res.compatible;
    auto require_agreement = [&](const char* method, bool value) {
        if (value != compatible)
            throw InternalInconsistency(std::string("method disagreement: rank criterion says ") +
                                        (compatible ? "compatible" : "incompatible") + " but " +
                                        method + " says the opposite");
    };
    require_agreement("joint LP", report.methods.joint_lp.compatible);
    require_agreement("eta LP", report.methods.eta_lp.compatible);
    require_agreement("solution-space LP", report.methods.solution_space.compatible);
    if (report.methods.cross_ratio.applicable)
        require_agreement("cross-product ratio", report.methods.cross_ratio.compatible);

    report.nullspace_basis_D = rank_res.nullspace_basis;

    if (!compatible) {
        report.verdict = Verdict::Incompatible;
        return report;
    }

    report.verdict = rank_res.unique ? Verdict::CompatibleUnique : Verdict::CompatibleNonUnique;
    MarginalVector eta(*rank_res.eta, MarginalAxis::X);
    MarginalVector tau = recover_tau(pair, eta);
    report.degenerate = eta.has_zero_entry() || tau.has_zero_entry();
    report.joint = recover_joint(pair, eta);
    report.eta = std::move(eta);
    report.tau = std::move(tau);
    return report;
}

}  // namespace condcompat
