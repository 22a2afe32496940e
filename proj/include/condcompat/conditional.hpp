#pragma once

#include "condcompat/matrix.hpp"
#include "condcompat/rational.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace condcompat {

class ShapeMismatch : public Error {
  public:
    using Error::Error;
};
class NotStochastic : public Error {
  public:
    using Error::Error;
};
class NegativeEntry : public Error {
  public:
    using Error::Error;
};
class ZeroMarginal : public Error {
  public:
    using Error::Error;
};
class NotTwoByTwo : public Error {
  public:
    using Error::Error;
};
class ZeroEntry : public Error {
  public:
    using Error::Error;
};

/**
 * A validated conditional specification: A is I x J and column-stochastic
 * (column j is the law of X given Y = y_j), B is I x J and row-stochastic
 * (row i is the law of Y given X = x_i). Sums are exact; no tolerance.
 */
class ConditionalPair {
  public:
    const RatMatrix& A() const { return a_; }
    const RatMatrix& B() const { return b_; }
    std::size_t I() const { return a_.rows(); }
    std::size_t J() const { return a_.cols(); }

    friend ConditionalPair validate_pair(const RatMatrix& a, const RatMatrix& b);

  private:
    ConditionalPair(RatMatrix a, RatMatrix b) : a_(std::move(a)), b_(std::move(b)) {}
    RatMatrix a_, b_;
};

inline ConditionalPair validate_pair(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeMismatch("A is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " but B is " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
    if (a.rows() == 0 || a.cols() == 0) throw ShapeMismatch("empty matrices");

    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) < 0)
                throw NegativeEntry("A[" + std::to_string(i) + "][" + std::to_string(j) +
                                    "] = " + to_fraction_string(a(i, j)) + " is negative");
            if (b(i, j) < 0)
                throw NegativeEntry("B[" + std::to_string(i) + "][" + std::to_string(j) +
                                    "] = " + to_fraction_string(b(i, j)) + " is negative");
        }
    for (std::size_t j = 0; j < a.cols(); ++j) {
        Rational sum = 0;
        for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, j);
        if (sum != 1)
            throw NotStochastic("column " + std::to_string(j) + " of A sums to " +
                                to_fraction_string(sum) + ", expected 1");
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        Rational sum = 0;
        for (std::size_t j = 0; j < b.cols(); ++j) sum += b(i, j);
        if (sum != 1)
            throw NotStochastic("row " + std::to_string(i) + " of B sums to " +
                                to_fraction_string(sum) + ", expected 1");
    }
    return ConditionalPair(a, b);
}

/** A joint probability matrix: nonnegative entries with total mass exactly 1. */
class JointMatrix {
  public:
    explicit JointMatrix(RatMatrix p) : p_(std::move(p)) {
        Rational total = 0;
        for (std::size_t i = 0; i < p_.rows(); ++i)
            for (std::size_t j = 0; j < p_.cols(); ++j) {
                if (p_(i, j) < 0)
                    throw NegativeEntry("joint entry [" + std::to_string(i) + "][" +
                                        std::to_string(j) + "] is negative");
                total += p_(i, j);
            }
        if (total != 1)
            throw NotStochastic("joint matrix sums to " + to_fraction_string(total) +
                                ", expected 1");
    }

    const RatMatrix& P() const { return p_; }
    std::size_t I() const { return p_.rows(); }
    std::size_t J() const { return p_.cols(); }

    std::vector<Rational> row_sums() const {
        std::vector<Rational> out(p_.rows());
        for (std::size_t i = 0; i < p_.rows(); ++i)
            for (std::size_t j = 0; j < p_.cols(); ++j) out[i] += p_(i, j);
        return out;
    }
    std::vector<Rational> col_sums() const {
        std::vector<Rational> out(p_.cols());
        for (std::size_t i = 0; i < p_.rows(); ++i)
            for (std::size_t j = 0; j < p_.cols(); ++j) out[j] += p_(i, j);
        return out;
    }

    /** vec(P) in row-major order p_11, p_12, ..., p_IJ. */
    std::vector<Rational> vec() const {
        std::vector<Rational> out;
        out.reserve(p_.rows() * p_.cols());
        for (std::size_t i = 0; i < p_.rows(); ++i)
            for (std::size_t j = 0; j < p_.cols(); ++j) out.push_back(p_(i, j));
        return out;
    }

  private:
    RatMatrix p_;
};

enum class MarginalAxis { X, Y };

/** A marginal probability vector (eta over X of length I, tau over Y of length J). */
class MarginalVector {
  public:
    MarginalVector(std::vector<Rational> values, MarginalAxis axis)
        : values_(std::move(values)), axis_(axis) {
        Rational sum = 0;
        for (const auto& v : values_) {
            if (v < 0) throw NegativeEntry("marginal entry is negative");
            sum += v;
        }
        if (sum != 1)
            throw NotStochastic("marginal sums to " + to_fraction_string(sum) + ", expected 1");
    }

    const std::vector<Rational>& values() const { return values_; }
    MarginalAxis axis() const { return axis_; }
    std::size_t size() const { return values_.size(); }
    const Rational& operator[](std::size_t k) const { return values_[k]; }

    bool has_zero_entry() const {
        for (const auto& v : values_)
            if (v == 0) return true;
        return false;
    }

  private:
    std::vector<Rational> values_;
    MarginalAxis axis_;
};

/** Row index of cell (i, j) in the i-major ordering used for D, C and vec(P). */
inline std::size_t cell_row_index(std::size_t i, std::size_t j, std::size_t J) {
    return i * J + j;
}

/**
 * Coefficient matrix of the homogeneous marginal system D eta = 0, one row per
 * cell (i, j) in i-major order: the row encodes
 * a_ij * sum_s b_sj eta_s - b_ij eta_i, so column s holds a_ij b_sj for s != i
 * and column i holds b_ij (a_ij - 1).
 */
inline RatMatrix build_D(const ConditionalPair& pair) {
    const std::size_t I = pair.I(), J = pair.J();
    const RatMatrix& a = pair.A();
    const RatMatrix& b = pair.B();
    RatMatrix d(I * J, I);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) {
            const std::size_t r = cell_row_index(i, j, J);
            for (std::size_t s = 0; s < I; ++s)
                d(r, s) = s == i ? Rational(b(i, j) * (a(i, j) - 1))
                                 : Rational(a(i, j) * b(s, j));
        }
    return d;
}

/**
 * Coefficient matrix of the homogeneous joint system C p = 0 over vec(P), one
 * row per cell (i, j): a_ij on every p_sj in column j, -b_ij on every p_ik in
 * row i, the two contributions combining to a_ij - b_ij on p_ij itself.
 */
inline RatMatrix build_C(const ConditionalPair& pair) {
    const std::size_t I = pair.I(), J = pair.J();
    const RatMatrix& a = pair.A();
    const RatMatrix& b = pair.B();
    RatMatrix c(I * J, I * J);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) {
            const std::size_t r = cell_row_index(i, j, J);
            for (std::size_t s = 0; s < I; ++s) c(r, cell_row_index(s, j, J)) += a(i, j);
            for (std::size_t k = 0; k < J; ++k) c(r, cell_row_index(i, k, J)) -= b(i, j);
        }
    return c;
}

/** The two system matrices of a pair plus the shared cell-to-row mapping. */
struct SystemMatrices {
    RatMatrix D;
    RatMatrix C;
    std::size_t J;

    std::size_t row_index(std::size_t i, std::size_t j) const { return cell_row_index(i, j, J); }
};

inline SystemMatrices build_system(const ConditionalPair& pair) {
    return {build_D(pair), build_C(pair), pair.J()};
}

/**
 * Conditionals of a joint with strictly positive marginals:
 * a_ij = p_ij / p_.j and b_ij = p_ij / p_i. . Throws ZeroMarginal when some
 * row or column of P has zero mass.
 */
inline ConditionalPair joint_to_conditionals(const JointMatrix& joint) {
    const RatMatrix& p = joint.P();
    std::vector<Rational> rows = joint.row_sums();
    std::vector<Rational> cols = joint.col_sums();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i] == 0) throw ZeroMarginal("row " + std::to_string(i) + " of P sums to 0");
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (cols[j] == 0) throw ZeroMarginal("column " + std::to_string(j) + " of P sums to 0");

    RatMatrix a(p.rows(), p.cols());
    RatMatrix b(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) {
            a(i, j) = p(i, j) / cols[j];
            b(i, j) = p(i, j) / rows[i];
        }
    return validate_pair(a, b);
}

/**
 * The 2x2 cross-product-ratio criterion: with all eight entries strictly
 * positive, the pair is compatible exactly when
 * a12 a21 b22 b11 = a11 a22 b21 b12. Undefined in the presence of zeros.
 */
inline bool cross_ratio_compatible_2x2(const ConditionalPair& pair) {
    if (pair.I() != 2 || pair.J() != 2)
        throw NotTwoByTwo("cross-product-ratio criterion requires 2x2 matrices");
    const RatMatrix& a = pair.A();
    const RatMatrix& b = pair.B();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            if (a(i, j) == 0 || b(i, j) == 0)
                throw ZeroEntry("cross-product-ratio criterion undefined with zero entries");
    return a(0, 1) * a(1, 0) * b(1, 1) * b(0, 0) == a(0, 0) * a(1, 1) * b(1, 0) * b(0, 1);
}

}  // namespace condcompat
