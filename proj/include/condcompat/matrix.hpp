#pragma once

#include "condcompat/rational.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace condcompat {

/**
 * Dense matrix of exact rationals. Dimensions are fixed at construction;
 * all operations are pure and return new values, so instances can be shared
 * freely across threads.
 */
class RatMatrix {
  public:
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw Error("matrix entry count does not match dimensions");
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static RatMatrix column(const std::vector<Rational>& v) {
        RatMatrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const RatMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    bool is_zero() const {
        for (const auto& q : data_)
            if (q != 0) return false;
        return true;
    }

    RatMatrix transpose() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    RatMatrix operator*(const RatMatrix& other) const {
        if (cols_ != other.rows_) throw Error("matrix product dimension mismatch");
        RatMatrix out(rows_, other.cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rational& a = (*this)(r, k);
                if (a == 0) continue;
                for (std::size_t c = 0; c < other.cols_; ++c) {
                    const Rational& b = other(k, c);
                    if (b == 0) continue;
                    out(r, c) += a * b;
                }
            }
        }
        return out;
    }

    RatMatrix operator+(const RatMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw Error("matrix sum dimension mismatch");
        RatMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + other.data_[k];
        return out;
    }

    RatMatrix operator-(const RatMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw Error("matrix difference dimension mismatch");
        RatMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - other.data_[k];
        return out;
    }

    RatMatrix scaled(const Rational& s) const {
        RatMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * s;
        return out;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<Rational> data_;
};

struct RrefResult {
    RatMatrix reduced;
    std::vector<std::size_t> pivot_columns;
};

/**
 * Reduced row echelon form with pivot column indices. Among the nonzero
 * candidates in a pivot column, the entry with the smallest bit length of
 * |numerator| + denominator is chosen (ties broken by row index) to curb
 * coefficient growth; the returned RREF is the unique one regardless.
 */
inline RrefResult rref(const RatMatrix& m) {
    RatMatrix r = m;
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
        std::size_t best = r.rows();
        std::size_t best_score = 0;
        for (std::size_t row = lead; row < r.rows(); ++row) {
            if (r(row, col) == 0) continue;
            std::size_t score = bit_length_score(r(row, col));
            if (best == r.rows() || score < best_score) {
                best = row;
                best_score = score;
            }
        }
        if (best == r.rows()) continue;
        if (best != lead)
            for (std::size_t c = 0; c < r.cols(); ++c) std::swap(r(lead, c), r(best, c));

        Rational inv_pivot = Rational(1) / r(lead, col);
        for (std::size_t c = col; c < r.cols(); ++c)
            if (r(lead, c) != 0) r(lead, c) *= inv_pivot;
        r(lead, col) = 1;

        for (std::size_t row = 0; row < r.rows(); ++row) {
            if (row == lead) continue;
            const Rational factor = r(row, col);
            if (factor == 0) continue;
            for (std::size_t c = col; c < r.cols(); ++c) {
                if (r(lead, c) == 0) continue;
                r(row, c) -= factor * r(lead, c);
            }
            r(row, col) = 0;
        }
        pivots.push_back(col);
        ++lead;
    }
    return {std::move(r), std::move(pivots)};
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).pivot_columns.size(); }

/**
 * Basis of the right nullspace, by the free-variable construction from the
 * RREF: one vector per free column, with that free variable set to 1 and the
 * remaining free variables set to 0. Deterministic; basis size is
 * cols - rank(m). Each vector is returned as a cols x 1 matrix.
 */
inline std::vector<RatMatrix> nullspace_from_rref(const RrefResult& rr, std::size_t cols) {
    const auto& pivots = rr.pivot_columns;
    std::vector<RatMatrix> basis;
    std::size_t next_pivot = 0;
    for (std::size_t c = 0; c < cols; ++c) {
        if (next_pivot < pivots.size() && pivots[next_pivot] == c) {
            ++next_pivot;
            continue;
        }
        RatMatrix v(cols, 1);
        v(c, 0) = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v(pivots[k], 0) = -rr.reduced(k, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::vector<RatMatrix> nullspace(const RatMatrix& m) {
    return nullspace_from_rref(rref(m), m.cols());
}

/** Exact inverse of a square matrix by Gauss-Jordan on [m | I].
 *  Throws Error if m is singular. */
inline RatMatrix inverse(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw Error("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
        aug(r, n + r) = 1;
    }
    RrefResult rr = rref(aug);
    if (rr.pivot_columns.size() < n || rr.pivot_columns[n - 1] != n - 1)
        throw Error("matrix is singular");
    RatMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = rr.reduced(r, n + c);
    return out;
}

/**
 * A deterministic {1}-generalized inverse: G with m G m = m exactly.
 * Built from the rank factorization m = F H, where F collects the pivot
 * columns of m and H the nonzero rows of its RREF:
 *
 *     G = H^T (H H^T)^-1 (F^T F)^-1 F^T.
 *
 * The zero matrix maps to the zero matrix of transposed shape.
 */
inline RatMatrix g_inverse(const RatMatrix& m) {
    RrefResult rr = rref(m);
    const std::size_t r = rr.pivot_columns.size();
    if (r == 0) return RatMatrix(m.cols(), m.rows());

    RatMatrix f(m.rows(), r);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t row = 0; row < m.rows(); ++row) f(row, k) = m(row, rr.pivot_columns[k]);
    RatMatrix h(r, m.cols());
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t c = 0; c < m.cols(); ++c) h(k, c) = rr.reduced(k, c);

    RatMatrix ht = h.transpose();
    RatMatrix ft = f.transpose();
    return ht * inverse(h * ht) * inverse(ft * f) * ft;
}

}  // namespace condcompat
