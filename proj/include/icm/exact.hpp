#pragma once

// Exact integer and rational linear algebra: dense matrices, Hermite and
// Smith normal forms, lattice indices.

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "icm/errors.hpp"

namespace icm {

using Int = mpz_class;
using Rat = mpq_class;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

template <class T>
class Matrix {
  public:
    Matrix() = default;
    /// Zero matrix. Both dimensions must be positive.
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {
        if (rows == 0 || cols == 0)
            throw Error(ErrorKind::ValidationError, "exact-core", "matrix dimensions must be positive");
    }
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (rows == 0 || cols == 0 || a_.size() != rows * cols)
            throw Error(ErrorKind::ValidationError, "exact-core", "bad matrix shape");
    }
    /// Builds a matrix from row vectors of equal length.
    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        if (rows.empty() || rows.front().empty())
            throw Error(ErrorKind::ValidationError, "exact-core", "empty matrix");
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw Error(ErrorKind::ValidationError, "exact-core", "ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return a_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }
    std::vector<T> row_vec(std::size_t i) const { return {a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_}; }
    const std::vector<T>& entries() const { return a_; }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw Error(ErrorKind::RankMismatch, "exact-core", "matrix product shape");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& x = (*this)(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
            }
        return r;
    }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using IntMat = Matrix<Int>;
using RatMat = Matrix<Rat>;

std::string to_string(const IntMat& m);

RatMat to_rat(const IntMat& m);

struct HnfResult {
    IntMat H;  ///< row-style upper triangular echelon form, zero rows last
    IntMat U;  ///< unimodular, U * M == H
    std::size_t rank = 0;
};

/// Hermite normal form of the row space of M: pivots positive, entries above
/// each pivot reduced into [0, pivot).
HnfResult hnf(const IntMat& M);

/// HNF of the lattice spanned by `gens` (each of length `dim`); zero rows are
/// dropped, so the result has `rank` rows. Returns an empty vector when all
/// generators vanish.
std::vector<IntVec> hnf_rows(std::vector<IntVec> gens, std::size_t dim);

struct SnfResult {
    IntMat D;  ///< diagonal d_1 | d_2 | ... with d_i >= 0
    IntMat P;  ///< unimodular, P * M * Q == D
    IntMat Q;  ///< unimodular
};

SnfResult snf(const IntMat& M);

/// Diagonal of the SNF, i.e. the elementary divisors including zeros.
std::vector<Int> elementary_divisors(const IntMat& M);

Rat det(const RatMat& m);
Int det(const IntMat& m);
/// Inverse of a square rational matrix; throws RankMismatch when singular.
RatMat inverse(const RatMat& m);
/// Solves x * A = b for a square invertible A.
RatVec solve_left(const RatMat& A, const RatVec& b);
/// Rank over Q.
std::size_t rank(const RatMat& m);
/// Basis of the left kernel {x : x * A = 0} over Q (rows).
std::vector<RatVec> left_kernel(const RatMat& A);
/// Basis of the integer left kernel {x in Z^r : x * A = 0}, in HNF.
std::vector<IntVec> integer_left_kernel(const IntMat& A);

/// Generalized index [A : B] = |det(B) / det(A)| of full-rank square bases.
Rat lattice_index(const RatMat& A, const RatMat& B);

Int lcm_denominators(std::span<const Rat> v);
Int content(std::span<const Int> v);

}  // namespace icm
