#ifndef JOLT_MATRIX_HPP
#define JOLT_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "jolt/poly.hpp"

namespace jolt {

// Dense matrix over the exact field or doubles. Small sizes only (2n x 2n).
template <class R>
class MatT {
  public:
    MatT() = default;
    MatT(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, RingOps<R>::zero()) {}

    static MatT identity(std::size_t n) {
        MatT m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = RingOps<R>::one();
        return m;
    }

    // The standard symplectic form J = [[0, I], [-I, 0]], size 2n x 2n.
    static MatT symplectic_j(std::size_t n) {
        MatT m(2 * n, 2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, n + i) = RingOps<R>::one();
            m(n + i, i) = -RingOps<R>::one();
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    R& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const R& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    MatT operator+(const MatT& o) const {
        check_shape(o);
        MatT r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] + o.data_[i];
        return r;
    }

    MatT operator-(const MatT& o) const {
        check_shape(o);
        MatT r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] - o.data_[i];
        return r;
    }

    MatT operator-() const {
        MatT r = *this;
        for (auto& v : r.data_) v = -v;
        return r;
    }

    MatT operator*(const MatT& o) const {
        if (cols_ != o.rows_)
            throw JoltError(ErrorCode::ArityMismatch, "matrix product shape mismatch");
        MatT r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const R& a = (*this)(i, k);
                if (RingOps<R>::is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) = r(i, j) + a * o(k, j);
            }
        return r;
    }

    std::vector<R> operator*(const std::vector<R>& v) const {
        if (cols_ != v.size())
            throw JoltError(ErrorCode::ArityMismatch, "matrix-vector shape mismatch");
        std::vector<R> r(rows_, RingOps<R>::zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] = r[i] + (*this)(i, j) * v[j];
        return r;
    }

    MatT transpose() const {
        MatT r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    MatT scale(const R& c) const {
        MatT r = *this;
        for (auto& v : r.data_) v = v * c;
        return r;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!RingOps<R>::is_zero(v)) return false;
        return true;
    }

    bool operator==(const MatT& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    std::vector<R> col(std::size_t j) const {
        std::vector<R> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(std::size_t j, const std::vector<R>& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

  private:
    void check_shape(const MatT& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw JoltError(ErrorCode::ArityMismatch, "matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<R> data_;
};

using Mat = MatT<Coeff>;
using DMat = MatT<double>;

inline DMat to_dmat(const Mat& m) {
    DMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).to_double();
    return r;
}

double max_abs(const DMat& m);

template <class R>
R dot(const std::vector<R>& a, const std::vector<R>& b) {
    R s = RingOps<R>::zero();
    for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
    return s;
}

// --- Exact linear algebra over Q(sqrt(d)) --------------------------------

// Row echelon reduction over the exact field; returns rank.
std::size_t exact_rank(Mat m);

// True when A w = b has a solution (rank test on the augmented matrix).
bool exact_consistent(const Mat& a, const std::vector<Coeff>& b);

// Basis of the null space of A (as columns-of-vectors).
std::vector<std::vector<Coeff>> exact_nullspace(const Mat& a);

// Exact inverse; nullopt when singular.
std::optional<Mat> exact_inverse(const Mat& a);

// Maximal linearly independent subset (spanning set in, basis out).
std::vector<std::vector<Coeff>> exact_span_basis(const std::vector<std::vector<Coeff>>& vectors);

// Gram-Schmidt over Q(sqrt(d)): fails (nullopt) when a needed square root
// leaves the field. `field_d` names the ambient radicand (0 for pure Q).
std::optional<std::vector<std::vector<Coeff>>>
exact_orthonormalize(const std::vector<std::vector<Coeff>>& basis, long field_d = 0);

} // namespace jolt

#endif
