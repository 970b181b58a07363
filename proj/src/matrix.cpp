#include "jolt/matrix.hpp"

#include <cmath>

namespace jolt {

double max_abs(const DMat& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v = std::max(v, std::abs(m(i, j)));
    return v;
}

namespace {

// In-place reduction to row echelon form; returns rank. Augmented columns
// (if any) ride along; `pivot_limit` restricts pivot search to a prefix of
// the columns.
std::size_t row_reduce(Mat& m, std::size_t pivot_limit) {
    const std::size_t rows = m.rows();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < pivot_limit && rank < rows; ++col) {
        std::size_t pivot = rows;
        for (std::size_t r = rank; r < rows; ++r) {
            if (!m(r, col).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(rank, c), m(pivot, c));
        const Coeff inv = m(rank, col).inverse();
        for (std::size_t c = col; c < m.cols(); ++c) m(rank, c) = m(rank, c) * inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m(r, col).is_zero()) continue;
            const Coeff f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                m(r, c) = m(r, c) - f * m(rank, c);
        }
        ++rank;
    }
    return rank;
}

} // namespace

std::size_t exact_rank(Mat m) { return row_reduce(m, m.cols()); }

bool exact_consistent(const Mat& a, const std::vector<Coeff>& b) {
    if (b.size() != a.rows())
        throw JoltError(ErrorCode::ArityMismatch, "rhs dimension mismatch");
    Mat aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    Mat plain = a;
    const std::size_t r1 = row_reduce(plain, plain.cols());
    const std::size_t r2 = row_reduce(aug, aug.cols());
    return r1 == r2;
}

std::vector<std::vector<Coeff>> exact_nullspace(const Mat& a) {
    Mat m = a;
    const std::size_t rows = m.rows(), cols = m.cols();
    row_reduce(m, cols);
    // Identify pivot columns of the reduced matrix.
    std::vector<long> pivot_of_col(cols, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        if (!m(r, c).is_zero()) {
            pivot_of_col[c] = static_cast<long>(r);
            ++r;
        }
    }
    std::vector<std::vector<Coeff>> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (pivot_of_col[free_col] >= 0) continue;
        std::vector<Coeff> v(cols, Coeff(0));
        v[free_col] = Coeff(1);
        for (std::size_t c = 0; c < cols; ++c) {
            if (pivot_of_col[c] >= 0)
                v[c] = -m(static_cast<std::size_t>(pivot_of_col[c]), free_col);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Mat> exact_inverse(const Mat& a) {
    if (a.rows() != a.cols()) throw JoltError(ErrorCode::ArityMismatch, "inverse of non-square");
    const std::size_t n = a.rows();
    Mat aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = Coeff(1);
    }
    if (row_reduce(aug, n) != n) return std::nullopt;
    Mat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

std::vector<std::vector<Coeff>>
exact_span_basis(const std::vector<std::vector<Coeff>>& vectors) {
    std::vector<std::vector<Coeff>> basis;
    if (vectors.empty()) return basis;
    const std::size_t dim = vectors[0].size();
    Mat echelon(0, 0);
    std::vector<std::vector<Coeff>> rows; // echelon rows kept manually
    for (const auto& v : vectors) {
        std::vector<Coeff> w = v;
        for (const auto& row : rows) {
            // Eliminate with the leading entry of `row`.
            std::size_t lead = 0;
            while (lead < dim && row[lead].is_zero()) ++lead;
            if (lead == dim || w[lead].is_zero()) continue;
            const Coeff f = w[lead] / row[lead];
            for (std::size_t c = 0; c < dim; ++c) w[c] = w[c] - f * row[c];
        }
        bool zero = true;
        for (const auto& x : w)
            if (!x.is_zero()) {
                zero = false;
                break;
            }
        if (!zero) {
            rows.push_back(w);
            basis.push_back(v);
        }
    }
    return basis;
}

std::optional<std::vector<std::vector<Coeff>>>
exact_orthonormalize(const std::vector<std::vector<Coeff>>& basis, long field_d) {
    std::vector<std::vector<Coeff>> out;
    for (const auto& v : basis) {
        std::vector<Coeff> w = v;
        for (const auto& u : out) {
            const Coeff proj = dot(w, u);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = w[i] - proj * u[i];
        }
        const Coeff norm2 = dot(w, w);
        if (norm2.is_zero()) continue; // dependent input vector
        const auto norm = coeff_sqrt(norm2, field_d);
        if (!norm) return std::nullopt;
        const Coeff inv = norm->inverse();
        for (auto& x : w) x = x * inv;
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace jolt
