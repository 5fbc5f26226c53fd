#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pcsilab/gf.hpp"

namespace pcsilab {

/// Dense row-major matrix over a field context.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Fe> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {
        if (r == 0 || c == 0) throw std::invalid_argument("Matrix: empty dimensions");
    }

    Fe& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    Fe at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const Matrix& o) const = default;
};

inline Matrix mat_mul(const Field& f, const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    Matrix r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            Fe xv = x.at(i, k);
            if (xv == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                r.at(i, j) = f.add(r.at(i, j), f.mul(xv, y.at(k, j)));
        }
    return r;
}

struct SolveResult {
    bool singular = false;      // no unique solution (rank-deficient or inconsistent)
    Matrix x;                   // valid when !singular
    std::size_t rank = 0;
    Fe det = 0;                 // square systems only; 0 when rank-deficient
};

/// Gaussian elimination with the first nonzero entry in column order as
/// pivot, so results are deterministic. Accepts square or overdetermined
/// systems; anything without a unique solution reports singular.
inline SolveResult solve_linear(const Field& f, Matrix A, Matrix b) {
    if (A.rows != b.rows) throw std::invalid_argument("solve_linear: shape mismatch");
    if (A.rows < A.cols) throw std::invalid_argument("solve_linear: underdetermined system");
    const std::size_t m = A.rows, n = A.cols, w = b.cols;
    SolveResult res;
    Fe det = f.one();
    std::size_t row = 0;
    std::vector<std::size_t> pivot_row(n);
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t pr = row;
        while (pr < m && A.at(pr, col) == 0) ++pr;
        if (pr == m) { det = 0; continue; }
        if (pr != row) {
            for (std::size_t j = col; j < n; ++j) std::swap(A.at(pr, j), A.at(row, j));
            for (std::size_t j = 0; j < w; ++j) std::swap(b.at(pr, j), b.at(row, j));
            det = f.neg(det);
        }
        Fe piv = A.at(row, col);
        det = f.mul(det, piv);
        Fe pinv = f.inv(piv);
        for (std::size_t j = col; j < n; ++j) A.at(row, j) = f.mul(A.at(row, j), pinv);
        for (std::size_t j = 0; j < w; ++j) b.at(row, j) = f.mul(b.at(row, j), pinv);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row) continue;
            Fe factor = A.at(r, col);
            if (factor == 0) continue;
            for (std::size_t j = col; j < n; ++j)
                A.at(r, j) = f.sub(A.at(r, j), f.mul(factor, A.at(row, j)));
            for (std::size_t j = 0; j < w; ++j)
                b.at(r, j) = f.sub(b.at(r, j), f.mul(factor, b.at(row, j)));
        }
        pivot_row[col] = row;
        ++row;
    }
    res.rank = row;
    res.det = (m == n) ? (row == n ? det : 0) : 0;
    if (row < n) { res.singular = true; return res; }
    // Overdetermined part must have been eliminated to zero.
    for (std::size_t r = row; r < m; ++r)
        for (std::size_t j = 0; j < w; ++j)
            if (b.at(r, j) != 0) { res.singular = true; return res; }
    res.x = Matrix(n, w);
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t j = 0; j < w; ++j) res.x.at(col, j) = b.at(pivot_row[col], j);
    return res;
}

inline std::size_t mat_rank(const Field& f, Matrix A) {
    const std::size_t m = A.rows, n = A.cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t pr = row;
        while (pr < m && A.at(pr, col) == 0) ++pr;
        if (pr == m) continue;
        for (std::size_t j = col; j < n; ++j) std::swap(A.at(pr, j), A.at(row, j));
        Fe pinv = f.inv(A.at(row, col));
        for (std::size_t j = col; j < n; ++j) A.at(row, j) = f.mul(A.at(row, j), pinv);
        for (std::size_t r = row + 1; r < m; ++r) {
            Fe factor = A.at(r, col);
            if (factor == 0) continue;
            for (std::size_t j = col; j < n; ++j)
                A.at(r, j) = f.sub(A.at(r, j), f.mul(factor, A.at(row, j)));
        }
        ++row;
    }
    return row;
}

inline Fe mat_det(const Field& f, const Matrix& A) {
    if (A.rows != A.cols) throw std::invalid_argument("mat_det: square matrix required");
    Matrix rhs(A.rows, 1);
    return solve_linear(f, A, rhs).det;
}

inline std::optional<Matrix> mat_inverse(const Field& f, const Matrix& A) {
    if (A.rows != A.cols) throw std::invalid_argument("mat_inverse: square matrix required");
    auto r = solve_linear(f, A, Matrix::identity(A.rows));
    if (r.singular) return std::nullopt;
    return r.x;
}

inline std::vector<Fe> mat_vec(const Field& f, const Matrix& A, const std::vector<Fe>& v) {
    if (A.cols != v.size()) throw std::invalid_argument("mat_vec: shape mismatch");
    std::vector<Fe> r(A.rows, 0);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j)
            r[i] = f.add(r[i], f.mul(A.at(i, j), v[j]));
    return r;
}

inline Fe dot(const Field& f, const std::vector<Fe>& x, const std::vector<Fe>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
    Fe r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) r = f.add(r, f.mul(x[i], y[i]));
    return r;
}

}  // namespace pcsilab
