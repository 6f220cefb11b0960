#include "gsqr/linalg.hpp"

#include "gsqr/errors.hpp"

#include <cmath>
#include <vector>

namespace gsqr {

namespace {

// Row-pivoted LU factors of a square matrix, stored in place.
struct LuFactors {
    Matrix lu;
    std::vector<Eigen::Index> perm;  // perm[k]: row swapped with k at step k

    Matrix solve(Matrix B) const {
        const Eigen::Index n = lu.rows();
        for (Eigen::Index k = 0; k < n; ++k) {
            if (perm[static_cast<std::size_t>(k)] != k) B.row(k).swap(B.row(perm[static_cast<std::size_t>(k)]));
        }
        for (Eigen::Index row = 1; row < n; ++row) {
            for (Eigen::Index k = 0; k < row; ++k) B.row(row) -= lu(row, k) * B.row(k);
        }
        for (Eigen::Index row = n - 1; row >= 0; --row) {
            for (Eigen::Index k = row + 1; k < n; ++k) B.row(row) -= lu(row, k) * B.row(k);
            B.row(row) /= lu(row, row);
        }
        return B;
    }
};

LuFactors factor(Matrix A, double threshold) {
    const Eigen::Index n = A.rows();
    LuFactors f{std::move(A), std::vector<Eigen::Index>(static_cast<std::size_t>(n))};
    Matrix& a = f.lu;
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot_row = col;
        a.col(col).tail(n - col).cwiseAbs().maxCoeff(&pivot_row);
        pivot_row += col;
        const double pivot = a(pivot_row, col);
        if (std::abs(pivot) <= threshold) {
            throw SingularSystemError("solve_dense: pivot " + std::to_string(pivot) + " in column " +
                                      std::to_string(col) + " below threshold " + std::to_string(threshold));
        }
        f.perm[static_cast<std::size_t>(col)] = pivot_row;
        if (pivot_row != col) a.row(col).swap(a.row(pivot_row));
        for (Eigen::Index row = col + 1; row < n; ++row) {
            const double factor = a(row, col) / a(col, col);
            a(row, col) = factor;
            if (factor == 0.0) continue;
            a.row(row).tail(n - col - 1) -= factor * a.row(col).tail(n - col - 1);
        }
    }
    return f;
}

// B - A X with the products accumulated in extended precision.
Matrix residual(const Matrix& A, const Matrix& B, const Matrix& X) {
    Matrix R(B.rows(), B.cols());
    for (Eigen::Index c = 0; c < B.cols(); ++c) {
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            long double acc = B(i, c);
            for (Eigen::Index k = 0; k < A.cols(); ++k) {
                acc -= static_cast<long double>(A(i, k)) * static_cast<long double>(X(k, c));
            }
            R(i, c) = static_cast<double>(acc);
        }
    }
    return R;
}

}  // namespace

Matrix solve_dense(Matrix A, Matrix B, double pivot_tolerance, int refinement_rounds) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw InputError("solve_dense: matrix is not square");
    if (B.rows() != n) throw InputError("solve_dense: right-hand side has wrong row count");
    if (n == 0) return B;

    const double scale = A.cwiseAbs().rowwise().sum().maxCoeff();
    if (!(scale > 0.0)) throw SingularSystemError("solve_dense: zero matrix");

    const LuFactors f = factor(A, pivot_tolerance * scale);
    Matrix X = f.solve(B);
    for (int round = 0; round < refinement_rounds; ++round) X += f.solve(residual(A, B, X));
    return X;
}

}  // namespace gsqr
