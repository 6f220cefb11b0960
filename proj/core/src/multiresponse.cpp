#include "gsqr/multiresponse.hpp"

#include "gsqr/errors.hpp"

namespace gsqr {

StackedProblem stack_problem(const Matrix& Y, const Matrix& X, double tau) {
    if (Y.cols() == 0) throw InputError("stack_problem: no responses (p = 0)");
    if (Y.rows() != X.rows()) {
        throw InputError("stack_problem: Y has " + std::to_string(Y.rows()) + " rows but X has " +
                         std::to_string(X.rows()));
    }
    StackedLayout layout{static_cast<int>(X.rows()), static_cast<int>(X.cols()), static_cast<int>(Y.cols())};

    Matrix design = Matrix::Zero(layout.rows(), layout.columns());
    Vector response(layout.rows());
    for (int j = 0; j < layout.p; ++j) {
        design.block(layout.row(0, j), layout.column(0, j), layout.n, layout.m) = X;
        response.segment(layout.row(0, j), layout.n) = Y.col(j);
    }

    std::vector<std::vector<int>> groups(static_cast<std::size_t>(layout.m));
    for (int k = 0; k < layout.m; ++k) {
        for (int j = 0; j < layout.p; ++j) groups[k].push_back(layout.column(k, j));
    }
    return {QuantileProblem(std::move(design), std::move(response), tau,
                            GroupStructure(std::move(groups), layout.columns())),
            layout};
}

Matrix unstack_coefficients(const Vector& beta, const StackedLayout& layout) {
    if (beta.size() != layout.columns()) {
        throw InputError("unstack_coefficients: expected " + std::to_string(layout.columns()) + " coefficients, got " +
                         std::to_string(beta.size()));
    }
    Matrix B(layout.m, layout.p);
    for (int k = 0; k < layout.m; ++k) {
        for (int j = 0; j < layout.p; ++j) B(k, j) = beta[layout.column(k, j)];
    }
    return B;
}

Vector stack_coefficients(const Matrix& B, const StackedLayout& layout) {
    if (B.rows() != layout.m || B.cols() != layout.p) throw InputError("stack_coefficients: shape mismatch");
    Vector beta(layout.columns());
    for (int k = 0; k < layout.m; ++k) {
        for (int j = 0; j < layout.p; ++j) beta[layout.column(k, j)] = B(k, j);
    }
    return beta;
}

}  // namespace gsqr
