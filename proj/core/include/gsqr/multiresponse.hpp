#pragma once

#include "gsqr/core.hpp"

namespace gsqr {

/**
 * Index bookkeeping for p responses sharing one design. Responses are
 * flattened column-major (all n observations of response 0, then response
 * 1, ...), and coefficient (k, j) of regressor k on response j lives in
 * stacked column j * m + k. Group k collects regressor k across responses.
 */
struct StackedLayout {
    int n = 0;
    int m = 0;
    int p = 0;

    int row(int i, int j) const { return j * n + i; }
    int column(int k, int j) const { return j * m + k; }
    int rows() const { return n * p; }
    int columns() const { return m * p; }
};

struct StackedProblem {
    QuantileProblem problem;
    StackedLayout layout;
};

/// Block-diagonal stacking of X (n x m) against Y (n x p), one group per regressor.
StackedProblem stack_problem(const Matrix& Y, const Matrix& X, double tau);

/// m x p coefficient matrix B with B(k, j) the effect of regressor k on response j.
Matrix unstack_coefficients(const Vector& beta, const StackedLayout& layout);

Vector stack_coefficients(const Matrix& B, const StackedLayout& layout);

}  // namespace gsqr
