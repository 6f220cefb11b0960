#pragma once

#include "gsqr/core.hpp"

namespace gsqr {

/// Default relative pivot threshold: a pivot below this times ||A||_inf is singular.
inline constexpr double kDefaultPivotTolerance = 1e-12;

/**
 * Solves A X = B for square A by Gaussian elimination with partial pivoting,
 * followed by refinement_rounds steps of iterative refinement with
 * extended-precision residuals. Throws SingularSystemError when a pivot
 * falls below pivot_tolerance * ||A||_inf. An empty system yields an empty
 * solution.
 */
Matrix solve_dense(Matrix A, Matrix B, double pivot_tolerance = kDefaultPivotTolerance, int refinement_rounds = 0);

}  // namespace gsqr
