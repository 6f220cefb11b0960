#include "gsqr/errors.hpp"
#include "gsqr/homotopy.hpp"
#include "gsqr/multiresponse.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gsqr;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> N;
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) M(i, j) = N(rng);
    }
    return M;
}

}  // namespace

TEST(StackedLayout, IndexMaps) {
    const StackedLayout L{5, 3, 2};
    EXPECT_EQ(L.rows(), 10);
    EXPECT_EQ(L.columns(), 6);
    EXPECT_EQ(L.row(4, 1), 9);
    EXPECT_EQ(L.column(2, 1), 5);
}

TEST(StackProblem, ShapeContract) {
    Matrix X(2, 2);
    X << 1, 0, 0, 1;
    Matrix Y(2, 2);
    Y << 1, 2, 3, 4;
    const StackedProblem sp = stack_problem(Y, X, 0.5);
    EXPECT_EQ(sp.problem.n(), 4);
    EXPECT_EQ(sp.problem.m(), 4);
    EXPECT_EQ(sp.problem.groups().size(), 2);
    EXPECT_EQ(sp.problem.groups().members(0), (std::vector<int>{0, 2}));
    EXPECT_EQ(sp.problem.groups().members(1), (std::vector<int>{1, 3}));
    Matrix expected = Matrix::Zero(4, 4);
    expected.block(0, 0, 2, 2) = X;
    expected.block(2, 2, 2, 2) = X;
    EXPECT_EQ(sp.problem.X(), expected);
    Vector y(4);
    y << 1, 3, 2, 4;
    EXPECT_EQ(sp.problem.y(), y);
}

TEST(StackProblem, CarsShapedDimensions) {
    std::mt19937_64 rng(1);
    const StackedProblem sp = stack_problem(random_matrix(rng, 82, 5), random_matrix(rng, 82, 14), 0.5);
    EXPECT_EQ(sp.problem.n(), 410);
    EXPECT_EQ(sp.problem.m(), 70);
    EXPECT_EQ(sp.problem.groups().size(), 14);
    for (int k = 0; k < 14; ++k) EXPECT_EQ(sp.problem.groups().members(k).size(), 5u);
}

TEST(StackProblem, SingleResponseIsThePlainProblem) {
    std::mt19937_64 rng(2);
    const Matrix X = random_matrix(rng, 6, 3);
    const Matrix Y = random_matrix(rng, 6, 1);
    const StackedProblem sp = stack_problem(Y, X, 0.4);
    EXPECT_EQ(sp.problem.X(), X);
    EXPECT_EQ(sp.problem.y(), Y.col(0));
    EXPECT_EQ(sp.problem.groups(), GroupStructure::singletons(3));
}

TEST(StackProblem, Errors) {
    std::mt19937_64 rng(3);
    EXPECT_THROW(stack_problem(Matrix(4, 0), random_matrix(rng, 4, 2), 0.5), InputError);
    EXPECT_THROW(stack_problem(random_matrix(rng, 3, 2), random_matrix(rng, 4, 2), 0.5), InputError);
    EXPECT_THROW(stack_problem(random_matrix(rng, 4, 2), random_matrix(rng, 4, 2), 1.5), InputError);
}

TEST(Unstack, RoundTripAndRowNorms) {
    std::mt19937_64 rng(4);
    const StackedLayout L{7, 4, 3};
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix B = random_matrix(rng, 4, 3);
        const Vector beta = stack_coefficients(B, L);
        EXPECT_EQ(unstack_coefficients(beta, L), B);
        const StackedProblem sp = stack_problem(random_matrix(rng, 7, 3), random_matrix(rng, 7, 4), 0.5);
        for (int k = 0; k < 4; ++k) {
            EXPECT_EQ(group_max_norm(beta, sp.problem.groups(), k), B.row(k).cwiseAbs().maxCoeff());
        }
    }
    EXPECT_TRUE(unstack_coefficients(Vector::Zero(12), L).isZero());
    EXPECT_THROW(unstack_coefficients(Vector::Zero(11), L), InputError);
    EXPECT_THROW(stack_coefficients(Matrix::Zero(3, 3), L), InputError);
}

TEST(StackProblem, LossAndPenaltyMatchTheDoubleSum) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 9, m = 4, p = 3;
        const Matrix X = random_matrix(rng, n, m);
        const Matrix Y = random_matrix(rng, n, p);
        const Matrix B = random_matrix(rng, m, p);
        const double tau = 0.3;
        const StackedProblem sp = stack_problem(Y, X, tau);
        const Vector beta = stack_coefficients(B, sp.layout);

        double loss = 0.0;
        for (int j = 0; j < p; ++j) {
            for (int i = 0; i < n; ++i) loss += quantile_loss(Y(i, j) - X.row(i).dot(B.col(j)), tau);
        }
        double penalty = 0.0;
        for (int k = 0; k < m; ++k) penalty += B.row(k).cwiseAbs().maxCoeff();
        EXPECT_NEAR(total_loss(beta, sp.problem), loss, 1e-12);
        EXPECT_NEAR(mixed_norm(beta, sp.problem.groups()), penalty, 1e-12);
    }
}

TEST(StackProblem, StackedPathIsCertified) {
    std::mt19937_64 rng(6);
    const StackedProblem sp = stack_problem(random_matrix(rng, 6, 2), random_matrix(rng, 6, 3), 0.5);
    const PathResult res = solve_path(sp.problem);
    ASSERT_EQ(res.failure, PathFailure::None) << res.path.diagnostic;
    EXPECT_EQ(res.path.termination, Termination::LambdaZero);
}
