#pragma once

#include "gsqr/core.hpp"

#include <cstdint>

namespace gsqr {

struct OracleOptions {
    int restarts = 5;
    std::uint64_t seed = 12345;
    int max_sweeps = 10000;
    double tolerance = 1e-10;  // objective change per sweep that ends coordinate descent
    bool shuffle_coordinates = false;
};

struct OracleResult {
    Vector beta;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// total_loss(beta) + lambda * mixed_norm(beta)
double penalized_objective(const Vector& beta, const QuantileProblem& problem, double lambda);

/**
 * Minimizes the penalized objective at a fixed lambda for tiny problems
 * (m <= 8, n <= 12). Each restart runs cyclic coordinate descent with an
 * exact line search over the breakpoints of the one-dimensional restriction,
 * then walks to a vertex of the kink arrangement and tries every edge
 * leaving it, which removes the stalls coordinate descent is prone to on
 * non-separable kinks. `converged` is true when all restarts agree.
 */
OracleResult brute_force_min(const QuantileProblem& problem, double lambda, const OracleOptions& opts = {});

}  // namespace gsqr
