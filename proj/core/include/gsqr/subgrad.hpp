#pragma once

#include "gsqr/core.hpp"

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsqr {

inline constexpr double kDefaultKktTolerance = 1e-8;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double lo_, double hi_);

    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
    /// Nearest point of the interval.
    double project(double x) const { return std::min(std::max(x, lo), hi); }
    bool degenerate() const { return lo == hi; }
};

/// Subdifferential of the check loss at r_i: {2tau}, [-2(1-tau), 2tau] or {-2(1-tau)}.
Interval rho_subdifferential(double r_i, double tau);

/**
 * True iff u_g lies (within tol) in the subdifferential of the max-norm at
 * beta_g: inside the unit l1-ball, and for a nonzero group on the face picked
 * out by the signs of the maximal components, with zero weight on
 * non-maximal components.
 */
bool group_norm_subgradient_check(std::span<const double> beta_g, std::span<const double> u_g, double tol);
bool group_norm_subgradient_check(const Vector& beta_g, const Vector& u_g, double tol);

struct Violation {
    int index = -1;
    double magnitude = 0.0;
};

struct KktReport {
    bool ok = true;
    double max_stationarity_violation = 0.0;
    std::vector<Violation> w_violations;            // w_i outside the loss subdifferential range
    std::vector<Violation> u_violations;            // per group, membership in the norm subdifferential
    std::vector<Violation> consistency_violations;  // sign of r_i inconsistent with w_i
    double worst = 0.0;                              // largest magnitude of any failed check

    std::string summary() const;
};

/**
 * Checks the optimality system: -X^T w + lambda u = 0, w_i in the check-loss
 * subdifferential at r_i = (y - X beta)_i, u in the mixed-norm
 * subdifferential at beta. All tolerances are absolute.
 */
KktReport kkt_verify(const Vector& beta, double lambda, const Vector& u, const Vector& w,
                     const QuantileProblem& problem, double tol = kDefaultKktTolerance);

}  // namespace gsqr
