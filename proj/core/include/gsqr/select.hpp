#pragma once

#include "gsqr/core.hpp"

#include <cstddef>
#include <vector>

namespace gsqr {

/// Residuals at or below this magnitude count as interpolated points.
inline constexpr double kZeroResidualThreshold = 1e-9;

/// beta at radius R, linearly interpolated between the bracketing nodes.
Vector interpolate_at_R(const SolutionPath& path, double R);

struct LambdaLookup {
    Vector beta;
    std::size_t node = 0;
    /// lambda sits on a breakpoint shared by several nodes; the larger-R node is returned.
    bool non_unique = false;
};

/// The minimizer at penalty lambda. beta is constant between breakpoints.
LambdaLookup interpolate_at_lambda(const SolutionPath& path, double lambda);

/// AsPrinted subtracts the zero-residual term, Conventional adds it.
enum class BicSign { AsPrinted, Conventional };

struct BicEntry {
    double R = 0.0;
    double loss = 0.0;
    int n_R = 0;
    double bic = 0.0;
};

struct BicTrace {
    std::vector<BicEntry> entries;
    double argmin_R = 0.0;
    std::size_t argmin_index = 0;
    BicSign sign_convention = BicSign::AsPrinted;
};

/**
 * BIC(R) = log(loss / n) -/+ (log n / 2n) * n_R at every node, where n_R is
 * the number of zero residuals. Zero-loss nodes get +inf and never win.
 */
BicTrace bic_trace(const SolutionPath& path, const QuantileProblem& problem, BicSign sign = BicSign::AsPrinted);

struct TradeoffPoint {
    double R = 0.0;
    double loss = 0.0;
};

/**
 * d(loss)/dR between two adjacent nodes. The loss and the mixed norm are
 * linear on a segment, so both differences are formed from beta_b - beta_a
 * instead of subtracting two large totals; this keeps full precision on very
 * short segments. Falls back to the plain finite difference when the
 * endpoints are not consistent with a single linear piece.
 */
double segment_slope(const PathNode& a, const PathNode& b, const QuantileProblem& problem);

/// (R, total loss) at each node. Between nodes the curve is linear with slope -lambda.
std::vector<TradeoffPoint> tradeoff_curve(const SolutionPath& path, const QuantileProblem& problem);

}  // namespace gsqr
