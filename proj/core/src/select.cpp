#include "gsqr/select.hpp"

#include "gsqr/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gsqr {

namespace {

constexpr double kBreakpointTolerance = 1e-12;

bool same_breakpoint(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= kBreakpointTolerance * std::max(1.0, std::abs(a));
}

void require_nodes(const SolutionPath& path) {
    if (path.nodes.empty()) throw InputError("solution path is empty");
}

}  // namespace

Vector interpolate_at_R(const SolutionPath& path, double R) {
    require_nodes(path);
    const auto& nodes = path.nodes;
    const double last = nodes.back().R;
    if (!(R >= 0.0) || R > last + kBreakpointTolerance * std::max(1.0, last)) {
        throw InputError("R = " + std::to_string(R) + " outside the path range [0, " + std::to_string(last) + "]");
    }
    auto upper = std::lower_bound(nodes.begin(), nodes.end(), R,
                                  [](const PathNode& node, double value) { return node.R < value; });
    if (upper == nodes.end()) return nodes.back().beta;
    if (upper->R == R || upper == nodes.begin()) return upper->beta;
    const PathNode& hi = *upper;
    const PathNode& lo = *(upper - 1);
    const double t = (R - lo.R) / (hi.R - lo.R);
    return (1.0 - t) * lo.beta + t * hi.beta;
}

LambdaLookup interpolate_at_lambda(const SolutionPath& path, double lambda) {
    require_nodes(path);
    if (!(lambda >= 0.0)) throw InputError("lambda must be >= 0");
    const auto& nodes = path.nodes;

    LambdaLookup out;
    if (lambda > nodes.front().lambda_lo && !same_breakpoint(lambda, nodes.front().lambda_lo)) {
        out.beta = nodes.front().beta;
        return out;
    }
    int hits = 0;
    for (std::size_t t = 0; t < nodes.size(); ++t) {
        const PathNode& node = nodes[t];
        const bool inside = (lambda >= node.lambda_lo || same_breakpoint(lambda, node.lambda_lo)) &&
                            (lambda <= node.lambda_hi || same_breakpoint(lambda, node.lambda_hi));
        if (inside) {
            ++hits;
            out.node = t;
        }
    }
    if (hits == 0) {
        throw InputError("lambda = " + std::to_string(lambda) + " is below the computed path (smallest lambda " +
                         std::to_string(nodes.back().lambda_lo) + ")");
    }
    out.beta = nodes[out.node].beta;
    out.non_unique = hits > 1;
    return out;
}

BicTrace bic_trace(const SolutionPath& path, const QuantileProblem& problem, BicSign sign) {
    require_nodes(path);
    const int n = problem.n();
    const double per_zero = std::log(static_cast<double>(n)) / (2.0 * n);

    BicTrace trace;
    trace.sign_convention = sign;
    double best = kInfinity;
    for (std::size_t t = 0; t < path.nodes.size(); ++t) {
        const PathNode& node = path.nodes[t];
        const Vector r = residuals(node.beta, problem);
        BicEntry e;
        e.R = node.R;
        for (int i = 0; i < n; ++i) {
            e.loss += quantile_loss(r[i], problem.tau());
            if (std::abs(r[i]) <= kZeroResidualThreshold) ++e.n_R;
        }
        if (e.n_R == n || e.loss <= 0.0) {
            e.bic = kInfinity;  // log(0) guard
        } else {
            const double penalty = per_zero * e.n_R;
            e.bic = std::log(e.loss / n) + (sign == BicSign::AsPrinted ? -penalty : penalty);
        }
        if (e.bic < best) {
            best = e.bic;
            trace.argmin_index = t;
        }
        trace.entries.push_back(e);
    }
    trace.argmin_R = std::isfinite(best) ? trace.entries[trace.argmin_index].R : std::nan("");
    return trace;
}

double segment_slope(const PathNode& a, const PathNode& b, const QuantileProblem& problem) {
    const double naive = (total_loss(b.beta, problem) - total_loss(a.beta, problem)) / (b.R - a.R);
    const Vector delta = b.beta - a.beta;
    const Vector ra = residuals(a.beta, problem);
    const Vector rb = residuals(b.beta, problem);
    const Vector dr = -(problem.X() * delta);
    const double tau = problem.tau();

    double dloss = 0.0;
    for (Eigen::Index i = 0; i < dr.size(); ++i) {
        const double tol = 1e-9 * (1.0 + std::abs(problem.y()[i]));
        if (ra[i] * rb[i] < 0.0 && std::min(std::abs(ra[i]), std::abs(rb[i])) > tol) return naive;
        dloss += (ra[i] + rb[i] > 0.0 ? 2.0 * tau : -2.0 * (1.0 - tau)) * dr[i];
    }

    const GroupStructure& groups = problem.groups();
    double dR = 0.0;
    for (int k = 0; k < groups.size(); ++k) {
        int arg = -1;
        double best = 0.0;
        for (int j : groups.members(k)) {
            const double mid = std::abs(a.beta[j] + b.beta[j]);
            if (mid > best) {
                best = mid;
                arg = j;
            }
        }
        if (arg < 0) continue;
        // the midpoint's largest component must carry the group norm at both ends
        const double max_a = group_max_norm(a.beta, groups, k);
        const double max_b = group_max_norm(b.beta, groups, k);
        if (std::abs(std::abs(a.beta[arg]) - max_a) > 1e-9 * (1.0 + max_a) ||
            std::abs(std::abs(b.beta[arg]) - max_b) > 1e-9 * (1.0 + max_b)) {
            return naive;
        }
        dR += (a.beta[arg] + b.beta[arg] > 0.0 ? 1.0 : -1.0) * delta[arg];
    }
    if (!(dR > 0.0)) return naive;
    return dloss / dR;
}

std::vector<TradeoffPoint> tradeoff_curve(const SolutionPath& path, const QuantileProblem& problem) {
    require_nodes(path);
    std::vector<TradeoffPoint> out;
    out.reserve(path.nodes.size());
    for (const PathNode& node : path.nodes) out.push_back({node.R, total_loss(node.beta, problem)});
    return out;
}

}  // namespace gsqr
