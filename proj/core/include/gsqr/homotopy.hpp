#pragma once

#include "gsqr/core.hpp"
#include "gsqr/linalg.hpp"
#include "gsqr/subgrad.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gsqr {

/**
 * Combinatorial state between two breakpoints.
 *
 * Per coefficient j of an active group, sign(j) is +1/-1 when j is maximal
 * in its group (|beta_j| equals the group max) and 0 when it is a free,
 * non-maximal component. Observations in the zero set have r_i = 0; every
 * other observation has w_i pinned to boundary_w(i), either 2*tau or
 * -2*(1-tau).
 */
class ActiveState {
public:
    ActiveState() = default;
    ActiveState(int n, int m, int g);

    bool is_active(int k) const { return active_[k]; }
    int sign(int j) const { return sign_[j]; }
    bool in_zero_set(int i) const { return zero_[i]; }
    double boundary_w(int i) const { return boundary_w_[i]; }

    int num_active() const;
    int zero_count() const;
    std::vector<int> active_groups() const;
    std::vector<int> zero_set() const;
    std::vector<int> maximal(const GroupStructure& groups, int k) const;
    std::vector<int> non_maximal(const GroupStructure& groups, int k) const;

    /// Unknowns of the beta(R) system: one magnitude per active group plus
    /// each free non-maximal component.
    int direction_unknowns(const GroupStructure& groups) const;

    void activate(const GroupStructure& groups, int k, const std::vector<int>& signs_in_group);
    void deactivate(const GroupStructure& groups, int k);
    void set_sign(int j, int s) { sign_[j] = s; }
    void add_zero(int i) { zero_[i] = true; }
    void remove_zero(int i, double w_value);
    void set_boundary_w(int i, double w_value) { boundary_w_[i] = w_value; }

private:
    std::vector<bool> active_;
    std::vector<int> sign_;
    std::vector<bool> zero_;
    std::vector<double> boundary_w_;
};

struct StopRule {
    std::optional<int> max_active_groups;
    std::optional<double> max_R;
    bool run_to_lambda_zero = true;

    void validate() const;
};

struct SolverOptions {
    /// Breakpoints closer than tie_tolerance * max(1, |value|) are a tie.
    double tie_tolerance = 1e-10;
    /// Event roots must lie beyond the current parameter by this relative margin.
    double strict_margin = 1e-12;
    double pivot_tolerance = kDefaultPivotTolerance;
    /// Tolerance for per-node optimality certification.
    double kkt_tolerance = kDefaultKktTolerance;
    bool certify = true;
    int max_nodes = 100000;

    /// Defaults overridden by GSQR_TIE_TOL, GSQR_STRICT_MARGIN,
    /// GSQR_PIVOT_TOL and GSQR_KKT_TOL when set.
    static SolverOptions from_environment();
};

struct InitResult {
    PathNode node;
    ActiveState state;
    /// GroupActivates(k) for the first group, or Terminal when no group can enter.
    EventTag entering;
};

struct Breakpoint {
    double value = kInfinity;
    EventTag event{EventKind::Terminal, -1};
};

struct SubgradientFns {
    AffineVector u;  // in 1/lambda
    AffineVector w;  // in lambda
};

/// Node 0 (beta = 0) and lambda_max. Throws ZeroResidualAtStartError if some y_i = 0.
InitResult initialize(const QuantileProblem& problem, const SolverOptions& opts = {});

/// beta as an affine function of R for the current state, anchored at node.R.
AffineVector beta_direction(const ActiveState& state, const QuantileProblem& problem, const PathNode& node,
                            const SolverOptions& opts = {});

/// First R beyond R_now where a residual reaches zero, an active group
/// vanishes, or a free component catches its group max.
Breakpoint next_R_event(const ActiveState& state, const AffineVector& beta_fn, const QuantileProblem& problem,
                        double R_now, const SolverOptions& opts = {});

/// u (in 1/lambda) and w (in lambda) for the state after an R-event.
SubgradientFns subgradient_update(const ActiveState& state, const QuantileProblem& problem, const PathNode& node,
                                  const SolverOptions& opts = {});

/// Largest lambda below lambda_now where an inactive group's ||u_G||_1
/// reaches 1, a zero-set w_i reaches a boundary, or a maximal u_j reaches 0.
/// Returns {0, Terminal} when nothing happens before lambda = 0.
Breakpoint next_lambda_event(const ActiveState& state, const SubgradientFns& fns, const QuantileProblem& problem,
                             double lambda_now, const SolverOptions& opts = {});

void apply_R_event(ActiveState& state, const EventTag& event, const AffineVector& beta_fn, double R_break,
                   const QuantileProblem& problem);

void apply_lambda_event(ActiveState& state, const EventTag& event, const SubgradientFns& fns, double lambda_break,
                        const QuantileProblem& problem, const SolverOptions& opts = {});

enum class PathFailure { None, TieBreak, SingularSystem, NoEntry, Unbounded, KktFailure, NodeLimit };

std::string to_string(PathFailure f);
PathFailure path_failure_from_string(const std::string& name);

/// SolutionPath plus the reason for a Degenerate termination.
struct PathResult {
    SolutionPath path;
    PathFailure failure = PathFailure::None;
};

/**
 * Full regularization path from beta = 0. Tie and singular-system failures
 * end the path early with Termination::Degenerate; the nodes computed so far
 * are kept. Throws ZeroResidualAtStartError when the precondition fails.
 */
PathResult solve_path(const QuantileProblem& problem, const StopRule& stop = {}, const SolverOptions& opts = {});
PathResult solve_path(std::shared_ptr<const QuantileProblem> problem, const StopRule& stop = {},
                      const SolverOptions& opts = {});

/// kkt_verify on node at the given lambda, using the node's u and w functions.
KktReport verify_node(const PathNode& node, double lambda, const QuantileProblem& problem, double tol);

/// Lambdas at which a node is certified: both finite endpoints and the midpoint.
std::vector<double> certification_lambdas(const PathNode& node);

}  // namespace gsqr
