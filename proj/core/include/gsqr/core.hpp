#pragma once

#include <Eigen/Dense>

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace gsqr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/**
 * A partition of the coefficient indices {0..m-1} into disjoint,
 * non-empty groups. Construction validates the partition.
 */
class GroupStructure {
public:
    GroupStructure() = default;
    GroupStructure(std::vector<std::vector<int>> groups, int num_coefficients);

    /// One singleton group per coefficient.
    static GroupStructure singletons(int num_coefficients);

    int size() const { return static_cast<int>(groups_.size()); }
    int num_coefficients() const { return static_cast<int>(group_of_.size()); }
    const std::vector<int>& members(int k) const { return groups_[k]; }
    int group_of(int j) const { return group_of_[j]; }
    const std::vector<std::vector<int>>& groups() const { return groups_; }

    bool operator==(const GroupStructure&) const = default;

private:
    std::vector<std::vector<int>> groups_;
    std::vector<int> group_of_;
};

/// Design matrix, response, quantile level and group partition.
class QuantileProblem {
public:
    QuantileProblem(Matrix X, Vector y, double tau, GroupStructure groups);

    const Matrix& X() const { return X_; }
    const Vector& y() const { return y_; }
    double tau() const { return tau_; }
    const GroupStructure& groups() const { return groups_; }
    int n() const { return static_cast<int>(X_.rows()); }
    int m() const { return static_cast<int>(X_.cols()); }

private:
    Matrix X_;
    Vector y_;
    double tau_;
    GroupStructure groups_;
};

/// Check loss: 2*tau*t for t >= 0, -2*(1-tau)*t otherwise.
double quantile_loss(double t, double tau);

double total_loss(const Vector& beta, const QuantileProblem& problem);

/// Sum over groups of the largest absolute coefficient in the group.
double mixed_norm(const Vector& beta, const GroupStructure& groups);

/// Largest absolute value within group k.
double group_max_norm(const Vector& beta, const GroupStructure& groups, int k);

/// y - X * beta
Vector residuals(const Vector& beta, const QuantileProblem& problem);

/**
 * Vector-valued affine function of one scalar: c0 + s * c1, defined on
 * [lo, hi]. The bounds may be +infinity.
 */
struct AffineVector {
    Vector c0;
    Vector c1;
    double lo = 0.0;
    double hi = kInfinity;

    AffineVector() = default;
    AffineVector(Vector constant, Vector slope, double range_lo, double range_hi);

    Vector at(double s) const { return c0 + s * c1; }
    double at(Eigen::Index i, double s) const { return c0[i] + s * c1[i]; }
    Eigen::Index size() const { return c0.size(); }
};

enum class EventKind {
    Init,
    ResidualHitsZero,         // 2a
    GroupDeactivates,         // 2b
    ComponentReachesGroupMax, // 2c
    GroupActivates,           // 4a
    ResidualLeavesZero,       // 4b
    ComponentLeavesGroupMax,  // 4c
    Terminal,
};

/// Why a node was created (or why its lambda-interval ended). `index` is the
/// zero-based observation, coefficient or group the event refers to, or -1.
struct EventTag {
    EventKind kind = EventKind::Init;
    int index = -1;

    /// "2a", "2b", "2c", "4a", "4b", "4c", or "" for Init/Terminal.
    std::string step_label() const;
    std::string to_string() const;

    bool operator==(const EventTag&) const = default;
};

std::string to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& name);

/**
 * One breakpoint of the path. beta is the minimizer for every lambda in
 * [lambda_lo, lambda_hi]; u is affine in 1/lambda and w affine in lambda on
 * that interval. `event` is the R-event that produced the node and `exit`
 * the lambda-event that closed its interval.
 */
struct PathNode {
    double R = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = kInfinity;
    Vector beta;
    Vector r;
    AffineVector u;  // parameter is 1/lambda
    AffineVector w;  // parameter is lambda
    EventTag event;
    EventTag exit{EventKind::Terminal, -1};

    // at lambda = 0 the 1/lambda part of u vanishes on a valid path
    Vector u_at_lambda(double lambda) const { return lambda == 0.0 ? u.c0 : u.at(1.0 / lambda); }
    Vector w_at_lambda(double lambda) const { return w.at(lambda); }
};

enum class Termination { LambdaZero, MaxActiveGroups, UserStop, Degenerate };

std::string to_string(Termination t);
Termination termination_from_string(const std::string& name);

struct SolutionPath {
    std::shared_ptr<const QuantileProblem> problem;
    std::vector<PathNode> nodes;
    Termination termination = Termination::LambdaZero;
    std::string diagnostic;

    bool empty() const { return nodes.empty(); }
};

}  // namespace gsqr
