#include "gsqr/core.hpp"

#include "gsqr/errors.hpp"

#include <cmath>
#include <sstream>

namespace gsqr {

GroupStructure::GroupStructure(std::vector<std::vector<int>> groups, int num_coefficients)
    : groups_(std::move(groups)), group_of_(static_cast<std::size_t>(std::max(num_coefficients, 0)), -1) {
    if (num_coefficients < 1) throw InputError("group structure needs at least one coefficient");
    for (int k = 0; k < size(); ++k) {
        if (groups_[k].empty()) throw InputError("group " + std::to_string(k) + " is empty");
        for (int j : groups_[k]) {
            if (j < 0 || j >= num_coefficients) {
                throw InputError("group " + std::to_string(k) + " references coefficient " +
                                 std::to_string(j) + " outside [0, " + std::to_string(num_coefficients) + ")");
            }
            if (group_of_[j] != -1) {
                throw InputError("coefficient " + std::to_string(j) + " appears in groups " +
                                 std::to_string(group_of_[j]) + " and " + std::to_string(k));
            }
            group_of_[j] = k;
        }
    }
    for (int j = 0; j < num_coefficients; ++j) {
        if (group_of_[j] == -1) throw InputError("coefficient " + std::to_string(j) + " belongs to no group");
    }
}

GroupStructure GroupStructure::singletons(int num_coefficients) {
    std::vector<std::vector<int>> groups;
    groups.reserve(static_cast<std::size_t>(std::max(num_coefficients, 0)));
    for (int j = 0; j < num_coefficients; ++j) groups.push_back({j});
    return GroupStructure(std::move(groups), num_coefficients);
}

QuantileProblem::QuantileProblem(Matrix X, Vector y, double tau, GroupStructure groups)
    : X_(std::move(X)), y_(std::move(y)), tau_(tau), groups_(std::move(groups)) {
    if (X_.rows() < 1 || X_.cols() < 1) throw InputError("design matrix must be non-empty");
    if (y_.size() != X_.rows()) {
        throw InputError("response has " + std::to_string(y_.size()) + " entries but design has " +
                         std::to_string(X_.rows()) + " rows");
    }
    if (!(tau_ > 0.0 && tau_ < 1.0)) throw InputError("tau must lie in (0, 1)");
    if (groups_.num_coefficients() != X_.cols()) {
        throw InputError("group structure covers " + std::to_string(groups_.num_coefficients()) +
                         " coefficients but design has " + std::to_string(X_.cols()) + " columns");
    }
    if (!X_.allFinite() || !y_.allFinite()) throw InputError("problem data contains non-finite values");
}

double quantile_loss(double t, double tau) {
    return t >= 0.0 ? 2.0 * tau * t : -2.0 * (1.0 - tau) * t;
}

Vector residuals(const Vector& beta, const QuantileProblem& problem) {
    if (beta.size() != problem.m()) {
        throw InputError("beta has length " + std::to_string(beta.size()) + ", expected " +
                         std::to_string(problem.m()));
    }
    return problem.y() - problem.X() * beta;
}

double total_loss(const Vector& beta, const QuantileProblem& problem) {
    const Vector r = residuals(beta, problem);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) sum += quantile_loss(r[i], problem.tau());
    return sum;
}

double group_max_norm(const Vector& beta, const GroupStructure& groups, int k) {
    double mx = 0.0;
    for (int j : groups.members(k)) mx = std::max(mx, std::abs(beta[j]));
    return mx;
}

double mixed_norm(const Vector& beta, const GroupStructure& groups) {
    if (beta.size() != groups.num_coefficients()) throw InputError("beta length does not match group structure");
    double sum = 0.0;
    for (int k = 0; k < groups.size(); ++k) sum += group_max_norm(beta, groups, k);
    return sum;
}

AffineVector::AffineVector(Vector constant, Vector slope, double range_lo, double range_hi)
    : c0(std::move(constant)), c1(std::move(slope)), lo(range_lo), hi(range_hi) {
    if (c0.size() != c1.size()) throw InputError("affine vector parts differ in length");
    if (!(lo <= hi)) throw InputError("affine vector parameter range is empty");
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Init: return "Init";
        case EventKind::ResidualHitsZero: return "ResidualHitsZero";
        case EventKind::GroupDeactivates: return "GroupDeactivates";
        case EventKind::ComponentReachesGroupMax: return "ComponentReachesGroupMax";
        case EventKind::GroupActivates: return "GroupActivates";
        case EventKind::ResidualLeavesZero: return "ResidualLeavesZero";
        case EventKind::ComponentLeavesGroupMax: return "ComponentLeavesGroupMax";
        case EventKind::Terminal: return "Terminal";
    }
    return "?";
}

EventKind event_kind_from_string(const std::string& name) {
    for (auto k : {EventKind::Init, EventKind::ResidualHitsZero, EventKind::GroupDeactivates,
                   EventKind::ComponentReachesGroupMax, EventKind::GroupActivates,
                   EventKind::ResidualLeavesZero, EventKind::ComponentLeavesGroupMax, EventKind::Terminal}) {
        if (to_string(k) == name) return k;
    }
    throw InputError("unknown event kind '" + name + "'");
}

std::string EventTag::step_label() const {
    switch (kind) {
        case EventKind::ResidualHitsZero: return "2a";
        case EventKind::GroupDeactivates: return "2b";
        case EventKind::ComponentReachesGroupMax: return "2c";
        case EventKind::GroupActivates: return "4a";
        case EventKind::ResidualLeavesZero: return "4b";
        case EventKind::ComponentLeavesGroupMax: return "4c";
        default: return "";
    }
}

std::string EventTag::to_string() const {
    std::ostringstream os;
    os << gsqr::to_string(kind);
    if (index >= 0) os << '(' << index << ')';
    return os.str();
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::LambdaZero: return "LambdaZero";
        case Termination::MaxActiveGroups: return "MaxActiveGroups";
        case Termination::UserStop: return "UserStop";
        case Termination::Degenerate: return "Degenerate";
    }
    return "?";
}

Termination termination_from_string(const std::string& name) {
    for (auto t : {Termination::LambdaZero, Termination::MaxActiveGroups, Termination::UserStop,
                   Termination::Degenerate}) {
        if (to_string(t) == name) return t;
    }
    throw InputError("unknown termination '" + name + "'");
}

}  // namespace gsqr
