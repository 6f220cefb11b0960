#include "gsqr/homotopy.hpp"

#include "gsqr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace gsqr {

// ---------------------------------------------------------------------------
// ActiveState

ActiveState::ActiveState(int n, int m, int g)
    : active_(static_cast<std::size_t>(g), false),
      sign_(static_cast<std::size_t>(m), 0),
      zero_(static_cast<std::size_t>(n), false),
      boundary_w_(static_cast<std::size_t>(n), 0.0) {}

int ActiveState::num_active() const { return static_cast<int>(std::count(active_.begin(), active_.end(), true)); }

int ActiveState::zero_count() const { return static_cast<int>(std::count(zero_.begin(), zero_.end(), true)); }

std::vector<int> ActiveState::active_groups() const {
    std::vector<int> out;
    for (std::size_t k = 0; k < active_.size(); ++k) {
        if (active_[k]) out.push_back(static_cast<int>(k));
    }
    return out;
}

std::vector<int> ActiveState::zero_set() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < zero_.size(); ++i) {
        if (zero_[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> ActiveState::maximal(const GroupStructure& groups, int k) const {
    std::vector<int> out;
    for (int j : groups.members(k)) {
        if (sign_[j] != 0) out.push_back(j);
    }
    return out;
}

std::vector<int> ActiveState::non_maximal(const GroupStructure& groups, int k) const {
    std::vector<int> out;
    for (int j : groups.members(k)) {
        if (sign_[j] == 0) out.push_back(j);
    }
    return out;
}

int ActiveState::direction_unknowns(const GroupStructure& groups) const {
    int count = 0;
    for (int k : active_groups()) count += 1 + static_cast<int>(non_maximal(groups, k).size());
    return count;
}

void ActiveState::activate(const GroupStructure& groups, int k, const std::vector<int>& signs_in_group) {
    const auto& idx = groups.members(k);
    if (signs_in_group.size() != idx.size()) throw InputError("activate: sign vector has wrong length");
    if (std::all_of(signs_in_group.begin(), signs_in_group.end(), [](int s) { return s == 0; })) {
        throw SingularSystemError("group " + std::to_string(k) + " entered with an empty maximal set");
    }
    active_[k] = true;
    for (std::size_t a = 0; a < idx.size(); ++a) sign_[idx[a]] = signs_in_group[a];
}

void ActiveState::deactivate(const GroupStructure& groups, int k) {
    active_[k] = false;
    for (int j : groups.members(k)) sign_[j] = 0;
}

void ActiveState::remove_zero(int i, double w_value) {
    zero_[i] = false;
    boundary_w_[i] = w_value;
}

// ---------------------------------------------------------------------------
// options

void StopRule::validate() const {
    if (!max_active_groups && !max_R && !run_to_lambda_zero) throw InputError("stop rule: no rule set");
    if (max_active_groups && *max_active_groups < 0) throw InputError("stop rule: max_active_groups must be >= 0");
    if (max_R && !(*max_R >= 0.0)) throw InputError("stop rule: max_R must be >= 0");
}

namespace {

void read_env(const char* name, double& target) {
    if (const char* value = std::getenv(name)) {
        char* end = nullptr;
        const double parsed = std::strtod(value, &end);
        if (end == value || *end != '\0' || !(parsed > 0.0)) {
            throw InputError(std::string("environment variable ") + name + " is not a positive number");
        }
        target = parsed;
    }
}

}  // namespace

SolverOptions SolverOptions::from_environment() {
    SolverOptions opts;
    read_env("GSQR_TIE_TOL", opts.tie_tolerance);
    read_env("GSQR_STRICT_MARGIN", opts.strict_margin);
    read_env("GSQR_PIVOT_TOL", opts.pivot_tolerance);
    read_env("GSQR_KKT_TOL", opts.kkt_tolerance);
    return opts;
}

std::string to_string(PathFailure f) {
    switch (f) {
        case PathFailure::None: return "None";
        case PathFailure::TieBreak: return "TieBreak";
        case PathFailure::SingularSystem: return "SingularSystem";
        case PathFailure::NoEntry: return "NoEntry";
        case PathFailure::Unbounded: return "Unbounded";
        case PathFailure::KktFailure: return "KktFailure";
        case PathFailure::NodeLimit: return "NodeLimit";
    }
    return "?";
}

PathFailure path_failure_from_string(const std::string& name) {
    for (auto f : {PathFailure::None, PathFailure::TieBreak, PathFailure::SingularSystem, PathFailure::NoEntry,
                   PathFailure::Unbounded, PathFailure::KktFailure, PathFailure::NodeLimit}) {
        if (to_string(f) == name) return f;
    }
    throw InputError("unknown path failure '" + name + "'");
}

// ---------------------------------------------------------------------------
// event search helpers

namespace {

struct Candidate {
    double value;
    EventTag event;
};

double margin_of(double now, double margin) { return margin * std::max(1.0, std::abs(now)); }

// Parameter beyond `now` at which a quantity that is currently `f` (>= 0 on
// the feasible side) and changes at rate `slope` reaches zero.
double first_zero(double f, double slope, double now) {
    if (!(slope < 0.0)) return kInfinity;
    return now + std::max(f, 0.0) / -slope;
}

// Selects the extremal candidate; two candidates within the tie tolerance
// violate the one-at-a-time condition.
Breakpoint pick(std::vector<Candidate> cands, bool smallest, double tie_tol, const char* parameter) {
    if (cands.empty()) return {};
    std::sort(cands.begin(), cands.end(), [smallest](const Candidate& a, const Candidate& b) {
        return smallest ? a.value < b.value : a.value > b.value;
    });
    if (cands.size() >= 2) {
        const double a = cands[0].value;
        const double b = cands[1].value;
        if (std::abs(a - b) <= tie_tol * std::max(1.0, std::abs(a))) {
            std::ostringstream os;
            os.precision(17);
            os << "events " << cands[0].event.to_string() << " and " << cands[1].event.to_string() << " coincide at "
               << parameter << " = " << a << " (one-at-a-time condition violated; add jitter to the data)";
            throw TieBreakError(os.str());
        }
    }
    return {cands[0].value, cands[0].event};
}

}  // namespace

// ---------------------------------------------------------------------------
// initialization

InitResult initialize(const QuantileProblem& problem, const SolverOptions& opts) {
    const int n = problem.n();
    const double tau = problem.tau();
    ActiveState state(n, problem.m(), problem.groups().size());

    Vector w0(n);
    for (int i = 0; i < n; ++i) {
        const double yi = problem.y()[i];
        if (yi == 0.0) {
            throw ZeroResidualAtStartError("observation " + std::to_string(i) +
                                           " has a zero residual at beta = 0; jitter the response");
        }
        w0[i] = yi > 0.0 ? 2.0 * tau : -2.0 * (1.0 - tau);
        state.set_boundary_w(i, w0[i]);
    }

    const Vector u1 = problem.X().transpose() * w0;
    SubgradientFns fns{AffineVector(Vector::Zero(problem.m()), u1, 0.0, kInfinity),
                       AffineVector(w0, Vector::Zero(n), 0.0, kInfinity)};
    const Breakpoint entry = next_lambda_event(state, fns, problem, kInfinity, opts);

    InitResult result;
    PathNode& node = result.node;
    node.R = 0.0;
    node.lambda_hi = kInfinity;
    node.lambda_lo = entry.event.kind == EventKind::Terminal ? 0.0 : entry.value;
    node.beta = Vector::Zero(problem.m());
    node.r = problem.y();
    node.u = fns.u;
    node.u.lo = 0.0;
    node.u.hi = node.lambda_lo > 0.0 ? 1.0 / node.lambda_lo : kInfinity;
    node.w = fns.w;
    node.w.lo = node.lambda_lo;
    node.w.hi = kInfinity;
    node.event = {EventKind::Init, -1};
    node.exit = entry.event;

    if (entry.event.kind == EventKind::GroupActivates) {
        apply_lambda_event(state, entry.event, fns, entry.value, problem, opts);
    }
    result.state = std::move(state);
    result.entering = entry.event;
    return result;
}

// ---------------------------------------------------------------------------
// step 1: beta as a function of R

AffineVector beta_direction(const ActiveState& state, const QuantileProblem& problem, const PathNode& node,
                            const SolverOptions& opts) {
    const auto& groups = problem.groups();
    const Matrix& X = problem.X();
    const std::vector<int> zero = state.zero_set();
    const std::vector<int> active = state.active_groups();

    std::vector<int> free_components;
    for (int k : active) {
        for (int j : state.non_maximal(groups, k)) free_components.push_back(j);
    }
    const int num_mag = static_cast<int>(active.size());
    const int unknowns = num_mag + static_cast<int>(free_components.size());
    const int equations = static_cast<int>(zero.size()) + 1;
    if (unknowns != equations) {
        throw SingularSystemError("degrees-of-freedom imbalance in the beta(R) system: " + std::to_string(unknowns) +
                                  " unknowns, " + std::to_string(equations) + " equations");
    }

    // unknowns: one magnitude t_k per active group, then the free components;
    // rows: r_i = 0 for each i in the zero set, then sum_k t_k = R
    Matrix A = Matrix::Zero(unknowns, unknowns);
    Matrix B = Matrix::Zero(unknowns, 2);
    for (int row = 0; row < static_cast<int>(zero.size()); ++row) {
        const int i = zero[row];
        for (int a = 0; a < num_mag; ++a) {
            double coeff = 0.0;
            for (int j : state.maximal(groups, active[a])) coeff += state.sign(j) * X(i, j);
            A(row, a) = coeff;
        }
        for (int f = 0; f < static_cast<int>(free_components.size()); ++f) A(row, num_mag + f) = X(i, free_components[f]);
        B(row, 0) = problem.y()[i];
    }
    A.row(unknowns - 1).head(num_mag).setOnes();
    B(unknowns - 1, 1) = 1.0;

    // node coordinates feed finite differences over very short segments, so
    // they get refined to full working precision
    const Matrix sol = solve_dense(std::move(A), std::move(B), opts.pivot_tolerance, 2);

    Vector b0 = Vector::Zero(problem.m());
    Vector b1 = Vector::Zero(problem.m());
    for (int a = 0; a < num_mag; ++a) {
        for (int j : state.maximal(groups, active[a])) {
            b0[j] = state.sign(j) * sol(a, 0);
            b1[j] = state.sign(j) * sol(a, 1);
        }
    }
    for (int f = 0; f < static_cast<int>(free_components.size()); ++f) {
        b0[free_components[f]] = sol(num_mag + f, 0);
        b1[free_components[f]] = sol(num_mag + f, 1);
    }
    return AffineVector(std::move(b0), std::move(b1), node.R, kInfinity);
}

// ---------------------------------------------------------------------------
// step 2: next breakpoint in R

Breakpoint next_R_event(const ActiveState& state, const AffineVector& beta_fn, const QuantileProblem& problem,
                        double R_now, const SolverOptions& opts) {
    const auto& groups = problem.groups();
    const Vector beta_now = beta_fn.at(R_now);
    const Vector r_now = problem.y() - problem.X() * beta_now;
    const Vector dr = -(problem.X() * beta_fn.c1);
    const double floor = R_now + margin_of(R_now, opts.strict_margin);

    std::vector<Candidate> cands;
    auto offer = [&](double root, EventTag tag) {
        if (std::isfinite(root) && root > floor) cands.push_back({root, tag});
    };

    for (int i = 0; i < problem.n(); ++i) {
        if (state.in_zero_set(i)) continue;
        // the pinned w_i tells which side of zero r_i lives on
        const double side = state.boundary_w(i) > 0.0 ? 1.0 : -1.0;
        offer(first_zero(side * r_now[i], side * dr[i], R_now), {EventKind::ResidualHitsZero, i});
    }

    for (int k : state.active_groups()) {
        const std::vector<int> maximal = state.maximal(groups, k);
        const int lead = maximal.front();
        const double t_now = state.sign(lead) * beta_now[lead];
        const double t_rate = state.sign(lead) * beta_fn.c1[lead];
        offer(first_zero(t_now, t_rate, R_now), {EventKind::GroupDeactivates, k});

        for (int j : state.non_maximal(groups, k)) {
            const double below_plus = first_zero(t_now - beta_now[j], t_rate - beta_fn.c1[j], R_now);
            const double above_minus = first_zero(t_now + beta_now[j], t_rate + beta_fn.c1[j], R_now);
            offer(std::min(below_plus, above_minus), {EventKind::ComponentReachesGroupMax, j});
        }
    }
    return pick(std::move(cands), true, opts.tie_tolerance, "R");
}

// ---------------------------------------------------------------------------
// step 3: u and w as functions of lambda

SubgradientFns subgradient_update(const ActiveState& state, const QuantileProblem& problem, const PathNode& node,
                                  const SolverOptions& opts) {
    const auto& groups = problem.groups();
    const Matrix& X = problem.X();
    const int n = problem.n();
    const std::vector<int> zero = state.zero_set();
    const std::vector<int> active = state.active_groups();

    Vector w_fixed = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (!state.in_zero_set(i)) w_fixed[i] = state.boundary_w(i);
    }
    const Vector xt_fixed = X.transpose() * w_fixed;

    // rows: the face equation sum_{maximal} s_j u_j = 1 per active group, then
    // u_j = 0 for every free component; unknowns: w_i on the zero set
    std::vector<int> free_components;
    for (int k : active) {
        for (int j : state.non_maximal(groups, k)) free_components.push_back(j);
    }
    const int size = static_cast<int>(zero.size());
    const int rows = static_cast<int>(active.size() + free_components.size());
    if (rows != size) {
        throw SingularSystemError("degrees-of-freedom imbalance in the (u, w) system: " + std::to_string(size) +
                                  " unknowns, " + std::to_string(rows) + " equations");
    }

    Matrix C = Matrix::Zero(size, size);
    Matrix B = Matrix::Zero(size, 2);
    int row = 0;
    for (int k : active) {
        const std::vector<int> maximal = state.maximal(groups, k);
        for (int c = 0; c < size; ++c) {
            double coeff = 0.0;
            for (int j : maximal) coeff += state.sign(j) * X(zero[c], j);
            C(row, c) = coeff;
        }
        double fixed = 0.0;
        for (int j : maximal) fixed += state.sign(j) * xt_fixed[j];
        B(row, 0) = -fixed;
        B(row, 1) = 1.0;
        ++row;
    }
    for (int j : free_components) {
        for (int c = 0; c < size; ++c) C(row, c) = X(zero[c], j);
        B(row, 0) = -xt_fixed[j];
        ++row;
    }

    const Matrix sol = solve_dense(std::move(C), std::move(B), opts.pivot_tolerance);

    Vector w0 = w_fixed;
    Vector w1 = Vector::Zero(n);
    for (int c = 0; c < size; ++c) {
        w0[zero[c]] = sol(c, 0);
        w1[zero[c]] = sol(c, 1);
    }
    // stationarity X^T w = lambda u splits into X^T w0 = u1 and X^T w1 = u0
    Vector u0 = X.transpose() * w1;
    Vector u1 = X.transpose() * w0;
    // a segment that runs to lambda = 0 has u1 = 0 exactly; rounding left in
    // u1 would otherwise produce spurious roots at lambda ~ 1e-17
    const Vector u1_scale = X.cwiseAbs().transpose() * w0.cwiseAbs();
    for (Eigen::Index j = 0; j < u1.size(); ++j) {
        if (std::abs(u1[j]) <= 1e-11 * u1_scale[j]) u1[j] = 0.0;
    }
    const double lambda_hi = node.lambda_hi;
    return {AffineVector(std::move(u0), std::move(u1), std::isfinite(lambda_hi) ? 1.0 / lambda_hi : 0.0, kInfinity),
            AffineVector(std::move(w0), std::move(w1), 0.0, lambda_hi)};
}

// ---------------------------------------------------------------------------
// step 4: next breakpoint in lambda

namespace {

// First mu > mu_now where ||u0 + mu * u1||_1 (a convex piecewise-linear
// function) rises to 1; +inf when it never does.
double group_entry_mu(const std::vector<int>& members, const Vector& u0, const Vector& u1, double mu_now) {
    auto value_at = [&](double mu) {
        double s = 0.0;
        for (int j : members) s += std::abs(u0[j] + mu * u1[j]);
        return s;
    };
    auto slope_at = [&](double mu) {
        double s = 0.0;
        for (int j : members) {
            const double v = u0[j] + mu * u1[j];
            if (v > 0.0) s += u1[j];
            else if (v < 0.0) s -= u1[j];
            else s += std::abs(u1[j]);
        }
        return s;
    };

    std::vector<double> kinks;
    for (int j : members) {
        if (u1[j] != 0.0) {
            const double b = -u0[j] / u1[j];
            if (b > mu_now) kinks.push_back(b);
        }
    }
    std::sort(kinks.begin(), kinks.end());
    kinks.push_back(kInfinity);

    double start = mu_now;
    for (double end : kinks) {
        const double mid = std::isfinite(end) ? 0.5 * (start + end) : start + std::max(1.0, std::abs(start));
        const double slope = slope_at(mid);
        if (slope > 0.0) {
            const double f = value_at(start);
            const double cross = start + std::max(0.0, 1.0 - f) / slope;
            if (cross <= end) return cross;
        }
        start = end;
    }
    return kInfinity;
}

}  // namespace

Breakpoint next_lambda_event(const ActiveState& state, const SubgradientFns& fns, const QuantileProblem& problem,
                             double lambda_now, const SolverOptions& opts) {
    const auto& groups = problem.groups();
    const double tau = problem.tau();
    const double upper = 2.0 * tau;
    const double lower = -2.0 * (1.0 - tau);
    const double mu_now = std::isfinite(lambda_now) ? 1.0 / lambda_now : 0.0;
    const double ceiling =
        std::isfinite(lambda_now) ? lambda_now - margin_of(lambda_now, opts.strict_margin) : kInfinity;
    const Vector& u0 = fns.u.c0;
    const Vector& u1 = fns.u.c1;
    const Vector& w0 = fns.w.c0;
    const Vector& w1 = fns.w.c1;

    std::vector<Candidate> cands;
    auto offer = [&](double lambda, EventTag tag) {
        if (std::isfinite(lambda) && lambda > 0.0 && lambda < ceiling) cands.push_back({lambda, tag});
    };
    auto offer_mu = [&](double mu, EventTag tag) {
        if (std::isfinite(mu) && mu > 0.0) offer(1.0 / mu, tag);
    };

    for (int k = 0; k < groups.size(); ++k) {
        if (state.is_active(k)) {
            for (int j : state.maximal(groups, k)) {
                const double s = state.sign(j);
                const double g_now = s * (u0[j] + mu_now * u1[j]);
                offer_mu(first_zero(g_now, s * u1[j], mu_now), {EventKind::ComponentLeavesGroupMax, j});
            }
        } else {
            offer_mu(group_entry_mu(groups.members(k), u0, u1, mu_now), {EventKind::GroupActivates, k});
        }
    }

    for (int i = 0; i < problem.n(); ++i) {
        if (!state.in_zero_set(i) || w1[i] == 0.0) continue;
        // as lambda decreases, w_i moves opposite to the sign of w1_i
        const double target = w1[i] > 0.0 ? lower : upper;
        offer((target - w0[i]) / w1[i], {EventKind::ResidualLeavesZero, i});
    }

    Breakpoint bp = pick(std::move(cands), false, opts.tie_tolerance, "lambda");
    if (bp.event.kind == EventKind::Terminal) bp.value = 0.0;
    return bp;
}

// ---------------------------------------------------------------------------
// state transitions

void apply_R_event(ActiveState& state, const EventTag& event, const AffineVector& beta_fn, double R_break,
                   const QuantileProblem& problem) {
    switch (event.kind) {
        case EventKind::ResidualHitsZero:
            state.add_zero(event.index);
            break;
        case EventKind::GroupDeactivates:
            state.deactivate(problem.groups(), event.index);
            break;
        case EventKind::ComponentReachesGroupMax:
            // the sign is the side from which beta_j reached the group max
            state.set_sign(event.index, beta_fn.at(event.index, R_break) >= 0.0 ? 1 : -1);
            break;
        default:
            throw InputError("apply_R_event: " + event.to_string() + " is not an R-event");
    }
}

void apply_lambda_event(ActiveState& state, const EventTag& event, const SubgradientFns& fns, double lambda_break,
                        const QuantileProblem& problem, const SolverOptions& opts) {
    const double tau = problem.tau();
    switch (event.kind) {
        case EventKind::GroupActivates: {
            const auto& idx = problem.groups().members(event.index);
            const double threshold = std::max(opts.tie_tolerance, 1e-12);
            std::vector<int> signs;
            signs.reserve(idx.size());
            for (int j : idx) {
                const double uj = fns.u.at(j, 1.0 / lambda_break);
                signs.push_back(uj > threshold ? 1 : (uj < -threshold ? -1 : 0));
            }
            state.activate(problem.groups(), event.index, signs);
            break;
        }
        case EventKind::ResidualLeavesZero: {
            const double wi = fns.w.at(event.index, lambda_break);
            const double upper = 2.0 * tau;
            const double lower = -2.0 * (1.0 - tau);
            state.remove_zero(event.index, std::abs(wi - upper) <= std::abs(wi - lower) ? upper : lower);
            break;
        }
        case EventKind::ComponentLeavesGroupMax:
            state.set_sign(event.index, 0);
            break;
        default:
            throw InputError("apply_lambda_event: " + event.to_string() + " is not a lambda-event");
    }
}

// ---------------------------------------------------------------------------
// certification helpers

std::vector<double> certification_lambdas(const PathNode& node) {
    std::vector<double> out{node.lambda_lo};
    if (std::isfinite(node.lambda_hi)) {
        if (node.lambda_hi != node.lambda_lo) {
            out.push_back(node.lambda_hi);
            out.push_back(0.5 * (node.lambda_lo + node.lambda_hi));
        }
    } else {
        out.push_back(2.0 * node.lambda_lo + 1.0);
    }
    return out;
}

KktReport verify_node(const PathNode& node, double lambda, const QuantileProblem& problem, double tol) {
    return kkt_verify(node.beta, lambda, node.u_at_lambda(lambda), node.w_at_lambda(lambda), problem, tol);
}

// ---------------------------------------------------------------------------
// the path loop

namespace {

void close_interval(PathNode& node, double lambda_lo, EventTag exit) {
    node.lambda_lo = lambda_lo;
    node.exit = exit;
    node.w.lo = lambda_lo;
    node.w.hi = node.lambda_hi;
    node.u.lo = std::isfinite(node.lambda_hi) ? 1.0 / node.lambda_hi : 0.0;
    node.u.hi = lambda_lo > 0.0 ? 1.0 / lambda_lo : kInfinity;
}

std::string certify(const PathNode& node, const QuantileProblem& problem, double tol) {
    for (double lambda : certification_lambdas(node)) {
        const KktReport report = verify_node(node, lambda, problem, tol);
        if (!report.ok) {
            std::ostringstream os;
            os.precision(17);
            os << "node at R = " << node.R << " fails optimality at lambda = " << lambda << ": " << report.summary();
            return os.str();
        }
    }
    return {};
}

}  // namespace

PathResult solve_path(const QuantileProblem& problem, const StopRule& stop, const SolverOptions& opts) {
    return solve_path(std::make_shared<const QuantileProblem>(problem), stop, opts);
}

PathResult solve_path(std::shared_ptr<const QuantileProblem> problem_ptr, const StopRule& stop,
                      const SolverOptions& opts) {
    stop.validate();
    const QuantileProblem& problem = *problem_ptr;
    PathResult result;
    SolutionPath& path = result.path;
    path.problem = problem_ptr;

    auto fail = [&](PathFailure why, const std::string& message) {
        result.failure = why;
        path.termination = Termination::Degenerate;
        path.diagnostic = message;
        return result;
    };

    InitResult init;
    try {
        init = initialize(problem, opts);
    } catch (const TieBreakError& e) {
        return fail(PathFailure::TieBreak, e.what());
    } catch (const SingularSystemError& e) {
        return fail(PathFailure::SingularSystem, e.what());
    }
    if (opts.certify) {
        const std::string problem_text = certify(init.node, problem, opts.kkt_tolerance);
        if (!problem_text.empty()) return fail(PathFailure::KktFailure, problem_text);
    }
    path.nodes.push_back(init.node);
    if (init.entering.kind != EventKind::GroupActivates) {
        return fail(PathFailure::NoEntry, "no group can enter: X^T w vanishes at beta = 0, so beta = 0 for all lambda");
    }
    if (stop.max_active_groups && *stop.max_active_groups < 1) {
        path.termination = Termination::MaxActiveGroups;
        return result;
    }
    ActiveState state = std::move(init.state);

    try {
        for (;;) {
            if (static_cast<int>(path.nodes.size()) >= opts.max_nodes) {
                return fail(PathFailure::NodeLimit, "node limit reached");
            }
            const PathNode& prev = path.nodes.back();

            AffineVector beta_fn = beta_direction(state, problem, prev, opts);
            const Breakpoint r_event = next_R_event(state, beta_fn, problem, prev.R, opts);
            if (!std::isfinite(r_event.value)) {
                return fail(PathFailure::Unbounded, "no R-event ahead of R = " + std::to_string(prev.R) +
                                                        " although lambda > 0");
            }

            if (stop.max_R && r_event.value > *stop.max_R) {
                if (*stop.max_R > prev.R) {
                    PathNode cut;
                    cut.R = *stop.max_R;
                    cut.beta = beta_fn.at(cut.R);
                    cut.r = residuals(cut.beta, problem);
                    cut.lambda_hi = prev.lambda_lo;
                    cut.u = prev.u;
                    cut.w = prev.w;
                    cut.event = {EventKind::Terminal, -1};
                    close_interval(cut, prev.lambda_lo, {EventKind::Terminal, -1});
                    path.nodes.push_back(std::move(cut));
                }
                path.termination = Termination::UserStop;
                return result;
            }

            PathNode node;
            node.R = r_event.value;
            node.beta = beta_fn.at(node.R);
            node.r = residuals(node.beta, problem);
            node.lambda_hi = prev.lambda_lo;
            node.event = r_event.event;
            apply_R_event(state, r_event.event, beta_fn, node.R, problem);

            const SubgradientFns fns = subgradient_update(state, problem, node, opts);
            node.u = fns.u;
            node.w = fns.w;

            Breakpoint l_event{0.0, {EventKind::Terminal, -1}};
            if (state.zero_count() < problem.n()) {
                l_event = next_lambda_event(state, fns, problem, node.lambda_hi, opts);
            }
            close_interval(node, l_event.value, l_event.event);

            if (opts.certify) {
                const std::string problem_text = certify(node, problem, opts.kkt_tolerance);
                if (!problem_text.empty()) return fail(PathFailure::KktFailure, problem_text);
            }
            path.nodes.push_back(std::move(node));

            if (l_event.event.kind == EventKind::Terminal) {
                path.termination = Termination::LambdaZero;
                return result;
            }
            if (l_event.event.kind == EventKind::GroupActivates && stop.max_active_groups &&
                state.num_active() + 1 > *stop.max_active_groups) {
                path.termination = Termination::MaxActiveGroups;
                return result;
            }
            apply_lambda_event(state, l_event.event, fns, l_event.value, problem, opts);
        }
    } catch (const TieBreakError& e) {
        return fail(PathFailure::TieBreak, e.what());
    } catch (const SingularSystemError& e) {
        return fail(PathFailure::SingularSystem, e.what());
    }
}

}  // namespace gsqr
