#include "gsqr/subgrad.hpp"

#include "gsqr/errors.hpp"

#include <cmath>
#include <sstream>

namespace gsqr {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo <= hi)) throw InputError("interval lower bound exceeds upper bound");
}

Interval rho_subdifferential(double r_i, double tau) {
    const double upper = 2.0 * tau;
    const double lower = -2.0 * (1.0 - tau);
    if (r_i > 0.0) return {upper, upper};
    if (r_i < 0.0) return {lower, lower};
    return {lower, upper};
}

namespace {

// Largest amount by which u_g misses the subdifferential of ||beta_g||_inf;
// zero when u_g is a member within tol.
double group_violation(std::span<const double> beta_g, std::span<const double> u_g, double tol) {
    double l1 = 0.0;
    double mx = 0.0;
    for (std::size_t j = 0; j < beta_g.size(); ++j) {
        l1 += std::abs(u_g[j]);
        mx = std::max(mx, std::abs(beta_g[j]));
    }
    double worst = 0.0;
    if (l1 > 1.0 + tol) worst = std::max(worst, l1 - 1.0);
    if (mx <= tol) return worst;

    if (l1 < 1.0 - tol) worst = std::max(worst, 1.0 - l1);
    for (std::size_t j = 0; j < beta_g.size(); ++j) {
        const double b = std::abs(beta_g[j]);
        if (b < mx - tol) {
            if (std::abs(u_g[j]) > tol) worst = std::max(worst, std::abs(u_g[j]));
        } else if (b > tol) {
            const double aligned = beta_g[j] > 0.0 ? u_g[j] : -u_g[j];
            if (aligned < -tol) worst = std::max(worst, -aligned);
        }
    }
    return worst;
}

}  // namespace

bool group_norm_subgradient_check(std::span<const double> beta_g, std::span<const double> u_g, double tol) {
    if (beta_g.size() != u_g.size()) throw InputError("group_norm_subgradient_check: length mismatch");
    return group_violation(beta_g, u_g, tol) == 0.0;
}

bool group_norm_subgradient_check(const Vector& beta_g, const Vector& u_g, double tol) {
    return group_norm_subgradient_check(std::span<const double>(beta_g.data(), static_cast<std::size_t>(beta_g.size())),
                                        std::span<const double>(u_g.data(), static_cast<std::size_t>(u_g.size())), tol);
}

KktReport kkt_verify(const Vector& beta, double lambda, const Vector& u, const Vector& w,
                     const QuantileProblem& problem, double tol) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("kkt_verify: lambda must be finite and >= 0");
    if (beta.size() != problem.m() || u.size() != problem.m() || w.size() != problem.n()) {
        throw InputError("kkt_verify: dimension mismatch");
    }

    KktReport report;
    const Vector stationarity = -problem.X().transpose() * w + lambda * u;
    report.max_stationarity_violation = stationarity.cwiseAbs().maxCoeff();
    if (report.max_stationarity_violation > tol) {
        report.ok = false;
        report.worst = report.max_stationarity_violation;
    }

    const double tau = problem.tau();
    const double upper = 2.0 * tau;
    const double lower = -2.0 * (1.0 - tau);
    const Vector r = problem.y() - problem.X() * beta;
    for (int i = 0; i < problem.n(); ++i) {
        if (!Interval(lower, upper).contains(w[i], tol)) {
            const double miss = std::max(lower - w[i], w[i] - upper);
            report.w_violations.push_back({i, miss});
        }
        // a positive residual pins w_i to the upper end, a negative one to the lower end;
        // equivalently an interior w_i forces r_i = 0
        double miss = 0.0;
        if (r[i] > tol && w[i] < upper - tol) miss = upper - w[i];
        if (r[i] < -tol && w[i] > lower + tol) miss = w[i] - lower;
        if (miss > 0.0) report.consistency_violations.push_back({i, miss});
    }

    const auto& groups = problem.groups();
    for (int k = 0; k < groups.size(); ++k) {
        const auto& idx = groups.members(k);
        std::vector<double> bg, ug;
        bg.reserve(idx.size());
        ug.reserve(idx.size());
        for (int j : idx) {
            bg.push_back(beta[j]);
            ug.push_back(u[j]);
        }
        const double miss = group_violation(bg, ug, tol);
        if (miss > 0.0) report.u_violations.push_back({k, miss});
    }

    for (const auto* list : {&report.w_violations, &report.u_violations, &report.consistency_violations}) {
        for (const auto& v : *list) {
            report.ok = false;
            report.worst = std::max(report.worst, v.magnitude);
        }
    }
    return report;
}

std::string KktReport::summary() const {
    std::ostringstream os;
    os << (ok ? "ok" : "FAILED") << " stationarity=" << max_stationarity_violation;
    auto dump = [&os](const char* name, const std::vector<Violation>& list) {
        if (list.empty()) return;
        os << ' ' << name << "=[";
        for (std::size_t i = 0; i < list.size(); ++i) {
            os << (i ? ", " : "") << list[i].index << ':' << list[i].magnitude;
        }
        os << ']';
    };
    dump("w", w_violations);
    dump("u", u_violations);
    dump("consistency", consistency_violations);
    return os.str();
}

}  // namespace gsqr
