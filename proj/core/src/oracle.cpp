#include "gsqr/oracle.hpp"

#include "gsqr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gsqr {

double penalized_objective(const Vector& beta, const QuantileProblem& problem, double lambda) {
    return total_loss(beta, problem) + lambda * mixed_norm(beta, problem.groups());
}

namespace {

constexpr int kMaxCoefficients = 8;
constexpr int kMaxObservations = 12;
constexpr std::size_t kMaxEdgeSubsets = 50000;

// Hyperplane a.beta = b across which F may change slope: residual zeros,
// coefficient zeros, and |beta_j| = |beta_l| within a group.
struct Kink {
    Vector a;
    double b = 0.0;
};

class Minimizer {
public:
    Minimizer(const QuantileProblem& problem, double lambda) : problem_(problem), lambda_(lambda) {
        const int m = problem.m();
        for (int i = 0; i < problem.n(); ++i) add(problem.X().row(i).transpose(), problem.y()[i]);
        for (int j = 0; j < m; ++j) add(Vector::Unit(m, j), 0.0);
        for (const auto& members : problem.groups().groups()) {
            for (std::size_t p = 0; p < members.size(); ++p) {
                for (std::size_t q = p + 1; q < members.size(); ++q) {
                    add(Vector::Unit(m, members[p]) - Vector::Unit(m, members[q]), 0.0);
                    add(Vector::Unit(m, members[p]) + Vector::Unit(m, members[q]), 0.0);
                }
            }
        }
    }

    double F(const Vector& x) const { return penalized_objective(x, problem_, lambda_); }

    struct Step {
        double s = 0.0;
        double value = 0.0;
    };

    // Exact minimization of F(x + s d) over the breakpoints of the restriction.
    // Mode Any keeps s = 0 as a candidate; NonZero and Forward drop it.
    enum class Mode { Any, NonZero, Forward };
    Step line_search(const Vector& x, const Vector& d, Mode mode) const {
        Step best{0.0, mode == Mode::Any ? F(x) : kInfinity};
        const double dn = d.norm();
        for (const Kink& k : kinks_) {
            const double slope = k.a.dot(d);
            if (std::abs(slope) <= 1e-14 * dn) continue;
            const double s = (k.b - k.a.dot(x)) / slope;
            if (s == 0.0 || !std::isfinite(s)) continue;
            if (mode == Mode::Forward && s <= 0.0) continue;
            const double value = F(x + s * d);
            const double tie = 1e-13 * std::max(1.0, std::abs(value));
            if (value < best.value - tie || (std::abs(value - best.value) <= tie && std::abs(s) < std::abs(best.s))) {
                best = {s, value};
            }
        }
        return best;
    }

    std::vector<int> active(const Vector& x) const {
        const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
        std::vector<int> out;
        for (std::size_t t = 0; t < kinks_.size(); ++t) {
            if (std::abs(kinks_[t].a.dot(x) - kinks_[t].b) <= 1e-9 * std::max(scale, std::abs(kinks_[t].b))) {
                out.push_back(static_cast<int>(t));
            }
        }
        return out;
    }

    Matrix rows(const std::vector<int>& which) const {
        Matrix A(static_cast<Eigen::Index>(which.size()), problem_.m());
        for (std::size_t r = 0; r < which.size(); ++r) A.row(static_cast<Eigen::Index>(r)) = kinks_[which[r]].a.transpose();
        return A;
    }

    // Slides along the intersection of the active kinks without increasing F
    // until they span the whole space.
    int to_vertex(Vector& x) const {
        const int m = problem_.m();
        int moves = 0;
        for (int guard = 0; guard < 4 * m + 4; ++guard) {
            const auto act = active(x);
            Vector d;
            if (act.empty()) {
                d = Vector::Unit(m, 0);
            } else {
                Eigen::FullPivLU<Matrix> lu(rows(act));
                lu.setThreshold(1e-10);
                if (lu.rank() == m) return moves;
                d = lu.kernel().col(0);
            }
            const Step step = line_search(x, d, Mode::NonZero);
            if (!std::isfinite(step.value) || step.value > F(x) + 1e-12 * std::max(1.0, std::abs(F(x)))) return moves;
            x += step.s * d;
            ++moves;
        }
        return moves;
    }

    // Tries every ray formed by m-1 active kinks; moves along the first one
    // that lowers F. Returns false when none does.
    bool improve_along_edge(Vector& x, std::mt19937_64& rng) const {
        const int m = problem_.m();
        const double fx = F(x);
        const double gain = 1e-12 * std::max(1.0, std::abs(fx));
        std::vector<Vector> tried;

        auto attempt = [&](Vector d) {
            d.normalize();
            Eigen::Index lead = 0;
            while (lead < d.size() && std::abs(d[lead]) < 1e-12) ++lead;
            if (lead < d.size() && d[lead] < 0) d = -d;
            for (const Vector& t : tried) {
                if ((t - d).norm() < 1e-9) return false;
            }
            tried.push_back(d);
            for (double sign : {1.0, -1.0}) {
                const Step step = line_search(x, sign * d, Mode::Forward);
                if (step.value < fx - gain) {
                    x += step.s * sign * d;
                    return true;
                }
            }
            return false;
        };

        if (m == 1) return attempt(Vector::Ones(1));

        const auto act = active(x);
        const int k = static_cast<int>(act.size());
        const int choose = m - 1;
        if (k < choose) return false;

        auto try_subset = [&](const std::vector<int>& pick) {
            std::vector<int> which;
            for (int p : pick) which.push_back(act[p]);
            Eigen::FullPivLU<Matrix> lu(rows(which));
            lu.setThreshold(1e-10);
            if (lu.rank() != choose) return false;
            return attempt(lu.kernel().col(0));
        };

        double combos = 1.0;
        for (int t = 0; t < choose; ++t) combos = combos * (k - t) / (t + 1);
        if (combos <= static_cast<double>(kMaxEdgeSubsets)) {
            std::vector<int> pick(static_cast<std::size_t>(choose));
            std::iota(pick.begin(), pick.end(), 0);
            while (true) {
                if (try_subset(pick)) return true;
                int t = choose - 1;
                while (t >= 0 && pick[t] == k - choose + t) --t;
                if (t < 0) break;
                ++pick[t];
                for (int u = t + 1; u < choose; ++u) pick[u] = pick[u - 1] + 1;
            }
            return false;
        }
        std::vector<int> all(static_cast<std::size_t>(k));
        std::iota(all.begin(), all.end(), 0);
        for (std::size_t trial = 0; trial < kMaxEdgeSubsets; ++trial) {
            std::shuffle(all.begin(), all.end(), rng);
            std::vector<int> pick(all.begin(), all.begin() + choose);
            std::sort(pick.begin(), pick.end());
            if (try_subset(pick)) return true;
        }
        return false;
    }

private:
    void add(Vector a, double b) {
        const double norm = a.norm();
        if (norm == 0.0) return;
        kinks_.push_back({a / norm, b / norm});
    }

    const QuantileProblem& problem_;
    double lambda_;
    std::vector<Kink> kinks_;
};

}  // namespace

OracleResult brute_force_min(const QuantileProblem& problem, double lambda, const OracleOptions& opts) {
    if (problem.m() > kMaxCoefficients || problem.n() > kMaxObservations) {
        throw InputError("brute_force_min: instance too large (m <= 8 and n <= 12 required)");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("brute_force_min: lambda must be finite and >= 0");
    if (opts.restarts < 1 || opts.max_sweeps < 1) throw InputError("brute_force_min: restarts and max_sweeps must be >= 1");

    const int m = problem.m();
    const Minimizer minimizer(problem, lambda);
    std::mt19937_64 rng(opts.seed);

    const double xmax = std::max(problem.X().cwiseAbs().maxCoeff(), 1e-12);
    const double start_scale = std::max(1.0, problem.y().lpNorm<Eigen::Infinity>() / xmax);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    OracleResult best;
    best.objective = kInfinity;
    std::vector<double> objectives;
    int iterations = 0;

    for (int restart = 0; restart < opts.restarts; ++restart) {
        Vector x = Vector::Zero(m);
        if (restart > 0) {
            for (int j = 0; j < m; ++j) x[j] = start_scale * unit(rng);
        }
        std::vector<int> order(static_cast<std::size_t>(m));
        std::iota(order.begin(), order.end(), 0);

        double fx = minimizer.F(x);
        for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
            ++iterations;
            if (opts.shuffle_coordinates) std::shuffle(order.begin(), order.end(), rng);
            const double before = fx;
            for (int j : order) {
                const Vector e = Vector::Unit(m, j);
                const auto step = minimizer.line_search(x, e, Minimizer::Mode::Any);
                if (step.value < fx) {
                    x[j] += step.s;
                    fx = step.value;
                }
            }
            if (before - fx <= opts.tolerance) break;
        }

        for (int moves = 0; moves < opts.max_sweeps; ++moves) {
            iterations += minimizer.to_vertex(x);
            ++iterations;
            if (!minimizer.improve_along_edge(x, rng)) break;
        }
        fx = minimizer.F(x);
        objectives.push_back(fx);
        if (fx < best.objective) {
            best.objective = fx;
            best.beta = x;
        }
    }

    best.iterations = iterations;
    const double spread = 1e-6 * std::max(1.0, std::abs(best.objective));
    best.converged = std::all_of(objectives.begin(), objectives.end(),
                                 [&](double f) { return f - best.objective <= spread; });
    return best;
}

}  // namespace gsqr
