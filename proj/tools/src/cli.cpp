#include "gsqr_tools/cli.hpp"

#include "gsqr/errors.hpp"
#include "gsqr/select.hpp"
#include "gsqr_tools/certify.hpp"
#include "gsqr_tools/document.hpp"
#include "gsqr_tools/plot.hpp"
#include "gsqr_tools/spec_file.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

namespace gsqr::tools {

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt(const Vector& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(std::abs(v[i]) < 1e-13 ? 0.0 : v[i]);
    return s + ")";
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

int exit_code_for(PathFailure f) {
    switch (f) {
        case PathFailure::None: return kExitOk;
        case PathFailure::TieBreak: return kExitTieBreak;
        default: return kExitSingular;
    }
}

void report_failure(const PathDocument& doc, std::ostream& err) {
    if (doc.failure == PathFailure::None) return;
    err << "path ended early (" << to_string(doc.failure) << "): " << doc.path.diagnostic << '\n';
    if (doc.failure == PathFailure::TieBreak) err << "hint: rerun with --jitter 1e-6 --seed <n> to break the tie\n";
}

void print_summary(const PathDocument& doc, std::ostream& out) {
    const QuantileProblem& p = doc.problem();
    const bool show_beta = p.m() <= 12;
    const bool show_r = p.n() <= 12;
    out << "n = " << p.n() << ", m = " << p.m() << ", groups = " << p.groups().size() << ", tau = " << fmt(p.tau())
        << '\n';
    out << pad("#", 5) << pad("R", 14) << pad("lambda", 26) << pad("event", 6) << pad("active", 8);
    if (show_beta) out << pad("beta", 40);
    if (show_r) out << "r";
    out << '\n';
    for (std::size_t t = 0; t < doc.path.nodes.size(); ++t) {
        const PathNode& node = doc.path.nodes[t];
        int active = 0;
        for (int k = 0; k < p.groups().size(); ++k) active += group_max_norm(node.beta, p.groups(), k) > 1e-12;
        const std::string label = node.event.kind == EventKind::Init ? "-" : node.event.step_label();
        out << pad(std::to_string(t), 5) << pad(fmt(node.R), 14)
            << pad("[" + fmt(node.lambda_lo) + ", " + fmt(node.lambda_hi) + "]", 26) << pad(label, 6)
            << pad(std::to_string(active), 8);
        if (show_beta) out << pad(fmt(node.beta), 40);
        if (show_r) out << fmt(node.r);
        out << '\n';
    }
    out << "termination: " << to_string(doc.path.termination) << '\n';
}

void write_and_summarize(const PathDocument& doc, const std::string& file, bool quiet, std::ostream& out) {
    write_document(file, doc);
    if (!quiet) print_summary(doc, out);
    out << "wrote " << file << " (" << doc.path.nodes.size() << " nodes)\n";
}

StopRule stop_rule(std::optional<int> max_groups, std::optional<double> max_R) {
    StopRule stop;
    stop.max_active_groups = max_groups;
    stop.max_R = max_R;
    stop.validate();
    return stop;
}

std::optional<bool> on_off(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return s == "on";
}

// ---------------------------------------------------------------------------

struct FitArgs {
    std::string data, spec, out = "path.json", intercept;
    std::optional<double> tau, jitter, max_R;
    std::optional<int> max_groups;
    std::uint64_t seed = 0;
    bool quiet = false;
};

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
    const FitSpec spec = load_fit_spec(a.spec);
    Dataset data = load_csv(a.data, spec.columns);
    if (data.dropped_rows > 0) out << "dropped " << data.dropped_rows << " rows with missing values\n";
    if (a.jitter) data = jitter(data, *a.jitter, a.seed, spec.jitter_columns);

    const double tau = a.tau ? *a.tau : spec.tau.value_or(0.5);
    const bool intercept = on_off(a.intercept).value_or(spec.intercept.value_or(false));
    BuiltProblem built = build_problem(data, spec.columns, tau, intercept);
    if (a.jitter) built = jitter_dummies(std::move(built), *a.jitter, a.seed, spec.jitter_columns);
    auto problem = std::make_shared<const QuantileProblem>(std::move(built.problem));

    PathDocument doc;
    doc.options = SolverOptions::from_environment();
    doc.stop = stop_rule(a.max_groups, a.max_R);
    PathResult res = solve_path(problem, doc.stop, doc.options);
    doc.path = std::move(res.path);
    doc.failure = res.failure;
    for (const auto& c : built.design.columns) doc.column_names.push_back(c.name);
    doc.group_names = built.design.group_names;
    doc.design = std::move(built.design);
    doc.source = data.source;
    doc.jitter_seed = data.jitter_seed;
    doc.jitter_magnitude = data.jitter_magnitude;

    write_and_summarize(doc, a.out, a.quiet, out);
    report_failure(doc, err);
    return exit_code_for(doc.failure);
}

struct StackArgs {
    std::string data, out = "path.json", intercept = "off";
    std::vector<std::string> responses, regressors;
    double tau = 0.5;
    std::optional<double> jitter, max_R;
    std::optional<int> max_groups;
    std::uint64_t seed = 0;
    bool standardize_columns = false;
    bool quiet = false;
};

int cmd_stack(const StackArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<ColumnSpec> specs;
    for (const auto& name : a.responses) specs.push_back({name, ColumnKind::Quantitative, {}, {}, {}, {}});
    for (const auto& name : a.regressors) specs.push_back({name, ColumnKind::Quantitative, {}, {}, {}, {}});
    Dataset data = load_csv(a.data, specs);
    if (data.dropped_rows > 0) out << "dropped " << data.dropped_rows << " rows with missing values\n";
    if (a.jitter) data = jitter(data, *a.jitter, a.seed);

    const auto n = static_cast<Eigen::Index>(data.rows);
    auto column = [&](const std::string& name) {
        Vector v = Eigen::Map<const Vector>(data.numeric(name).data(), n);
        return a.standardize_columns ? standardize(v).values : v;
    };
    Matrix Y(n, static_cast<Eigen::Index>(a.responses.size()));
    for (std::size_t j = 0; j < a.responses.size(); ++j) Y.col(static_cast<Eigen::Index>(j)) = column(a.responses[j]);
    std::vector<std::string> regressors = a.regressors;
    const bool intercept = a.intercept == "on";
    if (intercept) regressors.push_back("(intercept)");
    Matrix X(n, static_cast<Eigen::Index>(regressors.size()));
    for (std::size_t k = 0; k < a.regressors.size(); ++k) X.col(static_cast<Eigen::Index>(k)) = column(a.regressors[k]);
    if (intercept) X.col(X.cols() - 1).setOnes();

    StackedProblem sp = stack_problem(Y, X, a.tau);
    PathDocument doc;
    doc.stack = StackInfo{sp.layout, a.responses, regressors};
    doc.column_names.resize(static_cast<std::size_t>(sp.layout.columns()));
    for (int k = 0; k < sp.layout.m; ++k) {
        for (int j = 0; j < sp.layout.p; ++j) {
            doc.column_names[static_cast<std::size_t>(sp.layout.column(k, j))] =
                regressors[static_cast<std::size_t>(k)] + ":" + a.responses[static_cast<std::size_t>(j)];
        }
    }
    doc.group_names = regressors;
    doc.options = SolverOptions::from_environment();
    doc.stop = stop_rule(a.max_groups, a.max_R);
    PathResult res = solve_path(std::make_shared<const QuantileProblem>(std::move(sp.problem)), doc.stop, doc.options);
    doc.path = std::move(res.path);
    doc.failure = res.failure;
    doc.source = data.source;
    doc.jitter_seed = data.jitter_seed;
    doc.jitter_magnitude = data.jitter_magnitude;

    write_and_summarize(doc, a.out, a.quiet, out);
    report_failure(doc, err);
    return exit_code_for(doc.failure);
}

int cmd_select(const std::string& file, const std::string& sign_name, std::ostream& out, std::ostream& err) {
    const PathDocument doc = read_document(file);
    if (doc.path.empty()) throw InputError("document has an empty path");
    const QuantileProblem& p = doc.problem();
    const BicSign sign = sign_name == "conventional" ? BicSign::Conventional : BicSign::AsPrinted;
    const BicTrace trace = bic_trace(doc.path, p, sign);

    out << "BIC (" << (sign == BicSign::AsPrinted ? "printed" : "conventional") << " sign)\n";
    out << pad("#", 5) << pad("R", 14) << pad("loss", 14) << pad("n_R", 6) << "BIC\n";
    for (std::size_t t = 0; t < trace.entries.size(); ++t) {
        const BicEntry& e = trace.entries[t];
        out << pad(std::to_string(t), 5) << pad(fmt(e.R), 14) << pad(fmt(e.loss), 14) << pad(std::to_string(e.n_R), 6)
            << fmt(e.bic) << (t == trace.argmin_index && std::isfinite(e.bic) ? "  <-" : "") << '\n';
    }
    if (!std::isfinite(trace.argmin_R)) {
        err << "no node has a finite BIC\n";
        return kExitInput;
    }
    const PathNode& node = doc.path.nodes[trace.argmin_index];
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", trace.argmin_R);
    out << "R_BIC = " << buf << " (node " << trace.argmin_index << ")\n";

    if (doc.stack) {
        const Matrix B = unstack_coefficients(node.beta, doc.stack->layout);
        out << "coefficients (rows: regressors, columns: responses)\n" << pad("", 16);
        for (const auto& r : doc.stack->responses) out << pad(r, 14);
        out << pad("max|.|", 14) << '\n';
        for (int k = 0; k < doc.stack->layout.m; ++k) {
            out << pad(doc.stack->regressors[static_cast<std::size_t>(k)], 16);
            for (int j = 0; j < doc.stack->layout.p; ++j) out << pad(fmt(B(k, j)), 14);
            out << pad(fmt(B.row(k).cwiseAbs().maxCoeff()), 14) << '\n';
        }
    } else if (doc.design) {
        out << "coefficients in original units\n";
        for (const auto& [name, value] : back_map(node.beta, *doc.design)) out << "  " << pad(name, 24) << fmt(value) << '\n';
    } else {
        out << "coefficients\n";
        for (int j = 0; j < p.m(); ++j) {
            out << "  " << pad(doc.column_names[static_cast<std::size_t>(j)], 24) << fmt(node.beta[j]) << '\n';
        }
    }

    out << "active groups:";
    bool any = false;
    for (int k = 0; k < p.groups().size(); ++k) {
        if (group_max_norm(node.beta, p.groups(), k) > 1e-12) {
            out << ' ' << doc.group_names[static_cast<std::size_t>(k)];
            any = true;
        }
    }
    out << (any ? "" : " (none)") << '\n';
    return kExitOk;
}

int cmd_plot(const std::string& file, const std::string& kind, std::string prefix, std::optional<double> mark_R,
             std::ostream& out) {
    const PathDocument doc = read_document(file);
    const PlotData data = make_plot(doc, plot_kind_from_string(kind));
    if (prefix.empty()) prefix = std::filesystem::path(file).replace_extension().string() + "-" + kind;
    {
        std::ofstream csv(prefix + ".csv");
        if (!csv) throw InputError("cannot write '" + prefix + ".csv'");
        write_plot_csv(csv, data);
    }
    {
        std::ofstream svg(prefix + ".svg");
        if (!svg) throw InputError("cannot write '" + prefix + ".svg'");
        write_plot_svg(svg, data, mark_R);
    }
    out << "wrote " << prefix << ".csv and " << prefix << ".svg\n";
    return kExitOk;
}

int cmd_certify(const std::string& file, double tol, std::ostream& out, std::ostream& err) {
    const PathDocument doc = read_document(file);
    const CertifyReport report = certify_document(doc, tol);
    if (report.ok) {
        out << "certified: " << report.checks << " checks passed on " << doc.path.nodes.size() << " nodes (tol "
            << fmt(tol) << ")\n";
        return kExitOk;
    }
    for (const auto& f : report.failures) {
        err << "node " << f.node << ": " << f.check << " violation " << fmt(f.magnitude) << " (" << f.detail << ")\n";
    }
    const auto& w = report.worst();
    err << "FAILED: " << report.failures.size() << " of " << report.checks << " checks; worst " << w.check
        << " violation " << fmt(w.magnitude) << " at node " << w.node << '\n';
    return kExitCertify;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Group-sparse quantile regression paths", "gsqr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gsqr 0.1.0");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Compute the full path for a CSV file and a column spec");
    fit_cmd->add_option("--data", fit.data, "CSV input")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("--spec", fit.spec, "JSON column spec")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("--tau", fit.tau, "Quantile level in (0, 1)")->check(CLI::Range(0.0, 1.0));
    fit_cmd->add_option("--out,-o", fit.out, "Output path document")->capture_default_str();
    fit_cmd->add_option("--jitter", fit.jitter, "Relative jitter magnitude");
    fit_cmd->add_option("--seed", fit.seed, "Jitter seed")->capture_default_str();
    fit_cmd->add_option("--max-groups", fit.max_groups, "Stop before more groups would be active");
    fit_cmd->add_option("--max-R", fit.max_R, "Stop at this mixed-norm radius");
    fit_cmd->add_option("--intercept", fit.intercept, "Append an intercept column")->check(CLI::IsMember({"on", "off"}));
    fit_cmd->add_flag("--quiet,-q", fit.quiet, "Skip the node table");

    StackArgs stack;
    auto* stack_cmd = app.add_subcommand("stack", "Fit several responses jointly, one group per regressor");
    stack_cmd->add_option("--data", stack.data, "CSV input")->required()->check(CLI::ExistingFile);
    stack_cmd->add_option("--responses", stack.responses, "Response columns")->required()->delimiter(',');
    stack_cmd->add_option("--regressors", stack.regressors, "Regressor columns")->required()->delimiter(',');
    stack_cmd->add_option("--tau", stack.tau, "Quantile level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    stack_cmd->add_option("--out,-o", stack.out, "Output path document")->capture_default_str();
    stack_cmd->add_flag("--standardize", stack.standardize_columns, "Center and scale every column");
    stack_cmd->add_option("--intercept", stack.intercept, "Append an intercept regressor")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    stack_cmd->add_option("--jitter", stack.jitter, "Relative jitter magnitude");
    stack_cmd->add_option("--seed", stack.seed, "Jitter seed")->capture_default_str();
    stack_cmd->add_option("--max-groups", stack.max_groups, "Stop before more groups would be active");
    stack_cmd->add_option("--max-R", stack.max_R, "Stop at this mixed-norm radius");
    stack_cmd->add_flag("--quiet,-q", stack.quiet, "Skip the node table");

    std::string select_file, bic_sign = "printed";
    auto* select_cmd = app.add_subcommand("select", "Pick the BIC-optimal node of a path");
    select_cmd->add_option("path", select_file, "Path document")->required()->check(CLI::ExistingFile);
    select_cmd->add_option("--bic-sign", bic_sign, "Sign of the zero-residual term")
        ->check(CLI::IsMember({"printed", "conventional"}))
        ->capture_default_str();

    std::string plot_file, plot_kind = "coefficients", plot_prefix;
    std::optional<double> mark_R;
    auto* plot_cmd = app.add_subcommand("plot", "Write CSV and SVG plot data for a path");
    plot_cmd->add_option("path", plot_file, "Path document")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--kind", plot_kind, "coefficients, tradeoff or groupmax")->capture_default_str();
    plot_cmd->add_option("--prefix", plot_prefix, "Output file prefix (default: <path>-<kind>)");
    plot_cmd->add_option("--mark-r", mark_R, "Draw a dashed line at this R");

    std::string certify_file;
    double certify_tol = kDefaultKktTolerance;
    auto* certify_cmd = app.add_subcommand("certify", "Re-check optimality of every node of a path");
    certify_cmd->add_option("path", certify_file, "Path document")->required()->check(CLI::ExistingFile);
    certify_cmd->add_option("--tol", certify_tol, "Absolute tolerance")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit, out, err);
        if (*stack_cmd) return cmd_stack(stack, out, err);
        if (*select_cmd) return cmd_select(select_file, bic_sign, out, err);
        if (*plot_cmd) return cmd_plot(plot_file, plot_kind, plot_prefix, mark_R, out);
        if (*certify_cmd) return cmd_certify(certify_file, certify_tol, out, err);
    } catch (const ZeroResidualAtStartError& e) {
        err << "error: " << e.what() << "\nhint: rerun with --jitter 1e-6 to perturb the response\n";
        return kExitInput;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const TieBreakError& e) {
        err << "error: " << e.what() << "\nhint: rerun with --jitter 1e-6 --seed <n>\n";
        return kExitTieBreak;
    } catch (const SingularSystemError& e) {
        err << "error: " << e.what() << '\n';
        return kExitSingular;
    }
    return kExitInput;
}

}  // namespace gsqr::tools
